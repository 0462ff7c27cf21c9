"""Text front end and output rendering.

The expression language uses explicit '*' between factors, '^' or '**' for
powers, 'b'/'bd' with optional '_subscript' for ladder operators, 'I' for
the imaginary unit, 'hbar' as a reserved symbol, exp(I*r*name) for phase
atoms, and sum(k, lo, hi, body) / prod(k, lo, hi, body) for finite ranges.
Decimal literals become exact rationals at parse time.

Rendering targets: 'plain' (round-trips through the parser), 'latex', and
'record' (a versioned JSON interchange document with strict validation on
load).  All output orderings are deterministic, so equal canonical inputs
render byte-identically.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import BolanoError, ParseError, RecordError
from .expr import (
    Add,
    ImagUnit,
    Ladder,
    Mul,
    NormalPoly,
    Num,
    PhaseAtom,
    Pow,
    Ranged,
    Sym,
    expand,
)
from .lindblad import EvolutionEquation, ExpVal
from .scalars import Scalar, rational_from_decimal

# ---------------------------------------------------------------------------
# tokenizing and parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>\d+(?:\.\d*)?|\.\d+)"
    r"|(?P<word>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<pow>\*\*)"
    r"|(?P<punct>[-+*/^(),])"
)


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        if m.lastgroup == "ws":
            pass
        elif m.lastgroup == "number":
            tokens.append(_Token("number", m.group(), pos))
        elif m.lastgroup == "word":
            tokens.append(_Token("word", m.group(), pos))
        elif m.lastgroup == "pow":
            tokens.append(_Token("punct", "^", pos))
        else:
            tokens.append(_Token("punct", m.group(), pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_punct(self, *texts) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text in texts

    def expect_punct(self, text: str) -> _Token:
        if not self.at_punct(text):
            tok = self.peek()
            raise ParseError(
                f"unexpected {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                position=tok.pos,
                expected=(repr(text),),
            )
        return self.advance()

    def fail(self, message: str, expected=()):
        tok = self.peek()
        raise ParseError(message, position=tok.pos, expected=expected)

    # grammar ----------------------------------------------------------------

    def expr(self):
        args = [self._signed_term()]
        while self.at_punct("+", "-"):
            negate = self.advance().text == "-"
            term = self.term()
            args.append(Mul((Num(Fraction(-1)), term)) if negate else term)
        return args[0] if len(args) == 1 else Add(tuple(args))

    def _signed_term(self):
        if self.at_punct("-"):
            self.advance()
            return Mul((Num(Fraction(-1)), self.term()))
        if self.at_punct("+"):
            self.advance()
        return self.term()

    def term(self):
        factors = [self.factor()]
        while self.at_punct("*"):
            self.advance()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        base = self.base()
        if self.at_punct("^"):
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> Fraction:
        if self.at_punct("("):
            self.advance()
            sign = 1
            if self.at_punct("-"):
                self.advance()
                sign = -1
            elif self.at_punct("+"):
                self.advance()
            tok = self.peek()
            if tok.kind != "number":
                self.fail("malformed exponent", expected=("number",))
            self.advance()
            value = rational_from_decimal(tok.text)
            if self.at_punct("/"):
                self.advance()
                den_tok = self.peek()
                if den_tok.kind != "number":
                    self.fail("malformed exponent denominator", expected=("number",))
                self.advance()
                den = rational_from_decimal(den_tok.text)
                if den == 0:
                    raise ParseError("zero exponent denominator", position=den_tok.pos)
                value = value / den
            self.expect_punct(")")
            return sign * value
        sign = 1
        if self.at_punct("-"):
            self.advance()
            sign = -1
        elif self.at_punct("+"):
            self.advance()
        tok = self.peek()
        if tok.kind != "number":
            self.fail("malformed exponent", expected=("number", "'('"))
        self.advance()
        return sign * rational_from_decimal(tok.text)

    def integer(self) -> int:
        sign = 1
        if self.at_punct("-"):
            self.advance()
            sign = -1
        tok = self.peek()
        if tok.kind != "number":
            self.fail("expected an integer bound", expected=("integer",))
        value = rational_from_decimal(tok.text)
        if value.denominator != 1:
            raise ParseError("bound must be an integer", position=tok.pos)
        self.advance()
        return sign * int(value)

    def base(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(rational_from_decimal(tok.text))
        if self.at_punct("("):
            self.advance()
            inner = self.expr()
            self.expect_punct(")")
            return inner
        if tok.kind == "word":
            return self.word_base()
        self.fail(
            "expected a number, symbol, ladder operator, or '('",
            expected=("number", "word", "'('"),
        )

    def word_base(self):
        tok = self.advance()
        text = tok.text
        if text == "I":
            return ImagUnit()
        if text in ("sum", "prod"):
            return self.ranged(text, tok)
        if text == "exp":
            return self.phase(tok)
        if text == "b":
            return Ladder(False, "")
        if text == "bd":
            return Ladder(True, "")
        if text.startswith("bd_"):
            mode = text[3:]
            if not mode:
                raise ParseError("missing ladder subscript", position=tok.pos)
            return Ladder(True, mode)
        if text.startswith("b_"):
            mode = text[2:]
            if not mode:
                raise ParseError("missing ladder subscript", position=tok.pos)
            return Ladder(False, mode)
        return Sym(text)

    def ranged(self, kind: str, kw_tok: _Token):
        self.expect_punct("(")
        idx_tok = self.peek()
        if idx_tok.kind != "word":
            self.fail("range index must be an identifier", expected=("word",))
        self.advance()
        self.expect_punct(",")
        lo = self.integer()
        self.expect_punct(",")
        hi = self.integer()
        self.expect_punct(",")
        body = self.expr()
        self.expect_punct(")")
        return Ranged(kind, idx_tok.text, lo, hi, body)

    def phase(self, kw_tok: _Token):
        self.expect_punct("(")
        inner = self.expr()
        self.expect_punct(")")
        try:
            s = expand(inner).to_scalar()
        except (BolanoError, ValueError):
            raise ParseError(
                "exp argument must be I*rational*symbol", position=kw_tok.pos
            ) from None
        terms = s.terms()
        if len(terms) != 1:
            raise ParseError("exp argument must be I*rational*symbol", position=kw_tok.pos)
        (ip, syms, phases), coeff = terms[0]
        if ip != 1 or phases or len(syms) != 1 or syms[0][1] != 1:
            raise ParseError("exp argument must be I*rational*symbol", position=kw_tok.pos)
        return PhaseAtom(syms[0][0].name, coeff)


def parse(text: str):
    """Parse expression text into a raw expression tree."""
    parser = _Parser(text)
    node = parser.expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", position=tok.pos)
    return node


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_GREEK = {
    "alpha", "beta", "gamma", "delta", "epsilon", "varepsilon", "zeta", "eta",
    "theta", "vartheta", "iota", "kappa", "lambda", "mu", "nu", "xi", "pi",
    "rho", "sigma", "tau", "upsilon", "phi", "varphi", "chi", "psi", "omega",
    "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon",
    "Phi", "Psi", "Omega",
}


def _latex_symbol(name: str) -> str:
    if name == "hbar":
        return r"\hbar"
    base, sep, sub = name.partition("_")
    tex = ("\\" + base) if base in _GREEK else base
    return tex + (f"_{{{sub}}}" if sep else "")


def _latex_rational(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return rf"\frac{{{f.numerator}}}{{{f.denominator}}}"


def _exp_text(e: Fraction) -> str:
    return str(e) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def _latex_phase(name: str, r: Fraction) -> str:
    mag = abs(r)
    sign = "- " if r < 0 else ""
    scale = "" if mag == 1 else _exp_text(mag) + " "
    return f"e^{{{sign}{scale}i {_latex_symbol(name)}}}"


def _latex_scalar_term_parts(c_abs, ip, syms, phases, have_ops) -> list:
    parts = []
    others = bool(ip or syms or phases or have_ops)
    if c_abs != 1 or not others:
        parts.append(_latex_rational(c_abs))
    if ip:
        parts.append("i")
    for atom, e in syms:
        base = _latex_symbol(atom.name)
        parts.append(base if e == 1 else f"{base}^{{{_exp_text(e)}}}")
    for atom, r in phases:
        parts.append(_latex_phase(atom.name, r))
    return parts


def _join_signed(pieces) -> str:
    out = ""
    for i, (sign, body, tight) in enumerate(pieces):
        if i == 0:
            out = body if sign >= 0 else (("-" + body) if tight else ("- " + body))
        else:
            out += (" + " if sign >= 0 else " - ") + body
    return out or "0"


def _scalar_pieces(coeff: Scalar, ops, latex: bool) -> tuple:
    """(sign, body, tight) for one rendered term with trailing op factors."""
    terms = coeff.terms()
    if len(terms) == 1:
        (ip, syms, phases), c = terms[0]
        sign = -1 if c < 0 else 1
        if latex:
            parts = _latex_scalar_term_parts(abs(c), ip, syms, phases, bool(ops))
            body = " ".join(parts + list(ops))
        else:
            parts = _plain_scalar_term_parts(abs(c), ip, syms, phases, bool(ops))
            body = "*".join(parts + list(ops))
        tight = not ops and not ip and not syms and not phases
        return sign, body, tight
    inner = _scalar_text(coeff, latex)
    if latex:
        body = rf"\left({inner}\right)"
        if ops:
            body += " " + " ".join(ops)
    else:
        body = f"({inner})"
        if ops:
            body += "*" + "*".join(ops)
    return 1, body, False


def _scalar_text(s: Scalar, latex: bool) -> str:
    pieces = []
    for (ip, syms, phases), c in s.terms():
        sign = -1 if c < 0 else 1
        if latex:
            parts = _latex_scalar_term_parts(abs(c), ip, syms, phases, False)
            body = " ".join(parts)
        else:
            parts = _plain_scalar_term_parts(abs(c), ip, syms, phases, False)
            body = "*".join(parts)
        pieces.append((sign, body, not ip and not syms and not phases))
    return _join_signed(pieces)


def _sig_latex_factors(sig) -> list:
    factors = []
    for m, p, _ in sig:
        if p:
            factors.append(f"{{b^\\dagger_{{{m}}}}}" + (f"^{{{p}}}" if p > 1 else ""))
    for m, _, q in sig:
        if q:
            factors.append(f"b_{{{m}}}" + (f"^{{{q}}}" if q > 1 else ""))
    return factors


def _plain_rational_factors(f: Fraction) -> list:
    parts = []
    if f.numerator != 1 or f.denominator == 1:
        parts.append(str(f.numerator))
    if f.denominator != 1:
        parts.append(f"{f.denominator}^(-1)")
    return parts


def _plain_sym(name: str, e: Fraction) -> str:
    if e == 1:
        return name
    if e.denominator == 1 and e > 0:
        return f"{name}^{e}"
    return f"{name}^({_exp_text(e)})"


def _plain_phase(name: str, r: Fraction) -> str:
    mag = abs(r)
    inner = ["I"]
    if mag != 1:
        inner += _plain_rational_factors(mag)
    inner.append(name)
    sign = "-" if r < 0 else ""
    return f"exp({sign}" + "*".join(inner) + ")"


def _plain_scalar_term_parts(c_abs, ip, syms, phases, have_ops) -> list:
    parts = []
    others = bool(ip or syms or phases or have_ops)
    if c_abs != 1 or not others:
        rat = _plain_rational_factors(c_abs)
        parts.extend(rat if rat else ["1"])
    if ip:
        parts.append("I")
    for atom, e in syms:
        parts.append(_plain_sym(atom.name, e))
    for atom, r in phases:
        parts.append(_plain_phase(atom.name, r))
    return parts


def _sig_plain_factors(sig) -> list:
    factors = []
    for m, p, _ in sig:
        if p:
            name = f"bd_{m}" if m else "bd"
            factors.append(name + (f"^{p}" if p > 1 else ""))
    for m, _, q in sig:
        if q:
            name = f"b_{m}" if m else "b"
            factors.append(name + (f"^{q}" if q > 1 else ""))
    return factors


def _render_normal_poly(n: NormalPoly, latex: bool) -> str:
    pieces = []
    for sig, coeff in n.items():
        ops = _sig_latex_factors(sig) if latex else _sig_plain_factors(sig)
        pieces.append(_scalar_pieces(coeff, ops, latex))
    return _join_signed(pieces)


def _render_evolution(eq: EvolutionEquation, latex: bool) -> str:
    if latex:
        obs = " ".join(_sig_latex_factors(eq.observable.signature))
        lhs = rf"\frac{{d}}{{d t}} {{\left\langle {obs} \right\rangle}}"
    else:
        obs = "*".join(_sig_plain_factors(eq.observable.signature))
        lhs = f"d<{obs}>/dt"
    pieces = []
    for ev in sorted(eq.rhs, key=lambda e: e.signature):
        if latex:
            inner = " ".join(_sig_latex_factors(ev.signature))
            wrapped = rf"{{\left\langle {inner} \right\rangle}}"
        else:
            inner = "*".join(_sig_plain_factors(ev.signature))
            wrapped = f"<{inner}>"
        pieces.append(_scalar_pieces(eq.rhs[ev], [wrapped], latex))
    if not eq.constant.is_zero:
        pieces.append(_scalar_pieces(eq.constant, [], latex))
    return lhs + " = " + _join_signed(pieces)


# ---------------------------------------------------------------------------
# structured records
# ---------------------------------------------------------------------------

SCHEMA_VERSION = 1


def _rat_str(f: Fraction) -> str:
    return str(f)


def _scalar_doc(s: Scalar) -> dict:
    terms = []
    for (ip, syms, phases), c in s.terms():
        terms.append(
            {
                "rational": _rat_str(c),
                "i_power": ip,
                "symbols": [
                    {"name": a.name, "exponent": _rat_str(e)} for a, e in syms
                ],
                "phases": [
                    {"name": a.name, "multiplier": _rat_str(r)} for a, r in phases
                ],
            }
        )
    return {"terms": terms}


def _sig_doc(sig) -> list:
    return [{"mode": m, "p": p, "q": q} for m, p, q in sig]


def _record_doc(obj) -> dict:
    if isinstance(obj, NormalPoly):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "normal_poly",
            "terms": [
                {"signature": _sig_doc(sig), "coeff": _scalar_doc(c)}
                for sig, c in obj.items()
            ],
        }
    if isinstance(obj, EvolutionEquation):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "evolution_equation",
            "observable": _sig_doc(obj.observable.signature),
            "terms": [
                {"expval": _sig_doc(ev.signature), "coeff": _scalar_doc(obj.rhs[ev])}
                for ev in sorted(obj.rhs, key=lambda e: e.signature)
            ],
            "constant": _scalar_doc(obj.constant),
        }
    raise TypeError(f"cannot build a record for {obj!r}")


def render(obj, format: str = "plain") -> str:
    """Render a NormalPoly or EvolutionEquation as plain text, LaTeX, or a
    structured record."""
    if format == "record":
        return json.dumps(_record_doc(obj))
    if format not in ("plain", "latex"):
        raise ValueError(f"unknown format {format!r}")
    latex = format == "latex"
    if isinstance(obj, NormalPoly):
        return _render_normal_poly(obj, latex)
    if isinstance(obj, EvolutionEquation):
        return _render_evolution(obj, latex)
    raise TypeError(f"cannot render {obj!r}")


def _check_keys(doc: dict, required, ctx: str) -> None:
    if not isinstance(doc, dict):
        raise RecordError(f"{ctx}: expected an object")
    missing = set(required) - set(doc)
    unknown = set(doc) - set(required)
    if missing:
        raise RecordError(f"{ctx}: missing fields {sorted(missing)}")
    if unknown:
        raise RecordError(f"{ctx}: unknown fields {sorted(unknown)}")


def _rat_load(text, ctx: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise RecordError(f"{ctx}: bad rational {text!r}") from None


def _scalar_load(doc, ctx: str) -> Scalar:
    _check_keys(doc, ("terms",), ctx)
    total = Scalar.zero()
    for i, term in enumerate(doc["terms"]):
        tctx = f"{ctx}.terms[{i}]"
        _check_keys(term, ("rational", "i_power", "symbols", "phases"), tctx)
        if term["i_power"] not in (0, 1, 2, 3):
            raise RecordError(f"{tctx}: i_power out of range")
        powers = {}
        for symdoc in term["symbols"]:
            _check_keys(symdoc, ("name", "exponent"), tctx)
            powers[str(symdoc["name"])] = _rat_load(symdoc["exponent"], tctx)
        phases = {}
        for phdoc in term["phases"]:
            _check_keys(phdoc, ("name", "multiplier"), tctx)
            phases[str(phdoc["name"])] = _rat_load(phdoc["multiplier"], tctx)
        total = total + Scalar.term(
            _rat_load(term["rational"], tctx), term["i_power"], powers, phases
        )
    return total


def _sig_load(doc, ctx: str) -> tuple:
    sig = []
    for i, entry in enumerate(doc):
        ectx = f"{ctx}[{i}]"
        _check_keys(entry, ("mode", "p", "q"), ectx)
        p, q = entry["p"], entry["q"]
        if not (isinstance(p, int) and isinstance(q, int)):
            raise RecordError(f"{ectx}: p and q must be integers")
        sig.append((str(entry["mode"]), p, q))
    return tuple(sig)


def load_record(text: str):
    """Load a record back into a NormalPoly or EvolutionEquation; unknown
    fields and schema mismatches are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordError(f"record is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise RecordError("record must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise RecordError(
            f"unsupported schema_version {doc.get('schema_version')!r}"
        )
    kind = doc.get("kind")
    try:
        if kind == "normal_poly":
            _check_keys(doc, ("schema_version", "kind", "terms"), "record")
            entries = []
            for i, term in enumerate(doc["terms"]):
                ctx = f"terms[{i}]"
                _check_keys(term, ("signature", "coeff"), ctx)
                entries.append(
                    (_sig_load(term["signature"], ctx), _scalar_load(term["coeff"], ctx))
                )
            return NormalPoly(entries)
        if kind == "evolution_equation":
            _check_keys(
                doc,
                ("schema_version", "kind", "observable", "terms", "constant"),
                "record",
            )
            obs = ExpVal(_sig_load(doc["observable"], "observable"))
            rhs = {}
            for i, term in enumerate(doc["terms"]):
                ctx = f"terms[{i}]"
                _check_keys(term, ("expval", "coeff"), ctx)
                rhs[ExpVal(_sig_load(term["expval"], ctx))] = _scalar_load(
                    term["coeff"], ctx
                )
            return EvolutionEquation(obs, rhs, _scalar_load(doc["constant"], "constant"))
    except ValueError as exc:
        raise RecordError(f"invalid record content: {exc}") from None
    raise RecordError(f"unknown record kind {kind!r}")
