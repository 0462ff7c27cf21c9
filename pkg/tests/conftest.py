import os

# keep the default configuration serial for the suite; parallel behaviour is
# exercised explicitly where it is the thing under test
os.environ.setdefault("BOLANO_PARALLEL", "0")

from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")
