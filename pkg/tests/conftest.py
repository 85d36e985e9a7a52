import pytest

from ivbet.construction import build_sequence
from ivbet.core import parse_oracle
from ivbet.opponents import default_family


@pytest.fixture(scope="session")
def seed42():
    return parse_oracle("seed:42")


@pytest.fixture(scope="session")
def default_trace_10k(seed42):
    """The canonical acceptance run: seed:42, bundled family, 10,000 stages."""
    return build_sequence(seed42, default_family(), 10_000)
