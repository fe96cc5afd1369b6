import pytest

from ghx.engine import Engine, Store
from ghx.families import register_all


@pytest.fixture(scope="session")
def engine(tmp_path_factory):
    """One shared artifact store per test session: slices built once."""
    store = Store(str(tmp_path_factory.mktemp("ghx-store")))
    return register_all(Engine(store))
