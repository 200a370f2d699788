import pytest

from toricfano.atlas import record_fan, shipped_database


@pytest.fixture(scope="session")
def database():
    return shipped_database()


@pytest.fixture(scope="session")
def fans(database):
    """One built fan per bundled variety, shared so memo caches amortize."""
    return {rec.name: record_fan(rec) for rec in database}
