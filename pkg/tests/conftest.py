import pytest

from karteszi.config import build, validate_params


@pytest.fixture(scope="session")
def built():
    """Session-cached configuration builder: built(n, ell, m) -> KConfig."""
    cache = {}

    def _get(n, ell, m):
        key = (n, ell, m)
        if key not in cache:
            cache[key] = build(validate_params(n, ell, m))
        return cache[key]

    return _get
