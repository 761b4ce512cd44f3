"""Shared enumeration cache so expensive searches run once per session."""

import pytest

from p2qbrace import enumerate as routes
from p2qbrace.groups import make_group

_CACHE: dict = {}


def enumerate_cached(family: str, p: int, q: int, method: str = "structured", **kw):
    """Enumerate once per (group, method, options); orbits always attached."""
    key = (family, p, q, method, tuple(sorted(kw.items())))
    if key not in _CACHE:
        spec = make_group(family, p, q)
        fn = {
            "structured": routes.structured_enumerate,
            "search": routes.gfe_search,
            "oracle": routes.closure_oracle,
        }[method]
        result = fn(spec, **kw)
        routes.aut_orbits(result)
        _CACHE[key] = result
    return _CACHE[key]


@pytest.fixture(scope="session")
def enum_cache():
    return enumerate_cached
