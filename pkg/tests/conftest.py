import pytest

from artifact import MatingSpec
from artifact.pullback import realize

F_SPEC = {"degree": 3, "white": ["11/80", "19/80"], "black": ["22/80", "24/80"]}
G_SPEC = {"degree": 3, "white": ["21/80", "29/80"], "black": ["71/80", "73/80"]}
RABBIT_AEROPLANE = {"degree": 2, "white": ["1/7", "2/7"], "black": ["3/7", "4/7"]}

# pairs of distinct specs sharing their cluster data
FIXED_D2 = [{"degree": 2, "white": ["7/15", "8/15"], "black": ["1/15", "2/15"]},
            {"degree": 2, "white": ["1/15", "2/15"], "black": ["11/15", "4/5"]}]
FIXED_D3 = [{"degree": 3, "white": ["1/26", "3/26"], "black": ["17/26", "19/26"]},
            {"degree": 3, "white": ["2/13", "3/13"], "black": ["7/13", "8/13"]}]
PERIOD2_D2 = [{"degree": 2, "white": ["1/5", "4/15"], "black": ["2/5", "3/5"]},
              {"degree": 2, "white": ["7/15", "8/15"], "black": ["11/15", "4/5"]}]

_cache = {}


def realized(spec_dict):
    """(coeffs, trace, config) for a spec dict, computed once per session."""
    key = repr(sorted(spec_dict.items()))
    if key not in _cache:
        _cache[key] = realize(MatingSpec.from_dict(spec_dict), tol=1e-12, max_iter=500)
    return _cache[key]


@pytest.fixture(scope="session")
def realize_cached():
    return realized


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
