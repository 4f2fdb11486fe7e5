import pytest

from polyprod.complex import cycle, discrete, simplex, simplex_boundary, validate_complex
from polyprod.homalg import QQ, GF
from polyprod.oracle import corpus

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    ok = CRITERIA.get(n, (title, True))[1]
    if rep.when == "call" or rep.failed:
        ok = ok and rep.passed
    CRITERIA[n] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, ok = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture(scope="session")
def seeded_corpus():
    return corpus(0, 6)


@pytest.fixture
def two_edges():
    return validate_complex(3, [[1, 3], [2, 3]])


@pytest.fixture
def square():
    return cycle(4)


@pytest.fixture(params=[QQ, GF(2), GF(3)], ids=["Q", "F2", "F3"])
def field(request):
    return request.param


SMALL = [
    discrete(1), discrete(2), discrete(3), simplex(2), simplex(3), simplex_boundary(3),
    simplex_boundary(4), cycle(4), cycle(5), validate_complex(3, [[1, 3], [2, 3]]),
    validate_complex(4, [[1, 2, 3], [3, 4]]), validate_complex(3, []),
]
