import pytest

from ekor_atlas.affine import ExtendedAffineWeylGroup
from ekor_atlas.rootdata import RootDatum
from ekor_atlas.siegel import siegel_context

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def criterion():
    """Record one pass/fail line per acceptance criterion, then assert."""
    def record(tag, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {tag}"
        if detail:
            line += f": {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ctx1():
    return siegel_context(1)


@pytest.fixture(scope="session")
def ctx2():
    return siegel_context(2)


@pytest.fixture(scope="session")
def ctx3():
    return siegel_context(3)


@pytest.fixture(scope="session")
def ctx4():
    return siegel_context(4)


def build_gl3_twisted():
    """Rank three general linear datum with the duality twist.

    The twist sends x to minus its reversal, which exchanges the two simple
    reflections and has fixed lattice of rank one, so it exercises every
    code path that a trivial Frobenius misses.
    """
    datum = RootDatum(
        dim=3,
        basis=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        simple_roots=((1, -1, 0), (0, 1, -1)),
        simple_coroots=((1, -1, 0), (0, 1, -1)),
        frobenius=((0, 0, -1), (0, -1, 0), (-1, 0, 0)),
    )
    return ExtendedAffineWeylGroup(datum)


@pytest.fixture(scope="session")
def gl3_twisted():
    return build_gl3_twisted()
