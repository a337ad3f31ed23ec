import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hatgroup.exact import QS3, Point
from hatgroup.grid import NotSimple, geo, neighbours
from hatgroup.group import IDENTITY, GammaElement

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def rules():
    from hatgroup.substitution import load_rules
    return load_rules()


# ----------------------------------------------------------- strategies

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
qs3 = st.builds(QS3, fractions, fractions)
nonzero_qs3 = qs3.filter(lambda x: bool(x))
points = st.builds(Point, qs3, qs3)
elements = st.builds(GammaElement, st.integers(-6, 6), st.integers(-6, 6),
                     st.integers(0, 5), st.integers(0, 1))
# points generic enough to avoid grid edges: irrational-looking offsets
generic_points = st.builds(
    lambda x, y: Point(QS3(x, Fraction(1, 97)), QS3(y, Fraction(1, 89))),
    st.fractions(min_value=-12, max_value=12, max_denominator=7),
    st.fractions(min_value=-12, max_value=12, max_denominator=7))


def random_region(rng: random.Random, n: int, kind="Semikite"):
    """A random connected set of n cells whose union is a simple polygon."""
    while True:
        cells = {IDENTITY}
        frontier = list(neighbours(IDENTITY, kind))
        while len(cells) < n and frontier:
            c = frontier.pop(rng.randrange(len(frontier)))
            if c in cells:
                continue
            cells.add(c)
            frontier.extend(d for d in neighbours(c, kind) if d not in cells)
        try:
            poly = geo(cells, kind)
        except NotSimple:
            continue
        if poly.is_simple():
            return frozenset(cells), poly


regions = st.builds(lambda seed, n: random_region(random.Random(seed), n),
                    st.integers(0, 10 ** 6), st.integers(1, 40))


# ------------------------------------------------------- acceptance lines

ACCEPTANCE = {}  # criterion number -> "PASS ..." / "FAIL ..." line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
