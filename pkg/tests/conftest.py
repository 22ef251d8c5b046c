from __future__ import annotations

from hypothesis import strategies as st

from geokit.cyclotomic import CycMatrix, CyclotomicElement
from geokit.lattice import IntMatrix

coeff = st.integers(min_value=-50, max_value=50)
elements = st.builds(CyclotomicElement, coeff, coeff, coeff, coeff)
small_elements = st.builds(
    CyclotomicElement, *(st.integers(min_value=-3, max_value=3) for _ in range(4))
)
matrices = st.lists(st.lists(small_elements, min_size=3, max_size=3), min_size=3, max_size=3).map(CycMatrix.from_rows)


@st.composite
def int_matrices(draw, max_dim: int = 8, bound: int = 20):
    r = draw(st.integers(min_value=0, max_value=max_dim))
    c = draw(st.integers(min_value=0, max_value=max_dim))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r))
    return IntMatrix.from_rows(rows, c)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
