import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from twodom.tree import Tree, prufer_decode  # noqa: E402


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 14) -> Tree:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    if n <= 2:
        return Tree.from_edges(n, [(0, 1)] if n == 2 else [])
    seq = draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
    return prufer_decode(seq, n)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
