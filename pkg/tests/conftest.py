from hypothesis import settings, strategies as st

from coderiv import V21, Coderivation
from coderiv.coderivations import basis_terms

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)
nonzero_fractions = small_fractions.filter(bool)


@st.composite
def homogeneous_cochains(draw, arity=None, parity=None, max_terms=4):
    """A random parity-homogeneous coderivation on the 2|1 space."""
    n = draw(st.sampled_from([1, 2, 3])) if arity is None else arity
    p = draw(st.sampled_from([0, 1])) if parity is None else parity
    keys = basis_terms(n, p)
    chosen = draw(st.lists(st.sampled_from(keys), min_size=1, max_size=max_terms, unique=True))
    return Coderivation(V21, {k: draw(nonzero_fractions) for k in chosen})


@st.composite
def even_automorphisms(draw):
    """Random block diagonal invertible matrix (GL(2) x GL(1))."""
    from coderiv.group_actions import LinearAutomorphism

    ints = st.integers(-3, 3)
    a, b, c, e = draw(st.tuples(ints, ints, ints, ints).filter(lambda m: m[0] * m[3] != m[1] * m[2]))
    f = draw(st.sampled_from([1, -1, 2, -2, 3]))
    return LinearAutomorphism(((a, b, 0), (c, e, 0), (0, 0, f)))



# one "CRITERION n: PASS|FAIL ..." line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
