from fractions import Fraction

from hypothesis import strategies as st

from riglab.polyring import LEX, Polynomial, VarRegistry

REG3 = VarRegistry(["x", "y", "z"])

coefficients = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def polynomials(order=LEX, max_terms=4, max_exp=3):
    monomials = st.tuples(*(st.integers(0, max_exp) for _ in range(3)))
    return st.dictionaries(monomials, coefficients, max_size=max_terms).map(
        lambda d: Polynomial(REG3, d, order))
