"""Hypothesis strategies for field elements and PBW polynomials."""

from hypothesis import strategies as st

from cglkit.pbw import NFPoly
from cglkit.qfield import RatQ

small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def int_polys(draw, max_degree=3):
    coeffs = draw(st.lists(small_ints, min_size=1, max_size=max_degree + 1))
    return RatQ(coeffs, 1)


@st.composite
def ratqs(draw, nonzero=False):
    num = draw(st.lists(small_ints, min_size=1, max_size=4))
    den = draw(st.lists(small_ints, min_size=1, max_size=3).filter(lambda c: any(c)))
    x = RatQ(num, den)
    if nonzero and not x:
        x = RatQ.qpow(draw(st.integers(-2, 2)))
    return x


simple_coeffs = st.one_of(
    st.integers(-3, 3).filter(bool).map(RatQ.coerce),
    st.integers(-3, 3).map(RatQ.qpow),
    st.just(RatQ([1, 1], 1)),
    st.just(RatQ([1], [-1, 1])),
)


@st.composite
def nf_polys(draw, n, max_exp=2, max_terms=3, below=None):
    """Random normal form in x1..xn (or only x1..x_{below-1})."""
    top = n if below is None else below - 1
    k = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(st.integers(0, max_exp)) if i < top else 0 for i in range(n))
        terms[e] = draw(simple_coeffs)
    return NFPoly(n, terms)


@st.composite
def monomials(draw, n, max_exp=2, below=None):
    top = n if below is None else below - 1
    e = tuple(draw(st.integers(0, max_exp)) if i < top else 0 for i in range(n))
    return NFPoly(n, {e: RatQ.coerce(1)})
