"""Hypothesis strategies shared by the test modules."""
from gmpy2 import mpq
from hypothesis import strategies as st

from dhga.multivector import Multivector
from dhga.scalars import GaussQ

rationals = st.builds(
    lambda p, q: mpq(p, q), st.integers(-9, 9), st.sampled_from([1, 2, 4])
)
nonzero_rationals = rationals.filter(bool)
gaussians = st.builds(GaussQ, rationals, rationals)


@st.composite
def multivectors(draw, n, complex_=False, max_terms=6):
    masks = draw(st.lists(st.integers(0, (1 << (n + 1)) - 1), max_size=max_terms, unique=True))
    coeff = gaussians if complex_ else rationals
    return Multivector(n, {m: draw(coeff) for m in masks})


seeds = st.integers(0, 2**32 - 1)
