import math

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import assume, given
from hypothesis import strategies as st

from dhga.multivector import (
    Kind,
    Multivector,
    NotInvertible,
    QPrimeSpec,
    SignatureMismatch,
    SpecError,
    add,
    complex_conjugate,
    even_part,
    grade_project,
    hermitian_conjugate,
    in_qprime,
    in_qprime_even,
    inverse,
    mul,
    odd_part,
    reversion,
)
from dhga.parse import parse_mv
from dhga.scalars import GaussQ
from oracles import MatrixRep, naive_product
from strategies import multivectors


def mv(text, n=3):
    return parse_mv(text, n)


def test_add_examples():
    assert add(mv("e"), mv("-1")) == Multivector.zero(3)
    assert mv("e0") + mv("e0") == mv("2e0")
    assert (mv("e + e12") + mv("e - e12")) == mv("2")
    with pytest.raises(SignatureMismatch):
        mv("e") + parse_mv("e", 4)


def test_mul_examples():
    assert mul(mv("e12"), mv("e12")) == mv("-1")
    assert mv("e - e12") * mv("e + e12") == mv("2")


@given(multivectors(3))
def test_identity_element(u):
    assert Multivector.scalar(3, 1) * u == u == u * Multivector.scalar(3, 1)


@pytest.mark.parametrize("n", [1, 3, 4, 5])
@given(data=st.data())
def test_product_matches_naive_and_matrix_oracles(n, data):
    u = data.draw(multivectors(n, complex_=True))
    v = data.draw(multivectors(n, complex_=True))
    w = u * v
    assert w == naive_product(u, v)
    rep = MatrixRep(n)
    assert np.allclose(rep(w), rep(u) @ rep(v), atol=1e-9)


def test_reversion_examples():
    assert reversion(mv("e12")) == mv("-e12")
    assert reversion(mv("e0")) == mv("e0")
    r = 1 / math.sqrt(2)
    s = mv("e - e12") * r
    assert reversion(s).allclose(mv("e + e12") * r)


def test_conjugations():
    assert complex_conjugate(mv("i")) == mv("-i")
    assert complex_conjugate(mv("e0")) == mv("e0")
    assert complex_conjugate(mv("(2+3i)e12")) == mv("(2-3i)e12")
    assert hermitian_conjugate(mv("e0")) == mv("e0")
    assert hermitian_conjugate(mv("e1")) == mv("-e1")
    assert hermitian_conjugate(mv("i")) == mv("-i")


@given(multivectors(4), multivectors(4))
def test_reversion_is_anti_automorphism(u, v):
    assert reversion(u * v) == reversion(v) * reversion(u)


@given(multivectors(4, complex_=True), multivectors(4, complex_=True))
def test_involutions(u, v):
    assert reversion(reversion(u)) == u
    assert hermitian_conjugate(hermitian_conjugate(u)) == u
    assert hermitian_conjugate(u * v) == hermitian_conjugate(v) * hermitian_conjugate(u)


@given(multivectors(3, complex_=True))
def test_dagger_is_matrix_adjoint(u):
    rep = MatrixRep(3)
    assert np.allclose(rep(hermitian_conjugate(u)), rep(u).conj().T, atol=1e-9)


def test_inverse_examples():
    assert inverse(mv("e0")) == mv("e0")
    assert inverse(mv("e12")) == mv("-e12")
    r = 1 / math.sqrt(2)
    assert inverse(mv("e - e12") * r).allclose(mv("e + e12") * r, 1e-12)
    with pytest.raises(NotInvertible):
        inverse(mv("e + e0"))


@given(multivectors(3, max_terms=4))
def test_inverse_round_trip(u):
    try:
        v = inverse(u)
    except NotInvertible:
        assume(False)
    one = Multivector.scalar(3, 1)
    assert u * v == one and v * u == one


@given(multivectors(4), multivectors(4))
def test_even_odd_split(u, v):
    assert even_part(u) + odd_part(u) == u
    ue, uo, ve, vo = even_part(u), odd_part(u), even_part(v), odd_part(v)
    assert odd_part(ue * ve) == Multivector.zero(4)
    assert odd_part(uo * vo) == Multivector.zero(4)
    assert even_part(ue * vo) == Multivector.zero(4)


def test_projections():
    assert even_part(mv("e + e1 + e12")) == mv("e + e12")
    assert odd_part(mv("e012")) == mv("e012")
    assert grade_project(mv("e + e12"), 2) == mv("e12")


@pytest.mark.parametrize(
    "n,kind,gens",
    [
        (3, "spinor", (0, 1, 2, 3)),
        (5, "spinor", (0, 1, 2, 3, 5)),
        (7, "spinor", (0, 1, 2, 3, 5, 7)),
        (4, "semispinor", (0, 1, 2, 3)),
        (6, "semispinor", (0, 1, 2, 3, 5)),
        (4, "doublespinor", (0, 1, 2, 3, 4)),
        (6, "doublespinor", (0, 1, 2, 3, 5, 6)),
    ],
)
def test_qprime_generators(n, kind, gens):
    assert QPrimeSpec(n, kind).generators == gens


def test_qprime_rejects_wrong_parity():
    with pytest.raises(SpecError):
        QPrimeSpec(4, Kind.SPINOR)
    with pytest.raises(SpecError):
        QPrimeSpec(5, Kind.SEMISPINOR)


def test_qprime_membership():
    q = QPrimeSpec(5, "spinor")
    assert not in_qprime(parse_mv("e4", 5), q)
    assert in_qprime_even(parse_mv("e + e12", 5), q)
    assert in_qprime_even(parse_mv("e01", 5), q)
    assert not in_qprime_even(parse_mv("e0", 5), q)


@given(multivectors(4, complex_=True))
def test_json_round_trip(u):
    assert Multivector.from_json(u.to_json()) == u


def test_json_shape():
    data = mv("1/2e01 - (1+2i)e3").to_json()
    assert data["sig"] == 3
    assert {"blade": [0, 1], "re": "1/2", "im": "0"} in data["terms"]
    assert {"blade": [3], "re": "-1", "im": "-2"} in data["terms"]


def test_float_backend_prunes():
    u = Multivector(3, {0: 1.0, 3: 1e-16})
    assert len(u) == 1
    assert Multivector(3, {0: mpq(1, 2)}) * 2.0 == Multivector(3, {0: 1.0})


def test_gauss_demotes_to_rational():
    assert (GaussQ(0, 1) * GaussQ(0, 1)) == -1
