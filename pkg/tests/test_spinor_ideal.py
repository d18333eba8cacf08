import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dhga import sampling as smp
from dhga.multivector import Multivector, QPrimeSpec, in_qprime_even
from dhga.parse import parse_mv
from dhga.polyfield import FieldMV
from dhga.spinor_ideal import (
    IdempotentSpec,
    MixedParity,
    NotInIdeal,
    NotInQPrimeEven,
    Psi_from_psi,
    all_specs,
    build_idempotent,
    check_idempotent_props,
    decompose_S,
    ideal_dimension,
    psi_from_Psi,
    transform_wavefunction,
    verify_injectivity,
)
from oracles import MatrixRep
from strategies import seeds

SPECS = all_specs((3, 4, 5, 6, 7))
SMALL = all_specs((3, 4, 5))
IDS = [f"{s.n}-{s.kind.value}" for s in SPECS]
SMALL_IDS = [f"{s.n}-{s.kind.value}" for s in SMALL]

# products of 1/2(e + e0) and 1/2(e + i e12), expanded by hand
T3 = "1/4 + 1/4e0 + 1/4i e12 + 1/4i e012"
# adds the factor 1/2(e + i e34); i*i*e12*e34 = -e1234
T4 = "1/8 + 1/8e0 + 1/8i e12 + 1/8i e34 + 1/8i e012 + 1/8i e034 - 1/8e1234 - 1/8e01234"


def spec(n, kind):
    return IdempotentSpec(n, kind)


def test_frozen_idempotents():
    assert build_idempotent(spec(3, "spinor")).value == parse_mv(T3, 3)
    assert build_idempotent(spec(4, "doublespinor")).value == parse_mv(T3, 4)
    assert build_idempotent(spec(4, "semispinor")).value == parse_mv(T4, 4)
    assert build_idempotent(spec(5, "spinor")).value == parse_mv(T4, 5)


@pytest.mark.parametrize("n,kind,dprime", [(3, "spinor", 1), (4, "doublespinor", 1), (4, "semispinor", 2),
                                            (5, "spinor", 2), (6, "semispinor", 3), (7, "spinor", 3)])
def test_dprime(n, kind, dprime):
    assert spec(n, kind).dprime == dprime


def test_spec_errors():
    with pytest.raises(ValueError):
        spec(4, "spinor")
    with pytest.raises(ValueError):
        spec(3, "semispinor")


@pytest.mark.parametrize("s", SPECS, ids=IDS)
def test_matrix_rep_projector(s):
    t = build_idempotent(s).value
    m = MatrixRep(s.n)(t)
    assert np.allclose(m @ m, m, atol=1e-12)
    assert np.allclose(m.conj().T, m, atol=1e-12)


def test_primitive_at_n3():
    m = MatrixRep(3)(build_idempotent(spec(3, "spinor")).value)
    assert np.linalg.matrix_rank(m) == 1


@pytest.mark.parametrize("s", SPECS, ids=IDS)
def test_all_properties(s):
    props = check_idempotent_props(build_idempotent(s))
    assert props["t^2 = t"] and props["E t = t"]
    assert len(props) == 4 + 2 * s.dprime


def real_split_rank(s):
    # independent route: matrix representation of Y t, real and imaginary parts stacked
    t = build_idempotent(s).value
    rep = MatrixRep(s.n)
    cols = []
    for m in s.qprime.even_basis():
        img = rep(Multivector.blade(s.n, m)) @ rep(t)
        cols.append(np.concatenate([img.real.ravel(), img.imag.ravel()]))
    return np.linalg.matrix_rank(np.array(cols).T)


@pytest.mark.parametrize("s", SPECS, ids=IDS)
def test_injectivity_matches_oracle(s):
    rep = verify_injectivity(build_idempotent(s))
    assert rep.full
    assert rep.columns == len(s.qprime.even_basis())
    assert rep.rank == real_split_rank(s)


@pytest.mark.parametrize("n,kind,dim", [(3, "spinor", 4), (4, "semispinor", 4), (4, "doublespinor", 8),
                                         (5, "spinor", 8)])
def test_ideal_dimension(n, kind, dim):
    assert ideal_dimension(build_idempotent(spec(n, kind))) == dim


def test_correspondence_examples():
    t = build_idempotent(spec(3, "spinor"))
    # i t = I t, so the ideal element i t comes from Psi = I = -e12
    assert Psi_from_psi(t.value * parse_mv("i", 3), t) == parse_mv("-e12", 3)
    assert Psi_from_psi(t.value, t) == Multivector.scalar(3, 1)
    with pytest.raises(NotInIdeal):
        Psi_from_psi(parse_mv("e1", 3), t)
    with pytest.raises(NotInQPrimeEven):
        psi_from_Psi(parse_mv("e0", 3), t)


@pytest.mark.parametrize("s", SMALL, ids=SMALL_IDS)
@given(seed=seeds)
def test_correspondence_round_trip(s, seed):
    t = build_idempotent(s)
    Psi = smp.constant_even(random.Random(seed), s.qprime, blades=5)
    assert Psi_from_psi(psi_from_Psi(Psi, t), t) == Psi


@given(seed=seeds)
def test_field_round_trip(seed):
    s = spec(5, "spinor")
    t = build_idempotent(s)
    Psi = smp.wave_function(random.Random(seed), s.qprime)
    back = Psi_from_psi(psi_from_Psi(Psi, t), t)
    assert isinstance(back, FieldMV) and back == Psi


def test_decomposition_example():
    q = QPrimeSpec(5, "spinor")
    s = parse_mv("e + e12 + e45 + e1234 + e012345", 5)
    dec = decompose_S(s, q)
    assert dec.S0 == parse_mv("e + e12", 5)
    assert dec.term(4) == parse_mv("-e5 + e123 - e01235", 5)
    assert dec.reassemble() == s
    with pytest.raises(MixedParity):
        decompose_S(parse_mv("e + e4", 5), q)


@pytest.mark.parametrize("s", SPECS, ids=IDS)
@given(seed=seeds, parity=st.sampled_from([0, 1]))
def test_decomposition_reassembles(s, seed, parity):
    v = smp.versor(random.Random(seed), s.n, parity, max_len=3)
    dec = decompose_S(v, s.qprime)
    assert dec.reassemble() == v
    for _, coeff in dec.terms:
        assert all(m & ~s.qprime.mask == 0 for m in coeff.terms)


@pytest.mark.parametrize("s", SMALL, ids=SMALL_IDS)
@given(seed=seeds, parity=st.sampled_from([0, 1]))
def test_transform_wavefunction_intertwines(s, seed, parity):
    rng = random.Random(seed)
    t = build_idempotent(s)
    S = smp.versor(rng, s.n, parity, max_len=3)
    Psi = smp.constant_even(rng, s.qprime, blades=4)
    out = transform_wavefunction(S, Psi, t)
    assert in_qprime_even(out, s.qprime)
    assert out * t.value == S * Psi * t.value
