"""Seeded random test data: rationals, polynomials, wave functions,
potentials, Lorentz matrices and versors.

Every generator takes a ``random.Random`` so that trials are independent
and reproducible from ``(seed, trial)``.
"""
from __future__ import annotations

import math
import random

from gmpy2 import mpq

from .lorentz import LorentzMatrix, boost, reflection, rotation
from .multivector import Multivector, QPrimeSpec
from .polyfield import FieldMV, PolyScalar, Potential, pack

DENOMINATORS = (1, 2, 4)
PYTHAGOREAN = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (0, 1, 1))
BOOSTS = ((5, 3, 4, 3), (5, 4, 3, 4), (13, 12, 5, 12))  # (ch num, den, sh num, den)


def trial_rng(seed: int, trial: int, salt: str = "") -> random.Random:
    return random.Random(f"{seed}:{trial}:{salt}")


def rational(rng: random.Random, nonzero: bool = False) -> mpq:
    while True:
        q = mpq(rng.randint(-9, 9), rng.choice(DENOMINATORS))
        if q or not nonzero:
            return q


def poly(rng: random.Random, nvars: int, degree: int, active, max_terms: int = 3) -> PolyScalar:
    """Sum of up to ``max_terms`` random monomials in the ``active`` variables."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.choice(active)] += 1
        key = pack(exps)
        terms[key] = terms.get(key, 0) + rational(rng, nonzero=True)
    return PolyScalar(nvars, terms)


def active_vars(rng: random.Random, n: int, k: int = 4) -> list[int]:
    return sorted(rng.sample(range(n + 1), min(k, n + 1)))


def wave_function(rng: random.Random, q: QPrimeSpec, degree: int = 3, blades: int = 4,
                  active=None) -> FieldMV:
    """Random field valued in the even part of ``Q'``."""
    n = q.n
    active = active or active_vars(rng, n)
    basis = q.even_basis()
    chosen = rng.sample(basis, min(blades, len(basis)))
    return FieldMV(n, {m: poly(rng, n + 1, degree, active) for m in chosen})


def potential(rng: random.Random, n: int, degree: int = 2, density: float = 0.5,
              active=None) -> Potential:
    active = active or active_vars(rng, n)
    comps = []
    for _ in range(n + 1):
        if rng.random() < density:
            comps.append(poly(rng, n + 1, degree, active, max_terms=2))
        else:
            comps.append(PolyScalar(n + 1))
    return Potential(tuple(comps))


def mass(rng: random.Random) -> mpq:
    return rational(rng)


def constant_even(rng: random.Random, q: QPrimeSpec, blades: int = 3) -> Multivector:
    basis = q.even_basis()
    chosen = rng.sample(basis, min(blades, len(basis)))
    return Multivector(q.n, {m: rational(rng, nonzero=True) for m in chosen})


# Lorentz matrices


def elementary(rng: random.Random, n: int, spatial_planes=None, boost_axes=None) -> LorentzMatrix:
    """One random factor: permutation-reflection, rational rotation or boost."""
    kinds = ["rotation"]
    if spatial_planes is None:
        kinds.append("permutation")
    if boost_axes is None or boost_axes:
        kinds.append("boost")
    choice = rng.choice(kinds)
    if choice == "permutation":
        i, j = rng.sample(range(1, n + 1), 2)
        rows = [[int(a == b) for b in range(n + 1)] for a in range(n + 1)]
        rows[i][i] = rows[j][j] = 0
        rows[i][j] = rng.choice((1, -1))
        rows[j][i] = rng.choice((1, -1))
        return LorentzMatrix(tuple(map(tuple, rows)))
    if choice == "rotation":
        planes = spatial_planes or [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        i, j = rng.choice(planes)
        a, b, c = rng.choice(PYTHAGOREAN)
        s = rng.choice((1, -1))
        return rotation(n, i, j, mpq(a, c), s * mpq(b, c))
    axes = boost_axes or list(range(1, n + 1))
    k = rng.choice(axes)
    cn, cd, sn, sd = rng.choice(BOOSTS)
    return boost(n, k, mpq(cn, cd), rng.choice((1, -1)) * mpq(sn, sd))


def lorentz(rng: random.Random, n: int, special: bool = False, max_len: int = 4) -> LorentzMatrix:
    """Product of up to ``max_len`` elementary factors; forced into SO if asked."""
    p = LorentzMatrix.identity(n)
    for _ in range(rng.randint(1, max_len)):
        p = p @ elementary(rng, n)
    if special and not p.is_special():
        p = p @ reflection(n, rng.randint(1, n))
    return p


def tensor_family(rng: random.Random, n: int, dprime: int, max_len: int = 3) -> LorentzMatrix:
    """Rotations in the planes (2mu-1, 2mu) composed with boosts along axes
    outside every such plane."""
    planes = [(2 * mu - 1, 2 * mu) for mu in range(1, dprime + 1)]
    paired = {i for p in planes for i in p}
    axes = [k for k in range(1, n + 1) if k not in paired]
    p = LorentzMatrix.identity(n)
    for _ in range(rng.randint(1, max_len)):
        p = p @ elementary(rng, n, spatial_planes=planes, boost_axes=axes)
    return p


def vector(rng: random.Random, n: int, non_null: bool = True) -> Multivector:
    while True:
        coords = [mpq(rng.randint(-3, 3)) for _ in range(n + 1)]
        sq = coords[0] ** 2 - sum(c * c for c in coords[1:])
        if any(coords) and (sq != 0 or not non_null):
            return Multivector(n, {1 << mu: c for mu, c in enumerate(coords)})


def versor(rng: random.Random, n: int, parity: int | None = None, max_len: int = 4) -> Multivector:
    """Product of random non-null integer vectors with the requested parity."""
    k = rng.randint(1, max_len)
    if parity is not None and k % 2 != parity:
        k += 1
    out = Multivector.scalar(n, 1)
    for _ in range(k):
        out = out * vector(rng, n)
    return out


def float_versor(rng: random.Random, n: int, parity: int | None = None, max_len: int = 4,
                 margin: float = 0.5) -> Multivector:
    """Unit-normalized float versor with factors far from the null cone.

    Each factor satisfies ``|v.v| >= margin * |v|_euclid^2``, which bounds
    its rapidity, so the float adjoint stays within the backend's 1e-10
    orthogonality tolerance.
    """
    k = rng.randint(1, max_len)
    if parity is not None and k % 2 != parity:
        k += 1
    out = Multivector.scalar(n, 1.0)
    for _ in range(k):
        while True:
            coords = [rng.uniform(-1, 1) for _ in range(n + 1)]
            sq = coords[0] ** 2 - sum(c * c for c in coords[1:])
            if abs(sq) >= margin * sum(c * c for c in coords) > 0:
                break
        scale = 1 / math.sqrt(abs(sq))
        out = out * Multivector(n, {1 << mu: c * scale for mu, c in enumerate(coords)})
    return out


def spin_even_in_qprime(rng: random.Random, q: QPrimeSpec) -> Multivector:
    """Even versor built from vectors supported on ``Q'`` generators."""
    n = q.n
    out = Multivector.scalar(n, 1)
    for _ in range(2):
        while True:
            coords = {1 << mu: mpq(rng.randint(-3, 3)) for mu in q.generators}
            v = Multivector(n, coords)
            sq = (v * v)[0]
            if v and sq != 0:
                break
        out = out * v
    return out

