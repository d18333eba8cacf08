"""Hermitian idempotents, the left ideal they generate, and the passage
between ideal elements ``psi = Psi t`` and even ``Q'`` wave functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import linalg
from .blades import blade_mul, canonical_key, indices, mask_of
from .multivector import (
    Kind,
    Multivector,
    QPrimeSpec,
    format_mv,
    half_dim,
    hermitian_conjugate,
    in_qprime_even,
)
from .polyfield import FieldMV
from .scalars import I as IMAG
from .scalars import imag_part, real_part


class PropertyFailed(AssertionError):
    def __init__(self, equation: str, residual):
        self.equation = equation
        self.residual = residual
        super().__init__(f"{equation} fails; residual {residual}")


class NotInQPrimeEven(ValueError):
    pass


class NotInIdeal(ValueError):
    pass


class NoSolution(ArithmeticError):
    pass


class RankDeficient(ArithmeticError):
    pass


class MixedParity(ValueError):
    pass


@dataclass(frozen=True)
class IdempotentSpec:
    """Spinor kind plus dimension; fixes ``d``, the product length and ``Q'``."""

    n: int
    kind: Kind
    d: int = field(init=False)
    dprime: int = field(init=False)
    qprime: QPrimeSpec = field(init=False)

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        d = half_dim(self.n, kind)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "dprime", d if kind is Kind.SEMISPINOR else d - 1)
        object.__setattr__(self, "qprime", QPrimeSpec(self.n, kind))

    def to_json(self) -> dict:
        return {"n": self.n, "kind": self.kind.value, "d": self.d, "dprime": self.dprime,
                "qprime": list(self.qprime.generators)}


def all_specs(ns=(3, 4, 5, 6, 7)):
    out = []
    for n in ns:
        if n % 2:
            out.append(IdempotentSpec(n, Kind.SPINOR))
        else:
            out.append(IdempotentSpec(n, Kind.SEMISPINOR))
            out.append(IdempotentSpec(n, Kind.DOUBLESPINOR))
    return out


@dataclass(frozen=True)
class Idempotent:
    spec: IdempotentSpec
    value: Multivector

    @property
    def n(self) -> int:
        return self.spec.n


def idempotent_from_generators(gens, dprime: int) -> Multivector:
    """``1/2 (e + g0) * prod_mu 1/2 (e + i g_{2mu-1} g_{2mu})`` for given generators.

    ``gens`` lists the multivectors standing in for ``e^0 .. e^n``; the
    tensor approach passes transformed generators here.
    """
    n = gens[0].n
    half = mpq(1, 2)
    one = Multivector.scalar(n, 1)
    t = (one + gens[0]) * half
    for mu in range(1, dprime + 1):
        t = t * ((one + gens[2 * mu - 1] * gens[2 * mu] * IMAG) * half)
    return t


def build_idempotent(spec: IdempotentSpec) -> Idempotent:
    gens = [Multivector.gen(spec.n, mu) for mu in range(spec.n + 1)]
    return Idempotent(spec, idempotent_from_generators(gens, spec.dprime))


def imaginary_unit(n: int) -> Multivector:
    """``I = -e12``."""
    return Multivector.blade(n, (1, 2), -1)


def time_unit(n: int) -> Multivector:
    """``E = e0``."""
    return Multivector.gen(n, 0)


def check_idempotent_props(t: Idempotent) -> dict:
    """Verify idempotency, Hermiticity and the absorption rules exactly.

    Returns a mapping of equation name to ``True``; raises
    :class:`PropertyFailed` naming the first equation that fails.
    """
    n, tv = t.n, t.value
    results = {}

    def require(name, lhs, rhs):
        res = lhs - rhs
        if res:
            raise PropertyFailed(name, format_mv(res))
        results[name] = True

    require("t^2 = t", tv * tv, tv)
    require("t^dagger = t", hermitian_conjugate(tv), tv)
    require("I t = i t", imaginary_unit(n) * tv, tv * IMAG)
    require("E t = t", time_unit(n) * tv, tv)
    for mu in range(1, t.spec.dprime + 1):
        a, b = Multivector.gen(n, 2 * mu - 1), Multivector.gen(n, 2 * mu)
        require(f"i e{2 * mu - 1} t = e{2 * mu} t", a * tv * IMAG, b * tv)
        require(f"-e{2 * mu - 1}e{2 * mu} t = i t", -(a * b * tv), tv * IMAG)
    return results


def _require_qprime_even(psi, q: QPrimeSpec):
    if not in_qprime_even(psi, q):
        raise NotInQPrimeEven("wave function is not in the even part of Q'")


def psi_from_Psi(Psi, t: Idempotent):
    """``psi = Psi t`` for a constant or polynomial wave function."""
    _require_qprime_even(Psi, t.spec.qprime)
    return Psi * t.value


def _real_split_columns(t: Idempotent, basis):
    """Columns of ``Y -> Y t`` over a real basis, split into real/imag rows."""
    n = t.n
    images = [Multivector.blade(n, m) * t.value for m in basis]
    rows_used = sorted({m for img in images for m in img.terms}, key=canonical_key)
    cols = []
    for img in images:
        col = []
        for m in rows_used:
            c = img[m]
            col.append(mpq(real_part(c)))
            col.append(mpq(imag_part(c)))
        cols.append(col)
    return rows_used, cols


@dataclass(frozen=True)
class _Solver:
    basis: list
    rows_used: list
    matrix: list


_SOLVERS: dict = {}


def _solver(t: Idempotent) -> _Solver:
    key = (t.spec, tuple(sorted(t.value.terms.items(), key=lambda kv: kv[0])))
    s = _SOLVERS.get(key)
    if s is None:
        basis = t.spec.qprime.even_basis()
        rows_used, cols = _real_split_columns(t, basis)
        s = _SOLVERS[key] = _Solver(basis, rows_used, linalg.transpose(cols))
    return s


def _rhs(u: Multivector, rows_used):
    if any(m not in set(rows_used) for m in u.terms):
        raise NoSolution("ideal element has support outside the image of Q'^(0)")
    out = []
    for m in rows_used:
        c = u[m]
        out.append(mpq(real_part(c)))
        out.append(mpq(imag_part(c)))
    return out


def Psi_from_psi(psi, t: Idempotent, q: QPrimeSpec | None = None):
    """The unique real ``Psi`` in ``Q'^(0)`` with ``Psi t = psi``.

    Works on constants and on polynomial fields (one solve per monomial,
    all sharing one elimination).
    """
    q = q or t.spec.qprime
    if q != t.spec.qprime:
        raise ValueError("Q' does not match the idempotent")
    if psi * t.value != psi:
        raise NotInIdeal("psi t != psi")
    s = _solver(t)
    n = t.n
    if isinstance(psi, FieldMV):
        parts = psi.by_monomial()
        keys = list(parts)
        rhs = [_rhs(parts[k], s.rows_used) for k in keys]
    else:
        keys = None
        rhs = [_rhs(psi, s.rows_used)]
    if not rhs:
        return psi
    try:
        sols = linalg.solve_many(s.matrix, rhs)
    except linalg.SingularMatrix as exc:
        raise NoSolution(str(exc)) from None
    if keys is None:
        out = Multivector(n, dict(zip(s.basis, sols[0])))
    else:
        terms: dict = {}
        for k, sol in zip(keys, sols):
            for m, c in zip(s.basis, sol):
                if c:
                    terms.setdefault(m, {})[k] = c
        out = FieldMV._raw(n, terms)
    if out * t.value != psi:
        raise NoSolution("solution does not reproduce psi")
    return out


@dataclass(frozen=True)
class RankReport:
    spec: IdempotentSpec
    rank: int
    columns: int

    @property
    def full(self) -> bool:
        return self.rank == self.columns

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "rank": self.rank, "columns": self.columns,
                "full_rank": self.full}


def verify_injectivity(t: Idempotent, q: QPrimeSpec | None = None, strict: bool = True) -> RankReport:
    """Exact rank of ``Y -> Y t`` on the real basis of ``Q'^(0)``."""
    q = q or t.spec.qprime
    basis = q.even_basis()
    _, cols = _real_split_columns(t, basis)
    r = linalg.rank(linalg.transpose(cols))
    rep = RankReport(t.spec, r, len(basis))
    if strict and not rep.full:
        raise RankDeficient(f"rank {r} < {len(basis)}")
    return rep


def ideal_dimension(t: Idempotent) -> int:
    """Complex dimension of ``L(t) = {U t}``.

    The matrix of right multiplication by ``t`` has dyadic entries, so the
    floating-point rank is exact here.
    """
    n = t.n
    size = 1 << (n + 1)
    mat = np.zeros((size, size), dtype=complex)
    for col in range(size):
        img = Multivector.blade(n, col) * t.value
        for m, c in img.terms.items():
            mat[m, col] = complex(float(real_part(c)), float(imag_part(c)))
    return int(np.linalg.matrix_rank(mat))


# decomposition of a spin element along the complement generators


@dataclass(frozen=True)
class SDecomposition:
    """``S = S0 + sum_k S_k e^{mu_1..mu_k}`` with every ``S`` factor in ``Q'``."""

    S0: Multivector
    terms: tuple  # ((mu_1, ..., mu_k), S_k) sorted by canonical key

    def reassemble(self) -> Multivector:
        out = self.S0
        for idx, coeff in self.terms:
            out = out + coeff * Multivector.blade(coeff.n, idx)
        return out

    def term(self, *idx) -> Multivector:
        for key, coeff in self.terms:
            if key == tuple(idx):
                return coeff
        return Multivector.zero(self.S0.n)


def decompose_S(S: Multivector, q: QPrimeSpec) -> SDecomposition:
    """Factor each blade as (``Q'`` blade) times (ascending complement blade)."""
    n = S.n
    if S.parity() is None and S:
        raise MixedParity("element mixes even and odd grades")
    comp_mask = mask_of(q.complement)
    groups: dict[int, dict] = {}
    for m, c in S.terms.items():
        comp = m & comp_mask
        qpart = m & ~comp_mask
        sign, _ = blade_mul(qpart, comp, n)
        g = groups.setdefault(comp, {})
        g[qpart] = g.get(qpart, 0) + (c if sign > 0 else -c)
    S0 = Multivector(n, groups.pop(0, {}))
    terms = tuple(
        (indices(comp), Multivector(n, groups[comp]))
        for comp in sorted(groups, key=canonical_key)
    )
    return SDecomposition(S0, terms)


def transform_wavefunction(S, Psi, t: Idempotent, q: QPrimeSpec | None = None):
    """Wave function in ``Q'^(0)`` representing ``S Psi t``.

    Each complement blade ``e^{mu_1..mu_k}`` of ``S`` is traded for
    ``e^{mu_1-1 .. mu_k-1} I^k`` on the right of ``Psi``; odd ``S`` get a
    trailing ``E``.
    """
    q = q or t.spec.qprime
    value = getattr(S, "value", S)
    n = value.n
    _require_qprime_even(Psi, q)
    par = value.parity()
    if par is None:
        raise MixedParity("spin element mixes even and odd grades")
    dec = decompose_S(value, q)
    imag = imaginary_unit(n)
    out = dec.S0 * Psi
    for idx, coeff in dec.terms:
        right = Multivector.blade(n, tuple(mu - 1 for mu in idx))
        for _ in idx:
            right = right * imag
        out = out + coeff * Psi * right
    if par == 1:
        out = out * time_unit(n)
    return out
