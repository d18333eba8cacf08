"""Independent reference implementations used only by the tests.

* ``MatrixRep``: a faithful complex matrix representation of Cl(1,n) built
  from Kronecker products of Pauli matrices.  Generator 0 is Hermitian and
  squares to +1; the others are anti-Hermitian and square to -1, so the
  Hermitian conjugation of the algebra becomes the matrix conjugate
  transpose.
* ``naive_product``: term-by-term product via the bubble-sort reorderer.
* ``cofactor_det``: Laplace expansion over ``fractions.Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from dhga.blades import bubble_product, indices
from dhga.multivector import Multivector
from dhga.scalars import imag_part, real_part

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID = np.eye(2, dtype=complex)


def _kron(*ms):
    return reduce(np.kron, ms, np.eye(1, dtype=complex))


def _euclidean_gammas(count: int):
    """``count`` mutually anticommuting Hermitian matrices squaring to 1."""
    k = (count + 1) // 2
    out = []
    for j in range(k):
        left = [Z] * j
        right = [ID] * (k - j - 1)
        out.append(_kron(*left, X, *right))
        out.append(_kron(*left, Y, *right))
    if count % 2:
        # the product of all Z's anticommutes with every X/Y string
        out = out[: count - 1] + [_kron(*([Z] * k))]
    return out[:count]


@lru_cache(maxsize=None)
def _gammas(n: int):
    m = n + 1
    base = _euclidean_gammas(m)
    gams = [base[0]] + [1j * g for g in base[1:]]
    if m % 2:
        # odd generator count: the irreducible representation is not
        # faithful, so take the direct sum with the sign-flipped copy
        flipped = [g.copy() for g in gams]
        flipped[-1] = -flipped[-1]
        size = gams[0].shape[0]
        gams = [np.block([[a, np.zeros((size, size))], [np.zeros((size, size)), b]])
                for a, b in zip(gams, flipped)]
    return tuple(gams)


class MatrixRep:
    def __init__(self, n: int):
        self.n = n
        self.gammas = _gammas(n)
        self.dim = self.gammas[0].shape[0]
        self._blades = {}

    def blade(self, mask: int):
        m = self._blades.get(mask)
        if m is None:
            m = np.eye(self.dim, dtype=complex)
            for i in indices(mask):
                m = m @ self.gammas[i]
            self._blades[mask] = m
        return m

    def __call__(self, u: Multivector):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for mask, c in u.terms.items():
            out += complex(float(real_part(c)), float(imag_part(c))) * self.blade(mask)
        return out


def naive_product(u: Multivector, v: Multivector) -> Multivector:
    n = u.n
    out = Multivector.zero(n)
    for ma, ca in u.terms.items():
        for mb, cb in v.terms.items():
            sign, mask = bubble_product(indices(ma), indices(mb), n)
            out = out + Multivector(n, {mask: ca * cb * sign})
    return out


def cofactor_det(rows):
    rows = [[Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") else Fraction(x)
             for x in r] for r in rows]
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(k):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total
