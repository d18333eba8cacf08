"""Sparse multivectors over Cl(1,n) and its complexification."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from gmpy2 import mpq

from . import linalg
from .blades import (
    Signature,
    canonical_key,
    format_blade,
    grade,
    grade_involution_sign,
    indices,
    mask_of,
    reversion_sign,
    sign_table,
)
from .scalars import (
    FLOAT_ATOL,
    ZERO,
    GaussQ,
    close,
    conj,
    format_scalar,
    imag_part,
    is_float,
    is_zero,
    parse_rational,
    real_part,
    to_float,
    to_scalar,
)


class SignatureMismatch(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


def _is_foreign(other) -> bool:
    # field-valued operands handle mixed arithmetic themselves
    return hasattr(other, "terms") and not isinstance(other, Multivector)


class Multivector:
    """Immutable sparse map ``blade mask -> coefficient``.

    Coefficients live in the exact ring (``mpq`` / :class:`GaussQ`) or the
    float ring (``float`` / ``complex``); a multivector is on the float
    backend as soon as one of its coefficients is a float.  Zero (exact) and
    sub-threshold (float) coefficients are never stored.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int | Signature, terms=None):
        if isinstance(n, Signature):
            n = n.n
        else:
            Signature(n)
        self.n = n
        full = (1 << (n + 1)) - 1
        clean = {}
        if terms:
            for mask, c in terms.items():
                if mask & ~full:
                    raise SignatureMismatch(f"blade {mask:b} outside Cl(1,{n})")
                c = to_scalar(c)
                if not is_zero(c):
                    clean[mask] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    # constructors

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def scalar(cls, n, c=1):
        return cls(n, {0: c})

    @classmethod
    def blade(cls, n, idx, c=1):
        """Blade from an index sequence (ascending order assumed) or a mask."""
        mask = idx if isinstance(idx, int) else mask_of(idx)
        return cls(n, {mask: c})

    @classmethod
    def gen(cls, n, mu, c=1):
        return cls(n, {1 << mu: c})

    # basic protocol

    @property
    def sig(self) -> Signature:
        return Signature(self.n)

    @property
    def is_float(self) -> bool:
        return any(is_float(c) for c in self.terms.values())

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for mask in sorted(self.terms, key=canonical_key):
            yield mask, self.terms[mask]

    def __getitem__(self, mask):
        return self.terms.get(mask, ZERO)

    def __repr__(self):
        return f"Multivector({self.n}, {format_mv(self)!r})"

    def __str__(self):
        return format_mv(self)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, mpq(0).__class__)):
            return self.terms == ({0: other} if other != 0 else {})
        return NotImplemented

    def allclose(self, other, atol: float = FLOAT_ATOL) -> bool:
        _check_same(self, other)
        keys = set(self.terms) | set(other.terms)
        return all(close(self[k], other[k], atol) for k in keys)

    def max_abs(self) -> float:
        return max((abs(complex(to_float(c))) for c in self.terms.values()), default=0.0)

    # arithmetic

    def _coerce(self, other):
        if hasattr(other, "terms") and not isinstance(other, Multivector):
            raise TypeError("not a scalar")
        if not isinstance(other, Multivector):
            return Multivector.scalar(self.n, other)
        _check_same(self, other)
        return other

    def __add__(self, other):
        if _is_foreign(other):
            return NotImplemented
        other = self._coerce(other)
        a, b = _align(self, other)
        out = dict(a.terms)
        for mask, c in b.terms.items():
            v = out.get(mask, 0) + c
            if is_zero(v):
                out.pop(mask, None)
            else:
                out[mask] = v
        return Multivector._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Multivector._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if _is_foreign(other):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = to_scalar(c)
        if is_zero(c) or not self.terms:
            return Multivector.zero(self.n)
        if is_float(c) and not self.is_float:
            return self.to_float().scale(c)
        if self.is_float:
            c = to_float(c)
        out = {}
        for m, v in self.terms.items():
            w = v * c
            if not is_zero(w):
                out[m] = w
        return Multivector._raw(self.n, out)

    def __mul__(self, other):
        if _is_foreign(other):
            return NotImplemented
        if not isinstance(other, Multivector):
            return self.scale(other)
        _check_same(self, other)
        a, b = _align(self, other)
        table = sign_table(self.n)
        out = {}
        get = out.get
        bterms = list(b.terms.items())
        for ma, ca in a.terms.items():
            row = table[ma]
            for mb, cb in bterms:
                m = ma ^ mb
                v = ca * cb
                if row[mb] < 0:
                    out[m] = get(m, 0) - v
                else:
                    out[m] = get(m, 0) + v
        return Multivector._raw(self.n, {m: c for m, c in out.items() if not is_zero(c)})

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, Multivector):
            return self * inverse(other)
        return self.scale(1 / to_scalar(other))

    def __pow__(self, k: int):
        if k < 0:
            return inverse(self) ** (-k)
        out = Multivector.scalar(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    # structure

    def map_terms(self, fn):
        out = {}
        for m, c in self.terms.items():
            v = fn(m, c)
            if not is_zero(v):
                out[m] = v
        return Multivector._raw(self.n, out)

    def to_float(self):
        return Multivector._raw(self.n, {m: to_float(c) for m, c in self.terms.items()})

    def grades(self) -> set[int]:
        return {grade(m) for m in self.terms}

    def parity(self):
        """``0`` for even, ``1`` for odd, ``None`` for mixed; zero counts as even."""
        ps = {grade(m) & 1 for m in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def scalar_part(self):
        return self[0]

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self.terms)

    def is_real(self) -> bool:
        return all(is_zero(imag_part(c)) for c in self.terms.values())

    def vector_coeffs(self):
        return [self[1 << mu] for mu in range(self.n + 1)]

    def reversion(self):
        return reversion(self)

    def conjugate(self):
        return complex_conjugate(self)

    def dagger(self):
        return hermitian_conjugate(self)

    # serialization

    def to_json(self) -> dict:
        terms = []
        for mask, c in self:
            re_, im_ = real_part(c), imag_part(c)
            if is_float(c):
                terms.append({"blade": list(indices(mask)), "re": float(re_), "im": float(im_)})
            else:
                terms.append({"blade": list(indices(mask)), "re": str(mpq(re_)), "im": str(mpq(im_))})
        return {"sig": self.n, "terms": terms}

    @classmethod
    def from_json(cls, data) -> "Multivector":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["sig"])
        out = {}
        for term in data["terms"]:
            mask = mask_of(term["blade"])
            if len(set(term["blade"])) != len(term["blade"]) or list(term["blade"]) != sorted(term["blade"]):
                raise ValueError(f"blade indices must be strictly ascending: {term['blade']}")
            re_, im_ = term.get("re", "0"), term.get("im", "0")
            if isinstance(re_, str) and isinstance(im_, str):
                c = GaussQ(parse_rational(re_), parse_rational(im_))
                c = c.re if c.im == 0 else c
            else:
                c = complex(float(re_), float(im_))
            out[mask] = out.get(mask, ZERO) + c
        return cls(n, out)


def _check_same(u, v):
    if u.n != v.n:
        raise SignatureMismatch(f"Cl(1,{u.n}) vs Cl(1,{v.n})")


def _align(u, v):
    fu, fv = u.is_float, v.is_float
    if fu and not fv:
        return u, v.to_float()
    if fv and not fu:
        return u.to_float(), v
    return u, v


def format_mv(u: Multivector) -> str:
    """Canonical text form, parseable back by :func:`dhga.parse.parse_mv`."""
    if not u.terms:
        return "0"
    parts = []
    for mask, c in u:
        blade = format_blade(mask)
        neg = False
        if isinstance(c, GaussQ):
            if c.re == 0:
                neg = c.im < 0
                mag = abs(c.im)
                coeff = ("" if mag == 1 else str(mag)) + "i"
            else:
                coeff = format_scalar(c)
        elif is_float(c):
            if isinstance(c, complex):
                coeff = f"({c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i)"
            else:
                neg = c < 0
                coeff = repr(abs(c))
        else:
            neg = c < 0
            mag = abs(c)
            coeff = "" if mag == 1 else str(mag)
        if coeff == "":
            text = blade
        elif mask == 0:
            text = coeff
        else:
            text = f"{coeff}*{blade}"
        parts.append(("-" if neg else "+", text))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


# module-level operations


def add(u: Multivector, v: Multivector) -> Multivector:
    return u + v


def mul(u: Multivector, v: Multivector) -> Multivector:
    return u * v


def reversion(u: Multivector) -> Multivector:
    return u.map_terms(lambda m, c: c if reversion_sign(grade(m)) > 0 else -c)


def grade_involution(u: Multivector) -> Multivector:
    return u.map_terms(lambda m, c: c if grade_involution_sign(grade(m)) > 0 else -c)


def complex_conjugate(u: Multivector) -> Multivector:
    return u.map_terms(lambda m, c: conj(c))


def hermitian_conjugate(u: Multivector) -> Multivector:
    """``e^0 * reversion(conj(u)) * e^0``."""
    e0 = Multivector.gen(u.n, 0)
    return e0 * reversion(complex_conjugate(u)) * e0


def grade_project(u: Multivector, k: int) -> Multivector:
    return Multivector._raw(u.n, {m: c for m, c in u.terms.items() if grade(m) == k})


def even_part(u: Multivector) -> Multivector:
    return Multivector._raw(u.n, {m: c for m, c in u.terms.items() if not grade(m) & 1})


def odd_part(u: Multivector) -> Multivector:
    return Multivector._raw(u.n, {m: c for m, c in u.terms.items() if grade(m) & 1})


def left_regular_matrix(u: Multivector):
    """Matrix of ``v -> u v`` in the blade basis (columns indexed by mask)."""
    size = 1 << (u.n + 1)
    table = sign_table(u.n)
    mat = [[ZERO] * size for _ in range(size)]
    for ma, ca in u.terms.items():
        row = table[ma]
        for mb in range(size):
            mat[ma ^ mb][mb] = mat[ma ^ mb][mb] + (ca if row[mb] > 0 else -ca)
    return mat


def inverse(u: Multivector) -> Multivector:
    """Two-sided inverse via the left-regular representation.

    Exact input is solved by exact elimination; float input with numpy.
    """
    n = u.n
    size = 1 << (n + 1)
    if not u.terms:
        raise NotInvertible("zero has no inverse")
    if u.is_scalar():
        return Multivector.scalar(n, 1 / u[0])
    mat = left_regular_matrix(u)
    rhs = [ZERO] * size
    rhs[0] = mpq(1)
    if u.is_float:
        a = np.array([[complex(to_float(x)) for x in row] for row in mat])
        b = np.zeros(size, dtype=complex)
        b[0] = 1
        try:
            x = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            raise NotInvertible(f"{u} is singular") from None
        v = Multivector(n, {m: complex(x[m]) for m in range(size)})
        one = Multivector.scalar(n, 1.0)
        if not ((u * v).allclose(one, 1e-9) and (v * u).allclose(one, 1e-9)):
            raise NotInvertible(f"{u} is numerically singular")
        return v
    try:
        x = linalg.solve(mat, rhs)
    except linalg.SingularMatrix:
        raise NotInvertible(f"{u} is not invertible") from None
    v = Multivector(n, dict(enumerate(x)))
    one = Multivector.scalar(n, 1)
    if u * v != one or v * u != one:
        raise NotInvertible(f"{u} has only a one-sided inverse")
    return v


# the distinguished subalgebra Q'


class Kind(str, Enum):
    SPINOR = "spinor"
    SEMISPINOR = "semispinor"
    DOUBLESPINOR = "doublespinor"

    @classmethod
    def parse(cls, text) -> "Kind":
        if isinstance(text, Kind):
            return text
        key = str(text).lower().replace("-", "").replace("_", "")
        for k in cls:
            if k.value == key:
                return k
        raise ValueError(f"unknown spinor kind {text!r}")


class SpecError(ValueError):
    pass


def half_dim(n: int, kind: Kind) -> int:
    """``d`` with ``n = 2d-1`` (spinor) or ``n = 2d`` (semi/double spinor)."""
    kind = Kind.parse(kind)
    if kind is Kind.SPINOR:
        if n % 2 != 1 or n < 3:
            raise SpecError(f"spinors need odd n >= 3, got n={n}")
        return (n + 1) // 2
    if n % 2 != 0 or n < 4:
        raise SpecError(f"{kind.value} needs even n >= 4, got n={n}")
    return n // 2


@dataclass(frozen=True)
class QPrimeSpec:
    """Generators of the subalgebra holding Dirac-Hestenes wave functions."""

    n: int
    kind: Kind
    generators: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        Signature(self.n)
        d = half_dim(self.n, kind)
        gens = [0, 1, 2] + list(range(3, 2 * d, 2))
        if kind is Kind.DOUBLESPINOR:
            gens.append(2 * d)
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def mask(self) -> int:
        return mask_of(self.generators)

    @property
    def complement(self) -> tuple[int, ...]:
        """Generators outside Q' (the even indices 4, 6, ...)."""
        return tuple(mu for mu in range(self.n + 1) if mu not in self.generators)

    def even_basis(self) -> list[int]:
        """Blade masks spanning Q'^(0), in canonical order."""
        gm = self.mask
        masks = [m for m in range(1 << (self.n + 1)) if m & ~gm == 0 and not grade(m) & 1]
        return sorted(masks, key=canonical_key)


def in_qprime(u, q: QPrimeSpec) -> bool:
    if u.n != q.n:
        raise SignatureMismatch(f"Cl(1,{u.n}) vs Q' of Cl(1,{q.n})")
    gm = q.mask
    return all(m & ~gm == 0 for m in u.terms)


def in_qprime_even(u, q: QPrimeSpec) -> bool:
    return in_qprime(u, q) and all(not grade(m) & 1 for m in u.terms)
