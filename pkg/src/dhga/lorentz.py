"""Pseudo-orthogonal matrices, Pin/Spin certification and the double cover.

Matrix convention: the matrix attached to a spin element ``S`` has rows
read off from ``S^{-1} e^mu S = p^mu_nu e^nu`` (row ``mu``, column ``nu``).
With this reading ``adjoint_matrix(S1 S2) = adjoint_matrix(S1) @
adjoint_matrix(S2)``.  :func:`tp_matrix` gives the opposite reading
``T e^mu T^{-1}``.

Exact spin elements may carry a scale: ``value * reversion(value) = norm``
with ``norm`` a nonzero rational that need not be a square.  The genuine
group element is ``value / sqrt(|norm|)``; everything verified in this
package is homogeneous in the spin element, so the scale never matters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce

import gmpy2
import numpy as np
from gmpy2 import mpq

from . import linalg
from .blades import canonical_key, grade
from .multivector import Multivector, NotInvertible, inverse, reversion
from .scalars import FLOAT_ATOL, close, is_float, is_zero, to_float, to_scalar

MATRIX_ATOL = 1e-10


class NotOrthogonal(ValueError):
    pass


class NotSpecial(ValueError):
    pass


class NotInPin(ValueError):
    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"not in Pin: {condition} failed" + (f" ({detail})" if detail else ""))


class NonVectorImage(ArithmeticError):
    pass


class NullVectorPivot(ArithmeticError):
    pass


class NoPivot(ArithmeticError):
    pass


class IrrationalNorm(ArithmeticError):
    pass


def eta(n: int):
    return [[mpq(1 if i == 0 else -1) if i == j else mpq(0) for j in range(n + 1)] for i in range(n + 1)]


def _is_float_rows(rows) -> bool:
    return any(is_float(x) for row in rows for x in row)


def _as_rows(p):
    rows = getattr(p, "rows", p)
    return [[to_scalar(x) for x in row] for row in rows]


def is_orthogonal(p) -> bool:
    """``P^T eta P == eta``, exactly or within 1e-10 for float entries."""
    rows = _as_rows(p)
    k = len(rows)
    if k == 0 or any(len(r) != k for r in rows):
        return False
    if _is_float_rows(rows):
        a = np.array([[float(x) for x in r] for r in rows])
        e = np.diag([1.0] + [-1.0] * (k - 1))
        return bool(np.allclose(a.T @ e @ a, e, atol=MATRIX_ATOL, rtol=0))
    g = eta(k - 1)
    return linalg.matmul(linalg.matmul(linalg.transpose(rows), g), rows) == g


def determinant(p):
    rows = _as_rows(p)
    if _is_float_rows(rows):
        return float(np.linalg.det(np.array([[float(x) for x in r] for r in rows])))
    return linalg.det(rows)


def is_special(p) -> bool:
    d = determinant(p)
    if isinstance(d, float):
        return abs(d - 1.0) <= MATRIX_ATOL
    return d == 1


@dataclass(frozen=True)
class LorentzMatrix:
    """Element of O(1,n); orthogonality is checked on construction."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(to_scalar(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not is_orthogonal(rows):
            raise NotOrthogonal("P^T eta P != eta")

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    @property
    def is_float(self) -> bool:
        return _is_float_rows(self.rows)

    @classmethod
    def identity(cls, n: int) -> "LorentzMatrix":
        return cls(tuple(map(tuple, linalg.identity(n + 1))))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "LorentzMatrix") -> "LorentzMatrix":
        return LorentzMatrix(tuple(map(tuple, _matmul(self.rows, other.rows))))

    def inverse(self) -> "LorentzMatrix":
        """``eta P^T eta``, the inverse of any pseudo-orthogonal matrix."""
        k = len(self.rows)
        sign = [1] + [-1] * (k - 1)
        return LorentzMatrix(tuple(tuple(sign[i] * sign[j] * self.rows[j][i] for j in range(k)) for i in range(k)))

    def transpose(self) -> "LorentzMatrix":
        return LorentzMatrix(tuple(zip(*self.rows)))

    def det(self):
        return determinant(self.rows)

    def is_special(self) -> bool:
        return is_special(self.rows)

    def allclose(self, other, atol: float = 1e-9) -> bool:
        other_rows = getattr(other, "rows", other)
        return all(close(a, b, atol) for ra, rb in zip(self.rows, other_rows) for a, b in zip(ra, rb))

    def to_float(self) -> "LorentzMatrix":
        return LorentzMatrix(tuple(tuple(float(x) for x in row) for row in self.rows))

    def to_json(self) -> dict:
        if self.is_float:
            return {"n": self.n, "mode": "float", "rows": [[float(x) for x in r] for r in self.rows]}
        return {"n": self.n, "rows": [[str(mpq(x)) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> "LorentzMatrix":
        rows = data["rows"]
        if data.get("mode") == "float":
            rows = [[float(x) for x in r] for r in rows]
        else:
            rows = [[to_scalar(x) if isinstance(x, str) else to_scalar(x) for x in r] for r in rows]
        m = cls(tuple(map(tuple, rows)))
        if "n" in data and int(data["n"]) != m.n:
            raise ValueError(f"declared n={data['n']} but matrix is {m.n + 1}x{m.n + 1}")
        return m


def _matmul(a, b):
    if _is_float_rows(a) or _is_float_rows(b):
        a = [[to_float(x) for x in r] for r in a]
        b = [[to_float(x) for x in r] for r in b]
        return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]
    return linalg.matmul(a, b)


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Certificate(str, Enum):
    SPIN = "Spin"
    PIN_MINUS_SPIN = "PinMinusSpin"


@dataclass(frozen=True)
class SpinElement:
    """Certified Pin element, possibly scaled (see module docstring)."""

    value: Multivector
    parity: Parity
    certificate: Certificate
    norm: object

    @property
    def n(self) -> int:
        return self.value.n

    @property
    def is_even(self) -> bool:
        return self.parity is Parity.EVEN

    def inverse(self) -> Multivector:
        return reversion(self.value) * (1 / self.norm)

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.value, self.parity, self.certificate, self.norm)

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        if isinstance(other, SpinElement):
            return classify_spin(self.value * other.value, allow_scale=True)
        return NotImplemented


def _chop(u: Multivector) -> Multivector:
    if not u.is_float:
        return u
    return u.map_terms(lambda m, c: 0.0 if abs(c) < FLOAT_ATOL else c)


def classify_spin(t: Multivector, allow_scale: bool = False) -> SpinElement:
    """Certify ``t`` as an element of Pin(1,n).

    Checks, in order: parity homogeneity, invertibility, preservation of
    grade 1 under conjugation, and ``t^{-1} = +-reversion(t)``.  With
    ``allow_scale`` the last condition is relaxed to ``t reversion(t)`` being
    a nonzero scalar.  Raises :class:`NotInPin` naming the first failure.
    """
    u = _chop(t)
    n = u.n
    par = u.parity()
    if not u or par is None:
        raise NotInPin("parity", "element must be wholly even or wholly odd and nonzero")
    rev = reversion(u)
    nrm = _chop(u * rev)
    scalar_norm = nrm.is_scalar() and not is_zero(nrm[0])
    if scalar_norm:
        tinv = rev * (1 / nrm[0])
    else:
        try:
            tinv = inverse(u)
        except NotInvertible:
            raise NotInPin("invertibility") from None
    for mu in range(n + 1):
        img = _chop(u * Multivector.gen(n, mu) * tinv)
        if any(grade(m) != 1 for m in img.terms):
            raise NotInPin("vector preservation", f"image of e{mu} is not a vector")
    if not scalar_norm:
        raise NotInPin("reversion", "t * reversion(t) is not a scalar")
    norm = nrm[0]
    if not allow_scale:
        ok = close(abs(to_float(norm)), 1.0) if u.is_float else abs(norm) == 1
        if not ok:
            raise NotInPin("reversion", f"t * reversion(t) = {norm}, not +-1")
    if isinstance(norm, complex) or not _chop(u).is_real():
        raise NotInPin("reversion", "complex spin elements are not supported")
    cert = Certificate.SPIN if par == 0 else Certificate.PIN_MINUS_SPIN
    return SpinElement(u, Parity.EVEN if par == 0 else Parity.ODD, cert, norm)


def _vector_rows(s: SpinElement, reading: str):
    n = s.n
    rows = []
    inv = s.inverse()
    for mu in range(n + 1):
        e = Multivector.gen(n, mu)
        img = inv * e * s.value if reading == "SP" else s.value * e * inv
        img = _chop(img)
        if any(grade(m) != 1 for m in img.terms):
            raise NonVectorImage(f"image of e{mu} is not a vector")
        rows.append(tuple(img.vector_coeffs()))
    return tuple(rows)


def adjoint_matrix(s) -> LorentzMatrix:
    """Rows of ``S^{-1} e^mu S`` in the generator basis."""
    if not isinstance(s, SpinElement):
        s = classify_spin(s, allow_scale=True)
    rows = _vector_rows(s, "SP")
    if s.value.is_float:
        rows = tuple(tuple(float(complex(x).real) if isinstance(x, complex) else float(x) for x in r) for r in rows)
    return LorentzMatrix(rows)


def tp_matrix(t) -> LorentzMatrix:
    """Rows of ``T e^mu T^{-1}``: the inverse of :func:`adjoint_matrix`."""
    if not isinstance(t, SpinElement):
        t = classify_spin(t, allow_scale=True)
    rows = _vector_rows(t, "TP")
    if t.value.is_float:
        rows = tuple(tuple(float(x) for x in r) for r in rows)
    return LorentzMatrix(rows)


def kernel_check(t) -> bool:
    """False only if ``t`` acts trivially on vectors without being a scalar."""
    if not isinstance(t, SpinElement):
        t = classify_spin(t, allow_scale=True)
    p = adjoint_matrix(t)
    ident = LorentzMatrix.identity(t.n)
    trivial = p.allclose(ident, 1e-9) if p.is_float else p == ident
    if not trivial:
        return True
    return _chop(t.value).is_scalar()


# lifting a matrix to the spin group


def _dot(x, y):
    # Minkowski product of coordinate vectors
    return x[0] * y[0] - sum(a * b for a, b in zip(x[1:], y[1:]))


def _reflect(x, v, vv):
    f = 2 * _dot(x, v) / vv
    return [a - f * b for a, b in zip(x, v)]


def _is_null(val, float_mode: bool) -> bool:
    return abs(val) < 1e-12 if float_mode else val == 0


def reflection_factors(p: LorentzMatrix):
    """Vectors ``v_1..v_k`` whose hyperplane reflections compose to the map
    ``e^mu -> row mu of P``, i.e. ``L = R_{v_1} o ... o R_{v_k}``.
    """
    float_mode = p.is_float
    n = p.n
    img = [list(map(to_float, r)) if float_mode else list(r) for r in p.rows]
    zero, one = (0.0, 1.0) if float_mode else (mpq(0), mpq(1))
    vs = []

    def apply(v):
        vv = _dot(v, v)
        if _is_null(vv, float_mode):
            raise NullVectorPivot("null reflection vector")
        for j in range(n + 1):
            img[j] = _reflect(img[j], v, vv)
        vs.append(v)

    for i in range(n + 1):
        a = [one if j == i else zero for j in range(n + 1)]
        b = img[i]
        diff = [x - y for x, y in zip(b, a)]
        if all(_is_null(x, float_mode) for x in diff):
            continue
        if not _is_null(_dot(diff, diff), float_mode):
            apply(diff)
            continue
        alt = [x + y for x, y in zip(b, a)]
        if _is_null(_dot(alt, alt), float_mode):
            raise NoPivot(f"both b-a and b+a are null at column {i}")
        apply(alt)
        apply(a)
    return vs


def _vector(n, coords):
    return Multivector(n, {1 << mu: c for mu, c in enumerate(coords)})


def _primitive(u: Multivector) -> Multivector:
    """Scale an exact element to coprime integer coefficients."""
    dens = [mpq(c).denominator for c in u.terms.values()]
    nums = []
    lcm = reduce(gmpy2.lcm, dens, gmpy2.mpz(1))
    for c in u.terms.values():
        nums.append(abs((mpq(c) * lcm).numerator))
    g = reduce(gmpy2.gcd, nums, gmpy2.mpz(0))
    return u * mpq(lcm, g)


def _sign_fix(u: Multivector) -> Multivector:
    first = min(u.terms, key=canonical_key)
    c = u.terms[first]
    return -u if to_float(c) < 0 else u


def lift(p, backend: str = "exact", allow_scale: bool = True) -> SpinElement:
    """Spin element ``S`` with ``adjoint_matrix(S) == P``.

    Built from hyperplane reflections (Cartan-Dieudonne).  On the exact
    backend the result is normalized when ``|S reversion(S)|`` is a rational
    square and otherwise kept as a coprime integer multivector with its norm
    recorded; ``allow_scale=False`` raises :class:`IrrationalNorm` instead.
    For even ``n`` only SO(1,n) lifts (into Spin).  The overall sign makes
    the first coefficient in canonical blade order positive.
    """
    if not isinstance(p, LorentzMatrix):
        p = LorentzMatrix(tuple(map(tuple, p)))
    if backend == "float":
        p = p.to_float()
    elif backend != "exact":
        raise ValueError(f"unknown backend {backend!r}")
    elif p.is_float:
        raise ValueError("float matrix given to the exact backend")
    n = p.n
    if n % 2 == 0 and not p.is_special():
        raise NotSpecial("for even n only SO(1,n) lifts to Spin(1,n)")
    vs = reflection_factors(p)
    t = Multivector.scalar(n, 1.0 if backend == "float" else 1)
    for v in vs:
        vm = _vector(n, v)
        if backend == "float":
            vm = vm * (1.0 / math.sqrt(abs(_dot(v, v))))
        t = t * vm
    if len(vs) % 2 == 1:
        # ad of a product of k vectors is (-1)^k times the composed reflections;
        # for odd n the pseudoscalar contributes the missing -1
        pseudo = Multivector.blade(n, (1 << (n + 1)) - 1)
        t = pseudo * t
    s = reversion(t)
    if backend == "float":
        nrm = (s * reversion(s))[0]
        s = s * (1.0 / math.sqrt(abs(nrm)))
    else:
        nrm = (s * reversion(s))[0]
        a = abs(mpq(nrm))
        if gmpy2.is_square(a.numerator) and gmpy2.is_square(a.denominator):
            s = s * (1 / mpq(gmpy2.isqrt(a.numerator), gmpy2.isqrt(a.denominator)))
        elif not allow_scale:
            raise IrrationalNorm(f"normalizer sqrt({a}) is irrational")
        else:
            s = _primitive(s)
    s = _sign_fix(s)
    elem = classify_spin(s, allow_scale=True)
    back = adjoint_matrix(elem)
    ok = back.allclose(p, 1e-9) if backend == "float" else back == p
    if not ok:
        raise NonVectorImage("lift does not reproduce the matrix")
    return elem


# building blocks for test matrices


def embed(block, n: int, at: tuple[int, ...]) -> LorentzMatrix:
    """Identity of size n+1 with ``block`` placed on the index set ``at``."""
    rows = [list(r) for r in linalg.identity(n + 1)]
    for a, i in enumerate(at):
        for b, j in enumerate(at):
            rows[i][j] = to_scalar(block[a][b])
    return LorentzMatrix(tuple(map(tuple, rows)))


def rotation(n: int, i: int, j: int, c, s) -> LorentzMatrix:
    """Rotation in the spatial plane (i, j) with ``c^2 + s^2 = 1``."""
    if i == 0 or j == 0:
        raise ValueError("rotations act on spatial indices only")
    return embed([[c, s], [-s, c]], n, (i, j))


def boost(n: int, k: int, ch, sh) -> LorentzMatrix:
    """Boost mixing index 0 with spatial index k; ``ch^2 - sh^2 = 1``."""
    if k == 0:
        raise ValueError("boost plane needs a spatial index")
    return embed([[ch, sh], [sh, ch]], n, (0, k))


def reflection(n: int, k: int) -> LorentzMatrix:
    """Coordinate reflection ``x^k -> -x^k``."""
    return embed([[-1]], n, (k,))


def quarter_turn(n: int) -> LorentzMatrix:
    """``e^1 -> e^2, e^2 -> -e^1``: rows (1,0,0,..),(0,0,1,..),(0,-1,0,..)."""
    return rotation(n, 1, 2, 0, 1)
