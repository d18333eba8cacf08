"""Polynomial scalars in x^0..x^n and multivector fields over them.

Monomials are packed into a single int, four bits per variable
(``x0^a x1^b`` is ``a | b << 4``), so multiplying monomials is integer
addition.  The total-degree cap (default 6) keeps every exponent below 16.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from .blades import canonical_key, format_blade, indices, mask_of, sign_table
from .multivector import Multivector, SignatureMismatch
from .scalars import (
    ZERO,
    GaussQ,
    format_scalar,
    imag_part,
    is_float,
    is_zero,
    parse_rational,
    real_part,
    to_float,
    to_scalar,
)

BITS = 4
NIBBLE = (1 << BITS) - 1
DEFAULT_DEGREE_CAP = 6


class DegreeCapExceeded(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class LengthMismatch(ValueError):
    pass


def pack(exps) -> int:
    key = 0
    for mu, e in enumerate(exps):
        if e:
            key |= e << (BITS * mu)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (BITS * mu)) & NIBBLE for mu in range(nvars))


def key_degree(key: int) -> int:
    d = 0
    while key:
        d += key & NIBBLE
        key >>= BITS
    return d


# raw dict helpers shared by PolyScalar and FieldMV


def _add_into(acc: dict, src: dict, sign: int = 1):
    for k, c in src.items():
        v = acc.get(k, 0) + c if sign > 0 else acc.get(k, 0) - c
        if is_zero(v):
            acc.pop(k, None)
        else:
            acc[k] = v


def _mul_raw(a: dict, b: dict, cap: int) -> dict:
    out = {}
    get = out.get
    bdeg = [(kb, cb, key_degree(kb)) for kb, cb in b.items()]
    for ka, ca in a.items():
        da = key_degree(ka)
        for kb, cb, db in bdeg:
            if da + db > cap:
                raise DegreeCapExceeded(f"product degree {da + db} exceeds cap {cap}")
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if not is_zero(c)}


def _scale_raw(a: dict, c) -> dict:
    out = {}
    for k, v in a.items():
        w = v * c
        if not is_zero(w):
            out[k] = w
    return out


def _deriv_raw(a: dict, mu: int) -> dict:
    shift = BITS * mu
    out = {}
    for k, c in a.items():
        e = (k >> shift) & NIBBLE
        if e:
            out[k - (1 << shift)] = c * e
    return out


def _eval_raw(a: dict, point) -> object:
    total = 0
    for k, c in a.items():
        term = c
        mu = 0
        while k:
            e = k & NIBBLE
            if e:
                term = term * point[mu] ** e
            k >>= BITS
            mu += 1
        total = total + term
    return total


class PolyScalar:
    """Polynomial in ``x0..x{nvars-1}`` with exact (or float) coefficients."""

    __slots__ = ("nvars", "terms")
    cap = DEFAULT_DEGREE_CAP

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for k, c in terms.items():
                if isinstance(k, tuple):
                    if len(k) != nvars:
                        raise LengthMismatch(f"exponent {k} has wrong length for {nvars} variables")
                    k = pack(k)
                c = to_scalar(c)
                if is_zero(c):
                    continue
                if key_degree(k) > self.cap:
                    raise DegreeCapExceeded(f"degree {key_degree(k)} exceeds cap {self.cap}")
                clean[k] = clean.get(k, 0) + c
        self.terms = {k: c for k, c in clean.items() if not is_zero(c)}

    @classmethod
    def _raw(cls, nvars, terms):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {0: c})

    @classmethod
    def var(cls, nvars, mu, c=1):
        if not 0 <= mu < nvars:
            raise IndexOutOfRange(f"variable x{mu} out of range")
        return cls(nvars, {1 << (BITS * mu): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PolyScalar):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, type(ZERO))):
            return self.terms == ({0: other} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"PolyScalar({self.nvars}, {str(self)!r})"

    def __str__(self):
        return format_poly(self)

    def _coerce(self, other):
        if isinstance(other, PolyScalar):
            if other.nvars != self.nvars:
                raise LengthMismatch("polynomials over different variable sets")
            return other
        return PolyScalar.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        _add_into(out, other.terms)
        return PolyScalar._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyScalar._raw(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        _add_into(out, other.terms, -1)
        return PolyScalar._raw(self.nvars, out)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, PolyScalar):
            other = self._coerce(other)
            return PolyScalar._raw(self.nvars, _mul_raw(self.terms, other.terms, self.cap))
        if isinstance(other, (Multivector, FieldMV)):
            return NotImplemented
        return PolyScalar._raw(self.nvars, _scale_raw(self.terms, to_scalar(other)))

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = PolyScalar.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int:
        return max((key_degree(k) for k in self.terms), default=-1)

    def is_const(self) -> bool:
        return all(k == 0 for k in self.terms)

    def const_term(self):
        return self.terms.get(0, ZERO)

    def variables(self) -> set[int]:
        out = set()
        for k in self.terms:
            out.update(mu for mu, e in enumerate(unpack(k, self.nvars)) if e)
        return out

    def pderiv(self, mu: int) -> "PolyScalar":
        return pderiv(self, mu)

    def eval_at(self, point):
        if len(point) != self.nvars:
            raise LengthMismatch(f"point has {len(point)} entries, need {self.nvars}")
        pt = [to_scalar(x) for x in point]
        if any(is_float(x) for x in pt):
            return _eval_raw({k: to_float(c) for k, c in self.terms.items()}, [to_float(x) for x in pt])
        return _eval_raw(self.terms, pt)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exps": list(unpack(k, self.nvars)), **_scalar_json(c)}
                for k, c in sorted(self.terms.items(), key=lambda kc: _mono_order(kc[0], self.nvars))
            ],
        }

    @classmethod
    def from_json(cls, data) -> "PolyScalar":
        nvars = int(data["nvars"])
        return cls(nvars, {tuple(t["exps"]): _scalar_from_json(t) for t in data["terms"]})


def _scalar_json(c) -> dict:
    if is_float(c):
        c = complex(c)
        return {"re": c.real, "im": c.imag}
    return {"re": str(mpq(real_part(c))), "im": str(mpq(imag_part(c)))}


def _scalar_from_json(t):
    re_, im_ = t.get("re", "0"), t.get("im", "0")
    if isinstance(re_, str) and isinstance(im_, str):
        g = GaussQ(parse_rational(re_), parse_rational(im_))
        return g.re if g.im == 0 else g
    return complex(float(re_), float(im_))


def _mono_order(key: int, nvars: int):
    return (-key_degree(key), tuple(-e for e in unpack(key, nvars)))


def format_poly(p: PolyScalar) -> str:
    """Text form such as ``3/2*x0^2*x1 - x3``."""
    if not p.terms:
        return "0"
    parts = []
    for k, c in sorted(p.terms.items(), key=lambda kc: _mono_order(kc[0], p.nvars)):
        factors = []
        for mu, e in enumerate(unpack(k, p.nvars)):
            if e == 1:
                factors.append(f"x{mu}")
            elif e > 1:
                factors.append(f"x{mu}^{e}")
        neg = False
        if isinstance(c, GaussQ) or isinstance(c, complex):
            coeff = format_scalar(c)
            if not coeff.startswith("("):
                coeff = f"({coeff})"
        else:
            neg = c < 0
            coeff = format_scalar(abs(c))
            if coeff == "1" and factors:
                coeff = ""
        body = "*".join(([coeff] if coeff else []) + factors)
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, nvars: int) -> PolyScalar:
    """Parse the real-coefficient text form, e.g. ``"3/2*x0^2*x1 - x3"``."""
    text = text.strip()
    if text == "0":
        return PolyScalar(nvars)
    out = PolyScalar(nvars)
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {pos}: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = mpq(1)
        exps = [0] * nvars
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            fm = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
            if fm:
                mu = int(fm.group(1))
                if mu >= nvars:
                    raise IndexOutOfRange(f"x{mu} out of range")
                exps[mu] += int(fm.group(2) or 1)
            else:
                coeff *= parse_rational(factor)
        out = out + PolyScalar(nvars, {tuple(exps): sign * coeff})
        pos = m.end()
    return out


def pderiv(p: PolyScalar, mu: int) -> PolyScalar:
    if not 0 <= mu < p.nvars:
        raise IndexOutOfRange(f"no variable x{mu} among {p.nvars}")
    return PolyScalar._raw(p.nvars, _deriv_raw(p.terms, mu))


class _Substitution:
    """Caches powers of the linear forms ``x^mu -> sum_nu M[mu][nu] x^nu``."""

    def __init__(self, matrix, nvars: int, cap: int):
        if len(matrix) != nvars or any(len(row) != nvars for row in matrix):
            raise LengthMismatch(f"substitution matrix must be {nvars}x{nvars}")
        self.nvars = nvars
        self.cap = cap
        self.forms = []
        for mu in range(nvars):
            form = {}
            for nu, c in enumerate(matrix[mu]):
                c = to_scalar(c)
                if not is_zero(c):
                    form[1 << (BITS * nu)] = c
            self.forms.append(form)
        self.powers = {}
        self.mono_cache = {}

    def power(self, mu: int, e: int) -> dict:
        key = (mu, e)
        if key not in self.powers:
            if e == 0:
                self.powers[key] = {0: mpq(1)}
            else:
                self.powers[key] = _mul_raw(self.power(mu, e - 1), self.forms[mu], self.cap)
        return self.powers[key]

    def monomial(self, key: int) -> dict:
        if key not in self.mono_cache:
            acc = {0: mpq(1)}
            k, mu = key, 0
            while k:
                e = k & NIBBLE
                if e:
                    acc = _mul_raw(acc, self.power(mu, e), self.cap)
                k >>= BITS
                mu += 1
            self.mono_cache[key] = acc
        return self.mono_cache[key]

    def apply(self, terms: dict) -> dict:
        out = {}
        get = out.get
        for k, c in terms.items():
            for k2, c2 in self.monomial(k).items():
                out[k2] = get(k2, 0) + c * c2
        return {k: c for k, c in out.items() if not is_zero(c)}


def linear_substitute(p, matrix):
    """Replace each ``x^mu`` by ``sum_nu matrix[mu][nu] * x^nu``.

    Accepts a :class:`PolyScalar` or a :class:`FieldMV` (coefficientwise).
    ``matrix`` may be a row list or anything with a ``rows`` attribute.
    """
    rows = getattr(matrix, "rows", matrix)
    if isinstance(p, FieldMV):
        sub = _Substitution(rows, p.n + 1, PolyScalar.cap)
        out = {}
        for mask, poly in p.terms.items():
            q = sub.apply(poly)
            if q:
                out[mask] = q
        return FieldMV._raw(p.n, out)
    for k in p.terms:
        if key_degree(k) > p.cap:
            raise DegreeCapExceeded(f"degree {key_degree(k)} exceeds cap {p.cap}")
    sub = _Substitution(rows, p.nvars, p.cap)
    return PolyScalar._raw(p.nvars, sub.apply(p.terms))


class FieldMV:
    """Multivector field: ``blade mask -> polynomial`` over ``x^0..x^n``.

    Internally each coefficient is a raw ``{packed monomial: scalar}`` dict;
    :meth:`coeff` wraps it as a :class:`PolyScalar`.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        Multivector.zero(n)  # validates n against the dimension cap
        full = (1 << (n + 1)) - 1
        clean = {}
        if terms:
            for mask, poly in terms.items():
                if mask & ~full:
                    raise SignatureMismatch(f"blade {mask:b} outside Cl(1,{n})")
                if not isinstance(poly, PolyScalar):
                    poly = PolyScalar.const(n + 1, poly)
                if poly.nvars != n + 1:
                    raise LengthMismatch("coefficient polynomial has the wrong variable count")
                if poly.terms:
                    clean[mask] = dict(poly.terms)
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def const(cls, u: Multivector) -> "FieldMV":
        """Embed a constant multivector."""
        return cls._raw(u.n, {m: {0: c} for m, c in u.terms.items()})

    @classmethod
    def from_poly(cls, n: int, mask: int, p: PolyScalar) -> "FieldMV":
        return cls(n, {mask: p})

    @property
    def nvars(self) -> int:
        return self.n + 1

    def coeff(self, mask: int) -> PolyScalar:
        return PolyScalar._raw(self.n + 1, dict(self.terms.get(mask, {})))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, FieldMV):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, Multivector):
            return self == FieldMV.const(other)
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset((m, frozenset(p.items())) for m, p in self.terms.items())))

    def __repr__(self):
        return f"FieldMV({self.n}, {str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mask in sorted(self.terms, key=canonical_key):
            parts.append(f"({format_poly(self.coeff(mask))})*{format_blade(mask)}")
        return " + ".join(parts)

    def _check(self, other):
        if other.n != self.n:
            raise SignatureMismatch(f"Cl(1,{self.n}) vs Cl(1,{other.n})")

    def _lift(self, other):
        if isinstance(other, FieldMV):
            self._check(other)
            return other
        if isinstance(other, Multivector):
            self._check(other)
            return FieldMV.const(other)
        if isinstance(other, PolyScalar):
            return FieldMV._raw(self.n, {0: dict(other.terms)} if other.terms else {})
        return FieldMV.const(Multivector.scalar(self.n, other))

    def __add__(self, other):
        other = self._lift(other)
        out = {m: dict(p) for m, p in self.terms.items()}
        for m, p in other.terms.items():
            acc = out.setdefault(m, {})
            _add_into(acc, p)
            if not acc:
                del out[m]
        return FieldMV._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return FieldMV._raw(self.n, {m: {k: -c for k, c in p.items()} for m, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, PolyScalar):
            return self.poly_mul(other)
        if isinstance(other, (FieldMV, Multivector)):
            return field_mul(self, other)
        c = to_scalar(other)
        out = {}
        for m, p in self.terms.items():
            q = _scale_raw(p, c)
            if q:
                out[m] = q
        return FieldMV._raw(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return field_mul(other, self)
        if isinstance(other, PolyScalar):
            return self.poly_mul(other)
        return self * other

    def poly_mul(self, p: PolyScalar) -> "FieldMV":
        if p.nvars != self.n + 1:
            raise LengthMismatch("polynomial has the wrong variable count")
        out = {}
        for m, q in self.terms.items():
            r = _mul_raw(q, p.terms, PolyScalar.cap)
            if r:
                out[m] = r
        return FieldMV._raw(self.n, out)

    def pderiv(self, mu: int) -> "FieldMV":
        return field_pderiv(self, mu)

    def eval_at(self, point) -> Multivector:
        return eval_at(self, point)

    def is_const(self) -> bool:
        return all(k == 0 for p in self.terms.values() for k in p)

    def to_multivector(self) -> Multivector:
        if not self.is_const():
            raise ValueError("field is not constant")
        return Multivector(self.n, {m: p[0] for m, p in self.terms.items()})

    def by_monomial(self) -> dict[int, Multivector]:
        """Split into ``{packed monomial: constant multivector}``."""
        groups: dict[int, dict] = {}
        for m, p in self.terms.items():
            for k, c in p.items():
                groups.setdefault(k, {})[m] = c
        return {k: Multivector(self.n, t) for k, t in groups.items()}

    def degree(self) -> int:
        return max((key_degree(k) for p in self.terms.values() for k in p), default=-1)

    def term_count(self) -> int:
        return sum(len(p) for p in self.terms.values())

    def to_json(self) -> dict:
        return {
            "sig": self.n,
            "terms": [
                {"blade": list(indices(m)), "poly": self.coeff(m).to_json()["terms"]}
                for m in sorted(self.terms, key=canonical_key)
            ],
        }

    @classmethod
    def from_json(cls, data) -> "FieldMV":
        n = int(data["sig"])
        out = {}
        for t in data["terms"]:
            poly = PolyScalar.from_json({"nvars": n + 1, "terms": t["poly"]})
            out[mask_of(t["blade"])] = poly
        return cls(n, out)


def _as_field_terms(u):
    if isinstance(u, FieldMV):
        return u.terms
    return {m: {0: c} for m, c in u.terms.items()}


def field_mul(u, v) -> FieldMV:
    """Geometric product with polynomial coefficients; either side may be constant."""
    if u.n != v.n:
        raise SignatureMismatch(f"Cl(1,{u.n}) vs Cl(1,{v.n})")
    table = sign_table(u.n)
    cap = PolyScalar.cap
    a = _as_field_terms(u)
    b = _as_field_terms(v)
    out: dict[int, dict] = {}
    bitems = [(mb, pb, [(kb, cb, key_degree(kb)) for kb, cb in pb.items()]) for mb, pb in b.items()]
    for ma, pa in a.items():
        row = table[ma]
        adeg = [(ka, ca, key_degree(ka)) for ka, ca in pa.items()]
        for mb, _, bl in bitems:
            m = ma ^ mb
            acc = out.get(m)
            if acc is None:
                acc = out[m] = {}
            get = acc.get
            neg = row[mb] < 0
            for ka, ca, da in adeg:
                for kb, cb, db in bl:
                    if da + db > cap:
                        raise DegreeCapExceeded(f"product degree {da + db} exceeds cap {cap}")
                    k = ka + kb
                    if neg:
                        acc[k] = get(k, 0) - ca * cb
                    else:
                        acc[k] = get(k, 0) + ca * cb
    clean = {}
    for m, p in out.items():
        q = {k: c for k, c in p.items() if not is_zero(c)}
        if q:
            clean[m] = q
    return FieldMV._raw(u.n, clean)


def field_add(u: FieldMV, v) -> FieldMV:
    return u + v


def field_scalar_mul(p: PolyScalar, u: FieldMV) -> FieldMV:
    return u.poly_mul(p)


def field_pderiv(u: FieldMV, mu: int) -> FieldMV:
    if not 0 <= mu <= u.n:
        raise IndexOutOfRange(f"no coordinate x{mu} in Cl(1,{u.n})")
    out = {}
    for m, p in u.terms.items():
        q = _deriv_raw(p, mu)
        if q:
            out[m] = q
    return FieldMV._raw(u.n, out)


def eval_at(u: FieldMV, point) -> Multivector:
    if len(point) != u.n + 1:
        raise LengthMismatch(f"point has {len(point)} entries, need {u.n + 1}")
    pt = [to_scalar(x) for x in point]
    if any(is_float(x) for x in pt):
        pt = [to_float(x) for x in pt]
        return Multivector(u.n, {m: _eval_raw({k: to_float(c) for k, c in p.items()}, pt)
                                 for m, p in u.terms.items()})
    return Multivector(u.n, {m: _eval_raw(p, pt) for m, p in u.terms.items()})


@dataclass(frozen=True)
class Potential:
    """Vector potential components ``a_0..a_n`` as polynomials."""

    a: tuple

    def __post_init__(self):
        if not self.a:
            raise LengthMismatch("potential needs at least one component")
        nv = self.a[0].nvars
        if len(self.a) != nv:
            raise LengthMismatch(f"potential has {len(self.a)} components for {nv} coordinates")
        if any(p.nvars != nv for p in self.a):
            raise LengthMismatch("potential components use different variable counts")

    @classmethod
    def zero(cls, n: int) -> "Potential":
        return cls(tuple(PolyScalar(n + 1) for _ in range(n + 1)))

    @property
    def n(self) -> int:
        return len(self.a) - 1

    def __getitem__(self, mu):
        return self.a[mu]

    def __len__(self):
        return len(self.a)
