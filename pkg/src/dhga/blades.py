"""Basis blades of Cl(1,n) as bitmasks.

Bit ``mu`` of a mask marks the generator ``e^mu``.  A mask denotes the
ordered product with ascending indices, so the mask alone fixes the blade.
Generator 0 squares to +1, generators 1..n square to -1.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache

HARD_MAX_N = 7


class SignatureError(ValueError):
    pass


class BladeParseError(ValueError):
    pass


def max_n() -> int:
    """Dimension cap; ``DHGA_MAX_N`` may lower it but never raise it."""
    env = os.environ.get("DHGA_MAX_N")
    if env is None:
        return HARD_MAX_N
    try:
        value = int(env)
    except ValueError:
        raise SignatureError(f"DHGA_MAX_N must be an integer, got {env!r}") from None
    return max(0, min(HARD_MAX_N, value))


@dataclass(frozen=True)
class Signature:
    """Signature (1, n): ``n+1`` generators with metric diag(1, -1, ..., -1)."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise SignatureError(f"n must be a nonnegative integer, got {self.n!r}")
        cap = max_n()
        if self.n > cap:
            raise SignatureError(f"n={self.n} exceeds the dimension cap {cap}")

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def size(self) -> int:
        return 1 << (self.n + 1)

    def metric(self, mu: int) -> int:
        if not 0 <= mu <= self.n:
            raise SignatureError(f"index {mu} out of range for n={self.n}")
        return 1 if mu == 0 else -1


def grade(mask: int) -> int:
    return bin(mask).count("1")


def indices(mask: int) -> tuple[int, ...]:
    out = []
    mu = 0
    while mask:
        if mask & 1:
            out.append(mu)
        mask >>= 1
        mu += 1
    return tuple(out)


def mask_of(idx) -> int:
    m = 0
    for mu in idx:
        m |= 1 << mu
    return m


def canonical_key(mask: int) -> tuple:
    """Sort key: grade first, then ascending index tuple."""
    return (grade(mask), indices(mask))


def _reorder_parity(a: int, b: int) -> int:
    # transpositions needed to merge e^A e^B into ascending order
    a >>= 1
    swaps = 0
    while a:
        swaps += grade(a & b)
        a >>= 1
    return swaps & 1


def blade_sign(a: int, b: int) -> int:
    """Sign of the product e^A e^B relative to the canonical blade ``A ^ B``."""
    sign = -1 if _reorder_parity(a, b) else 1
    # every repeated spatial index contributes its metric value -1
    if grade(a & b & ~1) & 1:
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def sign_table(n: int) -> tuple[tuple[int, ...], ...]:
    size = 1 << (n + 1)
    return tuple(tuple(blade_sign(a, b) for b in range(size)) for a in range(size))


def blade_mul(a: int, b: int, sig: Signature | int) -> tuple[int, int]:
    """Geometric product of two basis blades: ``(sign, mask)``."""
    n = sig.n if isinstance(sig, Signature) else sig
    full = (1 << (n + 1)) - 1
    if a & ~full or b & ~full:
        raise SignatureError(f"blade outside Cl(1,{n})")
    return sign_table(n)[a][b], a ^ b


def reversion_sign(k: int) -> int:
    return -1 if (k * (k - 1) // 2) & 1 else 1


def grade_involution_sign(k: int) -> int:
    return -1 if k & 1 else 1


def bubble_product(a_idx, b_idx, n: int) -> tuple[int, int]:
    """Reference product of generator words by adjacent transpositions.

    Slow on purpose: it shares no code with :func:`blade_sign` and serves as
    its oracle.
    """
    word = list(a_idx) + list(b_idx)
    sign = 1
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(word) - 1:
            x, y = word[i], word[i + 1]
            if x > y:
                word[i], word[i + 1] = y, x
                sign = -sign
                changed = True
                i += 1
            elif x == y:
                sign *= 1 if x == 0 else -1
                del word[i:i + 2]
                changed = True
            else:
                i += 1
    return sign, mask_of(word)


def format_blade(mask: int) -> str:
    idx = indices(mask)
    if not idx:
        return "e"
    if any(mu >= 10 for mu in idx):
        return "e" + ".".join(str(mu) for mu in idx)
    return "e" + "".join(str(mu) for mu in idx)


_BLADE_RE = re.compile(r"^e(?:(\d+(?:\.\d+)+)|(\d*))$")


def parse_blade(text: str, n: int) -> tuple[int, int]:
    """Parse ``e``, ``e012`` or ``e0.1.12`` into ``(sign, mask)``.

    Index words need not be ascending; they are multiplied out, so ``e21``
    gives ``(-1, mask(e12))``.
    """
    m = _BLADE_RE.match(text.strip())
    if not m:
        raise BladeParseError(f"not a blade: {text!r}")
    if m.group(1):
        idx = [int(s) for s in m.group(1).split(".")]
    else:
        idx = [int(ch) for ch in m.group(2)]
    for mu in idx:
        if mu > n:
            raise BladeParseError(f"index {mu} out of range for n={n}")
    sign, mask = 1, 0
    for mu in idx:
        s, mask = blade_mul(mask, 1 << mu, n)
        sign *= s
    return sign, mask
