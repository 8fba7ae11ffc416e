"""Binary field arithmetic for the tower GF(2^k) < GF(2^n) < GF(2^m), m = 2n.

Elements are plain integers holding coefficient bit masks in the polynomial
basis (bit i is the coefficient of x^i).  :class:`FieldElement` wraps such a
mask together with its field for the public API; the hot loops elsewhere in
the package work on raw ints or numpy arrays through the ``*_int`` helpers
and the lazily built exp/log tables.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from math import gcd

import numpy as np
from sympy import factorint

from .errors import (
    FieldMismatch,
    MTooLarge,
    NonDivisorDegrees,
    NotInSubfield,
    NotPrimitive,
    OddDegree,
)

MIN_M = 4
MAX_M = 26
# exp/log tables are only built up to this degree (2^20 entries each)
LOG_TABLE_MAX_M = 20

# Lexicographically smallest primitive polynomial of each even degree,
# bit i = coefficient of x^i.  Found by an exhaustive order check.
DEFAULT_POLYS: dict[int, int] = {
    4: 0x13,
    6: 0x43,
    8: 0x11D,
    10: 0x409,
    12: 0x1053,
    14: 0x402B,
    16: 0x1002D,
    18: 0x40027,
    20: 0x100009,
    22: 0x400003,
    24: 0x100001B,
    26: 0x4000047,
}

NonDivisorDegree = NonDivisorDegrees


def _mulmod(a: int, b: int, poly: int, m: int) -> int:
    r = 0
    top = 1 << m
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


def _powmod(a: int, e: int, poly: int, m: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _mulmod(r, a, poly, m)
        a = _mulmod(a, a, poly, m)
        e >>= 1
    return r


def is_primitive_poly(poly: int, m: int) -> bool:
    """True iff ``poly`` has degree m and x has order 2^m - 1 modulo it.

    Full order implies irreducibility, so no separate factorization is needed.
    """
    if poly.bit_length() - 1 != m or not poly & 1:
        return False
    order = (1 << m) - 1
    if _powmod(2, order, poly, m) != 1:
        return False
    return all(_powmod(2, order // q, poly, m) != 1 for q in factorint(order))


def multiplicative_order(g: int, group_order: int, powf) -> int:
    """Order of ``g`` in a cyclic group of known order, given a power function."""
    order = group_order
    for q, e in factorint(group_order).items():
        for _ in range(e):
            if powf(g, order // q) == 1:
                order //= q
            else:
                break
    return order


def gcd_pow2(u: int, v: int, sign: str = "minus") -> int:
    """gcd(2^u - 1, 2^v - 1) for sign="minus", gcd(2^u - 1, 2^v + 1) for "plus".

    Computed from w = gcd(u, v) alone, without big-integer gcds.
    """
    if u < 1 or v < 1:
        raise ValueError("u and v must be positive")
    w = gcd(u, v)
    if sign == "minus":
        return (1 << w) - 1
    if sign == "plus":
        return 1 if (u // w) % 2 else (1 << w) + 1
    raise ValueError(f"sign must be 'minus' or 'plus', got {sign!r}")


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a matrix given as an iterable of int bit rows."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = row
                rank += 1
                break
            row ^= p
    return rank


class FieldSpec:
    """GF(2^m) with m even, alpha = x mod prim_poly, beta = alpha^(2^n + 1).

    Instances are immutable; the exp/log tables are built once on first use
    under a lock.
    """

    __slots__ = ("m", "n", "prim_poly", "order", "T", "_tables", "_lock", "_cache")

    def __init__(self, m: int, prim_poly: int):
        self.m = m
        self.n = m // 2
        self.prim_poly = prim_poly
        self.order = (1 << m) - 1
        self.T = (1 << self.n) + 1
        self._tables = None
        self._lock = threading.RLock()
        self._cache: dict = {}

    def __repr__(self):
        return f"FieldSpec(m={self.m}, prim_poly={self.prim_poly:#x})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.m == other.m
            and self.prim_poly == other.prim_poly
        )

    def __hash__(self):
        return hash((self.m, self.prim_poly))

    def __reduce__(self):
        return (FieldSpec, (self.m, self.prim_poly))

    # -- element constructors -------------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        if not 0 <= value < (1 << self.m):
            raise ValueError(f"{value:#x} is not a reduced element of GF(2^{self.m})")
        return FieldElement(value, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    @property
    def alpha(self) -> "FieldElement":
        return FieldElement(2, self)

    @property
    def beta(self) -> "FieldElement":
        return FieldElement(self.pow_int(2, self.T), self)

    def alpha_pow(self, e: int) -> "FieldElement":
        return FieldElement(self.pow_int(2, e), self)

    def beta_pow(self, e: int) -> "FieldElement":
        return FieldElement(self.pow_int(2, self.T * e), self)

    # -- tables ---------------------------------------------------------------

    @property
    def has_tables(self) -> bool:
        return self.m <= LOG_TABLE_MAX_M

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log) arrays: exp[j] = alpha^j for j < 2^m - 1, log[exp[j]] = j.

        log[0] is -1.
        """
        if self._tables is None:
            if not self.has_tables:
                raise MTooLarge(
                    f"log tables are limited to m <= {LOG_TABLE_MAX_M}, got m={self.m}"
                )
            with self._lock:
                if self._tables is None:
                    self._tables = self._build_tables()
        return self._tables

    def _build_tables(self):
        size = 1 << self.m
        exp = np.empty(self.order, dtype=np.int64)
        v, top, poly = 1, size, self.prim_poly
        for j in range(self.order):
            exp[j] = v
            v <<= 1
            if v & top:
                v ^= poly
        log = np.full(size, -1, dtype=np.int64)
        log[exp] = np.arange(self.order, dtype=np.int64)
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    def cached(self, key, build):
        """Memoize a derived immutable table on this field (race-safe)."""
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    # -- integer-level arithmetic ----------------------------------------------

    def mul_int(self, a: int, b: int) -> int:
        if self._tables is not None:
            if a == 0 or b == 0:
                return 0
            exp, log = self._tables
            return int(exp[(log[a] + log[b]) % self.order])
        return _mulmod(a, b, self.prim_poly, self.m)

    def pow_int(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        e %= self.order
        if self._tables is not None:
            exp, log = self._tables
            return int(exp[(int(log[a]) * e) % self.order])
        return _powmod(a, e, self.prim_poly, self.m)

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow_int(a, -1)

    def frob_int(self, a: int, j: int) -> int:
        """a^(2^j), with j taken mod m."""
        for _ in range(j % self.m):
            a = self.mul_int(a, a)
        return a

    def in_subfield_int(self, a: int, u: int) -> bool:
        self._check_divisor(u)
        return self.frob_int(a, u) == a

    def trace_int(self, a: int, from_deg: int, to_deg: int) -> int:
        """Relative trace: sum of a^(2^(to_deg*i)) for i < from_deg/to_deg."""
        self._check_divisor(from_deg)
        if to_deg < 1 or from_deg % to_deg:
            raise NonDivisorDegrees(f"{to_deg} does not divide {from_deg}")
        if not self.in_subfield_int(a, from_deg):
            raise NotInSubfield(f"{a:#x} is not in GF(2^{from_deg})")
        acc, y = 0, a
        for _ in range(from_deg // to_deg):
            acc ^= y
            y = self.frob_int(y, to_deg)
        return acc

    def _check_divisor(self, u: int):
        if u < 1 or self.m % u:
            raise NonDivisorDegrees(f"{u} does not divide m={self.m}")

    # -- vectorized helpers (need tables) ----------------------------------------

    @property
    def trace_mask(self) -> int:
        """Mask w with tr_1^m(x) = parity(x & w)."""
        return self.cached(
            "trace_mask",
            lambda: sum(self.trace_int(1 << i, self.m, 1) << i for i in range(self.m)),
        )

    def abs_trace_table(self) -> np.ndarray:
        """tr_1^m(x) for every x in the field, indexed by the mask of x."""

        def build():
            x = np.arange(1 << self.m, dtype=np.int64)
            out = parity(x & self.trace_mask).astype(np.int8)
            out.setflags(write=False)
            return out

        return self.cached("abs_trace", build)

    def short_trace_table(self) -> np.ndarray:
        """tr_1^n(y) indexed by the mask of y; -1 outside GF(2^n)."""

        def build():
            exp, _ = self.tables()
            sub = self.order // self.T  # 2^n - 1
            base = (np.arange(sub, dtype=np.int64) * self.T) % self.order
            acc = np.zeros(sub, dtype=np.int64)
            e = base.copy()
            for _ in range(self.n):
                acc ^= exp[e]
                e = (e * 2) % self.order
            out = np.full(1 << self.m, -1, dtype=np.int8)
            out[0] = 0
            out[exp[base]] = acc.astype(np.int8)
            out.setflags(write=False)
            return out

        return self.cached("short_trace", build)

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        exp, log = self.tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[(log[a] + log[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        exp, log = self.tables()
        a = np.asarray(a, dtype=np.int64)
        e %= self.order
        out = exp[(log[a] * e) % self.order]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)


def parity(x: np.ndarray) -> np.ndarray:
    """Bitwise parity of a non-negative int64 array."""
    x = np.asarray(x, dtype=np.int64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> shift
    return x & 1


@dataclass(frozen=True, slots=True)
class FieldElement:
    value: int
    field: FieldSpec

    def _same(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        self._same(other)
        return FieldElement(self.value ^ other.value, self.field)

    __sub__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        self._same(other)
        return mul(self, pow(other, -1))

    def __pow__(self, e: int):
        return pow(self, e)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value:#x}, m={self.field.m})"

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.field.m))

    def inverse(self) -> "FieldElement":
        return pow(self, -1)

    def trace(self, from_deg: int | None = None, to_deg: int = 1) -> "FieldElement":
        return trace(self, self.field.m if from_deg is None else from_deg, to_deg)

    def log(self) -> int:
        """Discrete log base alpha."""
        if not self.value:
            raise ValueError("log of zero")
        f = self.field
        if f.has_tables:
            return int(f.tables()[1][self.value])
        # baby-step giant-step for the large fields
        n = int(f.order**0.5) + 1
        baby = {}
        v = 1
        for j in range(n):
            baby.setdefault(v, j)
            v = f.mul_int(v, 2)
        step = f.pow_int(2, -n)
        g = self.value
        for i in range(n + 1):
            if g in baby:
                return (i * n + baby[g]) % f.order
            g = f.mul_int(g, step)
        raise AssertionError("unreachable for a primitive alpha")


def build_field(m: int, prim_poly: int | None = None) -> FieldSpec:
    """Validated GF(2^m); the default polynomial comes from DEFAULT_POLYS."""
    if m % 2:
        raise OddDegree(f"m must be even, got {m}")
    if not MIN_M <= m <= MAX_M:
        raise ValueError(f"m must lie in [{MIN_M}, {MAX_M}], got {m}")
    if prim_poly is None:
        prim_poly = DEFAULT_POLYS[m]
    elif prim_poly.bit_length() - 1 != m:
        raise NotPrimitive(f"{prim_poly:#x} does not have degree {m}")
    if not is_primitive_poly(prim_poly, m):
        raise NotPrimitive(f"{prim_poly:#x} is not primitive of degree {m}")
    return _field_cache(m, prim_poly)


_FIELDS: dict[tuple[int, int], FieldSpec] = {}
_FIELDS_LOCK = threading.Lock()


def _field_cache(m: int, poly: int) -> FieldSpec:
    # one shared instance per (m, poly) so derived tables are built once
    with _FIELDS_LOCK:
        f = _FIELDS.get((m, poly))
        if f is None:
            f = _FIELDS[(m, poly)] = FieldSpec(m, poly)
        return f


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    x._same(y)
    return FieldElement(x.field.mul_int(x.value, y.value), x.field)


def pow(x: FieldElement, e: int) -> FieldElement:  # noqa: A001
    return FieldElement(x.field.pow_int(x.value, e), x.field)


def trace(x: FieldElement, from_deg: int, to_deg: int) -> FieldElement:
    return FieldElement(x.field.trace_int(x.value, from_deg, to_deg), x.field)


def is_in_subfield(x: FieldElement, u: int) -> bool:
    return x.field.in_subfield_int(x.value, u)


def element_order(x: FieldElement) -> int:
    f = x.field
    if not x.value:
        raise ValueError("0 has no multiplicative order")
    return multiplicative_order(x.value, f.order, f.pow_int)


def subfield_elements(field: FieldSpec, u: int) -> list[FieldElement]:
    """All elements of GF(2^u) inside ``field``, 0 first, then g^j in order."""
    field._check_divisor(u)
    step = field.order // ((1 << u) - 1)
    return [field.zero] + [field.alpha_pow(step * j) for j in range((1 << u) - 1)]
