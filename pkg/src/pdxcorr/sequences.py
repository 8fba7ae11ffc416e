"""m-sequences and their cross correlation C_d(tau), by three routes.

* direct:   sum over one long period of (-1)^(s_t + u_{d(t+tau)}) using the
            materialized bit sequences;
* charsum:  sum over nonzero x of (-1)^(tr(x) + tr_1^n(a x^(dT))), a = beta^(d tau);
* quadform: -1 + (trace transform of rho_a at zero), valid when d solves the
            decimation congruence with a normalized l.

The full-spectrum versions of the last two group the field by discrete log
so a whole spectrum costs O(2^m + 4^n) instead of O(2^m * 2^n).
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from math import gcd

import numpy as np

from . import quadform
from .decimation import DecimationParams, is_normalized, params_for
from .errors import ANotInSubfield, AZero, DNotCoprime, LNotNormalized, TauOutOfRange
from .gf2m import FieldElement, FieldSpec

ROUTES = ("auto", "direct", "charsum", "quadform")


@dataclass(frozen=True)
class CorrelationSpectrum:
    m: int
    d: int
    entries: dict[int, int]

    @property
    def n(self) -> int:
        return self.m // 2

    @classmethod
    def from_values(cls, m: int, d: int, values) -> "CorrelationSpectrum":
        c = Counter(int(v) for v in values)
        return cls(m, d, dict(sorted(c.items())))

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    @property
    def num_values(self) -> int:
        return sum(1 for c in self.entries.values() if c)

    def moment(self, power: int, shift: int = 0) -> int:
        return sum(cnt * (v + shift) ** power for v, cnt in self.entries.items())

    def check_invariants(self) -> bool:
        m, n = self.m, self.n
        return (
            self.total == (1 << n) - 1
            and self.moment(1) == 1
            and self.moment(2, 1) == (1 << m) * ((1 << n) - 1)
        )

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "values": [{"c": v, "count": c} for v, c in sorted(self.entries.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CorrelationSpectrum":
        obj = json.loads(text)
        return cls(obj["m"], obj["d"], {e["c"]: e["count"] for e in obj["values"]})

    def compact(self) -> str:
        return ";".join(f"{v}:{c}" for v, c in sorted(self.entries.items()))


# -- sequences ------------------------------------------------------------------


def m_sequence(field: FieldSpec, which: str = "long") -> np.ndarray:
    """One period of s_t = tr_1^m(alpha^t) ("long") or u_t = tr_1^n(beta^t) ("short").

    Generated by stepping powers with plain shift/xor arithmetic, so the
    direct route does not share code with the table-driven routes.
    """
    if which == "long":
        return field.cached(("mseq", "long"), lambda: _long_sequence(field))
    if which == "short":
        return field.cached(("mseq", "short"), lambda: _short_sequence(field))
    raise ValueError(f"which must be 'long' or 'short', got {which!r}")


def _long_sequence(field: FieldSpec) -> np.ndarray:
    w, poly, top = field.trace_mask, field.prim_poly, 1 << field.m
    out = np.empty(field.order, dtype=np.int8)
    v = 1
    for t in range(field.order):
        out[t] = (v & w).bit_count() & 1
        v <<= 1
        if v & top:
            v ^= poly
    out.setflags(write=False)
    return out


def _short_sequence(field: FieldSpec) -> np.ndarray:
    n = field.n
    beta = field.beta.value
    out = np.empty((1 << n) - 1, dtype=np.int8)
    y = 1
    for t in range(len(out)):
        out[t] = field.trace_int(y, n, 1)
        y = field.mul_int(y, beta)
    out.setflags(write=False)
    return out


def _check_d(field: FieldSpec, d: int) -> None:
    N = (1 << field.n) - 1
    if gcd(d, N) != 1:
        raise DNotCoprime(f"gcd({d}, {N}) != 1")


# -- single-shift routes ---------------------------------------------------------------


def cross_correlation_direct(field: FieldSpec, d: int, tau: int) -> int:
    _check_d(field, d)
    N = (1 << field.n) - 1
    if not 0 <= tau < N:
        raise TauOutOfRange(f"tau must lie in [0, {N - 1}], got {tau}")
    s = m_sequence(field, "long")
    u = m_sequence(field, "short")
    t = np.arange(field.order, dtype=np.int64)
    bits = s ^ u[(d * (t + tau)) % N]
    return int(field.order - 2 * int(bits.sum()))


def _check_a(field: FieldSpec, a: FieldElement) -> None:
    if a.field != field:
        raise ANotInSubfield("a belongs to a different field")
    if not a.value:
        raise AZero("a must be nonzero")
    if not field.in_subfield_int(a.value, field.n):
        raise ANotInSubfield(f"{a!r} is not in GF(2^{field.n})")


def cross_correlation_charsum(field: FieldSpec, d: int, a: FieldElement) -> int:
    """Sum over nonzero x of (-1)^(tr_1^m(x) + tr_1^n(a x^(d(2^n+1))))."""
    _check_d(field, d)
    _check_a(field, a)
    x = np.arange(1, 1 << field.m, dtype=np.int64)
    y = field.vmul(np.full_like(x, a.value), field.vpow(x, d * field.T))
    bits = field.abs_trace_table()[x] ^ field.short_trace_table()[y]
    return int(len(x) - 2 * int(bits.sum()))


def correlation_via_quadform(field: FieldSpec, params: DecimationParams, a: FieldElement) -> int:
    if not is_normalized(params.l, field.n):
        raise LNotNormalized(f"gcd(2^{params.l}+1, 2^{field.m}-1) != 1")
    inst = quadform.QuadFormInstance(field, params, a)
    return -1 + quadform.trace_transform_at_zero(inst)


# -- full spectra ------------------------------------------------------------------------


def a_for_tau(field: FieldSpec, d: int, tau: int) -> FieldElement:
    return field.beta_pow(d * tau)


def values_direct(field: FieldSpec, d: int) -> np.ndarray:
    """C_d(tau) for every tau, by direct summation."""
    N = (1 << field.n) - 1
    return np.array([cross_correlation_direct(field, d, tau) for tau in range(N)])


def values_charsum(field: FieldSpec, d: int) -> np.ndarray:
    """C_d(tau) for every tau from the character sum grouped by d*log(x) mod 2^n-1."""
    _check_d(field, d)
    N = (1 << field.n) - 1
    exp, _ = field.tables()
    j = np.arange(field.order, dtype=np.int64)
    signs = 1 - 2 * field.abs_trace_table()[exp].astype(np.int64)
    folded = np.bincount((d * j) % N, weights=signs, minlength=N).astype(np.int64)
    return quadform.short_correlate(field, folded, (d * np.arange(N)) % N)


def values_quadform(field: FieldSpec, params: DecimationParams) -> np.ndarray:
    """C_d(tau) for every tau as -1 + rho_a^(0) with a = beta^(d tau)."""
    N = (1 << field.n) - 1
    transform = quadform.transform_at_zero_all(field, params)  # indexed by log_beta(a)
    return transform[(params.d * np.arange(N)) % N] - 1


def correlation_values(field: FieldSpec, d: int, route: str = "auto") -> np.ndarray:
    """C_d(tau) for tau = 0 .. 2^n - 2 via the named route."""
    _check_d(field, d)
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    if route == "direct":
        return values_direct(field, d)
    if route == "charsum":
        return values_charsum(field, d)
    params = params_for(d % ((1 << field.n) - 1), field.n)
    if params is None:
        if route == "quadform":
            raise LNotNormalized(f"d={d} solves no decimation congruence for n={field.n}")
        return values_charsum(field, d)
    return values_quadform(field, params)


def spectrum(field: FieldSpec, d: int, route: str = "auto") -> CorrelationSpectrum:
    return CorrelationSpectrum.from_values(field.m, d, correlation_values(field, d, route))
