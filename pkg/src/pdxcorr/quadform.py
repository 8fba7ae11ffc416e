"""The quadratic form rho_a(x) = tr_1^m(x^(2^l+1)) + tr_1^n(a x^(2^n+1)).

Ranks come from the kernel of the linearized polynomial
f_a(x) = x^(2^(2t)) + a^(2^l) x^(2^t) + x (t = n + l), computed as the
nullspace of an m x m bit matrix.  Root counts of the non-linear companions
g_a and h_c are exhaustive.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .decimation import DecimationParams
from .errors import (
    ANotInSubfield,
    AZero,
    CensusMismatch,
    HOutOfRange,
    MuEven,
    NonPowerOfTwoKernel,
)
from .gf2m import FieldElement, FieldSpec, gf2_rank


@dataclass(frozen=True)
class QuadFormInstance:
    field: FieldSpec
    params: DecimationParams
    a: FieldElement

    def __post_init__(self):
        if self.a.field != self.field:
            raise ANotInSubfield("a belongs to a different field")
        if not self.a.value:
            raise AZero("a must be nonzero")
        if not self.field.in_subfield_int(self.a.value, self.field.n):
            raise ANotInSubfield(f"{self.a!r} is not in GF(2^{self.field.n})")


@dataclass(frozen=True)
class RankResult:
    a: FieldElement
    kernel_dim: int
    rank: int

    @property
    def half_rank(self) -> int:
        return self.rank // 2


@dataclass(frozen=True)
class RootCensus:
    """Tally of root counts (or ranks) over a scanned parameter set."""

    tag: str
    counts: dict[int, int]
    aggregates: dict[str, int] = dc_field(default_factory=dict)
    meta: dict[str, int] = dc_field(default_factory=dict)

    @property
    def scanned(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> str:
        """Census JSON; rank censuses carry a "ranks" object keyed by rank."""
        obj = dict(self.meta)
        if self.tag == "rank":
            obj["ranks"] = {str(r): c for r, c in sorted(self.counts.items(), reverse=True)}
        else:
            obj["tag"] = self.tag
            obj["counts"] = {str(r): c for r, c in sorted(self.counts.items())}
        obj["aggregates"] = self.aggregates
        return json.dumps(obj)


# -- evaluation -----------------------------------------------------------------------


def rho_eval(inst: QuadFormInstance, x: FieldElement) -> int:
    f, p = inst.field, inst.params
    y1 = f.pow_int(x.value, (1 << p.l) + 1)
    y2 = f.mul_int(inst.a.value, f.pow_int(x.value, f.T))
    return f.trace_int(y1, f.m, 1) ^ f.trace_int(y2, f.n, 1)


def _quadratic_part(field: FieldSpec, l: int) -> np.ndarray:
    """tr_1^m(x^(2^l+1)) for all x, indexed by mask."""

    def build():
        x = np.arange(1 << field.m, dtype=np.int64)
        out = field.abs_trace_table()[field.vpow(x, (1 << l) + 1)]
        out.setflags(write=False)
        return out

    return field.cached(("quad_part", l), build)


def _norms(field: FieldSpec) -> np.ndarray:
    def build():
        x = np.arange(1 << field.m, dtype=np.int64)
        out = field.vpow(x, field.T)
        out.setflags(write=False)
        return out

    return field.cached("norms", build)


def rho_table(inst: QuadFormInstance) -> np.ndarray:
    """rho_a(x) for every x, indexed by mask."""
    f = inst.field
    lin = f.vmul(np.full(1 << f.m, inst.a.value, dtype=np.int64), _norms(f))
    return _quadratic_part(f, inst.params.l) ^ f.short_trace_table()[lin]


def trace_transform_at_zero(inst: QuadFormInstance) -> int:
    """Sum over all x of (-1)^rho_a(x)."""
    bits = rho_table(inst)
    return int(len(bits) - 2 * int(bits.sum()))


def transform_at_zero_all(field: FieldSpec, params: DecimationParams) -> np.ndarray:
    """rho^_a(0) for a = beta^e, e = 0 .. 2^n - 2.

    Groups x = alpha^j by its norm x^(2^n+1) = beta^j, so the transform
    becomes a length 2^n - 1 cyclic correlation against tr_1^n(beta^e).
    """
    N = (1 << field.n) - 1
    exp, _ = field.tables()
    j = np.arange(field.order, dtype=np.int64)
    quad = field.abs_trace_table()[exp[(j * ((1 << params.l) + 1)) % field.order]]
    folded = np.bincount(j % N, weights=1 - 2 * quad.astype(np.int64), minlength=N)
    folded = folded.astype(np.int64)
    out = short_correlate(field, folded, np.arange(N))
    # x = 0 contributes +1
    return out + 1


def short_correlate(field: FieldSpec, folded: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """out[r] = sum_e folded[e] * (-1)^tr_1^n(beta^(e + shifts[r]))."""
    N = len(folded)
    exp, _ = field.tables()
    e = np.arange(N)
    short = field.short_trace_table()[exp[(e * field.T) % field.order]]
    usign = 1 - 2 * short.astype(np.int64)
    out = np.empty(len(shifts), dtype=np.int64)
    for r0 in range(0, len(shifts), 256):
        block = shifts[r0 : r0 + 256, None]
        out[r0 : r0 + 256] = usign[(e[None, :] + block) % N] @ folded
    return out


def lemma2_distribution(m: int, h: int) -> dict[int, int]:
    """Value distribution of the full trace transform of a rank-2h quadratic form."""
    if not 1 <= h <= m // 2:
        raise HOutOfRange(f"need 1 <= h <= {m // 2}, got {h}")
    v = 1 << (m - h)
    return {
        v: (1 << (2 * h - 1)) + (1 << (h - 1)),
        -v: (1 << (2 * h - 1)) - (1 << (h - 1)),
        0: (1 << m) - (1 << (2 * h)),
    }


def full_transform(inst: QuadFormInstance) -> np.ndarray:
    """rho^_a(lambda) for every lambda, by fast Walsh-Hadamard transform.

    The polynomial-basis coordinates of x are its mask bits and
    tr(lambda x) = parity(x & L(lambda)) for the linear map L, so the
    transform at lambda is the Walsh coefficient at L(lambda).
    """
    f = inst.field
    w = 1 - 2 * rho_table(inst).astype(np.int64)
    size = len(w)
    hsz = 1
    while hsz < size:
        w = w.reshape(-1, 2, hsz)
        w = np.concatenate([w[:, 0] + w[:, 1], w[:, 0] - w[:, 1]], axis=1).reshape(-1)
        hsz *= 2
    # L(lambda) has bit i = tr(lambda * alpha^i)
    lam = np.arange(size, dtype=np.int64)
    tr = f.abs_trace_table()
    mask = np.zeros(size, dtype=np.int64)
    for i in range(f.m):
        mask |= tr[f.vmul(lam, np.full(size, 1 << i, dtype=np.int64))].astype(np.int64) << i
    return w[mask]


# -- linearized polynomial f_a -----------------------------------------------------------


def _f_image(inst: QuadFormInstance, x: int) -> int:
    f, p = inst.field, inst.params
    coef = f.frob_int(inst.a.value, p.l)
    return f.frob_int(x, 2 * p.t) ^ f.mul_int(coef, f.frob_int(x, p.t)) ^ x


def f_matrix_rows(inst: QuadFormInstance) -> list[int]:
    """Images of the basis vectors alpha^i under f_a, as bit masks."""
    return [_f_image(inst, 1 << i) for i in range(inst.field.m)]


def count_roots_f(inst: QuadFormInstance) -> int:
    """Number of x in GF(2^m) with f_a(x) = 0, via the kernel of f_a."""
    return 1 << (inst.field.m - gf2_rank(f_matrix_rows(inst)))


def count_roots_f_exhaustive(inst: QuadFormInstance) -> int:
    f, p = inst.field, inst.params
    x = np.arange(1 << f.m, dtype=np.int64)
    coef = f.frob_int(inst.a.value, p.l)
    v = f.vpow(x, pow(2, 2 * p.t, f.order))
    v ^= f.vmul(np.full_like(x, coef), f.vpow(x, pow(2, p.t, f.order)))
    v ^= x
    return int((v == 0).sum())


def symplectic_radical_size(inst: QuadFormInstance) -> int:
    """#{x : rho(x+z) + rho(x) + rho(z) = 0 for every z}, by brute force."""
    r = rho_table(inst).astype(np.int8)
    size = len(r)
    x = np.arange(size, dtype=np.int64)
    count = 0
    for x0 in range(0, size, 256):
        xs = x[x0 : x0 + 256, None]
        b = r[xs ^ x[None, :]] ^ r[xs] ^ r[None, :]
        count += int((~b.astype(bool)).all(axis=1).sum())
    return count


def rank_of(inst: QuadFormInstance) -> RankResult:
    roots = count_roots_f(inst)
    kernel_dim = roots.bit_length() - 1
    if kernel_dim % inst.params.k:
        raise NonPowerOfTwoKernel(
            f"kernel of f_a has 2^{kernel_dim} elements, not a power of 2^{inst.params.k}"
        )
    rank = inst.field.m - kernel_dim
    if rank % 2:
        raise NonPowerOfTwoKernel(f"odd rank {rank}")
    return RankResult(inst.a, kernel_dim, rank)


# -- g_a and h_c -----------------------------------------------------------------------------


def _domain(field: FieldSpec, field_deg: int) -> np.ndarray:
    if field_deg == field.m:
        return np.arange(1 << field.m, dtype=np.int64)
    if field_deg == field.n:
        return field.cached(("subfield", field.n), lambda: _subfield(field))
    raise ValueError(f"field_deg must be m={field.m} or n={field.n}, got {field_deg}")


def _subfield(field: FieldSpec) -> np.ndarray:
    exp, _ = field.tables()
    N = (1 << field.n) - 1
    out = np.concatenate([[0], exp[(np.arange(N) * field.T) % field.order]]).astype(np.int64)
    out.setflags(write=False)
    return out


def roots_g(field_deg: int, params: DecimationParams, a: FieldElement) -> np.ndarray:
    """Roots of g_a(y) = y^(2^t+1) + a^(2^l) y + 1 in GF(2^field_deg)."""
    f = a.field
    y = _domain(f, field_deg)
    coef = f.frob_int(a.value, params.l)
    v = f.vpow(y, pow(2, params.t, f.order) + 1) ^ f.vmul(np.full_like(y, coef), y) ^ 1
    return y[v == 0]


def count_roots_g(field_deg: int, params: DecimationParams, a: FieldElement) -> int:
    return len(roots_g(field_deg, params, a))


def roots_h(field_deg: int, t: int, c: FieldElement) -> np.ndarray:
    """Roots of h_c(z) = z^(2^t+1) + c z + c in GF(2^field_deg)."""
    f = c.field
    if not f.in_subfield_int(c.value, field_deg):
        raise ANotInSubfield(f"c is not in GF(2^{field_deg})")
    z = _domain(f, field_deg)
    cz = f.vmul(np.full_like(z, c.value), z)
    v = f.vpow(z, pow(2, t, f.order) + 1) ^ cz ^ c.value
    return z[v == 0]


def count_roots_h(field_deg: int, t: int, c: FieldElement) -> int:
    return len(roots_h(field_deg, t, c))


def c_for_a(params: DecimationParams, a: FieldElement) -> FieldElement:
    """c = a^(2^l (2^t + 1)), the parameter with N(h_c) = N(g_a)."""
    f = a.field
    e = (pow(2, params.l, f.order) * (pow(2, params.t, f.order) + 1)) % f.order
    return FieldElement(f.pow_int(a.value, e), f)


def is_power_of(y: int, field: FieldSpec, e: int) -> bool:
    """True iff nonzero y is an e-th power in GF(2^m)* (e divides 2^m - 1).

    Criterion: y^((2^m - 1)/e) = 1.
    """
    if field.order % e:
        raise ValueError(f"{e} does not divide 2^m - 1")
    return field.pow_int(y, field.order // e) == 1


# -- closed forms and censuses -------------------------------------------------------------


def _exact(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num}/{den} is not an integer")
    return q


def lemma5_counts(q: int, mu: int) -> dict[int, int]:
    """Number of c in GF(q^mu)* for which h_c has 0, 1, 2 and q+1 roots."""
    if mu % 2 == 0:
        raise MuEven(f"mu must be odd, got {mu}")
    if mu < 1 or q < 2 or q & (q - 1):
        raise ValueError(f"need q a power of 2 and mu >= 1, got q={q}, mu={mu}")
    return {
        0: _exact(q ** (mu + 1) + q, 2 * (q + 1)),
        1: q ** (mu - 1) - 1,
        2: _exact((q - 2) * (q**mu - 1), 2 * (q - 1)),
        q + 1: _exact(q ** (mu - 1) - 1, q * q - 1),
    }


def rank_count_closed_form(n: int, k: int) -> tuple[int, int]:
    """(R_m, R_{m-2k}): how many a in GF(2^n)* give rank m and rank m - 2k."""
    den = (1 << (2 * k)) - 1
    r_full = _exact((1 << (n + 2 * k)) - (1 << (n + k)) - (1 << n) + 1, den)
    r_low = _exact((1 << (n + k)) - (1 << (2 * k)), den)
    return r_full, r_low


def subfield_units(field: FieldSpec):
    """a = beta^e for e = 0 .. 2^n - 2."""
    return [field.beta_pow(e) for e in range((1 << field.n) - 1)]


def rank_census(field: FieldSpec, params: DecimationParams, check: bool = True) -> RootCensus:
    m, k = field.m, params.k
    tally = {m: 0, m - 2 * k: 0}
    for a in subfield_units(field):
        r = rank_of(QuadFormInstance(field, params, a)).rank
        tally[r] = tally.get(r, 0) + 1
    r_full, r_low = rank_count_closed_form(field.n, k)
    census = RootCensus(
        "rank",
        tally,
        {"R_m": tally[m], "R_m-2k": tally[m - 2 * k]},
        {"m": m, "l": params.l, "k": k},
    )
    if check and (tally[m], tally[m - 2 * k], len(tally)) != (r_full, r_low, 2):
        raise CensusMismatch(
            f"m={m}, l={params.l}: census {tally} != closed form R_m={r_full}, "
            f"R_(m-2k)={r_low}"
        )
    return census


def g_census(field: FieldSpec, params: DecimationParams, field_deg: int) -> RootCensus:
    tally: dict[int, int] = {}
    for a in subfield_units(field):
        c = count_roots_g(field_deg, params, a)
        tally[c] = tally.get(c, 0) + 1
    tag = "g_a/F_2^m" if field_deg == field.m else "g_a/F_2^n"
    return RootCensus(tag, dict(sorted(tally.items())), meta={"m": field.m, "l": params.l})


def h_census(field: FieldSpec, t: int, check: bool = True) -> RootCensus:
    """Root counts of h_c over GF(2^n) for every c in GF(2^n)*, against the closed form."""
    n = field.n
    k = gcd(t, n)
    q, mu = 1 << k, n // k
    tally = {0: 0, 1: 0, 2: 0, q + 1: 0}
    for c in subfield_units(field):
        cnt = count_roots_h(n, t, c)
        tally[cnt] = tally.get(cnt, 0) + 1
    tally = dict(sorted(tally.items()))
    aggregates = {f"N_{i}": v for i, v in tally.items()}
    census = RootCensus("h_c/F_2^n", tally, aggregates, {"n": n, "t": t, "q": q, "mu": mu})
    if check and mu % 2:
        expected = lemma5_counts(q, mu)
        if tally != dict(sorted(expected.items())):
            raise CensusMismatch(f"n={n}, t={t}: census {tally} != closed form {expected}")
    return census
