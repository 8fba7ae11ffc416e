"""Decimations d with d(2^l + 1) = 2^i (mod 2^n - 1) and their parameters."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from math import gcd

from .errors import DNotCoprime, InvariantViolation, NoValidL
from .gf2m import gcd_pow2


@dataclass(frozen=True)
class DecimationParams:
    n: int
    d: int
    l: int
    i: int
    k: int
    r: int
    s: int
    t: int
    # every raw (l, i) solving the congruence, before normalization
    pairs: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    @property
    def m(self) -> int:
        return 2 * self.n

    @property
    def coset_leader(self) -> int:
        return coset_leader(self.d, self.n)

    @property
    def is_coset_leader(self) -> bool:
        return self.d == self.coset_leader


def coset_leader(d: int, n: int) -> int:
    """Smallest member of the cyclotomic coset {d * 2^j mod 2^n - 1}."""
    N = (1 << n) - 1
    d %= N
    return min((d << j) % N for j in range(n))


def coset_leaders(n: int) -> list[int]:
    """Leaders of all cosets of d coprime to 2^n - 1, ascending."""
    N = (1 << n) - 1
    return [d for d in range(1, N) if gcd(d, N) == 1 and coset_leader(d, n) == d]


def _powers_of_two(n: int) -> dict[int, int]:
    N = (1 << n) - 1
    return {(1 << i) % N: i for i in range(n)}


def solve_pairs(d: int, n: int) -> list[tuple[int, int]]:
    """Every (l, i) with 0 < l < n, 0 <= i < n solving the congruence for d."""
    N = (1 << n) - 1
    if gcd(d, N) != 1:
        raise DNotCoprime(f"gcd({d}, {N}) != 1")
    pow2 = _powers_of_two(n)
    out = []
    for l in range(1, n):
        i = pow2.get(d * ((1 << l) + 1) % N)
        if i is not None:
            out.append((l, i))
    return out


def is_normalized(l: int, n: int) -> bool:
    """gcd(2^l + 1, 2^(2n) - 1) == 1."""
    return gcd_pow2(2 * n, l, "plus") == 1


def find_l_i(d: int, n: int) -> tuple[int, int] | None:
    """Smallest normalized l (and its i) solving the congruence, or None.

    Any solution (l, i) yields the normalized solution (n - l, n - l + i), so
    restricting to normalized l loses no decimation.
    """
    for l, i in solve_pairs(d, n):
        if is_normalized(l, n):
            return l, i
    return None


def normalize_l(l: int, n: int) -> int:
    """Return l or n - l, whichever makes 2^l + 1 prime to 2^(2n) - 1."""
    if not 0 < l < n:
        raise InvariantViolation(f"need 0 < l < n, got l={l}, n={n}")
    for cand in (l, n - l):
        if is_normalized(cand, n):
            return cand
    raise NoValidL(f"neither l={l} nor n-l={n - l} is valid for n={n}")


def derive_params(d: int, l: int, i: int, n: int, pairs=()) -> DecimationParams:
    N = (1 << n) - 1
    m = 2 * n
    if not 0 < l < n:
        raise InvariantViolation(f"need 0 < l < n, got l={l}, n={n}")
    if not 1 <= d < N:
        raise InvariantViolation(f"need 1 <= d < 2^n - 1, got d={d}")
    if d * ((1 << l) + 1) % N != pow(2, i, N):
        raise InvariantViolation(f"d(2^l+1) != 2^i mod 2^n-1 for d={d}, l={l}, i={i}")
    k = gcd(l, n)
    r, s, t = n // k, l // k, n + l
    checks = {
        "gcd(d, 2^n-1) = 1": gcd(d, N) == 1,
        "gcd(2^l+1, 2^n-1) = 1": gcd((1 << l) + 1, N) == 1,
        "s even": s % 2 == 0,
        "0 < s < r": 0 < s < r,
        "r odd, r >= 3": r % 2 == 1 and r >= 3,
        "gcd(r, s) = 1": gcd(r, s) == 1,
        "gcd(2^l+1, 2^m-1) = 1": gcd((1 << l) + 1, (1 << m) - 1) == 1,
        "gcd(t, m) = k": gcd(t, m) == k,
        "gcd(t, n) = k": gcd(t, n) == k,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InvariantViolation(f"d={d}, l={l}, n={n}: " + "; ".join(failed))
    return DecimationParams(n=n, d=d, l=l, i=i, k=k, r=r, s=s, t=t, pairs=tuple(pairs))


def params_for(d: int, n: int) -> DecimationParams | None:
    """Canonical DecimationParams for d, or None if d solves no congruence."""
    pairs = solve_pairs(d, n)
    for l, i in pairs:
        if is_normalized(l, n):
            return derive_params(d, l, i, n, pairs)
    return None


def enumerate_decimations(n: int) -> list[DecimationParams]:
    """Every d in [1, 2^n - 2] prime to 2^n - 1 admitting some (l, i), by d."""
    if not 2 <= n <= 13:
        raise ValueError(f"n must lie in [2, 13], got {n}")
    N = (1 << n) - 1
    out = []
    for d in range(1, N):
        if gcd(d, N) != 1:
            continue
        p = params_for(d, n)
        if p is not None:
            out.append(p)
    return out


CSV_HEADER = ("n", "d", "coset_leader", "l", "i", "k", "r", "s")


def decimations_csv(rows: list[DecimationParams]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in rows:
        w.writerow((p.n, p.d, p.coset_leader, p.l, p.i, p.k, p.r, p.s))
    return buf.getvalue()
