"""Closed-form correlation distribution, moment identities and the decimation search."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from . import quadform
from .decimation import (
    DecimationParams,
    coset_leaders,
    enumerate_decimations,
    find_l_i,
    params_for,
)
from .errors import BadParameters, IncompleteSpectrum, MTooLarge, PredictionMismatch
from .gf2m import FieldSpec, build_field
from .sequences import CorrelationSpectrum, spectrum

SEARCH_MAX_M = 16
SEARCH_HARD_MAX_M = 20


@dataclass(frozen=True)
class TheoremPrediction:
    n: int
    k: int
    rows: tuple[tuple[int, int], ...]

    @property
    def entries(self) -> dict[int, int]:
        """Nonzero rows only, ascending by value."""
        return {v: c for v, c in sorted(self.rows) if c}

    @property
    def zero_rows(self) -> list[int]:
        return [v for v, c in self.rows if not c]

    def to_list(self) -> list[dict]:
        return [{"c": v, "count": c} for v, c in sorted(self.rows)]


def theorem1_prediction(n: int, k: int) -> TheoremPrediction:
    """Predicted distribution of C_d(tau) when gcd(l, n) = k."""
    if k < 1 or n % k or (n // k) % 2 == 0:
        raise BadParameters(f"need k | n with n/k odd, got n={n}, k={k}")
    N = (1 << n) - 1
    rows = []
    for value, num, den in (
        (-1, (1 << (n - k)) - 1, 1),
        (-1 + (1 << n), ((1 << n) + 1) << (k - 1), (1 << k) + 1),
        (-1 - (1 << n), N * ((1 << (k - 1)) - 1), (1 << k) - 1),
        (-1 - (1 << (n + k)), (1 << (n - k)) - 1, (1 << (2 * k)) - 1),
    ):
        count, rem = divmod(num, den)
        if rem:
            raise BadParameters(f"non-integral count {num}/{den} at n={n}, k={k}")
        rows.append((value, count))
    return TheoremPrediction(n, k, tuple(rows))


def lemma6_check(spec: CorrelationSpectrum, nu: int, m: int) -> bool:
    """Exact first, second and third moment identities of the spectrum."""
    n = m // 2
    if spec.total != (1 << n) - 1:
        raise IncompleteSpectrum(f"{spec.total} shifts, expected {(1 << n) - 1}")
    return (
        spec.moment(1) == 1
        and spec.moment(2, 1) == (1 << m) * ((1 << n) - 1)
        and spec.moment(3, 1) == -(1 << (2 * m)) + (nu + 3) * (1 << (n + m))
    )


def nu_solutions(field: FieldSpec, d: int) -> list[tuple[int, int]]:
    """(x1, x2) with x1 + x2 + 1 = 0 and x1^e + x2^e + 1 = 0, e = d(2^n + 1), both nonzero."""
    x1 = np.arange(2, 1 << field.m, dtype=np.int64)
    x2 = x1 ^ 1
    e = d * field.T
    hit = (field.vpow(x1, e) ^ field.vpow(x2, e)) == 1
    return [(int(a), int(b)) for a, b in zip(x1[hit], x2[hit])]


def count_nu(field: FieldSpec, d: int) -> int:
    return len(nu_solutions(field, d))


def classify_valuedness(spec: CorrelationSpectrum) -> int:
    return spec.num_values


@dataclass
class VerifyReport:
    m: int
    d: int
    passed: bool
    empirical: CorrelationSpectrum
    predicted: TheoremPrediction
    rank_census: dict[str, int]
    params: DecimationParams
    problems: list[str] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "pass": self.passed,
            "l": self.params.l,
            "i": self.params.i,
            "k": self.params.k,
            "empirical": self.empirical.to_dict()["values"],
            "predicted": self.predicted.to_list(),
            "rank_census": self.rank_census,
            "problems": self.problems,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_theorem1(
    field: FieldSpec,
    params: DecimationParams,
    route: str = "quadform",
    strict: bool = True,
) -> VerifyReport:
    """Empirical spectrum against the prediction, plus M2 + M3 = R_m.

    With ``strict`` a failed comparison raises PredictionMismatch; otherwise
    the report carries the differences.
    """
    n, k = field.n, params.k
    emp = spectrum(field, params.d, route)
    pred = theorem1_prediction(n, k)
    census = quadform.rank_census(field, params, check=False)
    problems = []
    if emp.entries != pred.entries:
        problems.append(f"spectrum {emp.entries} != predicted {pred.entries}")
    m2_m3 = emp.entries.get(-1 + (1 << n), 0) + emp.entries.get(-1 - (1 << n), 0)
    r_full = census.counts.get(field.m, 0)
    if m2_m3 != r_full:
        problems.append(f"M2 + M3 = {m2_m3} but R_m = {r_full}")
    expected_ranks = quadform.rank_count_closed_form(n, k)
    if (r_full, census.counts.get(field.m - 2 * k, 0)) != expected_ranks:
        problems.append(f"rank census {census.counts} != closed form {expected_ranks}")
    report = VerifyReport(
        field.m,
        params.d,
        not problems,
        emp,
        pred,
        {str(r): c for r, c in sorted(census.counts.items(), reverse=True)},
        params,
        problems,
    )
    if strict and problems:
        raise PredictionMismatch(f"m={field.m}, d={params.d}: " + "; ".join(problems))
    return report


@dataclass(frozen=True)
class SearchRecord:
    m: int
    d: int
    spectrum: CorrelationSpectrum
    matched: tuple[int, int] | None
    k: int | None

    @property
    def num_distinct_values(self) -> int:
        return self.spectrum.num_values

    def csv_row(self) -> tuple:
        l, i = self.matched if self.matched else ("", "")
        k = "" if self.k is None else self.k
        return (self.m, self.d, self.num_distinct_values, self.spectrum.compact(), l, i, k)


SEARCH_CSV_HEADER = ("m", "d", "num_values", "values", "l", "i", "k")


def _search_one(field: FieldSpec, d: int) -> SearchRecord:
    spec = spectrum(field, d, "charsum")
    match = find_l_i(d, field.n)
    k = gcd(match[0], field.n) if match else None
    return SearchRecord(field.m, d, spec, match, k)


def search_decimations(
    m: int,
    max_values: int = 4,
    threads: int | None = None,
    allow_large: bool = False,
    prim_poly: int | None = None,
) -> list[SearchRecord]:
    """Every coset leader d with at most ``max_values`` distinct correlation values.

    Spectra use the character-sum route regardless of whether d solves the
    decimation congruence; the match, if any, is recorded alongside.
    """
    bound = SEARCH_HARD_MAX_M if allow_large else SEARCH_MAX_M
    if m > bound:
        raise MTooLarge(f"search is limited to m <= {bound} (got m={m})")
    if max_values < 3:
        raise ValueError("max_values must be at least 3")
    field = build_field(m, prim_poly)
    field.tables()
    leaders = coset_leaders(field.n)
    workers = threads or os.cpu_count() or 1
    if workers == 1:
        records = [_search_one(field, d) for d in leaders]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda d: _search_one(field, d), leaders))
    return sorted(
        (r for r in records if r.num_distinct_values <= max_values), key=lambda r: r.d
    )


def search_csv(records: list[SearchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SEARCH_CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def verify_all(m: int, route: str = "quadform", strict: bool = True) -> list[VerifyReport]:
    """verify_theorem1 for every enumerated decimation at this m."""
    field = build_field(m)
    return [verify_theorem1(field, p, route, strict) for p in enumerate_decimations(field.n)]


def params_or_none(field: FieldSpec, d: int) -> DecimationParams | None:
    return params_for(d % ((1 << field.n) - 1), field.n)
