import json
import random
from math import gcd

import numpy as np
import pytest

from pdxcorr.decimation import enumerate_decimations, params_for
from pdxcorr.errors import ANotInSubfield, AZero, DNotCoprime, LNotNormalized, TauOutOfRange
from pdxcorr.gf2m import build_field
from pdxcorr.sequences import (
    CorrelationSpectrum,
    a_for_tau,
    correlation_values,
    correlation_via_quadform,
    cross_correlation_charsum,
    cross_correlation_direct,
    m_sequence,
    spectrum,
)

from conftest import naive_sequences, naive_spectrum

# frozen from conftest.naive_spectrum (schoolbook arithmetic, direct summation)
GOLDEN = {
    (6, 3): {-17: 1, -1: 3, 7: 3},
    (8, 7): {-33: 2, -9: 4, 7: 4, 15: 5},
    (12, 26): {-257: 1, -65: 21, -1: 15, 63: 26},
}


def test_golden_oracle_still_agrees():
    for (m, d), want in GOLDEN.items():
        if m <= 8:
            assert naive_spectrum(m, build_field(m).prim_poly, d)[1] == want


@pytest.mark.parametrize("m", [4, 6, 8, 10])
def test_sequences_match_naive(m):
    f = build_field(m)
    s, u = naive_sequences(m, f.prim_poly)
    assert m_sequence(f, "long").tolist() == s
    assert m_sequence(f, "short").tolist() == u


def test_sequence_weights():
    f = build_field(4)
    s, u = m_sequence(f, "long"), m_sequence(f, "short")
    assert len(s) == 15 and s.sum() == 8
    assert len(u) == 3 and u.sum() == 2
    for m in (6, 8, 10):
        assert m_sequence(build_field(m), "long")[0] == 0


def test_direct_m6_tau0():
    f = build_field(6)
    vals, _ = naive_spectrum(6, f.prim_poly, 3)
    assert cross_correlation_direct(f, 3, 0) == vals[0]
    assert vals[0] in (-1, 7, -17)


def test_direct_errors():
    f = build_field(6)
    with pytest.raises(TauOutOfRange):
        cross_correlation_direct(f, 3, 7)
    with pytest.raises(DNotCoprime):
        cross_correlation_direct(f, 7, 0)


def test_charsum_errors(f6):
    with pytest.raises(AZero):
        cross_correlation_charsum(f6, 3, f6.zero)
    with pytest.raises(ANotInSubfield):
        cross_correlation_charsum(f6, 3, f6.alpha)


def test_quadform_route_needs_normalized_l(f6):
    from pdxcorr.decimation import DecimationParams

    bad = DecimationParams(n=3, d=3, l=1, i=1, k=1, r=3, s=1, t=4)
    with pytest.raises(LNotNormalized):
        correlation_via_quadform(f6, bad, f6.beta)


@pytest.mark.parametrize("m", [4, 6, 8, 10])
def test_direct_equals_charsum_all_coprime_d(m):
    f = build_field(m)
    N = 2 ** f.n - 1
    for d in range(1, N):
        if gcd(d, N) != 1:
            continue
        direct = correlation_values(f, d, "direct")
        single = [cross_correlation_charsum(f, d, a_for_tau(f, d, tau)) for tau in range(N)]
        assert direct.tolist() == single
        assert correlation_values(f, d, "charsum").tolist() == single


@pytest.mark.parametrize("m", [6, 10, 12])
def test_quadform_pointwise(m):
    f = build_field(m)
    for p in enumerate_decimations(f.n):
        want = correlation_values(f, p.d, "charsum")
        N = 2 ** f.n - 1
        taus = range(N) if m <= 10 else random.Random(p.d).sample(range(N), 16)
        for tau in taus:
            got = correlation_via_quadform(f, p, a_for_tau(f, p.d, tau))
            assert got == want[tau]
        assert correlation_values(f, p.d, "quadform").tolist() == want.tolist()


@pytest.mark.parametrize("m", [12, 14])
def test_route_equivalence_sampled(m):
    f = build_field(m)
    N = 2 ** f.n - 1
    rng = random.Random(m)
    d = next(p.d for p in enumerate_decimations(f.n))
    full = correlation_values(f, d, "quadform")
    for tau in rng.sample(range(N), 32):
        assert cross_correlation_direct(f, d, tau) == full[tau]
        assert cross_correlation_charsum(f, d, a_for_tau(f, d, tau)) == full[tau]


def test_golden_spectra():
    for (m, d), want in GOLDEN.items():
        f = build_field(m)
        for route in ("auto", "charsum", "direct"):
            assert spectrum(f, d, route).entries == want


def test_m8_d7_has_at_most_four_values():
    s = spectrum(build_field(8), 7)
    assert s.num_values <= 4
    assert params_for(7, 4) is None


@pytest.mark.parametrize("m", [4, 6, 8, 10, 12])
def test_spectrum_moments_exact(m):
    f = build_field(m)
    N = 2 ** f.n - 1
    for d in range(1, N, 1 if m <= 10 else 7):
        if gcd(d, N) == 1:
            assert spectrum(f, d).check_invariants()


@pytest.mark.parametrize("m", [4, 6, 8, 10])
def test_spectrum_coset_invariant(m):
    f = build_field(m)
    N = 2 ** f.n - 1
    for d in range(1, N):
        if gcd(d, N) == 1:
            assert spectrum(f, d).entries == spectrum(f, 2 * d % N).entries


def test_tau_and_a_orders_agree(f12):
    # iterating a over GF(2^n)* gives the same multiset as iterating tau
    p = params_for(26, 6)
    by_tau = correlation_values(f12, 26, "charsum")
    by_a = [
        cross_correlation_charsum(f12, 26, f12.beta_pow(e)) for e in range(2**6 - 1)
    ]
    assert sorted(by_tau.tolist()) == sorted(by_a)
    assert p is not None


def test_spectrum_json_roundtrip(f6):
    s = spectrum(f6, 3)
    text = s.to_json()
    assert json.loads(text) == {
        "m": 6,
        "d": 3,
        "values": [{"c": -17, "count": 1}, {"c": -1, "count": 3}, {"c": 7, "count": 3}],
    }
    assert CorrelationSpectrum.from_json(text) == s


def test_values_fit_int64():
    v = correlation_values(build_field(14), 3, "charsum")
    assert v.dtype == np.int64
