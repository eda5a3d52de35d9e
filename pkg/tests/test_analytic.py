import math
import os
import sys
# need this to be able to import consonance.* when run as a script
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src"))

import numpy as np
import pytest

from consonance.analytic import (
    HarmonicPair,
    ac_values,
    asymptotic_consonance,
    cons_continuous,
    corollary_bound,
    corollary_envelope,
    corollary_error,
    cross_integral,
    energy_bound,
    quadrature_integral,
    quadrature_oracle,
    self_integral,
    self_integral_bound,
    sinc_cycles,
    tone_energy,
)
from consonance.exceptions import NonConvergenceError, ToneError
from consonance.tone_model import ComplexTone, PureTone, unit_amplitudes

F = 440.0
T4 = 4 / F


def _harmonic_sum(f, amplitudes):
    def value(t):
        return math.fsum(a * math.sin(2 * math.pi * n * f * t) for n, a in enumerate(amplitudes, start=1))
    return value


def _random_case(rng):
    f = rng.uniform(100.0, 2000.0)
    r = rng.uniform(1.0, 2.0)
    N = int(rng.integers(1, 9))
    M = int(rng.integers(1, 9))
    A = 1.0 - rng.random(N)  # (0, 1]
    B = 1.0 - rng.random(M)
    return f, r, N, M, A, B


#####################
###   INTEGRALS   ###
#####################

def test_cross_integral_examples():
    assert cross_integral(HarmonicPair(1, 1, 2.0, F, T4)) == pytest.approx(0.0, abs=1e-14)
    assert cross_integral(HarmonicPair(1, 1, 1.0, F, T4)) == pytest.approx(T4 / 2, abs=1e-14)

    pair = HarmonicPair(3, 5, 1.37, F, T4)
    integrand = lambda t: math.sin(2 * math.pi * 3 * F * t) * math.sin(2 * math.pi * 5 * 1.37 * F * t)
    assert abs(cross_integral(pair) - quadrature_integral(integrand, T4, panels=64)) <= 1e-10


def test_cross_integral_limit_is_self_integral():
    for n in (1, 2, 5):
        pair = HarmonicPair(n, n, 1.0, F, 0.01)
        assert cross_integral(pair) == pytest.approx(self_integral(n, F, 0.01), abs=1e-15)


def test_self_integral_examples():
    assert self_integral(1, F, T4) == pytest.approx(T4 / 2, abs=1e-15)
    expected = 0.005 - math.sin(35.2 * math.pi) / (8 * math.pi * 880.0)
    assert self_integral(2, F, 0.01) == pytest.approx(expected, abs=1e-15)
    integrand = lambda t: math.sin(2 * math.pi * 880.0 * t) ** 2
    assert abs(self_integral(2, F, 0.01) - quadrature_integral(integrand, 0.01, panels=32)) <= 1e-10
    with pytest.raises(ToneError):
        self_integral(0, F, 0.01)


def test_self_integral_bound_holds():
    rng = np.random.default_rng(0)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        f = rng.uniform(50.0, 5000.0)
        T = rng.uniform(0.001, 0.1)
        if abs(self_integral(n, f, T) - T / 2) > self_integral_bound(n, f):
            violations += 1
    assert violations == 0


def test_tone_energy_examples():
    assert tone_energy(F, 1, [1.0], T4) == pytest.approx(T4 / 2, abs=1e-15)
    assert tone_energy(F, 6, unit_amplitudes(6), T4) == pytest.approx(3 * T4, abs=1e-14)

    rng = np.random.default_rng(1)
    A = rng.uniform(0.0, 1.0, 6)
    T = 0.01
    signal = _harmonic_sum(F, A)
    reference = quadrature_integral(lambda t: signal(t) ** 2, T, panels=64)
    assert abs(tone_energy(F, 6, A, T) - reference) <= 1e-9
    assert abs(tone_energy(F, 6, A, T) - np.sum(A ** 2) * T / 2) <= energy_bound(6, F)
    with pytest.raises(ToneError):
        tone_energy(F, 6, [1.0, 1.0], T)


def test_energy_bound_for_unit_amplitudes():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        N = int(rng.integers(1, 11))
        f = rng.uniform(50.0, 5000.0)
        T = rng.uniform(0.001, 0.1)
        assert abs(tone_energy(f, N, unit_amplitudes(N), T) - N * T / 2) <= energy_bound(N, f)


def test_energy_bound_centred_for_partial_amplitudes():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        N = int(rng.integers(1, 11))
        f = rng.uniform(50.0, 5000.0)
        T = rng.uniform(0.001, 0.1)
        A = rng.uniform(1e-6, 1.0, N)
        assert abs(tone_energy(f, N, A, T) - np.sum(A ** 2) * T / 2) <= energy_bound(N, f)


######################
###   CONSONANCE   ###
######################

def test_cons_continuous_examples():
    ones = unit_amplitudes(6)
    assert cons_continuous(F, F, 6, 6, ones, ones, T4) == pytest.approx(1.0, abs=1e-12)
    assert cons_continuous(F, 660.0, 1, 1, [1.0], [1.0], T4) == pytest.approx(0.0, abs=1e-12)
    oracle = quadrature_oracle(ComplexTone(F, 6, ones), ComplexTone(616.0, 6, ones), T4)
    assert abs(cons_continuous(F, 616.0, 6, 6, ones, ones, T4) - oracle) <= 1e-9


def _oracle_agreement(cases, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        f, r, N, M, A, B = _random_case(rng)
        T = 4 / f
        closed = cons_continuous(f, r * f, N, M, A, B, T)
        oracle = quadrature_oracle(ComplexTone(f, N, A), ComplexTone(r * f, M, B), T)
        worst = max(worst, abs(closed - oracle))
    return worst


def test_closed_form_matches_quadrature():
    assert _oracle_agreement(50, seed=4) <= 1e-8


@pytest.mark.slow
def test_closed_form_matches_quadrature_full():
    assert _oracle_agreement(500, seed=5) <= 1e-8


def test_quadrature_oracle_examples():
    assert quadrature_oracle(PureTone(F), PureTone(F), 0.01) == pytest.approx(1.0, abs=1e-9)
    assert quadrature_oracle(PureTone(F), PureTone(660.0), T4) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ToneError):
        quadrature_oracle(PureTone(F), PureTone(F), 0.0)
    with pytest.raises(NonConvergenceError):
        quadrature_oracle(PureTone(20000.0), PureTone(20000.0), 100.0)


@pytest.mark.parametrize("kappa", [0.5, 2.0, 10.0])
def test_depends_only_on_fT(kappa):
    A = [1.0, 0.8, 0.64, 0.512]
    for r in (1.1, 1.2, 1.5, 1.93):
        base = cons_continuous(F, r * F, 4, 4, A, A, T4)
        scaled = cons_continuous(kappa * F, kappa * r * F, 4, 4, A, A, T4 / kappa)
        assert abs(base - scaled) <= 1e-12


#################################
###   ASYMPTOTIC CONSONANCE   ###
#################################

def test_ac_examples():
    for n in (1, 3, 6):
        assert asymptotic_consonance(HarmonicPair(n, n, 1.0, F, T4)) == pytest.approx(1.0, abs=1e-12)

    r = np.linspace(1.0, 2.0, 10001)
    assert np.max(np.abs(ac_values(3, 5, r, 4.0))) < 0.2
    spike = ac_values(5, 3, r, 4.0)
    assert abs(r[np.argmax(spike)] - 5 / 3) < 1e-3
    assert np.max(spike) > 0.9


def test_ac_is_twice_cross_over_T():
    rng = np.random.default_rng(6)
    for _ in range(200):
        pair = HarmonicPair(int(rng.integers(1, 9)), int(rng.integers(1, 9)), rng.uniform(1.0, 2.0),
                            rng.uniform(100.0, 2000.0), rng.uniform(0.001, 0.05))
        assert abs(asymptotic_consonance(pair) - 2 * cross_integral(pair) / pair.T) <= 1e-14


@pytest.mark.parametrize("n,m", [(3, 2), (4, 3), (5, 3), (5, 4), (6, 5), (8, 5)])
def test_cross_integral_is_continuous_at_singular_ratios(n, m):
    limit = cross_integral(HarmonicPair(n, m, n / m, F, T4))
    for offset in (-1e-12, 1e-12):
        assert abs(cross_integral(HarmonicPair(n, m, n / m + offset, F, T4)) - limit) <= 1e-9


def test_sinc_series_branch():
    assert sinc_cycles(0.0) == 1.0
    tiny = np.array([1e-9, -1e-9, 1e-8])
    np.testing.assert_allclose(sinc_cycles(tiny), np.sin(2 * np.pi * tiny) / (2 * np.pi * tiny), rtol=1e-15)
    assert isinstance(sinc_cycles(0.25), float)


def test_pair_validation():
    with pytest.raises(ToneError):
        HarmonicPair(0, 1, 1.5, F, T4)
    with pytest.raises(ToneError):
        HarmonicPair(1, 1, 2.5, F, T4)
    assert HarmonicPair(1, 1, 2.5, F, T4, loose=True).fT == pytest.approx(4.0)


###########################
###   PURE-TONE ERROR   ###
###########################

def test_corollary_examples():
    assert corollary_error(1, 1, 1.0, F, T4) == pytest.approx(0.0, abs=1e-12)
    assert corollary_error(4, 3, 1.41, 880.0, 4 / 880.0) <= corollary_error(4, 3, 1.41, F, T4) + 1e-9
    assert corollary_error(6, 5, 1.19, F, T4) <= corollary_bound(6, F)
    with pytest.raises(ToneError):
        corollary_error(2, 3, 1.5, F, T4)
    # fT = 0.05 is below 1/(4 pi)
    for n, m in [(1, 1), (2, 1)]:
        with pytest.raises(ToneError):
            corollary_envelope(n, m, np.array([1.0, 1.5]), F, 0.05 / F)


def test_corollary_error_within_envelope():
    rng = np.random.default_rng(7)
    for _ in range(500):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, n + 1))
        r = rng.uniform(1.0, 2.0)
        f = rng.uniform(100.0, 2000.0)
        T = rng.uniform(0.005, 0.05)
        assert corollary_error(n, m, r, f, T) <= corollary_envelope(n, m, r, f, T) + 1e-12


@pytest.mark.parametrize("n,m", [(3, 2), (4, 3), (6, 5)])
def test_corollary_error_halves_per_doubling(n, m):
    r = np.linspace(1.0, 2.0, 10001)
    errors = [float(np.max(corollary_error(n, m, r, f, 0.01))) for f in (440.0, 880.0, 1760.0)]
    for f, error in zip((440.0, 880.0, 1760.0), errors):
        assert error <= corollary_bound(n, f)
    factors = [errors[0] / errors[1], errors[1] / errors[2]]
    assert all(1.4 <= factor <= 2.8 for factor in factors)
    assert abs(math.sqrt(errors[0] / errors[2]) - 2.0) <= 0.2


def main():
    test_cross_integral_examples()
    test_self_integral_bound_holds()
    test_energy_bound_for_unit_amplitudes()
    test_closed_form_matches_quadrature()
    test_corollary_examples()
    print("analytic checks passed")


if __name__ == "__main__":
    main()
