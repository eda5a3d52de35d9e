import math
import os
import sys
# need this to be able to import consonance.* when run as a script
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src"))

import numpy as np
import pytest
from hypothesis import given, strategies as st

from consonance.exceptions import ToneError
from consonance.tone_model import (
    AmplitudeVector,
    ComplexTone,
    MixedTone,
    PureTone,
    default_duration,
    eval_complex,
    eval_mixed,
    eval_pure,
    evaluate,
    geometric_amplitudes,
    highest_frequency,
    lowest_frequency,
    sin_cycles,
    unit_amplitudes,
)


@given(st.floats(min_value=1.0, max_value=20000.0), st.floats(min_value=0.0, max_value=10.0),
       st.floats(min_value=-np.pi, max_value=np.pi))
def test_pure_tone_bounded(f, t, phase):
    value = eval_pure(PureTone(f, phase), t)
    assert -1.0 <= value <= 1.0


def test_pure_tone_matches_sine():
    t = np.linspace(0.0, 0.01, 101)
    np.testing.assert_allclose(eval_pure(PureTone(440.0), t), np.sin(2 * np.pi * 440.0 * t), atol=1e-12)
    np.testing.assert_allclose(eval_pure(PureTone(440.0, 0.3), t), np.sin(2 * np.pi * 440.0 * t + 0.3), atol=1e-12)


def test_whole_cycles_are_exact_zeros():
    assert sin_cycles(np.arange(0.0, 50.0)).max() == 0.0
    assert eval_complex(ComplexTone(440.0, 6, unit_amplitudes(6)), 0.0) == 0.0


def test_scalar_time_gives_float():
    assert isinstance(eval_pure(PureTone(440.0), 0.001), float)
    assert isinstance(evaluate(ComplexTone(440.0, 2, [1.0, 0.5]), 0.001), float)


def test_complex_tone_sums_harmonics():
    tone = ComplexTone(220.0, 3, [1.0, 0.5, 0.25])
    t = np.linspace(0.0, 0.02, 257)
    expected = sum(a * np.sin(2 * np.pi * n * 220.0 * t) for n, a in enumerate([1.0, 0.5, 0.25], start=1))
    np.testing.assert_allclose(eval_complex(tone, t), expected, atol=1e-12)


def test_complex_and_mixed_agree_bitwise():
    tone = ComplexTone(440.0, 6, geometric_amplitudes(0.8, 6))
    t = np.linspace(0.0, 4 / 440, 1001)
    assert np.array_equal(eval_complex(tone, t), eval_mixed(tone.as_mixed(), t))


def test_pure_tone_examples():
    assert eval_pure(PureTone(440.0), 0.0) == 0.0
    assert eval_pure(PureTone(440.0), 1 / 1760) == pytest.approx(1.0, abs=1e-15)
    # 440 * 0.001 = 0.44 cycles, and sin(0.88 pi) = sin(0.12 pi)
    assert eval_pure(PureTone(440.0), 0.001) == pytest.approx(math.sin(0.12 * math.pi), abs=1e-14)


def test_mixed_tone_sums_partials():
    tone = MixedTone((440.0, 660.0), [1.0, 1.0])
    expected = math.sin(2 * math.pi * 0.44) + math.sin(2 * math.pi * 0.66)
    assert eval_mixed(tone, 0.001) == pytest.approx(expected, abs=1e-12)
    assert eval_mixed(MixedTone((440.0,), [1.0]), 0.0) == 0.0


@given(st.floats(min_value=20.0, max_value=5000.0), st.integers(min_value=1, max_value=8),
       st.floats(min_value=0.0, max_value=10.0), st.floats(min_value=1e-3, max_value=1.0))
def test_complex_tone_bounded_by_amplitude_sum(f, N, t, d):
    A = [d ** (n / 2) for n in range(1, N + 1)]
    assert abs(eval_complex(ComplexTone(f, N, A), t)) <= sum(A) + 1e-12


def test_periodic_in_the_base_frequency():
    rng = np.random.default_rng(0)
    for f in (55.0, 440.0, 3520.0):
        # depth 1 up to f t = 1e5
        t = rng.uniform(0.0, 1e5 / f, 2000)
        pure = ComplexTone(f, 1, [1.0])
        assert np.max(np.abs(eval_complex(pure, t) - eval_complex(pure, t + 1 / f))) <= 1e-9
        # depth 6 up to f t = 1e4
        t = rng.uniform(0.0, 1e4 / f, 2000)
        tone = ComplexTone(f, 6, unit_amplitudes(6))
        assert np.max(np.abs(eval_complex(tone, t) - eval_complex(tone, t + 1 / f))) <= 1e-9


def test_geometric_amplitudes():
    np.testing.assert_allclose(geometric_amplitudes(0.8, 3).as_array(), [0.8, 0.64, 0.512])
    assert len(geometric_amplitudes(0.5, 8)) == 8
    for d, N in [(0.0, 3), (1.0, 3), (1.2, 3), (0.8, 0)]:
        with pytest.raises(ToneError):
            geometric_amplitudes(d, N)


def test_invalid_tones_are_rejected():
    with pytest.raises(ToneError):
        PureTone(0.0)
    with pytest.raises(ToneError):
        PureTone(float("nan"))
    with pytest.raises(ToneError):
        ComplexTone(440.0, 3, [1.0, 1.0])
    with pytest.raises(ToneError):
        ComplexTone(440.0, 0, [])
    with pytest.raises(ToneError):
        AmplitudeVector((1.0, 0.0))
    with pytest.raises(ToneError):
        MixedTone((440.0, 550.0), [1.0])


def test_frequency_helpers():
    tone = ComplexTone(440.0, 6, unit_amplitudes(6))
    assert highest_frequency(tone) == 2640.0
    assert lowest_frequency(tone) == 440.0
    mixed = MixedTone((550.0, 330.0, 990.0), [1.0, 1.0, 1.0])
    assert highest_frequency(mixed) == 990.0 and lowest_frequency(mixed) == 330.0
    assert default_duration(440.0) == 4 / 440


def test_evaluate_rejects_non_tones():
    with pytest.raises(TypeError):
        evaluate("440 Hz", 0.0)


def main():
    test_pure_tone_matches_sine()
    test_whole_cycles_are_exact_zeros()
    test_complex_and_mixed_agree_bitwise()
    test_geometric_amplitudes()
    test_invalid_tones_are_rejected()
    print("tone model checks passed")


if __name__ == "__main__":
    main()
