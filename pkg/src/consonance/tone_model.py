'''
Pure, complex and mixed tones as real-valued functions of time.

    pure     w(f, t)        = sin(2 pi f t + phi)
    complex  w_c(f, N, A, t) = sum_n a_n sin(2 pi n f t)
    mixed    w_m(F, A, t)    = sum_n a_n sin(2 pi f_n t)

Harmonics of complex and mixed tones are always in phase (phi = 0). Every
evaluator accepts a scalar time or a numpy array of times.
'''
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from consonance.exceptions import ToneError

TWO_PI = 2.0 * np.pi
DURATION_PERIODS = 4.0  # T is about 4/f for the lowest frequency f


def sin_cycles(cycles):
    """
    sin(2 pi c), reducing c modulo 1 first so that large arguments keep the
    exact 1-periodicity of the cycle count.
    """
    return np.sin(TWO_PI * np.remainder(cycles, 1.0))


def _check_frequency(value: float, what: str = "frequency") -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ToneError(f"{what} must be a positive finite number, got {value}")
    return value


@dataclass(frozen=True)
class AmplitudeVector:
    """Amplitudes a_1..a_N of the harmonics (or partials) of a tone."""
    entries: tuple

    def __post_init__(self):
        entries = tuple(float(a) for a in self.entries)
        if len(entries) == 0:
            raise ToneError("amplitude vector must have at least one entry")
        if any(not math.isfinite(a) or a <= 0 for a in entries):
            raise ToneError(f"amplitudes must be strictly positive, got {entries}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.float64)


@dataclass(frozen=True)
class PureTone:
    frequency: float
    phase_shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "frequency", _check_frequency(self.frequency))
        object.__setattr__(self, "phase_shift", float(self.phase_shift))


@dataclass(frozen=True)
class ComplexTone:
    base_frequency: float
    depth: int
    amplitudes: AmplitudeVector

    def __post_init__(self):
        object.__setattr__(self, "base_frequency", _check_frequency(self.base_frequency, "base frequency"))
        if int(self.depth) != self.depth or self.depth < 1:
            raise ToneError(f"depth must be a positive integer, got {self.depth}")
        object.__setattr__(self, "depth", int(self.depth))
        amplitudes = self.amplitudes
        if not isinstance(amplitudes, AmplitudeVector):
            amplitudes = AmplitudeVector(tuple(amplitudes))
            object.__setattr__(self, "amplitudes", amplitudes)
        if len(amplitudes) != self.depth:
            raise ToneError(f"{len(amplitudes)} amplitudes given for a tone of depth {self.depth}")

    def harmonic_frequencies(self) -> np.ndarray:
        return np.arange(1, self.depth + 1, dtype=np.float64) * self.base_frequency

    def as_mixed(self) -> "MixedTone":
        return MixedTone(tuple(self.harmonic_frequencies()), self.amplitudes)


@dataclass(frozen=True)
class MixedTone:
    frequencies: tuple
    amplitudes: AmplitudeVector

    def __post_init__(self):
        frequencies = tuple(_check_frequency(f) for f in self.frequencies)
        if len(frequencies) == 0:
            raise ToneError("a mixed tone needs at least one frequency")
        object.__setattr__(self, "frequencies", frequencies)
        amplitudes = self.amplitudes
        if not isinstance(amplitudes, AmplitudeVector):
            amplitudes = AmplitudeVector(tuple(amplitudes))
            object.__setattr__(self, "amplitudes", amplitudes)
        if len(amplitudes) != len(frequencies):
            raise ToneError(f"{len(frequencies)} frequencies but {len(amplitudes)} amplitudes")


Tone = Union[PureTone, ComplexTone, MixedTone]


def _partial_sum(frequencies: np.ndarray, amplitudes: np.ndarray, t):
    # Summed in harmonic order so complex and mixed tones agree bit for bit
    t = np.asarray(t, dtype=np.float64)
    total = np.zeros_like(t)
    for f_n, a_n in zip(frequencies, amplitudes):
        total = total + a_n * sin_cycles(f_n * t)
    return total if total.ndim else float(total)


def eval_pure(tone: PureTone, t):
    """
    Value of sin(2 pi f t + phi).

    :param tone: pure tone
    :param t: time in seconds (scalar or array)
    """
    t = np.asarray(t, dtype=np.float64)
    if tone.phase_shift == 0.0:
        value = sin_cycles(tone.frequency * t)
    else:
        value = np.sin(TWO_PI * np.remainder(tone.frequency * t, 1.0) + tone.phase_shift)
    return value if value.ndim else float(value)


def eval_complex(tone: ComplexTone, t):
    """Sum of a_n sin(2 pi n f t) over the first N harmonics."""
    return _partial_sum(tone.harmonic_frequencies(), tone.amplitudes.as_array(), t)


def eval_mixed(tone: MixedTone, t):
    """Sum of a_n sin(2 pi f_n t) over the listed partials."""
    return _partial_sum(np.array(tone.frequencies), tone.amplitudes.as_array(), t)


def evaluate(tone: Tone, t):
    """Evaluate any tone kind at time(s) t."""
    if isinstance(tone, PureTone):
        return eval_pure(tone, t)
    if isinstance(tone, ComplexTone):
        return eval_complex(tone, t)
    if isinstance(tone, MixedTone):
        return eval_mixed(tone, t)
    raise TypeError(f"not a tone: {tone!r}")


def highest_frequency(tone: Tone) -> float:
    if isinstance(tone, PureTone):
        return tone.frequency
    if isinstance(tone, ComplexTone):
        return tone.depth * tone.base_frequency
    return max(tone.frequencies)


def lowest_frequency(tone: Tone) -> float:
    if isinstance(tone, PureTone):
        return tone.frequency
    if isinstance(tone, ComplexTone):
        return tone.base_frequency
    return min(tone.frequencies)


def geometric_amplitudes(d: float, N: int) -> AmplitudeVector:
    """
    Amplitudes decaying by a constant factor: [d, d^2, ..., d^N].

    :param d: decay factor, 0 < d < 1
    :param N: depth
    """
    if not 0 < d < 1:
        raise ToneError(f"decay factor must lie in (0, 1), got {d}")
    if int(N) != N or N < 1:
        raise ToneError(f"depth must be a positive integer, got {N}")
    return AmplitudeVector(tuple(d ** n for n in range(1, int(N) + 1)))


def unit_amplitudes(N: int) -> AmplitudeVector:
    return AmplitudeVector((1.0,) * int(N))


def default_duration(lowest_frequency: float) -> float:
    """Default tone duration T = 4/f for the lowest frequency present."""
    return DURATION_PERIODS / _check_frequency(lowest_frequency)


def amplitude_array(amplitudes: Union[AmplitudeVector, Sequence[float]]) -> np.ndarray:
    if isinstance(amplitudes, AmplitudeVector):
        return amplitudes.as_array()
    return AmplitudeVector(tuple(amplitudes)).as_array()
