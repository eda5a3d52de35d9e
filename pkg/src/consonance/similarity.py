'''
Sampling of tones on the grid t_i = i*T/s (i = 0..s) and the discrete cosine
similarity / consonance of the resulting vectors.
'''
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from consonance.exceptions import LengthMismatchError, ToneError, ZeroVectorError
from consonance.tone_model import (
    ComplexTone,
    Tone,
    default_duration,
    evaluate,
)

DEFAULT_RATE = 44000


@dataclass(frozen=True)
class SampleVector:
    values: np.ndarray
    duration: float
    rate: int

    def __post_init__(self):
        _check_grid(self.duration, self.rate)
        if len(self.values) != self.rate + 1:
            raise LengthMismatchError(f"{len(self.values)} samples for rate {self.rate}, expected {self.rate + 1}")

    def __len__(self) -> int:
        return len(self.values)

    def times(self) -> np.ndarray:
        return sample_times(self.duration, self.rate)

    def scaled(self, factor: float) -> "SampleVector":
        return SampleVector(self.values * factor, self.duration, self.rate)


def _check_grid(duration: float, rate: int):
    if not duration > 0 or not math.isfinite(duration):
        raise ToneError(f"duration must be positive, got {duration}")
    if int(rate) != rate or rate < 1:
        raise ToneError(f"rate must be a positive integer, got {rate}")


def sample_times(duration: float, rate: int) -> np.ndarray:
    _check_grid(duration, rate)
    return np.arange(rate + 1, dtype=np.float64) * duration / rate


def sample(tone: Tone, duration: float, rate: int = DEFAULT_RATE) -> SampleVector:
    """
    Sample a tone at t_i = i*T/s for i = 0..s.

    :param tone: pure, complex or mixed tone
    :param duration: T in seconds
    :param rate: s, number of grid intervals over T
    """
    times = sample_times(duration, rate)
    return SampleVector(np.asarray(evaluate(tone, times)), float(duration), int(rate))


def compensated_dot(x: np.ndarray, y: np.ndarray) -> float:
    """Dot product with a correctly rounded sum of the elementwise products."""
    return math.fsum(np.multiply(x, y))


def _components(vector: Union[SampleVector, Sequence[float], np.ndarray]) -> np.ndarray:
    # The t_0 node is left out of the sums; plain vectors are used as given
    if isinstance(vector, SampleVector):
        return vector.values[1:]
    return np.asarray(vector, dtype=np.float64)


def cosim_discrete(X, Y) -> float:
    """
    Cosine similarity sum(x_k y_k) / (|X| |Y|).

    SampleVectors are summed over k = 1..s; plain sequences over all entries.
    """
    x = _components(X)
    y = _components(Y)
    if x.shape != y.shape:
        raise LengthMismatchError(f"cannot compare vectors of length {len(x)} and {len(y)}")
    xx = compensated_dot(x, x)
    yy = compensated_dot(y, y)
    if xx == 0.0 or yy == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for a zero vector")
    return compensated_dot(x, y) / math.sqrt(xx * yy)


def cons_discrete(f: float, g: float, N: int, A, B, T: float = None,
                  s: int = DEFAULT_RATE, M: int = None) -> float:
    """
    Discrete consonance of the complex tones w_c(f, N, A) and w_c(g, M, B).

    :param T: duration, defaults to 4/min(f, g)
    :param s: sampling rate
    :param M: depth of the second tone, defaults to N
    """
    M = N if M is None else M
    if T is None:
        T = default_duration(min(f, g))
    X = sample(ComplexTone(f, N, A), T, s)
    Y = sample(ComplexTone(g, M, B), T, s)
    return cosim_discrete(X, Y)
