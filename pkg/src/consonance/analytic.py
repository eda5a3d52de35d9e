'''
Closed-form continuous cosine similarity of complex tones.

For harmonics w(nf, t) and w(mrf, t) on [0, T]

    int w(nf) w(mrf) dt = (1/(4 pi f)) [ sin(2 pi fT (rm-n))/(rm-n) - sin(2 pi fT (rm+n))/(rm+n) ]
                        = (T/2) [ sinc(2 pi fT (rm-n)) - sinc(2 pi fT (rm+n)) ]
                        = (T/2) AC(n, m, r, fT)

so everything below depends on (f, T) only through the product fT. The
quadrature oracle at the bottom is an independent check built on scipy.
'''
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from consonance.exceptions import NonConvergenceError, ToneError, ZeroVectorError
from consonance.tone_model import (
    ComplexTone,
    MixedTone,
    PureTone,
    Tone,
    TWO_PI,
    amplitude_array,
    highest_frequency,
    sin_cycles,
)

SINC_SERIES_CUTOFF = 1e-6
COROLLARY_CONSTANT = 10.0  # frozen from a brute-force r-grid scan at T = 4/f
QUADRATURE_TOLERANCE = 1e-11
QUADRATURE_LIMIT = 50  # subdivisions per panel
QUADRATURE_BUDGET = 2 ** 20  # total panels * subdivisions


def sinc_cycles(cycles):
    """
    sin(x)/x for x = 2 pi c, with the Taylor series 1 - x^2/6 + x^4/120 near
    the removable singularity.
    """
    cycles = np.asarray(cycles, dtype=np.float64)
    x = TWO_PI * cycles
    small = np.abs(x) < SINC_SERIES_CUTOFF
    safe_x = np.where(small, 1.0, x)
    x2 = x * x
    value = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, sin_cycles(cycles) / safe_x)
    return value if value.ndim else float(value)


@dataclass(frozen=True)
class HarmonicPair:
    """Harmonic n of a tone at f paired with harmonic m of a tone at r*f."""
    n: int
    m: int
    r: float
    f: float
    T: float
    loose: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m or self.n < 1 or self.m < 1:
            raise ToneError(f"harmonic indices must be positive integers, got n={self.n}, m={self.m}")
        if not self.f > 0 or not self.T > 0:
            raise ToneError(f"f and T must be positive, got f={self.f}, T={self.T}")
        if not self.loose and not 1.0 <= self.r <= 2.0:
            raise ToneError(f"ratio {self.r} outside [1, 2]; pass loose=True for other ranges")
        if not self.r > 0:
            raise ToneError(f"ratio must be positive, got {self.r}")

    @property
    def fT(self) -> float:
        return self.f * self.T


def ac_values(n, m, r, fT):
    """AC(n, m, r) for a given fT, broadcasting over any mix of array arguments."""
    rm = np.multiply(r, m)
    return sinc_cycles(fT * (rm - n)) - sinc_cycles(fT * (rm + n))


def asymptotic_consonance(pair: HarmonicPair) -> float:
    """AC = (1/(2 pi fT)) [ sin(2 pi fT(rm-n))/(rm-n) - sin(2 pi fT(rm+n))/(rm+n) ]."""
    return float(ac_values(pair.n, pair.m, pair.r, pair.fT))


def cross_integral(pair: HarmonicPair) -> float:
    """Integral over [0, T] of sin(2 pi n f t) sin(2 pi m r f t)."""
    return 0.5 * pair.T * asymptotic_consonance(pair)


def _sine_energy(frequency, T):
    # Integral of sin^2(2 pi frequency t) over [0, T]
    frequency = np.asarray(frequency, dtype=np.float64)
    value = 0.5 * T - sin_cycles(2.0 * frequency * T) / (4.0 * TWO_PI * frequency)
    return value if value.ndim else float(value)


def self_integral(n: int, f: float, T: float) -> float:
    """
    Integral over [0, T] of sin^2(2 pi n f t) = T/2 - sin(4 pi n f T)/(8 pi n f).
    """
    if n < 1 or not f > 0 or not T > 0:
        raise ToneError(f"invalid self integral arguments n={n}, f={f}, T={T}")
    return _sine_energy(n * f, T)


def self_integral_bound(n: int, f: float) -> float:
    """Bound on |self_integral - T/2|."""
    return 1.0 / (8.0 * np.pi * n * f)


def _energy_terms(fT, T, amplitudes: np.ndarray) -> np.ndarray:
    # a_n a_m (T/2) AC(n, m, 1, fT) for all n, m; leading axes follow fT
    N = len(amplitudes)
    index = np.arange(1, N + 1, dtype=np.float64)
    fT = np.asarray(fT, dtype=np.float64)[..., None, None]
    ac = ac_values(index[:, None], index[None, :], 1.0, fT)
    weights = amplitudes[:, None] * amplitudes[None, :]
    return 0.5 * T * weights * ac


def tone_energy(f: float, N: int, A, T: float) -> float:
    """
    Exact integral over [0, T] of w_c(f, N, A, t)^2.

    :param f: base frequency
    :param N: depth
    :param A: amplitudes (length N)
    :param T: duration
    """
    amplitudes = amplitude_array(A)
    if len(amplitudes) != N:
        raise ToneError(f"{len(amplitudes)} amplitudes given for depth {N}")
    return math.fsum(_energy_terms(f * T, T, amplitudes).ravel())


def energy_bound(N: int, f: float) -> float:
    """Bound N^2 / (2 pi f) on the deviation of the tone energy from its diagonal part."""
    return N * N / (TWO_PI * f)


def consonance_values(f: float, N: int, M: int, A, B, T: float, ratios) -> np.ndarray:
    """
    Continuous consonance Cons(f, r f) for every ratio r.

    All sums are correctly rounded so each value is independent of how the
    ratios are batched.
    """
    a = amplitude_array(A)
    b = amplitude_array(B)
    if len(a) != N or len(b) != M:
        raise ToneError(f"amplitude lengths {len(a)}, {len(b)} do not match depths {N}, {M}")
    ratios = np.atleast_1d(np.asarray(ratios, dtype=np.float64))
    fT = f * T
    n = np.arange(1, N + 1, dtype=np.float64)[None, :, None]
    m = np.arange(1, M + 1, dtype=np.float64)[None, None, :]
    r = ratios[:, None, None]
    cross = 0.5 * T * (a[:, None] * b[None, :])[None] * ac_values(n, m, r, fT)
    cross = cross.reshape(len(ratios), N * M)
    first = math.fsum(_energy_terms(fT, T, a).ravel())
    second = _energy_terms(ratios * fT, T, b).reshape(len(ratios), M * M)
    values = np.empty(len(ratios))
    for i in range(len(ratios)):
        values[i] = math.fsum(cross[i]) / math.sqrt(first * math.fsum(second[i]))
    return values


def cons_continuous(f: float, g: float, N: int, M: int, A, B, T: float) -> float:
    """
    Continuous cosine similarity of w_c(f, N, A) and w_c(g, M, B) over [0, T].
    """
    if not f > 0 or not g > 0 or not T > 0:
        raise ToneError(f"f, g and T must be positive, got f={f}, g={g}, T={T}")
    return float(consonance_values(f, N, M, A, B, T, [g / f])[0])


def pure_tone_consonance(n: int, m: int, r, f: float, T: float):
    """Continuous cosine similarity of w(nf) and w(mrf); vectorised over r."""
    r = np.asarray(r, dtype=np.float64)
    cross = 0.5 * T * ac_values(n, m, r, f * T)
    value = cross / np.sqrt(_sine_energy(n * f, T) * _sine_energy(m * r * f, T))
    return value if value.ndim else float(value)


def corollary_error(n: int, m: int, r, f: float, T: float):
    """
    |Cons(nf, mrf) - AC(n, m, r)|, which is O(1/(nf)) for m <= n.
    """
    if m > n:
        raise ToneError(f"the error estimate needs m <= n, got n={n}, m={m}")
    r = np.asarray(r, dtype=np.float64)
    value = np.abs(pure_tone_consonance(n, m, r, f, T) - ac_values(n, m, r, f * T))
    return value if value.ndim else float(value)


def corollary_bound(n: int, f: float) -> float:
    return COROLLARY_CONSTANT / (n * f)


def corollary_envelope(n: int, m: int, r, f: float, T: float):
    """
    Upper bound on corollary_error implied by the self-integral bound.

    With e = 1/(4 pi k f T) for k = n and k = m r the energies lie within a
    factor (1 +- e) of T/2, and |AC| <= 1 + 1/(2 pi f T (m r + n)), so
    |Cons - AC| <= |AC| (1/sqrt((1 - e1)(1 - e2)) - 1).
    """
    r = np.asarray(r, dtype=np.float64)
    fT = f * T
    e1 = 1.0 / (2.0 * TWO_PI * n * fT)
    e2 = 1.0 / (2.0 * TWO_PI * m * r * fT)
    if e1 >= 1.0 or np.any(e2 >= 1.0):
        raise ToneError(f"envelope needs 4 pi k f T > 1 for k = n and k = m r, got n={n}, m={m}, fT={fT}")
    ac_bound = 1.0 + 1.0 / (TWO_PI * fT * (m * r + n))
    value = ac_bound * (1.0 / np.sqrt((1.0 - e1) * (1.0 - e2)) - 1.0)
    return value if value.ndim else float(value)


#############################
###   QUADRATURE ORACLE   ###
#############################

def _scalar_evaluator(tone: Tone):
    # math.sin and fsum only; shares no code with the numpy evaluators
    if isinstance(tone, PureTone):
        partials = [(tone.frequency, 1.0)]
        phase = tone.phase_shift
    elif isinstance(tone, ComplexTone):
        partials = [(n * tone.base_frequency, a) for n, a in enumerate(tone.amplitudes.entries, start=1)]
        phase = 0.0
    elif isinstance(tone, MixedTone):
        partials = list(zip(tone.frequencies, tone.amplitudes.entries))
        phase = 0.0
    else:
        raise TypeError(f"not a tone: {tone!r}")

    def value(t: float) -> float:
        return math.fsum(a * math.sin(2.0 * math.pi * freq * t + phase) for freq, a in partials)

    return value


def _adaptive_integral(func, T: float, panels: int, tol: float) -> float:
    edges = np.linspace(0.0, T, panels + 1)
    values = []
    total_error = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            try:
                value, error = quad(func, lo, hi, epsabs=tol / panels, epsrel=0.0, limit=QUADRATURE_LIMIT)
            except IntegrationWarning as e:
                raise NonConvergenceError(f"quadrature failed on [{lo}, {hi}]: {e}") from e
            values.append(value)
            total_error += error
    if total_error > tol:
        raise NonConvergenceError(f"quadrature error estimate {total_error:.3e} exceeds {tol:.1e}")
    return math.fsum(values)


def quadrature_oracle(u: Tone, v: Tone, T: float, tol: float = QUADRATURE_TOLERANCE) -> float:
    """
    Continuous cosine similarity of two tones by adaptive Gauss-Kronrod
    quadrature (one panel per period of the fastest product term).

    :param u: first tone
    :param v: second tone
    :param T: duration
    :param tol: absolute tolerance for each of the three integrals
    """
    if not T > 0:
        raise ToneError(f"duration must be positive, got {T}")
    panels = max(1, math.ceil(2.0 * max(highest_frequency(u), highest_frequency(v)) * T))
    if panels * QUADRATURE_LIMIT > QUADRATURE_BUDGET:
        raise NonConvergenceError(f"{panels} panels exceed the quadrature budget of {QUADRATURE_BUDGET}")
    eval_u = _scalar_evaluator(u)
    eval_v = _scalar_evaluator(v)
    uv = _adaptive_integral(lambda t: eval_u(t) * eval_v(t), T, panels, tol)
    uu = _adaptive_integral(lambda t: eval_u(t) ** 2, T, panels, tol)
    vv = _adaptive_integral(lambda t: eval_v(t) ** 2, T, panels, tol)
    if uu <= 0.0 or vv <= 0.0:
        raise ZeroVectorError("tone has zero energy over the interval")
    return uv / math.sqrt(uu * vv)


def quadrature_integral(func, T: float, tol: float = QUADRATURE_TOLERANCE, panels: int = 1) -> float:
    """Adaptive integral of an arbitrary scalar function over [0, T]."""
    return _adaptive_integral(func, T, panels, tol)
