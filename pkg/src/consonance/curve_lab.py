'''
Consonance curves over the ratio axis r in [1, 2]: sweeps (continuous or
sampled engine), peak detection with parabolic refinement, just-intonation
labelling of the peaks, and the depth / frequency / decay studies.
'''
import logging
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from multiprocessing import Pool, cpu_count
from typing import List, Optional, Sequence

import numpy as np
import polars as pl
from scipy.signal import find_peaks, peak_widths
from tqdm import tqdm

from consonance.analytic import (
    ac_values,
    consonance_values,
    corollary_bound,
    corollary_envelope,
    corollary_error,
    quadrature_oracle,
    tone_energy,
)
from consonance.exceptions import ConfigError, CurveSchemaError, EmptyCurveError, ToneError
from consonance.similarity import DEFAULT_RATE, cosim_discrete, sample
from consonance.tone_model import (
    AmplitudeVector,
    ComplexTone,
    amplitude_array,
    default_duration,
    geometric_amplitudes,
    unit_amplitudes,
)

logger = logging.getLogger(__name__)

CONTINUOUS = "continuous"
DISCRETE = "discrete"
ENGINE_KINDS = (CONTINUOUS, DISCRETE)

DEFAULT_FREQUENCY = 440.0
DEFAULT_DEPTH = 6
DEFAULT_STEP = 1e-4
DEFAULT_PROMINENCE = 0.02
DEFAULT_SEPARATION = 0.02
DEFAULT_LABEL_TOLERANCE = 0.01
CLASSIFY_TOLERANCE = 0.005
LABEL_MAX_HARMONIC = 8  # used when a curve carries no tone context
FIFTH_WINDOW = 0.02  # search radius around 3/2 for the frequency study
SWEEP_CHUNK = 500  # grid points per task, fixed so results never depend on the worker count

INTERVAL_NAMES = {
    Fraction(1, 1): "P1",
    Fraction(6, 5): "m3",
    Fraction(5, 4): "M3",
    Fraction(4, 3): "P4",
    Fraction(3, 2): "P5",
    Fraction(8, 5): "m6",
    Fraction(5, 3): "M6",
    Fraction(2, 1): "P8",
}


@dataclass(frozen=True)
class CurveContext:
    """Both tones of a sweep: w_c(f, N, A) against w_c(r f, M, B) over [0, T]."""
    f: float
    N: int
    M: int
    A: AmplitudeVector
    B: AmplitudeVector
    T: float
    decay: Optional[float] = None

    def __post_init__(self):
        if not self.f > 0 or not math.isfinite(self.f):
            raise ToneError(f"base frequency must be positive, got {self.f}")
        if not self.T > 0 or not math.isfinite(self.T):
            raise ToneError(f"duration must be positive, got {self.T}")
        for name in ("A", "B"):
            value = getattr(self, name)
            if not isinstance(value, AmplitudeVector):
                object.__setattr__(self, name, AmplitudeVector(tuple(value)))
        if len(self.A) != self.N or len(self.B) != self.M:
            raise ToneError(f"amplitude lengths {len(self.A)}, {len(self.B)} do not match depths {self.N}, {self.M}")

    @classmethod
    def build(cls, f: float = DEFAULT_FREQUENCY, N: int = DEFAULT_DEPTH, M: int = None, amplitudes=None,
              second_amplitudes=None, decay: float = None, T: float = None) -> "CurveContext":
        """
        Resolve the usual shorthands: equal depths, equal amplitudes, unit
        amplitudes unless given, geometric amplitudes for a decay factor and
        T = 4/f unless given.
        """
        M = N if M is None else M
        if decay is not None and (amplitudes is not None or second_amplitudes is not None):
            raise ToneError("explicit amplitudes and a decay factor are mutually exclusive")
        if decay is not None:
            A, B = geometric_amplitudes(decay, N), geometric_amplitudes(decay, M)
        elif amplitudes is not None:
            A = amplitudes
            B = amplitudes if second_amplitudes is None else second_amplitudes
        else:
            A, B = unit_amplitudes(N), unit_amplitudes(M)
        T = default_duration(f) if T is None else T
        return cls(float(f), int(N), int(M), A, B, float(T), decay)

    @property
    def max_harmonic(self) -> int:
        return max(self.N, self.M)

    def metadata(self) -> dict:
        return {
            "f": self.f,
            "N": self.N,
            "M": self.M,
            "A": list(self.A.entries),
            "B": list(self.B.entries),
            "T": self.T,
            "decay": self.decay,
        }


@dataclass(frozen=True)
class Engine:
    kind: str = CONTINUOUS
    rate: int = DEFAULT_RATE

    def __post_init__(self):
        if self.kind not in ENGINE_KINDS:
            raise ConfigError(f"unknown engine {self.kind!r}, expected one of {ENGINE_KINDS}")
        if int(self.rate) != self.rate or self.rate < 1:
            raise ConfigError(f"sampling rate must be a positive integer, got {self.rate}")

    def describe(self) -> str:
        return CONTINUOUS if self.kind == CONTINUOUS else f"{DISCRETE}(s={self.rate})"


@dataclass(frozen=True)
class RatioGrid:
    r_min: float = 1.0
    r_max: float = 2.0
    step: float = DEFAULT_STEP
    loose: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigError(f"grid step must be positive, got {self.step}")
        if not self.r_min < self.r_max:
            raise ConfigError(f"r_min {self.r_min} must be below r_max {self.r_max}")
        if not self.r_min > 0:
            raise ConfigError(f"ratios must be positive, got r_min={self.r_min}")
        if not self.loose and not (1.0 <= self.r_min and self.r_max <= 2.0):
            raise ConfigError(f"grid [{self.r_min}, {self.r_max}] leaves [1, 2]; pass loose=True for other ranges")
        intervals = (self.r_max - self.r_min) / self.step
        if abs(intervals - round(intervals)) > 1e-9 * max(1.0, intervals):
            raise ConfigError(f"step {self.step} does not divide [{self.r_min}, {self.r_max}] into whole intervals")

    def __len__(self) -> int:
        return int(round((self.r_max - self.r_min) / self.step)) + 1

    def ratios(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, len(self))


@dataclass(frozen=True)
class DetectionParams:
    prominence: float = DEFAULT_PROMINENCE
    separation: float = DEFAULT_SEPARATION
    label_tolerance: float = DEFAULT_LABEL_TOLERANCE
    sidelobes: bool = False

    def __post_init__(self):
        if not self.prominence >= 0:
            raise ConfigError(f"prominence threshold must be non-negative, got {self.prominence}")
        if not self.separation > 0:
            raise ConfigError(f"minimum separation must be positive, got {self.separation}")
        if not self.label_tolerance >= 0:
            raise ConfigError(f"label tolerance must be non-negative, got {self.label_tolerance}")


@dataclass(frozen=True)
class IntervalLabel:
    n: int
    m: int
    name: str

    @property
    def fraction(self) -> str:
        return f"{self.n}/{self.m}"

    @property
    def value(self) -> float:
        return self.n / self.m


@dataclass(frozen=True)
class Peak:
    ratio: float
    value: float
    prominence: float
    width: float
    label: Optional[IntervalLabel] = None
    boundary: bool = False

    @property
    def name(self) -> str:
        return self.label.name if self.label is not None else "-"


@dataclass(frozen=True, eq=False)
class ConsonanceCurve:
    """Ordered (r, value) points plus whatever produced them (None when read from bare CSV)."""
    ratios: np.ndarray
    values: np.ndarray
    engine: Optional[Engine] = None
    context: Optional[CurveContext] = None
    grid: Optional[RatioGrid] = None

    def __post_init__(self):
        ratios = np.asarray(self.ratios, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if ratios.ndim != 1 or ratios.shape != values.shape:
            raise CurveSchemaError(f"ratios {ratios.shape} and values {values.shape} must be matching 1-d arrays")
        if len(ratios) > 1 and not np.all(np.diff(ratios) > 0):
            raise CurveSchemaError("curve ratios must be strictly increasing")
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.ratios)

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame({"r": self.ratios, "value": self.values})


##################
###   SWEEPS   ###
##################

def resolve_workers(workers: Optional[int]) -> int:
    """None picks cpu_count() - 2 (at least 1), like the batch pipelines."""
    if workers is None:
        return max(1, cpu_count() - 2)
    if int(workers) != workers or workers < 1:
        raise ConfigError(f"worker count must be a positive integer, got {workers}")
    return int(workers)


def _curve_chunk(job) -> np.ndarray:
    context, engine, ratios = job
    if engine.kind == CONTINUOUS:
        return consonance_values(context.f, context.N, context.M, context.A, context.B, context.T, ratios)
    X = sample(ComplexTone(context.f, context.N, context.A), context.T, engine.rate)
    values = np.empty(len(ratios))
    for i, r in enumerate(ratios):
        Y = sample(ComplexTone(r * context.f, context.M, context.B), context.T, engine.rate)
        values[i] = cosim_discrete(X, Y)
    return values


def sweep_curve(context: CurveContext, engine: Engine = Engine(), grid: RatioGrid = RatioGrid(),
                workers: Optional[int] = 1, progress: bool = False) -> ConsonanceCurve:
    """
    Consonance of f against r*f at every grid node.

    :param context: the two tones and the duration
    :param engine: continuous closed form or sampled vectors
    :param grid: ratio grid
    :param workers: worker processes (None for cpu_count() - 2); 1 runs in-process
    :param progress: show a tqdm bar for in-process sweeps
    :return: curve in grid order
    """
    start = time.time()
    workers = resolve_workers(workers)
    ratios = grid.ratios()
    jobs = [(context, engine, ratios[i:i + SWEEP_CHUNK]) for i in range(0, len(ratios), SWEEP_CHUNK)]

    if workers > 1 and len(jobs) > 1:
        with Pool(processes=min(workers, len(jobs))) as p:
            results = p.map(_curve_chunk, jobs)
    else:
        results = [_curve_chunk(job) for job in tqdm(jobs, disable=not progress, desc="sweep")]

    curve = ConsonanceCurve(ratios, np.concatenate(results), engine, context, grid)
    stop = time.time()
    logger.info(f"Swept {len(ratios)} ratios with the {engine.describe()} engine ({workers=}). "
                f"Time taken: {stop - start:.2f} seconds")
    return curve


##################################
###   INTERVAL CLASSIFICATION   ###
##################################

def _candidate_fractions(max_harmonic: int) -> List[Fraction]:
    candidates = set()
    for m in range(1, max_harmonic + 1):
        for n in range(m, min(2 * m, max_harmonic) + 1):
            candidates.add(Fraction(n, m))
    return sorted(candidates)


def classify_ratio(r: float, max_harmonic: int, tolerance: float = CLASSIFY_TOLERANCE) -> Optional[IntervalLabel]:
    """
    Nearest reduced fraction n/m in [1, 2] with 1 <= n, m <= max_harmonic.

    :param r: ratio to classify
    :param max_harmonic: largest numerator or denominator considered
    :param tolerance: largest accepted |r - n/m|
    :return: the fraction and its interval name, or None when nothing is within tolerance
    """
    if int(max_harmonic) != max_harmonic or max_harmonic < 1:
        raise ConfigError(f"max_harmonic must be a positive integer, got {max_harmonic}")
    if not r > 0:
        raise ConfigError(f"ratio must be positive, got {r}")
    best = min(_candidate_fractions(int(max_harmonic)), key=lambda q: (abs(r - q.numerator / q.denominator), q.denominator))
    if abs(r - best.numerator / best.denominator) > tolerance:
        return None
    return IntervalLabel(best.numerator, best.denominator, INTERVAL_NAMES.get(best, "other"))


##########################
###   PEAK DETECTION   ###
##########################

def _refine(values: np.ndarray, i: int):
    # Parabola through (i-1, i, i+1); returns the offset in samples and the vertex value
    k0, c, k2 = values[i - 1], values[i], values[i + 1]
    a = .5 * (k2 + k0 - 2 * c)
    b = .5 * (k2 - k0)
    if a >= 0:
        return 0.0, c
    return -b / a / 2., c - b * b / (4. * a)


def _boundary_peak(values: np.ndarray, step: float):
    # One-sided prominence and a mirrored half-prominence width for values[0]
    if not values[0] > values[1]:
        return None
    higher = np.nonzero(values[1:] > values[0])[0]
    stop = higher[0] + 1 if len(higher) else len(values)
    prominence = values[0] - values[:stop].min()
    level = values[0] - 0.5 * prominence
    j = np.nonzero(values[:stop] <= level)[0][0]
    crossing = (j - 1) + (values[j - 1] - level) / (values[j - 1] - values[j])
    return prominence, 2.0 * crossing * step


def detect_peaks(curve: ConsonanceCurve, params: DetectionParams = DetectionParams(),
                 max_harmonic: int = None) -> List[Peak]:
    """
    Local maxima of a consonance curve, refined and labelled.

    Interior maxima come from scipy.signal.find_peaks (prominence threshold,
    one peak per separation window) and are refined by a 3-point parabola.
    Grid endpoints are boundary peaks when the curve falls away from them.
    Unless params.sidelobes is set, only peaks that sit on a ratio n/m with
    n, m <= max_harmonic (the singular pairs) are kept.

    :param curve: curve with at least 3 points on a uniform grid
    :param params: detection parameters
    :param max_harmonic: defaults to max(N, M) of the curve context
    :return: peaks ordered by ratio
    """
    if len(curve) < 3:
        raise EmptyCurveError(f"peak detection needs at least 3 points, got {len(curve)}")
    r, v = curve.ratios, curve.values
    step = (r[-1] - r[0]) / (len(r) - 1)
    if max_harmonic is None and curve.context is not None:
        max_harmonic = curve.context.max_harmonic
    keep_all = params.sidelobes or max_harmonic is None
    label_harmonic = max_harmonic or LABEL_MAX_HARMONIC

    candidates = []
    for reverse in (False, True):
        found = _boundary_peak(v[::-1] if reverse else v, step)
        if found is not None and found[0] >= params.prominence:
            index = len(v) - 1 if reverse else 0
            candidates.append(Peak(float(r[index]), float(v[index]), float(found[0]), float(found[1]), boundary=True))

    distance = max(1, math.ceil(params.separation / step - 1e-9))
    index, properties = find_peaks(v, prominence=params.prominence, distance=distance)
    if len(index):
        prominences = properties["prominences"]
        widths = peak_widths(v, index, rel_height=0.5,
                             prominence_data=(prominences, properties["left_bases"], properties["right_bases"]))[0]
        for i, prominence, width in zip(index, prominences, widths):
            dx, value = _refine(v, i)
            ratio = float(r[i] + dx * step)
            if any(b.value >= value and abs(b.ratio - ratio) < params.separation for b in candidates if b.boundary):
                continue
            candidates.append(Peak(ratio, float(value), float(prominence), float(width * step)))

    peaks = []
    for peak in candidates:
        label = classify_ratio(peak.ratio, label_harmonic, params.label_tolerance)
        if label is None and not keep_all:
            logger.debug(f"Dropping side lobe at r={peak.ratio:.5f} (prominence {peak.prominence:.4f})")
            continue
        peaks.append(replace(peak, label=label))
    return sorted(peaks, key=lambda p: p.ratio)


def interior(peaks: Sequence[Peak]) -> List[Peak]:
    return [p for p in peaks if not p.boundary]


def peaks_table(peaks: Sequence[Peak]) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "interval": [p.label.fraction if p.label else "" for p in peaks],
            "location": [p.ratio for p in peaks],
            "value": [p.value for p in peaks],
            "prominence": [p.prominence for p in peaks],
            "width": [p.width for p in peaks],
            "name": [p.name for p in peaks],
            "boundary": [p.boundary for p in peaks],
        },
        schema={"interval": pl.Utf8, "location": pl.Float64, "value": pl.Float64, "prominence": pl.Float64,
                "width": pl.Float64, "name": pl.Utf8, "boundary": pl.Boolean},
    )


###################
###   STUDIES   ###
###################

def depth_study(f: float = DEFAULT_FREQUENCY, T: float = None, depths: Sequence[int] = range(1, 9),
                engine: Engine = Engine(), grid: RatioGrid = RatioGrid(),
                params: DetectionParams = DetectionParams(), workers: Optional[int] = 1) -> pl.DataFrame:
    """
    Interior peak count and interval set per depth (both tones share the depth).

    :return: table (depth, peak_count, ratios, intervals)
    """
    if len(depths) == 0:
        raise ConfigError("depth study needs at least one depth")
    rows = []
    for N in depths:
        context = CurveContext.build(f, N, T=T)
        peaks = interior(detect_peaks(sweep_curve(context, engine, grid, workers), params))
        rows.append({
            "depth": int(N),
            "peak_count": len(peaks),
            "ratios": " ".join(p.label.fraction if p.label else f"{p.ratio:.4f}" for p in peaks),
            "intervals": " ".join(p.name for p in peaks),
        })
        logger.info(f"depth {N}: {len(peaks)} interior peaks")
    return pl.DataFrame(rows, schema={"depth": pl.Int64, "peak_count": pl.Int64, "ratios": pl.Utf8, "intervals": pl.Utf8})


def nearest_fifth(peaks: Sequence[Peak]) -> Optional[Peak]:
    near = [p for p in interior(peaks) if abs(p.ratio - 1.5) <= FIFTH_WINDOW]
    return min(near, key=lambda p: abs(p.ratio - 1.5)) if near else None


def frequency_study(N: int = DEFAULT_DEPTH, T: float = 0.01, frequencies: Sequence[float] = (220.0, 440.0, 880.0, 1760.0),
                    engine: Engine = Engine(), grid: RatioGrid = RatioGrid(),
                    params: DetectionParams = DetectionParams(), workers: Optional[int] = 1) -> pl.DataFrame:
    """
    Peak statistics per base frequency at a fixed absolute duration T.

    The width column is the full width at half prominence of the peak nearest
    3/2, side lobes included.

    :return: table (frequency, fT, peak_count, fifth_location, fifth_prominence, fifth_width)
    """
    if len(frequencies) == 0:
        raise ConfigError("frequency study needs at least one frequency")
    if T is None or not T > 0:
        raise ConfigError(f"frequency study needs a fixed positive duration, got {T}")
    rows = []
    for f in frequencies:
        context = CurveContext.build(f, N, T=T)
        peaks = detect_peaks(sweep_curve(context, engine, grid, workers), replace(params, sidelobes=True))
        counted = [p for p in interior(peaks) if params.sidelobes or p.label is not None]
        fifth = nearest_fifth(peaks)
        rows.append({
            "frequency": float(f),
            "fT": context.f * context.T,
            "peak_count": len(counted),
            "fifth_location": fifth.ratio if fifth else None,
            "fifth_prominence": fifth.prominence if fifth else None,
            "fifth_width": fifth.width if fifth else None,
        })
        logger.info(f"f={f}: {len(counted)} interior peaks, fifth width {fifth.width if fifth else float('nan'):.5f}")
    return pl.DataFrame(rows, schema={"frequency": pl.Float64, "fT": pl.Float64, "peak_count": pl.Int64,
                                      "fifth_location": pl.Float64, "fifth_prominence": pl.Float64,
                                      "fifth_width": pl.Float64})


@dataclass(frozen=True, eq=False)
class DecayStudy:
    curve: ConsonanceCurve
    peaks: List[Peak]
    reference_curve: ConsonanceCurve
    reference_peaks: List[Peak]

    @property
    def intervals(self) -> set:
        return {p.name for p in interior(self.peaks)}

    @property
    def reference_intervals(self) -> set:
        return {p.name for p in interior(self.reference_peaks)}

    @property
    def same_intervals(self) -> bool:
        return self.intervals == self.reference_intervals

    def sup_distance(self) -> float:
        return float(np.max(np.abs(self.curve.values - self.reference_curve.values)))

    def table(self) -> pl.DataFrame:
        decayed = peaks_table(self.peaks).with_columns(pl.lit(f"decay {self.curve.context.decay}").alias("amplitudes"))
        reference = peaks_table(self.reference_peaks).with_columns(pl.lit("unit").alias("amplitudes"))
        return pl.concat([decayed, reference])


def decay_study(f: float = DEFAULT_FREQUENCY, T: float = None, N: int = DEFAULT_DEPTH, d: float = 0.8,
                engine: Engine = Engine(), grid: RatioGrid = RatioGrid(),
                params: DetectionParams = DetectionParams(), workers: Optional[int] = 1) -> DecayStudy:
    """
    Curve and peaks with geometric amplitudes [d, ..., d^N] next to the
    unit-amplitude reference at the same f, T and depth.
    """
    context = CurveContext.build(f, N, decay=d, T=T)
    reference = CurveContext.build(f, N, T=context.T)
    curve = sweep_curve(context, engine, grid, workers)
    reference_curve = sweep_curve(reference, engine, grid, workers)
    return DecayStudy(curve, detect_peaks(curve, params), reference_curve, detect_peaks(reference_curve, params))


############################
###   PAIR DIAGNOSTICS   ###
############################

def ac_curve(n: int, m: int, f: float = DEFAULT_FREQUENCY, T: float = None, grid: RatioGrid = RatioGrid()) -> pl.DataFrame:
    """AC(n, m, r) for a single harmonic pair over the grid."""
    if n < 1 or m < 1:
        raise ToneError(f"harmonic indices must be positive, got n={n}, m={m}")
    T = default_duration(f) if T is None else T
    ratios = grid.ratios()
    return pl.DataFrame({"r": ratios, "ac": np.asarray(ac_values(n, m, ratios, f * T), dtype=np.float64)})


def pair_contributions(context: CurveContext, ratios) -> pl.DataFrame:
    """
    Weighted share a_n b_m (T/2) AC(n, m, r) / sqrt(E_A E_B(r)) of every
    harmonic pair; summed over (n, m) at fixed r it gives the consonance.

    :return: long table (r, n, m, contribution)
    """
    ratios = np.atleast_1d(np.asarray(ratios, dtype=np.float64))
    a = amplitude_array(context.A)
    b = amplitude_array(context.B)
    first = tone_energy(context.f, context.N, context.A, context.T)
    frames = []
    for r in ratios:
        second = tone_energy(r * context.f, context.M, context.B, context.T)
        n = np.repeat(np.arange(1, context.N + 1), context.M)
        m = np.tile(np.arange(1, context.M + 1), context.N)
        share = 0.5 * context.T * a[n - 1] * b[m - 1] * ac_values(n, m, r, context.f * context.T) / math.sqrt(first * second)
        frames.append(pl.DataFrame({"r": np.full(len(n), r), "n": n, "m": m, "contribution": share}))
    return pl.concat(frames)


def corollary_study(pairs: Sequence = ((3, 2), (4, 3), (6, 5)), frequencies: Sequence[float] = (440.0, 880.0, 1760.0),
                    T: float = 0.01, grid: RatioGrid = RatioGrid(step=0.01)) -> pl.DataFrame:
    """
    Largest |Cons(nf, mrf) - AC(n, m, r)| over the grid for each pair and frequency.

    :return: table (n, m, frequency, max_error, at_ratio, envelope, bound)
    """
    ratios = grid.ratios()
    rows = []
    for n, m in pairs:
        for f in frequencies:
            error = corollary_error(n, m, ratios, f, T)
            i = int(np.argmax(error))
            rows.append({
                "n": n,
                "m": m,
                "frequency": float(f),
                "max_error": float(error[i]),
                "at_ratio": float(ratios[i]),
                "envelope": float(np.max(corollary_envelope(n, m, ratios, f, T))),
                "bound": corollary_bound(n, f),
            })
    return pl.DataFrame(rows)


#############################
###   ENGINE COMPARISON   ###
#############################

@dataclass(frozen=True, eq=False)
class EngineComparison:
    curve: ConsonanceCurve
    reference: ConsonanceCurve
    spot_checks: pl.DataFrame

    @property
    def engine_delta(self) -> float:
        return float(np.max(np.abs(self.curve.values - self.reference.values)))

    @property
    def oracle_delta(self) -> float:
        if self.spot_checks.height == 0:
            return 0.0
        return float(self.spot_checks["delta"].max())

    def passed(self, tol: float) -> bool:
        return self.engine_delta <= tol and self.oracle_delta <= tol


def compare_engines(context: CurveContext, engine: Engine = Engine(DISCRETE), grid: RatioGrid = RatioGrid(),
                    spot_checks: int = 20, seed: int = 0, workers: Optional[int] = 1) -> EngineComparison:
    """
    Sweep with `engine` and with the closed form, and check the closed form
    against adaptive quadrature at randomly drawn grid ratios.

    :param spot_checks: number of oracle evaluations
    :param seed: seed for drawing the spot-check ratios
    """
    reference = sweep_curve(context, Engine(CONTINUOUS), grid, workers)
    curve = reference if engine.kind == CONTINUOUS else sweep_curve(context, engine, grid, workers)

    rng = np.random.default_rng(seed)
    picks = np.sort(rng.choice(len(reference), size=min(spot_checks, len(reference)), replace=False))
    first = ComplexTone(context.f, context.N, context.A)
    rows = []
    for i in picks:
        r = float(reference.ratios[i])
        oracle = quadrature_oracle(first, ComplexTone(r * context.f, context.M, context.B), context.T)
        rows.append({"r": r, "closed_form": float(reference.values[i]), "oracle": oracle,
                     "delta": abs(oracle - float(reference.values[i]))})
    table = pl.DataFrame(rows, schema={"r": pl.Float64, "closed_form": pl.Float64, "oracle": pl.Float64, "delta": pl.Float64})
    return EngineComparison(curve, reference, table)
