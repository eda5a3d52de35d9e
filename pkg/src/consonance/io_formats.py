'''
Curve documents (CSV and JSON), study tables, and WAV rendering of tones.

CSV curves are a `r,value` header followed by one row per point, every number
rendered with 17 significant digits. JSON curves carry the engine, tone
context and grid next to a `points` array of [r, value] pairs. Every writer
goes through a temporary file in the destination directory and a rename, so
a failed run never leaves a partial file behind.
'''
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import polars as pl
from scipy.io import wavfile

from consonance.curve_lab import DISCRETE, ConsonanceCurve, CurveContext, Engine, RatioGrid
from consonance.exceptions import CurveParseError, CurveSchemaError, EmptyCurveError, ToneError
from consonance.similarity import DEFAULT_RATE
from consonance.tone_model import ComplexTone, MixedTone, PureTone, Tone, evaluate

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
CSV_HEADER = "r,value"
FLOAT_FORMAT = "%.17g"
DOCUMENT_KIND = "consonance-curve"
DOCUMENT_VERSION = 1
FULL_SCALE_16 = 32767


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    return fmt


def infer_format(path: Union[str, Path], default: str = "csv") -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    return suffix if suffix in FORMATS else default


def _atomic_write(destination: Union[str, Path], write) -> Path:
    destination = Path(destination)
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{destination.name}.", suffix=".tmp", dir=destination.parent)
        os.close(fd)
        try:
            write(tmp)
            os.replace(tmp, destination)
        finally:
            if os.path.exists(tmp):
                os.remove(tmp)
    except OSError as e:
        raise OSError(f"cannot write {destination}: {e}") from e
    logger.debug(f"wrote {destination}")
    return destination


##################
###   CURVES   ###
##################

def _render(values: np.ndarray) -> list:
    return [FLOAT_FORMAT % x for x in values]


def _metadata(curve: ConsonanceCurve) -> dict:
    engine = None
    if curve.engine is not None:
        engine = {"kind": curve.engine.kind}
        if curve.engine.kind == DISCRETE:
            engine["rate"] = curve.engine.rate
    grid = None
    if curve.grid is not None:
        grid = {"r_min": curve.grid.r_min, "r_max": curve.grid.r_max, "step": curve.grid.step, "loose": curve.grid.loose}
    return {
        "kind": DOCUMENT_KIND,
        "version": DOCUMENT_VERSION,
        "engine": engine,
        "context": curve.context.metadata() if curve.context is not None else None,
        "grid": grid,
    }


def curve_to_csv(curve: ConsonanceCurve) -> str:
    frame = pl.DataFrame({"r": _render(curve.ratios), "value": _render(curve.values)})
    return frame.write_csv(line_terminator="\n")


def curve_to_json(curve: ConsonanceCurve) -> str:
    document = _metadata(curve)
    document["points"] = [[float(r), float(v)] for r, v in zip(curve.ratios, curve.values)]
    return json.dumps(document, indent=1) + "\n"


def write_curve(curve: ConsonanceCurve, fmt: str, destination: Union[str, Path]) -> Path:
    """
    Write a curve as CSV or JSON (UTF-8, LF line endings).

    :param curve: non-empty curve
    :param fmt: "csv" or "json"
    :param destination: output path
    """
    _check_format(fmt)
    if len(curve) == 0:
        raise EmptyCurveError("refusing to write an empty curve")
    text = curve_to_csv(curve) if fmt == "csv" else curve_to_json(curve)

    def write(path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)

    return _atomic_write(destination, write)


def _locate_csv_error(text: str) -> CurveParseError:
    # Finds the first malformed line; line numbers are 1-based, offsets 0-based columns
    lines = text.split("\n")
    if lines[0].rstrip("\r") != CSV_HEADER:
        return CurveParseError(f"expected header {CSV_HEADER!r}, got {lines[0]!r}", line=1, offset=0)
    for number, line in enumerate(lines[1:], start=2):
        if line == "" and number == len(lines):
            break
        fields = line.split(",")
        if len(fields) != 2:
            return CurveParseError(f"expected 2 fields, got {len(fields)}", line=number, offset=0)
        offset = 0
        for field in fields:
            try:
                float(field)
            except ValueError:
                return CurveParseError(f"not a number: {field!r}", line=number, offset=offset)
            offset += len(field) + 1
    return CurveParseError("malformed CSV curve")


def curve_from_csv(text: str) -> ConsonanceCurve:
    if text.split("\n", 1)[0].rstrip("\r") != CSV_HEADER:
        raise _locate_csv_error(text)
    try:
        frame = pl.read_csv(io.BytesIO(text.encode("utf-8")), schema={"r": pl.Float64, "value": pl.Float64})
    except pl.exceptions.PolarsError as e:
        error = _locate_csv_error(text)
        raise error from e
    if frame["r"].null_count() or frame["value"].null_count():
        raise _locate_csv_error(text)
    return ConsonanceCurve(frame["r"].to_numpy(), frame["value"].to_numpy())


def _require(document: dict, key: str):
    if key not in document:
        raise CurveSchemaError(f"curve document lacks {key!r}")
    return document[key]


def curve_from_json(text: str) -> ConsonanceCurve:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise CurveParseError(e.msg, line=e.lineno, offset=e.colno) from e
    if not isinstance(document, dict):
        raise CurveSchemaError("curve document must be a JSON object")
    engine = _require(document, "engine")
    context = _require(document, "context")
    grid = _require(document, "grid")
    points = _require(document, "points")
    if not isinstance(points, list) or any(not isinstance(p, list) or len(p) != 2 for p in points):
        raise CurveSchemaError("points must be a list of [r, value] pairs")
    try:
        if engine is not None:
            engine = Engine(_require(engine, "kind"), engine.get("rate", DEFAULT_RATE))
        if context is not None:
            context = CurveContext(*(_require(context, key) for key in ("f", "N", "M", "A", "B", "T")),
                                   context.get("decay"))
        if grid is not None:
            grid = RatioGrid(*(_require(grid, key) for key in ("r_min", "r_max", "step")), grid.get("loose", False))
        values = np.array(points, dtype=np.float64).reshape(len(points), 2)
    except CurveSchemaError:
        raise
    except (TypeError, ValueError) as e:
        raise CurveSchemaError(f"invalid curve metadata: {e}") from e
    return ConsonanceCurve(values[:, 0], values[:, 1], engine, context, grid)


def read_curve(source: Union[str, Path], fmt: str = None) -> ConsonanceCurve:
    """
    Read a curve written by write_curve.

    :param source: path of the document
    :param fmt: "csv" or "json", inferred from the suffix when omitted
    """
    fmt = _check_format(fmt or infer_format(source))
    with open(source, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    return curve_from_csv(text) if fmt == "csv" else curve_from_json(text)


##################
###   TABLES   ###
##################

def write_table(frame: pl.DataFrame, fmt: str, destination: Union[str, Path]) -> Path:
    """Write a study or peak table as CSV or row-oriented JSON."""
    _check_format(fmt)

    def write(path):
        if fmt == "csv":
            frame.write_csv(path, line_terminator="\n")
        else:
            frame.write_json(path)

    return _atomic_write(destination, write)


###############
###   WAV   ###
###############

@dataclass(frozen=True)
class WavSpec:
    sample_rate: int = 44100
    bit_depth: int = 16
    channels: int = 1
    duration: float = 1.0
    normalization: float = 0.9  # peak as a fraction of full scale

    def __post_init__(self):
        if int(self.sample_rate) != self.sample_rate or self.sample_rate < 1:
            raise ToneError(f"sample rate must be a positive integer, got {self.sample_rate}")
        if self.bit_depth != 16 or self.channels != 1:
            raise ToneError(f"only 16-bit mono output is supported, got {self.bit_depth}-bit x {self.channels}")
        if not self.duration > 0:
            raise ToneError(f"duration must be positive, got {self.duration}")
        if not 0 < self.normalization <= 1:
            raise ToneError(f"normalization must lie in (0, 1], got {self.normalization}")

    @property
    def frames(self) -> int:
        return int(round(self.sample_rate * self.duration))


def synthesize(tones: Union[Tone, Sequence[Tone]], spec: WavSpec = WavSpec()) -> np.ndarray:
    """
    Sum the tones at t = k / sample_rate and quantize to 16-bit PCM with the
    peak at spec.normalization of full scale.
    """
    if isinstance(tones, (PureTone, ComplexTone, MixedTone)):
        tones = [tones]
    if not 1 <= len(tones) <= 2:
        raise ToneError(f"render one or two tones, got {len(tones)}")
    t = np.arange(spec.frames, dtype=np.float64) / spec.sample_rate
    signal = np.zeros_like(t)
    for tone in tones:
        signal = signal + np.asarray(evaluate(tone, t))
    peak = float(np.max(np.abs(signal))) if signal.size else 0.0
    if peak == 0.0:
        raise ToneError("the tones are silent at this sample rate")
    return np.round(signal * (spec.normalization * FULL_SCALE_16 / peak)).astype(np.int16)


def render_wav(tones: Union[Tone, Sequence[Tone]], spec: WavSpec, destination: Union[str, Path]) -> Path:
    """
    Write one tone, or two tones mixed by summation, as a RIFF/WAVE PCM file.

    :param tones: a tone or a sequence of one or two tones
    :param spec: sample rate, duration and normalization
    :param destination: output path
    """
    samples = synthesize(tones, spec)
    return _atomic_write(destination, lambda path: wavfile.write(path, spec.sample_rate, samples))
