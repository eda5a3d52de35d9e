'''
Command-line front end.

    python -m consonance curve   --freq 440 --depth 6 --out fig4_n6.csv
    python -m consonance peaks   --depth 8
    python -m consonance compare --step 0.01 --tol 1e-2
    python -m consonance study   depth --depths 1..8
    python -m consonance synth   --freq 440 --ratio 1.5 --seconds 2 --out fifth.wav
    python -m consonance ac      --n 5 --m 3

Exit codes: 0 ok, 1 compute or I/O error, 2 usage or configuration error.
Data goes to --out (relative paths resolve against $CONSONANCE_OUTPUT_DIR)
or to stdout; diagnostics go to stderr.
'''
import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from consonance import curve_lab, io_formats
from consonance.curve_lab import (
    CONTINUOUS,
    DISCRETE,
    CurveContext,
    DetectionParams,
    Engine,
    RatioGrid,
)
from consonance.exceptions import ConfigError, ConsonanceError
from consonance.similarity import DEFAULT_RATE
from consonance.tone_model import ComplexTone, default_duration

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
OUTPUT_DIR_ENV = "CONSONANCE_OUTPUT_DIR"
AUTO = "auto"


@dataclass(frozen=True)
class RunConfig:
    """Flags of one invocation, validated and resolved before any computation."""
    command: str
    context: CurveContext
    engine: Engine = Engine()
    grid: RatioGrid = RatioGrid()
    detection: DetectionParams = DetectionParams()
    kind: Optional[str] = None
    out: Optional[Path] = None
    fmt: str = "csv"
    workers: Optional[int] = None
    progress: bool = False
    tol: float = 1e-2
    spot_checks: int = 20
    seed: int = 0
    depths: Tuple[int, ...] = tuple(range(1, 9))
    frequencies: Tuple[float, ...] = (220.0, 440.0, 880.0, 1760.0)
    pairs: Tuple[Tuple[int, int], ...] = ((3, 2), (4, 3), (6, 5))
    ratio: Optional[float] = None
    wav: io_formats.WavSpec = io_formats.WavSpec()
    harmonics: Tuple[int, int] = (1, 1)


########################
###   FLAG PARSING   ###
########################

def _floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> Tuple[int, ...]:
    """Comma-separated integers or an inclusive range such as 1..8."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers such as 1,2,3 or 1..8, got {text!r}")


def _pairs(text: str) -> Tuple[Tuple[int, int], ...]:
    try:
        return tuple(tuple(int(k) for k in item.split(":")) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected pairs such as 3:2,4:3, got {text!r}")


def _add_common(parser):
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="debug diagnostics and progress bars")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="warnings and errors only")


def _add_tone(parser, amplitudes: bool = True, duration: str = AUTO):
    parser.add_argument("--freq", type=float, default=curve_lab.DEFAULT_FREQUENCY, help="base frequency f in Hz")
    parser.add_argument("--depth", type=int, default=curve_lab.DEFAULT_DEPTH, help="depth N of both tones")
    parser.add_argument("--second-depth", type=int, default=None, help="depth M of the second tone (default N)")
    parser.add_argument("--duration", default=duration, help="T in seconds, or 'auto' for 4/f")
    if amplitudes:
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--amplitudes", type=_floats, default=None, help="comma-separated a_1..a_N")
        group.add_argument("--decay", type=float, default=None, help="geometric amplitudes d, d^2, ..., d^N")


def _add_engine(parser, engine: str = CONTINUOUS):
    parser.add_argument("--engine", choices=(CONTINUOUS, DISCRETE), default=engine)
    parser.add_argument("--rate", type=int, default=DEFAULT_RATE, help="sampling rate s of the discrete engine")
    parser.add_argument("--workers", type=int, default=None, help="worker processes (default cpu_count - 2)")


def _add_grid(parser, step: float = curve_lab.DEFAULT_STEP):
    parser.add_argument("--r-min", type=float, default=1.0)
    parser.add_argument("--r-max", type=float, default=2.0)
    parser.add_argument("--step", type=float, default=step)
    parser.add_argument("--loose", action="store_true", help="allow ratio grids outside [1, 2]")


def _add_detection(parser):
    parser.add_argument("--prominence", type=float, default=curve_lab.DEFAULT_PROMINENCE)
    parser.add_argument("--separation", type=float, default=curve_lab.DEFAULT_SEPARATION)
    parser.add_argument("--label-tolerance", type=float, default=curve_lab.DEFAULT_LABEL_TOLERANCE)
    parser.add_argument("--sidelobes", action="store_true", help="also report maxima off the n/m ratios")


def _add_output(parser, required: bool = False):
    parser.add_argument("--out", default=None, required=required, help="output path (default stdout)")
    parser.add_argument("--format", choices=io_formats.FORMATS, default=None, help="default: from --out suffix, else csv")


def _sweep_flags(parser, engine: str = CONTINUOUS, amplitudes: bool = True, duration: str = AUTO):
    _add_tone(parser, amplitudes, duration)
    _add_engine(parser, engine)
    _add_grid(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="consonance", description="Consonance curves of modelled tones.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("curve", help="sweep the consonance curve over r")
    _sweep_flags(p)
    _add_output(p)

    p = commands.add_parser("peaks", help="detect and label the local maxima of the curve")
    _sweep_flags(p)
    _add_detection(p)
    _add_output(p)

    p = commands.add_parser("compare", help="compare an engine against the closed form and quadrature")
    _sweep_flags(p, engine=DISCRETE)
    p.add_argument("--tol", type=float, default=1e-2, help="largest accepted sup-norm delta")
    p.add_argument("--spot-checks", type=int, default=20, help="quadrature evaluations")
    p.add_argument("--seed", type=int, default=0)

    study = commands.add_parser("study", help="depth, frequency, decay and error-decay studies")
    kinds = study.add_subparsers(dest="kind", required=True)

    p = kinds.add_parser("depth", help="interior peaks per depth")
    _sweep_flags(p, amplitudes=False)
    _add_detection(p)
    _add_output(p)
    p.add_argument("--depths", type=_ints, default=tuple(range(1, 9)), help="e.g. 1..8 or 3,4,5,6")

    p = kinds.add_parser("frequency", help="peaks and fifth width per base frequency at fixed T")
    _sweep_flags(p, amplitudes=False, duration="0.01")
    _add_detection(p)
    _add_output(p)
    p.add_argument("--freqs", type=_floats, default=(220.0, 440.0, 880.0, 1760.0))

    p = kinds.add_parser("decay", help="geometric amplitudes against unit amplitudes")
    _sweep_flags(p, amplitudes=False)
    _add_detection(p)
    _add_output(p)
    p.add_argument("--d", "--decay", dest="decay", type=float, default=0.8, help="decay factor in (0, 1)")

    p = kinds.add_parser("corollary", help="largest |Cons - AC| per harmonic pair and frequency")
    _add_tone(p, amplitudes=False, duration="0.01")
    _add_grid(p, step=0.01)
    _add_output(p)
    p.add_argument("--pairs", type=_pairs, default=((3, 2), (4, 3), (6, 5)), help="n:m pairs with m <= n")
    p.add_argument("--freqs", type=_floats, default=(440.0, 880.0, 1760.0))

    p = commands.add_parser("synth", help="render f (and r f) to a WAV file")
    _add_tone(p)
    _add_output(p, required=True)
    p.add_argument("--ratio", type=float, default=None, help="second tone at ratio * freq")
    p.add_argument("--seconds", type=float, default=1.0)
    p.add_argument("--sample-rate", type=int, default=44100)

    p = commands.add_parser("ac", help="AC(n, m, r) trace of one harmonic pair")
    _add_tone(p, amplitudes=False)
    _add_grid(p)
    _add_output(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=1)

    for sub in list(commands.choices.values()) + list(kinds.choices.values()):
        if sub is not study:
            _add_common(sub)
    return parser


def _duration(text: str, f: float) -> float:
    if text == AUTO:
        return default_duration(f)
    try:
        T = float(text)
    except ValueError:
        raise ConfigError(f"--duration must be a number of seconds or {AUTO!r}, got {text!r}")
    if not T > 0:
        raise ConfigError(f"--duration must be positive, got {T}")
    return T


def _output_path(out: Optional[str]) -> Optional[Path]:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Turn parsed flags into a RunConfig; every invalid value is reported as a
    ConfigError before anything is computed or written.
    """
    try:
        T = _duration(args.duration, args.freq)
        context = CurveContext.build(args.freq, args.depth, args.second_depth,
                                     amplitudes=getattr(args, "amplitudes", None),
                                     decay=getattr(args, "decay", None) if args.command != "study" else None, T=T)
        settings = {"command": args.command, "context": context, "kind": getattr(args, "kind", None)}
        if hasattr(args, "engine"):
            settings["engine"] = Engine(args.engine, args.rate)
            settings["workers"] = curve_lab.resolve_workers(args.workers)
        if hasattr(args, "step"):
            settings["grid"] = RatioGrid(args.r_min, args.r_max, args.step, args.loose)
        if hasattr(args, "prominence"):
            settings["detection"] = DetectionParams(args.prominence, args.separation, args.label_tolerance, args.sidelobes)
        if hasattr(args, "out"):
            settings["out"] = _output_path(args.out)
            settings["fmt"] = args.format or (io_formats.infer_format(args.out) if args.out else "csv")
        if args.command == "compare":
            if args.spot_checks < 0:
                raise ConfigError(f"--spot-checks must be non-negative, got {args.spot_checks}")
            settings.update(tol=args.tol, spot_checks=args.spot_checks, seed=args.seed)
        if args.command == "study":
            settings.update(_study_settings(args))
        if args.command == "synth":
            if args.ratio is not None and not args.ratio > 0:
                raise ConfigError(f"--ratio must be positive, got {args.ratio}")
            settings["ratio"] = args.ratio
            settings["wav"] = io_formats.WavSpec(sample_rate=args.sample_rate, duration=args.seconds)
        if args.command == "ac":
            if args.n < 1 or args.m < 1:
                raise ConfigError(f"--n and --m must be positive, got {args.n}, {args.m}")
            settings["harmonics"] = (args.n, args.m)
        return RunConfig(progress=args.verbose, **settings)
    except ConfigError:
        raise
    except (ConsonanceError, ValueError) as e:
        raise ConfigError(str(e)) from e


def _study_settings(args) -> dict:
    if args.kind == "depth":
        if not args.depths or min(args.depths) < 1:
            raise ConfigError(f"--depths must be positive integers, got {args.depths}")
        return {"depths": args.depths}
    if args.kind in ("frequency", "corollary"):
        if args.duration == AUTO:
            raise ConfigError(f"the {args.kind} study needs a fixed --duration in seconds")
        if not args.freqs or min(args.freqs) <= 0:
            raise ConfigError(f"--freqs must be positive, got {args.freqs}")
        if args.kind == "corollary":
            if any(len(p) != 2 or p[1] > p[0] or p[1] < 1 for p in args.pairs):
                raise ConfigError(f"--pairs must be n:m with 1 <= m <= n, got {args.pairs}")
            return {"frequencies": args.freqs, "pairs": args.pairs}
        return {"frequencies": args.freqs}
    if not 0 < args.decay < 1:
        raise ConfigError(f"--d must lie in (0, 1), got {args.decay}")
    context = CurveContext.build(args.freq, args.depth, args.second_depth, decay=args.decay,
                                 T=_duration(args.duration, args.freq))
    return {"context": context}


####################
###   COMMANDS   ###
####################

def _emit_table(frame, config: RunConfig):
    if config.out is None:
        sys.stdout.write(frame.write_csv(line_terminator="\n"))
    else:
        io_formats.write_table(frame, config.fmt, config.out)
        logger.info(f"wrote {config.out}")


def _sweep(config: RunConfig):
    return curve_lab.sweep_curve(config.context, config.engine, config.grid, config.workers, config.progress)


def cmd_curve(config: RunConfig) -> int:
    curve = _sweep(config)
    if config.out is None:
        sys.stdout.write(io_formats.curve_to_csv(curve) if config.fmt == "csv" else io_formats.curve_to_json(curve))
    else:
        io_formats.write_curve(curve, config.fmt, config.out)
        logger.info(f"wrote {len(curve)} points to {config.out}")
    return EXIT_OK


def cmd_peaks(config: RunConfig) -> int:
    peaks = curve_lab.detect_peaks(_sweep(config), config.detection)
    table = curve_lab.peaks_table(peaks)
    if config.out is not None:
        _emit_table(table, config)
        return EXIT_OK
    print(f"{'interval':<9} {'location':>10} {'value':>10} {'prominence':>11} {'width':>9}  name")
    for p in peaks:
        interval = p.label.fraction if p.label else "-"
        print(f"{interval:<9} {p.ratio:>10.5f} {p.value:>10.5f} {p.prominence:>11.5f} {p.width:>9.5f}  "
              f"{p.name}{' (boundary)' if p.boundary else ''}")
    return EXIT_OK


def cmd_compare(config: RunConfig) -> int:
    result = curve_lab.compare_engines(config.context, config.engine, config.grid, config.spot_checks, config.seed,
                                       config.workers)
    print(f"engine delta ({config.engine.describe()} vs {CONTINUOUS}): {result.engine_delta:.3e}")
    print(f"oracle delta (quadrature vs {CONTINUOUS}, {result.spot_checks.height} points): {result.oracle_delta:.3e}")
    if not result.passed(config.tol):
        logger.error(f"deltas exceed the tolerance {config.tol:g}")
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_study(config: RunConfig) -> int:
    context = config.context
    if config.kind == "depth":
        frame = curve_lab.depth_study(context.f, context.T, config.depths, config.engine, config.grid,
                                      config.detection, config.workers)
    elif config.kind == "frequency":
        frame = curve_lab.frequency_study(context.N, context.T, config.frequencies, config.engine, config.grid,
                                          config.detection, config.workers)
    elif config.kind == "decay":
        study = curve_lab.decay_study(context.f, context.T, context.N, context.decay, config.engine, config.grid,
                                      config.detection, config.workers)
        logger.info(f"decay {context.decay}: {sorted(study.intervals)}; unit amplitudes: "
                    f"{sorted(study.reference_intervals)}; same interval set: {study.same_intervals}")
        frame = study.table()
    else:
        frame = curve_lab.corollary_study(config.pairs, config.frequencies, context.T, config.grid)
    _emit_table(frame, config)
    return EXIT_OK


def cmd_synth(config: RunConfig) -> int:
    context = config.context
    tones = [ComplexTone(context.f, context.N, context.A)]
    if config.ratio is not None:
        tones.append(ComplexTone(config.ratio * context.f, context.M, context.B))
    io_formats.render_wav(tones, config.wav, config.out)
    logger.info(f"wrote {config.wav.duration:g} s of audio to {config.out}")
    return EXIT_OK


def cmd_ac(config: RunConfig) -> int:
    n, m = config.harmonics
    _emit_table(curve_lab.ac_curve(n, m, config.context.f, config.context.T, config.grid), config)
    return EXIT_OK


COMMANDS = {
    "curve": cmd_curve,
    "peaks": cmd_peaks,
    "compare": cmd_compare,
    "study": cmd_study,
    "synth": cmd_synth,
    "ac": cmd_ac,
}


class StderrHandler(logging.StreamHandler):
    """Stream handler that looks up sys.stderr on every record."""

    def __init__(self):
        logging.Handler.__init__(self)

    @property
    def stream(self):
        return sys.stderr


def configure_logging(verbose: bool = False, quiet: bool = False):
    """Send the package diagnostics to stderr."""
    package = logging.getLogger("consonance")
    handler = StderrHandler()
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    for old in list(package.handlers):
        package.removeHandler(old)
    package.addHandler(handler)
    package.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)
    package.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_USAGE
    configure_logging(args.verbose, args.quiet)

    try:
        config = resolve_config(args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_USAGE

    start = time.time()
    try:
        code = COMMANDS[config.command](config)
    except (ConsonanceError, OSError) as e:
        logger.error(str(e))
        return EXIT_RUNTIME
    stop = time.time()
    logger.info(f"Time taken: {stop - start:.2f} seconds")
    return code


if __name__ == "__main__":
    sys.exit(main())
