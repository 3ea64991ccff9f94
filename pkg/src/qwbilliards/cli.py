"""Command-line runner.

Subcommands: evolve, spectrum, dispersion, billiard2d, spacing, classify,
selftest.  Options can also come from a flat key=value config file
(``--config``); explicit flags win on conflict and unknown keys are
rejected.  Every output embeds the resolved configuration and the package
version in its header comments, and identical invocations produce
byte-identical files.

Exit codes: 0 success, 2 invalid configuration, 3 numerical validation
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .billiard2d import Billiard2DSpec, combine_spectra, tensor_spectrum
from .evolution import run, to_csv as evolution_to_csv
from .lattice import CurvedPath, PathFunction, make_delta_state
from .level_stats import (
    SpacingSequence,
    classify,
    histogram,
    histogram_to_csv,
    normalized_sequence,
    spacings_from_spectrum,
    spacings_to_csv,
)
from .operators import BilliardSpec, ElectricField, OperatorOrder, compose_step
from .selftest import run_selftest
from .spectral import (
    BlochParams,
    BlochVariant,
    SpectrumResult,
    UnitarityError,
    bloch_curved,
    bloch_kind1,
    bloch_kind2,
    dispersion_scan,
    dispersion_to_csv,
    eigenphases,
    spectrum_to_csv,
)
from .svgplot import render_svg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_PI = math.pi
_QUARTER_TURN = math.pi / 4
_PATH_NAMES = ("line", "sin", "cos", "cosh", "tanh")


class ConfigError(ValueError):
    """Invalid flag/config-file combination; maps to exit code 2."""


@dataclass(frozen=True)
class Opt:
    """One resolvable option: CLI flag, config-file key and default."""

    name: str
    type: Callable[[str], Any]
    default: Any
    help: str
    choices: tuple | None = None
    flag_const: Any = None  # set for boolean switches (store_const)
    flag_name: str | None = None  # override for e.g. --no-circular

    @property
    def flag(self) -> str:
        return self.flag_name or "--" + self.name.replace("_", "-")


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _billiard_opts() -> list[Opt]:
    return [
        Opt("kind", int, 1, "bounce mechanism (1: spin flip, 2: two-unit moves)", (1, 2)),
        Opt("n", int, 12, "number of grid points (alpha grid 0..n-1, step 1)"),
        Opt("theta", float, _QUARTER_TURN, "coin angle in radians"),
        Opt("path", str, "line", "billiard path shape", _PATH_NAMES),
        Opt("alpha_left", float, None, "left end of the alpha range (with --alpha-right/--alpha-step, overrides --n)"),
        Opt("alpha_right", float, None, "right end of the alpha range"),
        Opt("alpha_step", float, None, "leap between neighbouring alpha grid points"),
        Opt("phi", float, 0.0, "electric phase strength (0 disables the field)"),
        Opt("phi_origin", int, None, "site taken as electric origin (default: leftmost)"),
        Opt("order", str, "shift-coin", "operator composition order", ("shift-coin", "coin-shift")),
    ]


def _factor_opts() -> list[Opt]:
    return [
        Opt("left", str, "line:1", "left factor as path:kind, e.g. sin:1 or cosh:2"),
        Opt("right", str, "line:1", "right factor as path:kind"),
        Opt("n1", int, 12, "grid points of the left factor"),
        Opt("n2", int, 12, "grid points of the right factor"),
        Opt("theta1", float, _QUARTER_TURN, "coin angle of the left factor"),
        Opt("theta2", float, _QUARTER_TURN, "coin angle of the right factor"),
        Opt("phi1", float, 0.0, "electric phase strength of the left factor"),
        Opt("phi2", float, 0.0, "electric phase strength of the right factor"),
        Opt("bloch", _bool, False, "use plane-wave factor matrices at fixed K values", flag_const=True),
        Opt("kf1", float, 0.0, "K along f(alpha) of the left factor (bloch mode)"),
        Opt("kf2", float, 0.0, "K along f(alpha) of the right factor (bloch mode)"),
        Opt("ka1", float, 0.0, "K along alpha of the left factor (bloch mode)"),
        Opt("ka2", float, 0.0, "K along alpha of the right factor (bloch mode)"),
        Opt("alpha1", float, 0.0, "slice alpha of the left factor (bloch mode)"),
        Opt("alpha2", float, 0.0, "slice alpha of the right factor (bloch mode)"),
        Opt("variant", str, "literal", "curved substitution reading", ("literal", "planewave")),
    ]


def _spacing_opts() -> list[Opt]:
    return [
        Opt("input", str, None, "read the spectrum from a CSV instead of building one"),
        Opt("gaps", int, 2, "number of largest spacings to exclude"),
        Opt("bins", int, 20, "histogram bin count"),
        Opt("circular", _bool, True, "drop the wraparound spacing", flag_const=False, flag_name="--no-circular"),
        Opt("degeneracy_tol", float, 0.0, "collapse phases closer than this before spacing (0: keep degeneracies)"),
    ]


def _output_opts(default_output: str) -> list[Opt]:
    return [
        Opt("output", str, default_output, "output file path"),
        Opt("svg", _bool, False, "also render an SVG plot next to the output", flag_const=True),
    ]


OPTIONS: dict[str, list[Opt]] = {
    "evolve": _billiard_opts()
    + [
        Opt("steps", int, 70, "number of time steps"),
        Opt("start_site", int, None, "initial site (default: central site)"),
    ]
    + _output_opts("evolution.csv"),
    "spectrum": _billiard_opts() + _output_opts("spectrum.csv"),
    "dispersion": _billiard_opts()
    + [
        Opt("samples", int, 100, "number of k samples (at least 2)"),
        Opt("k_min", float, -_PI, "lower end of the scanned k range"),
        Opt("k_max", float, _PI, "upper end of the scanned k range"),
        Opt("variant", str, "literal", "curved substitution reading", ("literal", "planewave")),
        Opt("alpha", float, 0.0, "slice alpha for curved paths"),
        Opt("k_alpha", float, 0.0, "fixed K_alpha while scanning K_f (curved paths)"),
        Opt("threads", int, None, "worker threads (default: QWB_THREADS or machine parallelism)"),
    ]
    + _output_opts("dispersion.csv"),
    "billiard2d": _factor_opts()
    + [Opt("kf_steps", int, 0, "when > 0 (bloch mode): scan kf1 x kf2 over this many samples in [-pi, pi]")]
    + _output_opts("spectrum2d.csv"),
    "spacing": _billiard_opts()
    + _factor_opts()
    + _spacing_opts()
    + _output_opts("spacings.csv"),
    "classify": _billiard_opts()
    + _factor_opts()
    + _spacing_opts()
    + _output_opts("classification.json"),
    "selftest": [],
}


@dataclass
class RunConfig:
    """Validated run description: resolved options plus prepared objects."""

    command: str
    options: dict[str, Any]
    payload: dict[str, Any] = field(default_factory=dict)

    def comment_lines(self) -> list[str]:
        lines = [f"# qwbilliards {__version__}"]
        for key, value in self.options.items():
            lines.append(f"# config {key}={value}")
        return lines

    def comment_inline(self) -> str:
        opts = " ".join(f"{k}={v}" for k, v in self.options.items())
        return f"qwbilliards {__version__} | {opts}".replace("--", "- -")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwb",
        description="Quantum-walk billiards: evolution, spectra and spacing statistics.",
    )
    parser.add_argument("--version", action="version", version=f"qwbilliards {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "evolve": "evolve a billiard and record per-site probabilities",
        "spectrum": "eigenphases of the one-step billiard operator",
        "dispersion": "eigenphase bands of the plane-wave matrix over a k range",
        "billiard2d": "tensor-product spectrum of two 1-D billiards",
        "spacing": "nearest-neighbour spacing sequence, histogram and verdict",
        "classify": "Kolmogorov-Smirnov verdict against Wigner and Poisson",
        "selftest": "run the built-in verification suite",
    }
    for command, opts in OPTIONS.items():
        sub = subparsers.add_parser(command, help=descriptions[command])
        if command != "selftest":
            sub.add_argument("--config", default=None, help="flat key=value config file")
        for opt in opts:
            extra: dict[str, Any] = {}
            if opt.flag_const is not None:
                sub.add_argument(
                    opt.flag,
                    dest=opt.name,
                    action="store_const",
                    const=opt.flag_const,
                    default=None,
                    help=f"{opt.help} (default: {opt.default})",
                )
                continue
            if opt.choices:
                extra["choices"] = opt.choices
            sub.add_argument(
                opt.flag,
                dest=opt.name,
                type=opt.type,
                default=None,
                help=f"{opt.help} (default: {opt.default})",
                **extra,
            )
    return parser


def _read_config_file(path: str, opts: list[Opt]) -> dict[str, Any]:
    known = {opt.name: opt for opt in opts}
    values: dict[str, Any] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        opt = known[key]
        caster = _bool if opt.flag_const is not None else opt.type
        try:
            parsed = caster(value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
        if opt.choices and parsed not in opt.choices:
            raise ConfigError(f"{path}:{lineno}: {key} must be one of {opt.choices}")
        values[key] = parsed
    return values


def _resolve(ns: argparse.Namespace, opts: list[Opt]) -> dict[str, Any]:
    file_values = {}
    if getattr(ns, "config", None):
        file_values = _read_config_file(ns.config, opts)
    resolved = {}
    for opt in opts:
        value = getattr(ns, opt.name)
        if value is None:
            value = file_values.get(opt.name, opt.default)
        resolved[opt.name] = value
    return resolved


def _curved_path(options: dict[str, Any], path_key: str = "path") -> CurvedPath:
    given = [options.get(k) is not None for k in ("alpha_left", "alpha_right", "alpha_step")]
    path_fn = PathFunction.named(options[path_key])
    if any(given):
        if not all(given):
            raise ConfigError("--alpha-left, --alpha-right and --alpha-step must be given together")
        return CurvedPath(
            path_fn, options["alpha_left"], options["alpha_right"], options["alpha_step"]
        )
    n = options["n"]
    if n < 2:
        raise ConfigError(f"need at least 2 grid points, got {n}")
    return CurvedPath(path_fn, 0.0, float(n - 1), 1.0)


def _order(options: dict[str, Any]) -> OperatorOrder:
    return (
        OperatorOrder.SHIFT_THEN_COIN
        if options["order"] == "shift-coin"
        else OperatorOrder.COIN_THEN_SHIFT
    )


def _build_1d_spec(options: dict[str, Any]) -> BilliardSpec:
    try:
        return BilliardSpec(
            options["kind"],
            _curved_path(options),
            options["theta"],
            ElectricField(options["phi"], options["phi_origin"]),
            _order(options),
        )
    except (ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from exc


def _parse_factor(descriptor: str) -> tuple[str, int]:
    name, _, kind_text = descriptor.partition(":")
    name = name.strip().lower()
    if name not in _PATH_NAMES:
        raise ConfigError(f"unknown path {name!r} in factor {descriptor!r}")
    if not kind_text:
        return name, 1
    try:
        kind = int(kind_text)
    except ValueError as exc:
        raise ConfigError(f"bad billiard kind in factor {descriptor!r}") from exc
    if kind not in (1, 2):
        raise ConfigError(f"billiard kind must be 1 or 2 in factor {descriptor!r}")
    return name, kind


def _build_factor(options: dict[str, Any], side: int) -> BilliardSpec:
    name, kind = _parse_factor(options["left" if side == 1 else "right"])
    n = options[f"n{side}"]
    if n < 2:
        raise ConfigError(f"need at least 2 grid points, got n{side}={n}")
    try:
        return BilliardSpec(
            kind,
            CurvedPath(PathFunction.named(name), 0.0, float(n - 1), 1.0),
            options[f"theta{side}"],
            ElectricField(options[f"phi{side}"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _bloch_factor_spectrum(spec: BilliardSpec, options: dict[str, Any], side: int) -> SpectrumResult:
    params = BlochParams(
        k_path=options[f"kf{side}"],
        k_alpha=options[f"ka{side}"],
        alpha=options[f"alpha{side}"],
        variant=BlochVariant.LITERAL
        if options["variant"] == "literal"
        else BlochVariant.PLANE_WAVE_CONSISTENT,
    )
    matrix = bloch_curved(spec.theta, params, spec.path, spec.kind)
    return eigenphases(matrix, source=f"bloch[{spec.label()}, {params}]")


def _validate(command: str, options: dict[str, Any]) -> dict[str, Any]:
    payload: dict[str, Any] = {}
    if command == "evolve":
        payload["spec"] = _build_1d_spec(options)
        if options["steps"] < 0:
            raise ConfigError(f"steps must be nonnegative, got {options['steps']}")
        if options["start_site"] is not None:
            grid = payload["spec"].grid
            try:
                make_delta_state(grid, options["start_site"], (1.0, 1.0j))
            except IndexError as exc:
                raise ConfigError(str(exc)) from exc
    elif command == "spectrum":
        payload["spec"] = _build_1d_spec(options)
    elif command == "dispersion":
        payload["spec"] = _build_1d_spec(options)
        if options["samples"] < 2:
            raise ConfigError(f"samples must be at least 2, got {options['samples']}")
        if options["k_max"] <= options["k_min"]:
            raise ConfigError("k-max must exceed k-min")
        payload["threads"] = _resolve_threads(options)
    elif command == "billiard2d":
        payload["left"] = _build_factor(options, 1)
        payload["right"] = _build_factor(options, 2)
        if options["kf_steps"] < 0:
            raise ConfigError("kf-steps must be nonnegative")
        if options["kf_steps"] and not options["bloch"]:
            raise ConfigError("kf-steps requires --bloch")
    elif command in ("spacing", "classify"):
        if options["gaps"] < 0:
            raise ConfigError(f"gaps must be nonnegative, got {options['gaps']}")
        if options["bins"] < 1:
            raise ConfigError(f"bins must be at least 1, got {options['bins']}")
        if options["input"] is None:
            if options["left"] != "line:1" or options["right"] != "line:1" or _twod_requested(options):
                payload["left"] = _build_factor(options, 1)
                payload["right"] = _build_factor(options, 2)
            else:
                payload["spec"] = _build_1d_spec(options)
    return payload


def _twod_requested(options: dict[str, Any]) -> bool:
    defaults = {o.name: o.default for o in _factor_opts()}
    return any(options[k] != defaults[k] for k in defaults)


def _resolve_threads(options: dict[str, Any]) -> int:
    threads = options.get("threads")
    if threads is None:
        env = os.environ.get("QWB_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    if threads < 1:
        raise ConfigError(f"threads must be at least 1, got {threads}")
    return threads


def parse_config(argv: list[str]) -> RunConfig:
    """Parse flags and optional config file into a validated RunConfig."""
    ns = build_parser().parse_args(argv)
    opts = OPTIONS[ns.command]
    options = _resolve(ns, opts)
    payload = _validate(ns.command, options)
    return RunConfig(ns.command, options, payload)


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _write_csv(
    config: RunConfig, path: Path, body: str, extra_comments: list[str] | None = None
) -> None:
    lines = config.comment_lines() + (extra_comments or [])
    _write_atomic(path, "\n".join(lines) + "\n" + body)


def _svg_path(output: Path) -> Path:
    return output.with_suffix(".svg")


def _read_column(path: str, expect_any: tuple[str, ...]) -> tuple[str, np.ndarray]:
    """Read a data column from one of our CSVs; returns (header kind, values)."""
    try:
        lines = [
            line
            for line in Path(path).read_text().splitlines()
            if line and not line.startswith("#")
        ]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise ConfigError(f"{path} contains no data")
    header = lines[0].strip()
    if header not in expect_any:
        raise ConfigError(f"{path}: unsupported header {header!r}")
    column = len(header.split(",")) - 1
    values = np.array([float(line.split(",")[column]) for line in lines[1:]])
    if values.size == 0:
        raise ConfigError(f"{path} contains no rows")
    return header, values


def _spectrum_from_config(config: RunConfig) -> SpectrumResult:
    options, payload = config.options, config.payload
    if options.get("input"):
        _, phases = _read_column(options["input"], ("index,re,im,phase",))
        phases = np.sort(phases)
        return SpectrumResult(phases, np.exp(1j * phases), f"file:{options['input']}")
    if "left" in payload:
        if options["bloch"]:
            left = _bloch_factor_spectrum(payload["left"], options, 1)
            right = _bloch_factor_spectrum(payload["right"], options, 2)
            return combine_spectra(left, right)
        return tensor_spectrum(Billiard2DSpec(payload["left"], payload["right"]))
    return eigenphases(compose_step(payload["spec"]))


def _classification_json(config: RunConfig, seq: SpacingSequence) -> str:
    result = classify(seq)
    doc = {
        "ks_wigner": result.ks_wigner,
        "ks_poisson": result.ks_poisson,
        "verdict": result.verdict.value,
        "n_spacings": int(seq.spacings.size),
        "gaps_excluded": int(seq.excluded_gaps.size),
        "config": {k: str(v) for k, v in config.options.items()},
        "version": __version__,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _run_evolve(config: RunConfig) -> None:
    spec = config.payload["spec"]
    start = config.options["start_site"]
    site = spec.grid.center() if start is None else start
    initial = make_delta_state(spec.grid, site, (1.0, 1.0j))
    record = run(spec, config.options["steps"], initial=initial)
    out = Path(config.options["output"])
    # the spin weights are a convention, not physics; record them with the data
    note = [f"# initial-state site={site} weights=(1,i)/sqrt(2)"]
    _write_csv(config, out, evolution_to_csv(record), extra_comments=note)
    if config.options["svg"]:
        _write_atomic(_svg_path(out), render_svg(record, "heatmap", config.comment_inline()))


def _run_spectrum(config: RunConfig) -> None:
    result = eigenphases(compose_step(config.payload["spec"]))
    _write_csv(config, Path(config.options["output"]), spectrum_to_csv(result))


def _run_dispersion(config: RunConfig) -> None:
    spec = config.payload["spec"]
    options = config.options
    if spec.path.path.tag.value == "line":
        base = bloch_kind1 if spec.kind == 1 else bloch_kind2
        builder = lambda k: base(spec.theta, k, spec.path.n_points)
        source = f"bloch_kind{spec.kind}(theta={spec.theta}, sites={spec.path.n_points})"
    else:
        variant = (
            BlochVariant.LITERAL
            if options["variant"] == "literal"
            else BlochVariant.PLANE_WAVE_CONSISTENT
        )
        builder = lambda k: bloch_curved(
            spec.theta,
            BlochParams(
                k_path=k, k_alpha=options["k_alpha"], alpha=options["alpha"], variant=variant
            ),
            spec.path,
            spec.kind,
        )
        source = f"bloch_curved[{spec.label()}, variant={options['variant']}]"
    scan = dispersion_scan(
        builder,
        options["k_min"],
        options["k_max"],
        options["samples"],
        threads=config.payload["threads"],
        source=source,
    )
    out = Path(options["output"])
    _write_csv(config, out, dispersion_to_csv(scan))
    if options["svg"]:
        _write_atomic(_svg_path(out), render_svg(scan, "bands", config.comment_inline()))


def _run_billiard2d(config: RunConfig) -> None:
    options = config.options
    left, right = config.payload["left"], config.payload["right"]
    out = Path(options["output"])
    if options["bloch"] and options["kf_steps"]:
        kf_values = np.linspace(-_PI, _PI, options["kf_steps"])
        lines = ["kf1,kf2,index,re,im,phase"]
        for kf1 in kf_values:
            for kf2 in kf_values:
                grid_options = dict(options, kf1=float(kf1), kf2=float(kf2))
                combined = combine_spectra(
                    _bloch_factor_spectrum(left, grid_options, 1),
                    _bloch_factor_spectrum(right, grid_options, 2),
                )
                for i, (value, phase) in enumerate(
                    zip(combined.eigenvalues, combined.eigenphases)
                ):
                    lines.append(
                        f"{kf1:.17g},{kf2:.17g},{i},{value.real:.17g},"
                        f"{value.imag:.17g},{phase:.17g}"
                    )
        _write_csv(config, out, "\n".join(lines) + "\n")
        return
    if options["bloch"]:
        combined = combine_spectra(
            _bloch_factor_spectrum(left, options, 1),
            _bloch_factor_spectrum(right, options, 2),
        )
    else:
        combined = tensor_spectrum(Billiard2DSpec(left, right))
    _write_csv(config, out, spectrum_to_csv(combined))


def _run_spacing(config: RunConfig) -> None:
    options = config.options
    spectrum = _spectrum_from_config(config)
    seq = spacings_from_spectrum(
        spectrum,
        gaps_to_exclude=options["gaps"],
        circular=options["circular"],
        degeneracy_tolerance=options["degeneracy_tol"],
    )
    out = Path(options["output"])
    _write_csv(config, out, spacings_to_csv(seq))
    hist = histogram(seq, options["bins"])
    hist_path = out.with_name(out.stem + "_hist.csv")
    _write_csv(config, hist_path, histogram_to_csv(hist))
    try:
        _write_atomic(
            out.with_name(out.stem + "_classify.json"), _classification_json(config, seq)
        )
    except ValueError as exc:
        # spacing/histogram outputs stand on their own; only the verdict
        # needs enough samples
        print(f"note: classification skipped: {exc}", file=sys.stderr)
    if options["svg"]:
        _write_atomic(_svg_path(out), render_svg(hist, "histogram", config.comment_inline()))


def _run_classify(config: RunConfig) -> None:
    options = config.options
    if options["input"]:
        header, values = _read_column(
            options["input"], ("index,spacing", "index,re,im,phase")
        )
        if header == "index,spacing":
            seq = normalized_sequence(values)
        else:
            seq = spacings_from_spectrum(
                np.sort(values),
                gaps_to_exclude=options["gaps"],
                circular=options["circular"],
                degeneracy_tolerance=options["degeneracy_tol"],
            )
    else:
        seq = spacings_from_spectrum(
            _spectrum_from_config(config),
            gaps_to_exclude=options["gaps"],
            circular=options["circular"],
            degeneracy_tolerance=options["degeneracy_tol"],
        )
    text = _classification_json(config, seq)
    _write_atomic(Path(options["output"]), text)
    sys.stdout.write(text)


_HANDLERS = {
    "evolve": _run_evolve,
    "spectrum": _run_spectrum,
    "dispersion": _run_dispersion,
    "billiard2d": _run_billiard2d,
    "spacing": _run_spacing,
    "classify": _run_classify,
}


def execute(config: RunConfig) -> int:
    """Run a validated config; writes artifacts atomically."""
    if config.command == "selftest":
        return run_selftest()
    handler = _HANDLERS[config.command]
    try:
        handler(config)
    except UnitarityError as exc:
        print(f"numerical validation failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse --help / usage errors
        return int(exc.code or 0)
    return execute(config)


def entry() -> None:
    sys.exit(main())
