"""
Command-line interface.

Every sub-command prints a JSON report on stdout and writes SVG/CSV files
through a FileManager. Exit codes: 0 success, 1 verification failure,
2 bad input or configuration, 130 interrupted.
"""
import argparse
import json
import logging
import random
import sys
from types import SimpleNamespace
from typing import Dict, List, Optional, Sequence

from config import ConfigError, load_run_config
from curves import CurveError, CubicCurve, QuinticCurve, cubic_discriminant, curve_from_json
from deformations import (VerificationReport, integrate_characteristics, liouville_residual, residual,
                          verify_family)
from file_manager import FileManager
from oracles import (dense_component_count, draw, grid_step, product, random_polynomial, random_rational,
                     sign_changes, well_separated)
from polycore import (PolynomialError, UniPoly, discriminant_uni, format_poly, isolate_real_roots,
                      squarefree_decompose, to_rational)
from presets import (CURVE_DESCRIPTIONS, curve_names, figure_frames, figure_names, figure_phase, get_figure,
                     named_curve)
from render import FrameSpec, RenderError, animate, emit_csv, frame_polylines, phase_svg, sample_hyperelliptic
from systems import (DeformationError, LIOUVILLE_PRESETS, ansatz_from_json, family_catalog, get_system,
                     liouville_preset, system_catalog)
from topology import (TopologyError, analyze_real_section, component_profile, curve_discriminant,
                      discriminant_roots, region_classify, sweep, trace_phase_diagram)
from utils import setup_logging, to_json_text

logger = logging.getLogger("HamDef.CLI")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130

INPUT_ERRORS = (ConfigError, PolynomialError, CurveError, DeformationError, TopologyError, RenderError)


def _emit(obj) -> None:
    sys.stdout.write(to_json_text(obj))


def _json_arg(value, what: str):
    if value is None or isinstance(value, (dict, list)):
        return value
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        raise ConfigError(f"--{what} is not valid JSON: {e}") from e


def _require(config: SimpleNamespace, key: str):
    value = getattr(config, key, None)
    if value is None:
        raise ConfigError(f"Missing required option --{key.replace('_', '-')}")
    return value


def _curve(config: SimpleNamespace):
    inline = _json_arg(getattr(config, "curve_json", None), "curve-json")
    if inline is not None:
        return curve_from_json(inline)
    return named_curve(_require(config, "curve"))


def _params(config: SimpleNamespace) -> Dict[str, object]:
    """Exact parameter values from --x, --t and repeated --param name=value."""
    params = {}
    for key in ("x", "t"):
        value = getattr(config, key, None)
        if value is not None:
            params[key] = to_rational(value)
    for item in getattr(config, "param", None) or []:
        name, sep, value = str(item).partition("=")
        if not sep or not name.strip():
            raise ConfigError(f"--param expects name=value, got '{item}'")
        params[name.strip()] = to_rational(value)
    return params


def _output(config: SimpleNamespace) -> FileManager:
    return FileManager(config.out)


# --- commands ---------------------------------------------------------------

def cmd_verify(config: SimpleNamespace) -> int:
    constants = _json_arg(getattr(config, "constants", None), "constants")
    ansatz_obj = _json_arg(getattr(config, "ansatz", None), "ansatz")
    if ansatz_obj is not None:
        system = get_system(_require(config, "system"))
        ansatz = ansatz_from_json(ansatz_obj, system)
        report = VerificationReport(system.name, None, residual(system, ansatz))
    else:
        report = verify_family(getattr(config, "system", None), _require(config, "family"), constants)
    _emit(report)
    if not report.ok:
        logger.error(f"Verification failed for system '{report.system}'")
        return EXIT_FAILED
    return EXIT_OK


def cmd_liouville(config: SimpleNamespace) -> int:
    constants = _json_arg(getattr(config, "constants", None), "constants")
    preset = liouville_preset(_require(config, "preset"), constants)
    value = liouville_residual(preset.f, preset.spec, preset.frame)
    _emit({
        "preset": preset.name,
        "frame": preset.frame.name,
        "f": format_poly(preset.f),
        "H": format_poly(preset.spec.H),
        "alpha": format_poly(preset.spec.alpha),
        "residual": format_poly(value),
        "ok": value.is_zero(),
    })
    return EXIT_OK if value.is_zero() else EXIT_FAILED


def cmd_classify(config: SimpleNamespace) -> int:
    curve = _curve(config)
    if not isinstance(curve, (CubicCurve, QuinticCurve)):
        raise ConfigError("classify needs a cubic or quintic curve")
    params = _params(config)
    report = analyze_real_section(curve.slice(**params), tol=config.root_tol)
    result = {"params": {k: float(v) for k, v in params.items()}, "report": report}
    if set(curve.parameters()) <= {"x", "t"} and {"x", "t"} <= set(params):
        result["region"] = region_classify(curve, (params["x"], params["t"]), tol=config.contour_tol)
    _emit(result)
    return EXIT_OK


def cmd_sweep(config: SimpleNamespace) -> int:
    curve = _curve(config)
    if not isinstance(curve, (CubicCurve, QuinticCurve)):
        raise ConfigError("sweep needs a cubic or quintic curve")
    x_value = to_rational(_require(config, "x"))
    t_range = _require(config, "t_range")
    if len(t_range) != 2:
        raise ConfigError(f"--t-range expects two numbers, got {t_range}")
    t0, t1 = float(t_range[0]), float(t_range[1])
    events = sweep(curve, x_value, (t0, t1), tol=config.event_tol)
    roots = discriminant_roots(curve, x_value, (t0, t1), tol=config.event_tol)
    samples = [t0] + [e.t_star for e in events] + [t1]
    midpoints = [0.5 * (a + b) for a, b in zip(samples, samples[1:]) if b > a]
    profile = component_profile(curve, x_value, midpoints, workers=config.workers)
    _emit({
        "x": float(x_value),
        "t_range": [t0, t1],
        "discriminant_roots": roots,
        "events": events,
        "profile": [{"t": t, "components": n} for t, n in profile],
    })
    return EXIT_OK


def cmd_phase(config: SimpleNamespace) -> int:
    figure = getattr(config, "figure", None)
    if figure is not None and getattr(config, "window", None) is None:
        diagram = figure_phase(figure, grid_n=config.grid, workers=config.workers)
        title = get_figure(figure).description
        stem = figure
    else:
        curve = named_curve(get_figure(figure).curve) if figure is not None else _curve(config)
        window = _require(config, "window")
        if len(window) != 4:
            raise ConfigError(f"--window expects four numbers, got {window}")
        diagram = trace_phase_diagram(curve_discriminant(curve), tuple(float(w) for w in window),
                                      grid_n=config.grid, workers=config.workers, tol=config.contour_tol)
        title = figure or getattr(config, "curve", None) or "phase diagram"
        stem = f"{title}_phase"
    files = _output(config)
    svg_path = files.write_text(stem, ".svg", phase_svg(diagram, title=title))
    csv_path = files.write_text(stem, ".csv", diagram.to_csv())
    _emit({"diagram": diagram, "files": [str(svg_path), str(csv_path)]})
    return EXIT_OK


def _custom_frames(config: SimpleNamespace) -> List[FrameSpec]:
    curve = _curve(config)
    window = _require(config, "window")
    if len(window) != 4:
        raise ConfigError(f"--window expects four numbers, got {window}")
    base = _params(config)
    base.pop("t", None)
    frames = []
    for t in _require(config, "t_values"):
        params = dict(base, t=to_rational(t))
        frames.append(FrameSpec(
            curve=curve,
            params=params,
            window=tuple(float(w) for w in window),
            samples=config.samples,
            grid_n=config.grid,
            title=", ".join(f"{k}={float(v):g}" for k, v in params.items()),
        ))
    return frames


def cmd_render(config: SimpleNamespace) -> int:
    figure = getattr(config, "figure", None)
    if figure is not None:
        frames = figure_frames(figure, samples=config.samples, grid_n=config.grid)
        stem = figure
    else:
        frames = _custom_frames(config)
        stem = getattr(config, "curve", None) or "curve"
    documents = animate(frames, workers=config.workers)
    files = _output(config)
    written = []
    for k, (frame, document) in enumerate(zip(frames, documents), start=1):
        written.append(str(files.write_text(f"{stem}_frame{k:02d}", ".svg", document)))
        if config.csv:
            written.append(str(files.write_text(f"{stem}_frame{k:02d}", ".csv", emit_csv(frame_polylines(frame)))))
    _emit({"frames": [f.title for f in frames], "files": written})
    return EXIT_OK


def cmd_characteristics(config: SimpleNamespace) -> int:
    constants = _json_arg(getattr(config, "constants", None), "constants")
    preset = liouville_preset(_require(config, "preset"), constants)
    start = _json_arg(_require(config, "start"), "start")
    if not isinstance(start, dict):
        raise ConfigError("--start must be a JSON object of initial values")
    trajectory = integrate_characteristics(
        preset.spec, preset.f, {k: float(v) for k, v in start.items()},
        float(_require(config, "t0")), float(_require(config, "t1")), float(_require(config, "step")),
        frame=preset.frame,
    )
    path = _output(config).write_text(f"{preset.name}_characteristic", ".csv", trajectory.to_csv())
    _emit({"preset": preset.name, "steps": len(trajectory.times) - 1,
           "max_abs_f": trajectory.max_abs_f, "file": str(path)})
    return EXIT_OK


def cmd_catalog(config: SimpleNamespace) -> int:
    _emit({
        "systems": [s.to_json() for s in system_catalog()],
        "families": [{"name": f.name, "system": f.system, "constants": list(f.free_constants),
                      "description": f.description} for f in family_catalog()],
        "liouville_presets": list(LIOUVILLE_PRESETS),
        "curves": [{"name": n, "description": CURVE_DESCRIPTIONS.get(n, "")} for n in curve_names()],
        "figures": [get_figure(n) for n in figure_names()],
    })
    return EXIT_OK


# --- selftest ---------------------------------------------------------------

def _check_discriminant_identity(rng: random.Random, count: int) -> int:
    failures = 0
    for _ in range(count):
        u3, u1, u0 = (random_rational(rng) for _ in range(3))
        delta = cubic_discriminant(CubicCurve(u3, u1, u0)).constant_value()
        if delta != 16 * discriminant_uni(UniPoly("z", (u0, u1, u3, 1))):
            failures += 1
    return failures


def _isolation_instance(rng: random.Random) -> UniPoly:
    degree = rng.randint(1, 6)
    if degree >= 3 and rng.random() < 0.25:
        linear = random_polynomial(rng, 1)
        return product([random_polynomial(rng, degree - 2), linear, linear])
    return random_polynomial(rng, degree)


def _factors_resolved(P: UniPoly) -> bool:
    return all(well_separated(F, 3 * grid_step(F)) for F, _ in squarefree_decompose(P) if F.degree >= 1)


def _check_root_isolation(rng: random.Random, count: int) -> int:
    """Root counts with multiplicity against sign changes of each square-free factor on a dense grid."""
    failures = 0
    for _ in range(count):
        P = draw(lambda: _isolation_instance(rng), _factors_resolved)
        expected = sum(m * sign_changes(F) for F, m in squarefree_decompose(P) if F.degree >= 1)
        if sum(iv.multiplicity for iv in isolate_real_roots(P)) != expected:
            failures += 1
    return failures


def _check_component_formula(rng: random.Random, count: int) -> int:
    """(real roots + 1) / 2 components on square-free odd-degree slices, against dense sampling."""
    failures = 0
    for _ in range(count):
        P = draw(lambda: random_polynomial(rng, rng.choice((1, 3, 5, 7)), positive_leading=True),
                 lambda Q: well_separated(Q, 3 * grid_step(Q)))
        report = analyze_real_section(P)
        formula = (len(isolate_real_roots(P)) + 1) // 2
        if not report.component_count == formula == dense_component_count(P):
            failures += 1
    return failures


def _check_mirror_symmetry(rng: random.Random, count: int) -> int:
    failures = 0
    for _ in range(count):
        P = named_curve("trivial-cubic").slice(x=random_rational(rng, 4), t=random_rational(rng, 4))
        lines = [line for line in sample_hyperelliptic(P, (-3.0, 3.0, -6.0, 6.0), 64) if not line.isolated]
        for upper, lower in zip(lines[0::2], lines[1::2]):
            if any(a[0] != b[0] or a[1] != -b[1] for a, b in zip(upper.points, lower.points)):
                failures += 1
                break
    return failures


def cmd_selftest(config: SimpleNamespace) -> int:
    rng = random.Random(config.seed)
    checks = {
        "discriminant_identity": _check_discriminant_identity(rng, 1000),
        "root_isolation": _check_root_isolation(rng, 1000),
        "component_formula": _check_component_formula(rng, 500),
        "mirror_symmetry": _check_mirror_symmetry(rng, 20),
    }
    ok = not any(checks.values())
    _emit({"seed": config.seed, "failures": checks, "ok": ok})
    if not ok:
        logger.error(f"Self-test failures: {checks}")
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "verify": cmd_verify,
    "liouville": cmd_liouville,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "phase": cmd_phase,
    "render": cmd_render,
    "characteristics": cmd_characteristics,
    "catalog": cmd_catalog,
    "selftest": cmd_selftest,
}


# --- parser -----------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps unset flags out of the namespace so config/env values survive
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with option values")
    common.add_argument("--out", default=argparse.SUPPRESS, help="Output directory")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="Worker threads")
    common.add_argument("--log-level", default=argparse.SUPPRESS, help="DEBUG, INFO, WARNING, ERROR")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Seed for selftest")
    common.add_argument("--grid", type=int, default=argparse.SUPPRESS, help="Contour grid size")
    common.add_argument("--root-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--event-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--contour-tol", type=float, default=argparse.SUPPRESS)
    return common


def _curve_options(parser: argparse.ArgumentParser):
    parser.add_argument("--curve", help=f"Named curve: {', '.join(curve_names())}")
    parser.add_argument("--curve-json", help='Inline curve, e.g. \'{"family": "cubic", "u1": "t", "u0": "x"}\'')


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="hamdef", description="Hamiltonian deformations of plane algebraic curves")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="Check a solution family or ansatz against a system")
    p.add_argument("--system")
    p.add_argument("--family")
    p.add_argument("--ansatz", help="Inline ansatz as JSON")
    p.add_argument("--constants", help="Family constants as JSON; symbolic if omitted")

    p = sub.add_parser("liouville", parents=[common], help="Liouville residual of a preset")
    p.add_argument("--preset", help=f"One of {', '.join(LIOUVILLE_PRESETS)}")
    p.add_argument("--constants")

    p = sub.add_parser("classify", parents=[common], help="Real-section topology at one parameter point")
    _curve_options(p)
    p.add_argument("--x")
    p.add_argument("--t")
    p.add_argument("--param", action="append", help="Extra parameter as name=value")

    p = sub.add_parser("sweep", parents=[common], help="Transition events along a line x = const")
    _curve_options(p)
    p.add_argument("--x")
    p.add_argument("--t-range", nargs=2, type=float)

    p = sub.add_parser("phase", parents=[common], help="Phase diagram Delta(x, t) = 0")
    _curve_options(p)
    p.add_argument("--figure")
    p.add_argument("--window", nargs=4, type=float, metavar=("X_MIN", "X_MAX", "T_MIN", "T_MAX"))

    p = sub.add_parser("render", parents=[common], help="Render curve frames as SVG")
    _curve_options(p)
    p.add_argument("--figure", help=f"Figure preset: {', '.join(figure_names())}")
    p.add_argument("--x")
    p.add_argument("--param", action="append")
    p.add_argument("--t-values", nargs="+")
    p.add_argument("--window", nargs=4, type=float, metavar=("Z_MIN", "Z_MAX", "P_MIN", "P_MAX"))
    p.add_argument("--samples", type=int)
    p.add_argument("--csv", action="store_true", default=None, help="Also write the polylines as CSV")

    p = sub.add_parser("characteristics", parents=[common], help="Integrate characteristics with RK4")
    p.add_argument("--preset")
    p.add_argument("--constants")
    p.add_argument("--start", help='Initial values as JSON, e.g. \'{"p1": 1, "p2": 0, "x1": 0, "x2": 0}\'')
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--step", type=float)

    sub.add_parser("catalog", parents=[common], help="List systems, families, curves and figures")
    sub.add_parser("selftest", parents=[common], help="Randomized property checks")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parses arguments, runs one sub-command and returns its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = load_run_config(args)
        setup_logging(level=getattr(logging, config.log_level), log_dir=None)
        logger.info(f"Running '{config.command}'")
        return COMMANDS[config.command](config)
    except INPUT_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.warning("Interrupted by user.")
        return EXIT_INTERRUPTED
    except Exception as e:
        logger.exception(f"Unexpected error in '{getattr(args, 'command', '?')}': {e}")
        return EXIT_USAGE
