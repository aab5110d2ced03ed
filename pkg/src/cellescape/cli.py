"""Command-line front end.

Subcommands:

* ``escape``     -- escape probability of one cell, deterministic and/or MC.
* ``transition`` -- cell-to-cell transition probability (deterministic in
  1D, Monte Carlo in any dimension).
* ``bench``      -- the full benchmark grid with pass/fail marks.

Exit codes: 0 success, 2 malformed input (the message names the offending
field), 3 solver failure (a partial report is still printed), 4 unsupported
method/geometry combination.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from . import __version__
from .bench import render_benchmark, run_benchmark
from .distributions import distribution_from_dict, distribution_to_dict
from .errors import (
    CellEscapeError,
    DegenerateElement,
    DimensionMismatch,
    EmptyInterval,
    InputError,
    QuadratureFailure,
    ToleranceNotMet,
)
from .geometry import ElementKind, element_to_dict, load_element
from .montecarlo import (
    McConfig,
    empirical_stat_error,
    escape_probability_mc,
    repeat_escape_probability_mc,
    theoretical_stat_error,
    transition_probability_mc,
)
from .quadrature import (
    QuadratureConfig,
    escape_probability_det,
    transition_probability_det_1d,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_SOLVER_FAILURE = 3
EXIT_UNSUPPORTED = 4

DENSITY_EVAL_WARN_THRESHOLD = 10**7


@dataclass
class RunReport:
    """Echo of the request plus results and provenance; JSON round-trippable."""

    command: str
    request: dict
    results: dict
    provenance: dict
    status: str = "ok"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(**data)


def _provenance(seed: int | None) -> dict:
    return {
        "tool": "cellescape",
        "version": __version__,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _load_inputs(args, paths: list[str]):
    elements = [load_element(p) for p in paths]
    dims = {e.dim for e in elements}
    if len(dims) != 1:
        raise InputError("vertices", "geometry files have different dimensions")
    with open(args.distribution) as fh:
        try:
            dist_data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError("distribution", f"invalid JSON: {exc}") from None
    dist = distribution_from_dict(dist_data, dim=elements[0].dim)
    return elements, dist


def _quad_config(args) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=args.tol)


def _mc_config(args) -> McConfig:
    return McConfig(particles=args.particles, seed=args.seed, runs=args.runs)


def _mc_results(element, dist, args) -> dict:
    config = _mc_config(args)
    if config.runs > 1:
        estimates = repeat_escape_probability_mc(element, dist, config, workers=args.workers)
        result = estimates[0].to_dict()
        values = [e.value for e in estimates]
        result["run_values"] = values
        result["empirical_error"] = empirical_stat_error(values)
        return result
    return escape_probability_mc(element, dist, config, workers=args.workers).to_dict()


def _emit(report: RunReport, args) -> None:
    text = json.dumps(report.to_dict(), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _warn_expensive(results: dict) -> None:
    det = results.get("deterministic")
    if det and det.get("cost", 0) > DENSITY_EVAL_WARN_THRESHOLD:
        print(
            f"warning: deterministic solve used {det['cost']} density "
            "evaluations; consider the Monte Carlo estimator",
            file=sys.stderr,
        )


def cmd_escape(args) -> int:
    try:
        (element,), dist = _load_inputs(args, [args.geometry])
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    request = {
        "geometry": element_to_dict(element),
        "distribution": distribution_to_dict(dist),
        "method": args.method,
        "tol": args.tol,
        "particles": args.particles,
        "seed": args.seed,
        "runs": args.runs,
    }
    results: dict = {}
    status = "ok"
    code = EXIT_OK
    try:
        if args.method in ("det", "both"):
            results["deterministic"] = escape_probability_det(
                element, dist, _quad_config(args)
            ).to_dict()
        if args.method in ("mc", "both"):
            results["monte_carlo"] = _mc_results(element, dist, args)
        if args.method == "both":
            det_v = results["deterministic"]["value"]
            mc_v = results["monte_carlo"]["value"]
            four_sigma = 4.0 * theoretical_stat_error(det_v, args.particles)
            results["comparison"] = {
                "difference": mc_v - det_v,
                "four_sigma": four_sigma,
                "within_four_sigma": abs(mc_v - det_v) <= four_sigma,
            }
    except ToleranceNotMet as exc:
        results["deterministic"] = {
            "value": exc.value,
            "error_estimate": exc.error_estimate,
            "method": "deterministic",
        }
        status = f"tolerance_not_met: {exc}"
        code = EXIT_SOLVER_FAILURE
    except (QuadratureFailure, CellEscapeError) as exc:
        status = f"solver_failure: {exc}"
        code = EXIT_SOLVER_FAILURE

    report = RunReport(
        command="escape",
        request=request,
        results=results,
        provenance=_provenance(args.seed),
        status=status,
    )
    _emit(report, args)
    _warn_expensive(results)
    return code


def _segment_interval(element) -> tuple[float, float]:
    values = sorted(float(v[0]) for v in element.vertices)
    return values[0], values[-1]


def cmd_transition(args) -> int:
    try:
        (source, target), dist = _load_inputs(args, [args.source, args.target])
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.method == "det" and source.dim != 1:
        print("error: deterministic transition supported in 1D only", file=sys.stderr)
        return EXIT_UNSUPPORTED

    request = {
        "source": element_to_dict(source),
        "target": element_to_dict(target),
        "distribution": distribution_to_dict(dist),
        "method": args.method,
        "tol": args.tol,
        "particles": args.particles,
        "seed": args.seed,
    }
    results: dict = {}
    status = "ok"
    code = EXIT_OK
    try:
        if args.method == "det":
            results["deterministic"] = transition_probability_det_1d(
                _segment_interval(source), _segment_interval(target), dist, _quad_config(args)
            ).to_dict()
        else:
            results["monte_carlo"] = transition_probability_mc(
                source, target, dist, _mc_config(args), workers=args.workers
            ).to_dict()
    except ToleranceNotMet as exc:
        results["deterministic"] = {
            "value": exc.value,
            "error_estimate": exc.error_estimate,
            "method": "deterministic",
        }
        status = f"tolerance_not_met: {exc}"
        code = EXIT_SOLVER_FAILURE
    except (EmptyInterval, DimensionMismatch, DegenerateElement) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except CellEscapeError as exc:
        status = f"solver_failure: {exc}"
        code = EXIT_SOLVER_FAILURE

    report = RunReport(
        command="transition",
        request=request,
        results=results,
        provenance=_provenance(args.seed),
        status=status,
    )
    _emit(report, args)
    _warn_expensive(results)
    return code


def cmd_bench(args) -> int:
    progress = (lambda line: print(line, file=sys.stderr)) if args.verbose else None
    artifact = run_benchmark(
        particles=args.particles,
        seed=args.seed,
        abs_tol=args.tol,
        workers=args.workers,
        progress=progress,
    )
    text = json.dumps(artifact, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        print(render_benchmark(artifact))
    else:
        print(text)
        print(render_benchmark(artifact), file=sys.stderr)
    return EXIT_OK if artifact["summary"]["failed"] == 0 else 1


def _add_common(parser, with_runs=False):
    parser.add_argument("--tol", type=float, default=1e-6,
                        help="absolute tolerance of the deterministic solver")
    parser.add_argument("--particles", type=int, default=10**6,
                        help="Monte Carlo particle count")
    parser.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker threads for Monte Carlo chunks")
    parser.add_argument("--output", help="write the JSON report to this file")
    if with_runs:
        parser.add_argument("--runs", type=int, default=1,
                            help="MC repetitions for the empirical error")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellescape",
        description="Escape and transition probabilities of one Markov step on mesh cells.",
    )
    parser.add_argument("--version", action="version", version=f"cellescape {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_escape = sub.add_parser("escape", help="escape probability of a cell")
    p_escape.add_argument("--geometry", required=True, help="geometry JSON file")
    p_escape.add_argument("--distribution", required=True, help="distribution JSON file")
    p_escape.add_argument("--method", choices=["det", "mc", "both"], default="both")
    _add_common(p_escape, with_runs=True)
    p_escape.set_defaults(func=cmd_escape)

    p_trans = sub.add_parser("transition", help="transition probability between two cells")
    p_trans.add_argument("--source", required=True, help="source geometry JSON file")
    p_trans.add_argument("--target", required=True, help="target geometry JSON file")
    p_trans.add_argument("--distribution", required=True, help="distribution JSON file")
    p_trans.add_argument("--method", choices=["det", "mc"], default="det")
    _add_common(p_trans)
    p_trans.set_defaults(func=cmd_transition, runs=1)

    p_bench = sub.add_parser("bench", help="run the full benchmark grid")
    p_bench.add_argument("--verbose", action="store_true",
                         help="print each cell line as it completes")
    _add_common(p_bench)
    p_bench.set_defaults(func=cmd_bench, runs=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
