"""Command-line entry point: Littlewood-Paley tools, the transport solver, distances and experiments."""

from __future__ import annotations

import argparse
import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, get_args

from pydantic import ValidationError

from errors import ConfigError, LogBesovError
from experiments import (
    ExperimentConfig,
    checkerboard,
    harmonic,
    load_config,
    load_result,
    make_config,
    random_band_limited,
    run_experiment,
)
from experiments.emit import write_csv, write_json
from filters import decompose, family_for
from norms import compute_norms
from report import render_report
from solver import ObserverSet, SolverConfig, VelocityModel, solve
from solver.velocity import VelocityKind
from spectral import (
    PhysicalField,
    SpectralField,
    TorusGrid,
    forward_transform,
    inverse_transform,
    read_snapshot,
    write_snapshot,
)
from transport import kr_transport

logger = logging.getLogger(__name__)


def _read_field(path: Path) -> PhysicalField:
    field = read_snapshot(path)
    logger.info("Read field n=%d d=%d from %s", field.grid.n, field.grid.d, path)
    return field


def _initial_datum(ic: str, grid: TorusGrid, *, seed: int = 0) -> SpectralField:
    """``ic`` is either a snapshot file or one of the preset names."""
    builders: Dict[str, Callable[[], SpectralField]] = {
        "harmonic": lambda: harmonic(grid),
        "random": lambda: random_band_limited(grid, seed=seed),
        "checkerboard": lambda: checkerboard(grid),
    }
    if ic in builders:
        return builders[ic]()
    path = Path(ic)
    if not path.exists():
        raise ConfigError(f"--ic must be a snapshot file or one of {', '.join(builders)}, got {ic!r}")
    return forward_transform(_read_field(path))


def cmd_lp_decompose(args: argparse.Namespace) -> Dict[str, Any]:
    field = _read_field(args.input)
    fam = family_for(field.grid, args.generator)
    blocks = decompose(field, fam)
    out_dir: Path = args.out
    manifest: Dict[str, Any] = {
        "input": str(args.input),
        "generator": args.generator,
        "k_max": fam.k_max,
        "blocks": [],
    }
    energies = blocks.energies()
    for k, (block, energy) in enumerate(zip(blocks, energies), start=1):
        target = write_snapshot(out_dir / f"block_{k:02d}.lptf", inverse_transform(block))
        weight = float(k) ** (2.0 * args.a) if args.a is not None else None
        manifest["blocks"].append(
            {
                "k": k,
                "file": target.name,
                "energy": float(energy),
                "weighted_energy": None if weight is None else weight * float(energy),
            }
        )
    write_json(manifest, out_dir / "manifest.json")
    return {"blocks": len(blocks), "out": str(out_dir)}


def cmd_norms(args: argparse.Namespace) -> Dict[str, Any]:
    field = _read_field(args.input)
    reports = compute_norms(field, args.a, args.flavors.split(","), family_for(field.grid, args.generator))
    payload = {"input": str(args.input), "a": args.a, "norms": {name: r.as_dict() for name, r in reports.items()}}
    if args.json:
        write_json(payload, args.json)
    return {name: r.value for name, r in reports.items()}


def cmd_solve(args: argparse.Namespace) -> Dict[str, Any]:
    grid = TorusGrid(d=args.d, n=args.n)
    theta0 = _initial_datum(args.ic, grid, seed=args.seed)
    grid = theta0.grid
    config = SolverConfig(kappa=args.kappa, dt=args.dt, grid=grid, generator=args.generator)
    model = VelocityModel(kind=args.model, amplitude=args.amplitude)
    observers = ObserverSet.parse(args.observe, stride=args.stride, keep_snapshots=args.snapshot is not None)
    series = solve(config, model, theta0, args.tend, observers)
    if args.csv:
        write_csv(series.rows(), args.csv)
    if args.snapshot:
        write_snapshot(args.snapshot, inverse_transform(series.snapshots[-1]))
    return {"steps": series.steps, "dt": series.dt, "final": series.final, "residuals": series.residuals}


def cmd_otdist(args: argparse.Namespace) -> Dict[str, Any]:
    result = kr_transport(
        _read_field(args.a),
        _read_field(args.b),
        args.delta,
        args.method,
        max_support=args.max_support,
        eps=args.eps,
    )
    payload = {"cost": result.value, **result.as_dict()}
    if args.json:
        write_json(payload, args.json)
    return payload


def _experiment_config(kind: str, args: argparse.Namespace) -> ExperimentConfig:
    overrides = {"kind": kind, "csv": args.csv, "json": args.json, "report": args.report}
    if args.config is not None:
        return load_config(args.config, **overrides)
    return make_config({key: value for key, value in overrides.items() if value is not None}, source="command line")


def _experiment_command(kind: str) -> Callable[[argparse.Namespace], Dict[str, Any]]:
    def command(args: argparse.Namespace) -> Dict[str, Any]:
        config = _experiment_config(kind, args)
        result = run_experiment(config, workers=args.workers)
        return {"kind": result.kind, "records": len(result.records), "summary": result.summary}

    return command


def cmd_report(args: argparse.Namespace) -> Dict[str, Any]:
    target = render_report(load_result(args.input), args.out)
    return {"report": str(target)}


def _add_experiment_parser(sub: Any, kind: str, help_text: str) -> None:
    parser = sub.add_parser(kind, help=help_text)
    parser.add_argument("--config", type=Path, help="key = value experiment configuration file")
    parser.add_argument("--csv", type=Path, help="Write the records as CSV")
    parser.add_argument("--json", type=Path, help="Write the full result (config, seed, records, summary) as JSON")
    parser.add_argument("--report", type=Path, help="Write an HTML report with charts")
    parser.add_argument("--workers", type=int, default=None, help="Concurrent simulations (default: env LOGBESOV_WORKERS or 4)")
    parser.set_defaults(handler=_experiment_command(kind))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Logarithmic Besov regularity tools for transport on the torus.")
    parser.add_argument(
        "--log-level",
        default=os.getenv("LOGBESOV_LOG_LEVEL", "INFO"),
        help="Logging level (defaults to env LOGBESOV_LOG_LEVEL or INFO).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lp = sub.add_parser("lp", help="Littlewood-Paley utilities")
    lp_sub = lp.add_subparsers(dest="lp_command", required=True)
    dec = lp_sub.add_parser("decompose", help="Write each dyadic block of a field as a snapshot")
    dec.add_argument("--input", type=Path, required=True)
    dec.add_argument("--a", type=float, default=None, help="Also report k^{2a}-weighted block energies")
    dec.add_argument("--out", type=Path, required=True)
    dec.add_argument("--generator", default="smooth_bump")
    dec.set_defaults(handler=cmd_lp_decompose)

    norms = sub.add_parser("norms", help="Evaluate logarithmic Besov norms of a field")
    norms.add_argument("--input", type=Path, required=True)
    norms.add_argument("--a", type=float, required=True)
    norms.add_argument("--flavors", default="block,highpass,logsum")
    norms.add_argument("--generator", default="smooth_bump")
    norms.add_argument("--json", type=Path)
    norms.set_defaults(handler=cmd_norms)

    solve_parser = sub.add_parser("solve", help="Integrate the advection-diffusion equation")
    solve_parser.add_argument("--model", choices=list(get_args(VelocityKind)), default="steady_shear")
    solve_parser.add_argument("--amplitude", type=float, default=1.0)
    solve_parser.add_argument("--kappa", type=float, default=0.0)
    solve_parser.add_argument("--n", type=int, default=64)
    solve_parser.add_argument("--d", type=int, default=2)
    solve_parser.add_argument("--dt", type=float, default=1e-3)
    solve_parser.add_argument("--tend", type=float, default=1.0)
    solve_parser.add_argument("--ic", default="random", help="Snapshot file or preset (harmonic, random, checkerboard)")
    solve_parser.add_argument("--seed", type=int, default=0)
    solve_parser.add_argument("--observe", default="l2,linf")
    solve_parser.add_argument("--stride", type=int, default=1)
    solve_parser.add_argument("--generator", default="smooth_bump")
    solve_parser.add_argument("--csv", type=Path)
    solve_parser.add_argument("--snapshot", type=Path, help="Write the final field as a snapshot")
    solve_parser.set_defaults(handler=cmd_solve)

    ot = sub.add_parser("otdist", help="Kantorovich-Rubinstein distance with logarithmic cost")
    ot.add_argument("--a", type=Path, required=True)
    ot.add_argument("--b", type=Path, required=True)
    ot.add_argument("--delta", type=float, required=True)
    ot.add_argument("--method", choices=["exact", "entropic"], default="exact")
    ot.add_argument("--eps", type=float, default=None)
    ot.add_argument("--max-support", type=int, default=2048)
    ot.add_argument("--json", type=Path)
    ot.set_defaults(handler=cmd_otdist)

    _add_experiment_parser(sub, "regularity", "Inviscid propagation of logarithmic regularity")
    _add_experiment_parser(sub, "diffusive", "Diffusive propagation with the Besov dissipation term")
    _add_experiment_parser(sub, "zerodiff", "Rates in the zero-diffusivity limit")
    _add_experiment_parser(sub, "mixing", "Mixing-norm decay and enhanced dissipation")

    rep = sub.add_parser("report", help="Render an emitted JSON result as HTML")
    rep.add_argument("--input", type=Path, required=True)
    rep.add_argument("--out", type=Path, required=True)
    rep.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logger.info("CLI invocation: %s", args.command)
    try:
        outcome = args.handler(args)
    except (LogBesovError, ValidationError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        raise SystemExit(1) from exc
    print(json.dumps(outcome, indent=2, default=str))
    return 0


__all__ = ["build_parser", "main"]


if __name__ == "__main__":
    main()
