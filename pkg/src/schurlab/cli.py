"""Command line harness: one subcommand per laboratory surface.

    schurlab sweep        --config cfg.json --out report.json [--format json|csv]
    schurlab norm         --config cfg.json [--out report.json]
    schurlab hms          --config cfg.json [--out report.json]
    schurlab haagerup     --config cfg.json [--out doc.json]
    schurlab bmo          --config cfg.json [--out doc.json]
    schurlab twist-verify --config cfg.json [--out doc.json]
    schurlab lp           --config cfg.json [--out doc.json]

Shared flags: --seed overrides the config seed, --threads parallelizes
sweep rows.  Exit codes: 0 success, 2 validation error, 3 numerical
failure.  Without --out the JSON document goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bmo import bmo_norm
from .catalogue import build_symbol
from .errors import NumericalFailureError, SchurLabError, ValidationError
from .estimation import op_norm_infty_haagerup, op_norm_lower_bound, op_norm_p2
from .lattice import make_lattice
from .lp import (
    PartitionFamily,
    covered_pair_mask,
    lp_decompose,
    make_profile,
    partition_sum_check,
    square_function_norm,
    symbol_partition,
)
from .regularity import SobolevParams, hms_delta_norm, hms_norm, hms_sobolev_norm
from .report import (
    ExperimentConfig,
    Report,
    ReportRow,
    emit_report,
    report_json_bytes,
    run_sweep,
)
from .schatten import MatrixOperator, random_matrix, random_symbol, schatten_norm
from .twist import l2_bound_check, random_field, verify_intertwining

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from None


def _experiment_config(path: str, seed_override: int | None) -> ExperimentConfig:
    config = ExperimentConfig.from_json(_load_config(path))
    if seed_override is not None:
        config = replace(config, estimator=replace(config.estimator, seed=seed_override))
    return config


def _emit(doc: dict, out: str | None) -> None:
    blob = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(blob)
    else:
        sys.stdout.write(blob)


def _emit_report(report: Report, args) -> None:
    if args.out:
        emit_report(report, args.format, args.out)
    elif args.format == "json":
        sys.stdout.write(report_json_bytes(report).decode("utf-8"))
    else:
        raise ValidationError("csv output needs --out")


def _symbol_from_config(config: ExperimentConfig, N: int, h: float):
    topology = config.family_params.get("topology")
    if topology is None:
        from .report import _DEFAULT_TOPOLOGY

        topology = _DEFAULT_TOPOLOGY[config.family]
    lat = make_lattice(int(config.family_params.get("n", 1)), N, h, topology)
    return build_symbol(config.family, config.family_params, lat)


def _cmd_sweep(args) -> int:
    config = _experiment_config(args.config, args.seed)
    report = run_sweep(config, threads=args.threads)
    _emit_report(report, args)
    return EXIT_OK


def _cmd_norm(args) -> int:
    config = _experiment_config(args.config, args.seed)
    rows = []
    N, h = config.sizes[0]
    M = _symbol_from_config(config, N, h)
    for p in config.p_list:
        est = op_norm_p2(M) if p == 2.0 else op_norm_lower_bound(
            M, p, config.estimator.restarts, config.estimator.iterations, config.estimator.seed
        )
        rows.append(ReportRow(family=config.family, params=dict(config.family_params),
                              p=p, N=N, h=h, estimate=est))
    _emit_report(Report(rows=rows, config_hash=config.hash()), args)
    return EXIT_OK


def _cmd_hms(args) -> int:
    config = _experiment_config(args.config, args.seed)
    rows = []
    for N, h in config.sizes:
        M = _symbol_from_config(config, N, h)
        row = ReportRow(family=config.family, params=dict(config.family_params),
                        p=config.p_list[0], N=N, h=h)
        if "hms" in config.norms:
            row.hms_total = hms_norm(M).total
        if "hms_delta" in config.norms:
            row.hms_delta_total = hms_delta_norm(M).total
        if "hms_sobolev" in config.norms:
            params = SobolevParams(q=float(config.sobolev.get("q", 2.0)),
                                   sigma=float(config.sobolev.get("sigma", 1.0)))
            j_range = range(int(config.sobolev["j_min"]), int(config.sobolev["j_max"]) + 1)
            row.hms_sobolev = hms_sobolev_norm(M, params, j_range)
        rows.append(row)
    _emit_report(Report(rows=rows, config_hash=config.hash()), args)
    return EXIT_OK


def _cmd_haagerup(args) -> int:
    config = _experiment_config(args.config, args.seed)
    N, h = config.sizes[0]
    M = _symbol_from_config(config, N, h)
    tolerance = float(config.family_params.get("tolerance", 1e-6))
    est, witness = op_norm_infty_haagerup(M, tolerance=tolerance)
    _emit({
        "family": config.family, "params": dict(config.family_params),
        "N": N, "h": h, "value": est.value, "kind": est.kind,
        "witness": {"dimension": witness.dimension, "bound": witness.bound,
                    "reproduction_error": witness.reproduction_error,
                    "converged": witness.converged},
        "config_hash": config.hash(),
    }, args.out)
    return EXIT_OK


def _bare_config(path: str) -> dict:
    doc = _load_config(path)
    if "seed" not in doc:
        raise ValidationError("config must pin a seed (no wall-clock seeding)")
    return doc


def _cmd_bmo(args) -> int:
    doc = _bare_config(args.config)
    N = int(doc.get("N", 16))
    seed = args.seed if args.seed is not None else int(doc["seed"])
    lat = make_lattice(1, N, 1.0, "cyclic")
    rng = np.random.default_rng(seed)
    A = random_matrix(lat, rng)
    total, row, col = bmo_norm(A)
    _emit({"N": N, "seed": seed, "bmo": total, "bmo_r": row, "bmo_c": col,
           "op_norm": schatten_norm(A, math.inf)}, args.out)
    return EXIT_OK


def _cmd_twist_verify(args) -> int:
    doc = _bare_config(args.config)
    N = int(doc.get("N", 16))
    trials = int(doc.get("trials", 5))
    seed = args.seed if args.seed is not None else int(doc["seed"])
    lat = make_lattice(1, N, 1.0, "cyclic")
    rng = np.random.default_rng(seed)
    worst_col = worst_row = worst_l2_excess = 0.0
    for _ in range(trials):
        M = random_symbol(lat, rng)
        A = random_matrix(lat, rng)
        col, row = verify_intertwining(M, A)
        worst_col = max(worst_col, col)
        worst_row = max(worst_row, row)
        lhs, rhs = l2_bound_check(M, random_field(lat, rng))
        worst_l2_excess = max(worst_l2_excess, lhs - rhs)
    _emit({"N": N, "seed": seed, "trials": trials,
           "max_col_residual": worst_col, "max_row_residual": worst_row,
           "max_l2_excess": worst_l2_excess}, args.out)
    return EXIT_OK


def _cmd_lp(args) -> int:
    doc = _bare_config(args.config)
    N = int(doc.get("N", 16))
    h = float(doc.get("h", 1.0))
    kind = doc.get("kind", "corona")
    topology = doc.get("topology", "integer")
    seed = args.seed if args.seed is not None else int(doc["seed"])
    j_min = int(doc.get("j_min", -int(math.ceil(math.log2(2 * N * h))) - 1))
    j_max = int(doc.get("j_max", 0))
    lat = make_lattice(1, N, h, topology)
    family = PartitionFamily(make_profile(), (j_min, j_max), kind)
    parts = symbol_partition(family, lat)
    rng = np.random.default_rng(seed)
    A = random_matrix(lat, rng)
    pieces = lp_decompose(A, parts)
    covered = covered_pair_mask(parts)
    recon = sum(piece.entries for piece in pieces)
    residual = float(np.linalg.norm((recon - A.entries)[covered]))
    overlap = int(np.max(sum((np.abs(part.values) > 0).astype(int) for part in parts)))
    covered_A = MatrixOperator(lat, np.where(covered, A.entries, 0.0))
    ratios = {}
    for p in doc.get("p_list", [2, 4]):
        sq = square_function_norm(pieces, float(p))
        ratios[str(p)] = schatten_norm(covered_A, float(p)) / sq if sq > 0 else None
    _emit({"N": N, "h": h, "kind": kind, "seed": seed,
           "j_range": [j_min, j_max],
           "reconstruction_residual": residual,
           "max_overlap": overlap,
           "ratio_by_p": ratios}, args.out)
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "norm": _cmd_norm,
    "hms": _cmd_hms,
    "haagerup": _cmd_haagerup,
    "bmo": _cmd_bmo,
    "twist-verify": _cmd_twist_verify,
    "lp": _cmd_lp,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON config path")
        cmd.add_argument("--out", default=None, help="output path (stdout if omitted)")
        cmd.add_argument("--format", default="json", choices=("json", "csv"))
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.add_argument("--threads", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.format == "csv" and args.command not in ("sweep", "norm", "hms"):
            raise ValidationError(f"{args.command} emits a JSON document, not report rows")
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SchurLabError as exc:  # pragma: no cover - catchall for package errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
