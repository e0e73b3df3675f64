"""Sweep configuration, execution, and machine-readable reports.

A sweep instantiates one symbol family across a (p, N, h) grid, runs the
norm estimator and the requested regularity norms on every cell, and
collects rows whose ratio column realizes estimate / (p^2/(p-1) * symbol
norm).  Reports serialize to JSON (exact schema, byte-stable) and CSV
(fixed column order); both round-trip losslessly.  No wall-clock state
enters anywhere: a config plus its seed fully determines the report.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .catalogue import FAMILIES, build_symbol
from .errors import SchurLabError, ValidationError
from .estimation import NormEstimate, op_norm_lower_bound, op_norm_p2
from .lattice import make_lattice
from .regularity import SobolevParams, hms_delta_norm, hms_norm, hms_sobolev_norm

NORM_CHOICES = ("hms", "hms_delta", "hms_sobolev")

CSV_COLUMNS = [
    "family", "params", "p", "N", "h",
    "estimate_value", "estimate_kind", "amplification_level", "trials", "seed",
    "hms_total", "hms_delta_total", "hms_sobolev",
    "ratio", "ratio_norm", "error", "config_hash", "version",
]

_DEFAULT_TOPOLOGY = {
    "toeplitz_hm": "integer",
    "divided_difference": "integer",
    "alpha_divided": "sampled_box",
    "corona": "sampled_box",
    "custom_file": "integer",
}


@dataclass(frozen=True)
class EstimatorParams:
    restarts: int = 8
    iterations: int = 60
    seed: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    family_params: dict = field(default_factory=dict)
    p_list: tuple = ()
    sizes: tuple = ()          # tuples (N, h)
    estimator: EstimatorParams = EstimatorParams()
    norms: tuple = ("hms",)
    sobolev: dict = field(default_factory=dict)  # {"q", "sigma", "j_min", "j_max"}

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if not self.p_list:
            raise ValidationError("p_list must be non-empty")
        if not self.sizes:
            raise ValidationError("sizes must be non-empty")
        for p in self.p_list:
            if float(p) < 1.0 or math.isinf(float(p)):
                raise ValidationError("sweeps estimate finite exponents p >= 1")
        for norm in self.norms:
            if norm not in NORM_CHOICES:
                raise ValidationError(f"unknown norm {norm!r}; choose from {NORM_CHOICES}")
        if "hms_sobolev" in self.norms:
            for key in ("j_min", "j_max"):
                if key not in self.sobolev:
                    raise ValidationError("hms_sobolev needs sobolev.j_min and sobolev.j_max")
        object.__setattr__(self, "p_list", tuple(float(p) for p in self.p_list))
        object.__setattr__(self, "sizes", tuple((int(N), float(h)) for N, h in self.sizes))
        object.__setattr__(self, "norms", tuple(self.norms))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "family_params": dict(self.family_params),
            "p_list": list(self.p_list),
            "sizes": [[N, h] for N, h in self.sizes],
            "estimator": {"restarts": self.estimator.restarts,
                          "iterations": self.estimator.iterations,
                          "seed": self.estimator.seed},
            "norms": list(self.norms),
            "sobolev": dict(self.sobolev),
        }

    @staticmethod
    def from_json(obj: dict) -> "ExperimentConfig":
        est = obj.get("estimator", {})
        if "seed" not in est:
            raise ValidationError("config must pin estimator.seed (no wall-clock seeding)")
        return ExperimentConfig(
            family=obj["family"],
            family_params=dict(obj.get("family_params", {})),
            p_list=tuple(obj.get("p_list", ())),
            sizes=tuple(tuple(s) for s in obj.get("sizes", ())),
            estimator=EstimatorParams(int(est.get("restarts", 8)), int(est.get("iterations", 60)), int(est["seed"])),
            norms=tuple(obj.get("norms", ("hms",))),
            sobolev=dict(obj.get("sobolev", {})),
        )

    def hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class ReportRow:
    family: str
    params: dict
    p: float
    N: int
    h: float
    estimate: NormEstimate | None = None
    hms_total: float | None = None
    hms_delta_total: float | None = None
    hms_sobolev: float | None = None
    ratio: float | None = None
    ratio_norm: str = ""
    error: str = ""

    def symbol_norm(self) -> tuple[float | None, str]:
        """First available normalizer among the requested regularity norms."""
        for name, value in (("hms", self.hms_total),
                            ("hms_delta", self.hms_delta_total),
                            ("hms_sobolev", self.hms_sobolev)):
            if value is not None:
                return value, name
        return None, ""

    def to_dict(self) -> dict:
        est = None
        if self.estimate is not None:
            est = {
                "value": self.estimate.value,
                "kind": self.estimate.kind,
                "p": "inf" if math.isinf(self.estimate.p) else self.estimate.p,
                "amplification_level": self.estimate.amplification_level,
                "trials": self.estimate.trials,
                "seed": self.estimate.seed,
            }
        return {
            "family": self.family, "params": dict(self.params),
            "p": self.p, "N": self.N, "h": self.h,
            "norm_estimate": est,
            "norms": {"hms": self.hms_total, "hms_delta": self.hms_delta_total,
                      "hms_sobolev": self.hms_sobolev},
            "ratio": self.ratio, "ratio_norm": self.ratio_norm, "error": self.error,
        }

    @staticmethod
    def from_dict(obj: dict) -> "ReportRow":
        est = None
        if obj.get("norm_estimate"):
            e = obj["norm_estimate"]
            est = NormEstimate(value=e["value"], kind=e["kind"], p=float(e["p"]),
                               amplification_level=e["amplification_level"],
                               trials=e["trials"], seed=e["seed"])
        norms = obj.get("norms", {})
        return ReportRow(
            family=obj["family"], params=dict(obj.get("params", {})),
            p=float(obj["p"]), N=int(obj["N"]), h=float(obj["h"]),
            estimate=est,
            hms_total=norms.get("hms"), hms_delta_total=norms.get("hms_delta"),
            hms_sobolev=norms.get("hms_sobolev"),
            ratio=obj.get("ratio"), ratio_norm=obj.get("ratio_norm", ""),
            error=obj.get("error", ""),
        )


@dataclass
class Report:
    rows: list
    config_hash: str
    version: str = __version__

    def to_json(self) -> dict:
        return {"version": self.version, "config_hash": self.config_hash,
                "rows": [row.to_dict() for row in self.rows]}

    @staticmethod
    def from_json(obj: dict) -> "Report":
        return Report(rows=[ReportRow.from_dict(r) for r in obj.get("rows", [])],
                      config_hash=obj.get("config_hash", ""),
                      version=obj.get("version", ""))


def _row_seed(root_seed: int, index: int) -> int:
    return int(np.random.SeedSequence(root_seed, spawn_key=(index,)).generate_state(1)[0])


def constant_shape(p: float) -> float:
    """The p^2/(p-1) normalizer used in the ratio column."""
    return p * p / (p - 1.0) if p > 1.0 else math.inf


def _run_row(config: ExperimentConfig, index: int, N: int, h: float, p: float) -> ReportRow:
    row = ReportRow(family=config.family, params=dict(config.family_params), p=p, N=N, h=h)
    try:
        topology = config.family_params.get("topology", _DEFAULT_TOPOLOGY[config.family])
        n_dim = int(config.family_params.get("n", 1))
        lat = make_lattice(n_dim, N, h, topology)
        M = build_symbol(config.family, config.family_params, lat)
        est = config.estimator
        if p == 2.0:
            row.estimate = op_norm_p2(M)
        else:
            row.estimate = op_norm_lower_bound(M, p, est.restarts, est.iterations,
                                               _row_seed(est.seed, index))
        if "hms" in config.norms:
            row.hms_total = hms_norm(M).total
        if "hms_delta" in config.norms:
            row.hms_delta_total = hms_delta_norm(M).total
        if "hms_sobolev" in config.norms:
            params = SobolevParams(q=float(config.sobolev.get("q", 2.0)),
                                   sigma=float(config.sobolev.get("sigma", lat.dimension / 2 + 0.5)))
            j_range = range(int(config.sobolev["j_min"]), int(config.sobolev["j_max"]) + 1)
            row.hms_sobolev = hms_sobolev_norm(M, params, j_range)
        norm_value, norm_name = row.symbol_norm()
        if norm_value is not None and norm_value > 0 and p > 1.0:
            row.ratio = row.estimate.value / (constant_shape(p) * norm_value)
            row.ratio_norm = norm_name
    except (SchurLabError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(config: ExperimentConfig, threads: int = 1) -> Report:
    """One row per (size, p); row order and content are config-determined.

    Rows may run in parallel; a failing row records its error string and
    the sweep continues.
    """
    specs = []
    index = 0
    for N, h in config.sizes:
        for p in config.p_list:
            specs.append((index, N, h, p))
            index += 1
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda s: _run_row(config, *s), specs))
    else:
        rows = [_run_row(config, *spec) for spec in specs]
    return Report(rows=rows, config_hash=config.hash())


def report_json_bytes(report: Report) -> bytes:
    blob = json.dumps(report.to_json(), sort_keys=True, separators=(",", ":"))
    return (blob + "\n").encode("utf-8")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(report: Report, format: str, path) -> None:
    """Write the report; JSON keeps the exact schema, CSV the fixed columns."""
    path = Path(path)
    if format == "json":
        path.write_bytes(report_json_bytes(report))
        return
    if format != "csv":
        raise ValidationError(f"unknown report format {format!r}")
    import csv

    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            est = row.estimate
            writer.writerow([
                row.family,
                json.dumps(row.params, sort_keys=True),
                _csv_cell(row.p), row.N, _csv_cell(row.h),
                _csv_cell(est.value if est else None),
                est.kind if est else "",
                est.amplification_level if est else "",
                est.trials if est else "",
                est.seed if est else "",
                _csv_cell(row.hms_total), _csv_cell(row.hms_delta_total),
                _csv_cell(row.hms_sobolev),
                _csv_cell(row.ratio), row.ratio_norm, row.error,
                report.config_hash, report.version,
            ])


def read_report(path, format: str | None = None) -> Report:
    """Read a report written by emit_report (format inferred from suffix)."""
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "json"
    if format == "json":
        return Report.from_json(json.loads(path.read_text()))
    if format != "csv":
        raise ValidationError(f"unknown report format {format!r}")
    import csv

    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != CSV_COLUMNS:
            raise ValidationError("CSV header does not match the documented column order")
        rows = []
        config_hash = ""
        version = ""
        for rec in reader:
            cell = dict(zip(CSV_COLUMNS, rec))
            est = None
            if cell["estimate_value"]:
                est = NormEstimate(
                    value=float(cell["estimate_value"]), kind=cell["estimate_kind"],
                    p=float(cell["p"]),
                    amplification_level=int(cell["amplification_level"]),
                    trials=int(cell["trials"]), seed=int(cell["seed"]),
                )
            rows.append(ReportRow(
                family=cell["family"], params=json.loads(cell["params"]),
                p=float(cell["p"]), N=int(cell["N"]), h=float(cell["h"]),
                estimate=est,
                hms_total=float(cell["hms_total"]) if cell["hms_total"] else None,
                hms_delta_total=float(cell["hms_delta_total"]) if cell["hms_delta_total"] else None,
                hms_sobolev=float(cell["hms_sobolev"]) if cell["hms_sobolev"] else None,
                ratio=float(cell["ratio"]) if cell["ratio"] else None,
                ratio_norm=cell["ratio_norm"], error=cell["error"],
            ))
            config_hash = cell["config_hash"]
            version = cell["version"]
    return Report(rows=rows, config_hash=config_hash, version=version)
