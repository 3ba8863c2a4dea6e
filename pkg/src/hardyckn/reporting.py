"""Result bundles: schema-validated JSON plus deterministic CSV emitters.

A bundle holds everything one run produced: per-check report rows, window
scans, the configuration fingerprint, and wall-clock timings.  Timings are
the single intentionally nondeterministic field; every other byte of the
bundle and every CSV is a pure function of the configuration, so reruns of
the same config diff clean except for the timings block.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field as dc_field, fields as dc_fields
from pathlib import Path
from typing import Iterable, Mapping

import jsonschema

from .sharpness import ExtremizerSequenceResult, SharpnessScanResult

BUNDLE_VERSION = "1"

SCAN_CSV_COLUMNS = ("L", "min_quotient", "mu_squared", "gap",
                    "fitted_exponent_so_far")

REPORT_CSV_COLUMNS = ("check_name", "group", "norm", "field", "alpha", "route",
                      "lhs", "rhs", "residual", "relative_residual",
                      "tolerance", "ratio", "strict", "vacuous", "rejected",
                      "reject_reason", "passed")

EXTREMIZER_CSV_COLUMNS = ("outer_radius", "ratio", "remainder_ratio")


def fmt17(x: float | None) -> str:
    """Shortest representation guaranteeing 17 significant digits."""
    if x is None:
        return ""
    return f"{float(x):.17g}"


def _num_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


_NUMBER_OR_NULL = {"type": ["number", "null"]}

_REPORT_ROW_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["check_name", "group", "norm", "field", "alpha", "route",
                 "lhs", "rhs", "residual", "relative_residual", "tolerance",
                 "ratio", "strict", "vacuous", "rejected", "reject_reason",
                 "passed", "fingerprint", "details"],
    "properties": {
        "check_name": {"type": "string"},
        "group": {"type": "string"},
        "norm": {"type": "string"},
        "field": {"type": "string"},
        "alpha": _NUMBER_OR_NULL,
        "route": {"type": "string"},
        "lhs": _NUMBER_OR_NULL,
        "rhs": _NUMBER_OR_NULL,
        "residual": _NUMBER_OR_NULL,
        "relative_residual": _NUMBER_OR_NULL,
        "tolerance": {"type": "number"},
        "ratio": _NUMBER_OR_NULL,
        "strict": {"type": ["boolean", "null"]},
        "vacuous": {"type": "boolean"},
        "rejected": {"type": "boolean"},
        "reject_reason": {"type": ["string", "null"]},
        "passed": {"type": "boolean"},
        "fingerprint": {"type": "string"},
        "details": {
            "type": "object",
            "additionalProperties": {
                "type": ["number", "string", "boolean", "null"]},
        },
    },
}

_SCAN_RECORD_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "group", "alpha", "mu", "mu_squared", "lengths",
                 "min_quotients", "gaps", "fitted_exponents",
                 "profile_exponents", "grid_sizes", "decay_exponent",
                 "extrapolated_quotient", "strictly_above"],
    "properties": {
        "name": {"type": "string"},
        "group": {"type": "string"},
        "alpha": {"type": "number"},
        "mu": {"type": "number"},
        "mu_squared": {"type": "number"},
        "lengths": {"type": "array", "items": {"type": "number"}},
        "min_quotients": {"type": "array", "items": {"type": "number"}},
        "gaps": {"type": "array", "items": {"type": "number"}},
        "fitted_exponents": {"type": "array", "items": _NUMBER_OR_NULL},
        "profile_exponents": {"type": "array", "items": _NUMBER_OR_NULL},
        "grid_sizes": {"type": "array", "items": {"type": "integer"}},
        "decay_exponent": _NUMBER_OR_NULL,
        "extrapolated_quotient": {"type": "number"},
        "strictly_above": {"type": "boolean"},
    },
}

BUNDLE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "config_fingerprint", "reports", "scans",
                 "timings"],
    "properties": {
        "version": {"type": "string"},
        "config_fingerprint": {"type": "string"},
        "reports": {"type": "array", "items": _REPORT_ROW_SCHEMA},
        "scans": {"type": "array", "items": _SCAN_RECORD_SCHEMA},
        "timings": {"type": "object",
                    "additionalProperties": {"type": "number"}},
    },
}


@dataclass(frozen=True)
class ReportRow:
    """One check outcome with its run context, flattened for serialization."""

    check_name: str
    group: str
    norm: str
    field: str
    alpha: float | None
    route: str
    lhs: float | None
    rhs: float | None
    residual: float | None
    relative_residual: float | None
    tolerance: float
    ratio: float | None
    strict: bool | None
    vacuous: bool
    rejected: bool
    reject_reason: str | None
    passed: bool
    fingerprint: str
    details: Mapping = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        details = {}
        for k, v in dict(self.details).items():
            if isinstance(v, bool) or isinstance(v, str) or v is None:
                details[k] = v
            elif isinstance(v, int):
                details[k] = v
            else:
                details[k] = _num_or_none(v)
        return {
            "check_name": self.check_name,
            "group": self.group,
            "norm": self.norm,
            "field": self.field,
            "alpha": _num_or_none(self.alpha),
            "route": self.route,
            "lhs": _num_or_none(self.lhs),
            "rhs": _num_or_none(self.rhs),
            "residual": _num_or_none(self.residual),
            "relative_residual": _num_or_none(self.relative_residual),
            "tolerance": float(self.tolerance),
            "ratio": _num_or_none(self.ratio),
            "strict": self.strict,
            "vacuous": bool(self.vacuous),
            "rejected": bool(self.rejected),
            "reject_reason": self.reject_reason,
            "passed": bool(self.passed),
            "fingerprint": self.fingerprint,
            "details": details,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ReportRow":
        kwargs = {f.name: data[f.name] for f in dc_fields(cls)}
        return cls(**kwargs)


def row_from_identity_report(report, group: str, norm: str, field: str,
                             alpha: float | None = None) -> ReportRow:
    """Flatten an IdentityReport into a bundle row."""
    return ReportRow(
        check_name=report.check_name, group=group, norm=norm, field=field,
        alpha=alpha if alpha is not None else report.details.get("alpha"),
        route=report.route, lhs=report.lhs, rhs=report.rhs,
        residual=report.residual, relative_residual=report.relative_residual,
        tolerance=report.tolerance, ratio=report.ratio, strict=report.strict,
        vacuous=report.vacuous, rejected=False, reject_reason=None,
        passed=report.passed, fingerprint=report.fingerprint,
        details=dict(report.details))


def rejection_row(check_name: str, group: str, reason: str,
                  fingerprint: str, expected: bool) -> ReportRow:
    """Row recording that a check refused its hypotheses.

    passed mirrors whether the rejection was declared in the configuration:
    an expected rejection is a successful negative test, an unexpected one
    is a failure surfaced with exit code 3.
    """
    return ReportRow(
        check_name=check_name, group=group, norm="-", field="-", alpha=None,
        route="none", lhs=None, rhs=None, residual=None,
        relative_residual=None, tolerance=0.0, ratio=None, strict=None,
        vacuous=False, rejected=True, reject_reason=reason, passed=expected,
        fingerprint=fingerprint, details={})


@dataclass(frozen=True)
class ScanRecord:
    """Serialized form of one window-ladder scan."""

    name: str
    group: str
    alpha: float
    mu: float
    mu_squared: float
    lengths: tuple
    min_quotients: tuple
    gaps: tuple
    fitted_exponents: tuple
    profile_exponents: tuple
    grid_sizes: tuple
    decay_exponent: float | None
    extrapolated_quotient: float
    strictly_above: bool

    @classmethod
    def from_scan(cls, name: str, group: str,
                  scan: SharpnessScanResult) -> "ScanRecord":
        return cls(
            name=name, group=group, alpha=scan.alpha, mu=scan.mu,
            mu_squared=scan.mu_squared, lengths=scan.lengths,
            min_quotients=scan.min_quotients, gaps=scan.gaps,
            fitted_exponents=scan.fitted_exponents,
            profile_exponents=scan.profile_exponents,
            grid_sizes=scan.grid_sizes, decay_exponent=scan.decay_exponent,
            extrapolated_quotient=scan.extrapolated_quotient,
            strictly_above=scan.strictly_above)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "group": self.group,
            "alpha": float(self.alpha),
            "mu": float(self.mu),
            "mu_squared": float(self.mu_squared),
            "lengths": [float(x) for x in self.lengths],
            "min_quotients": [float(x) for x in self.min_quotients],
            "gaps": [float(x) for x in self.gaps],
            "fitted_exponents": [_num_or_none(x) for x in self.fitted_exponents],
            "profile_exponents": [_num_or_none(x) for x in self.profile_exponents],
            "grid_sizes": [int(x) for x in self.grid_sizes],
            "decay_exponent": _num_or_none(self.decay_exponent),
            "extrapolated_quotient": float(self.extrapolated_quotient),
            "strictly_above": bool(self.strictly_above),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ScanRecord":
        kwargs = {f.name: data[f.name] for f in dc_fields(cls)}
        for key in ("lengths", "min_quotients", "gaps", "fitted_exponents",
                    "profile_exponents", "grid_sizes"):
            kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class ReportBundle:
    """Everything one run produced, in schema-validated form."""

    config_fingerprint: str
    reports: tuple[ReportRow, ...] = ()
    scans: tuple[ScanRecord, ...] = ()
    timings: Mapping[str, float] = dc_field(default_factory=dict)
    version: str = BUNDLE_VERSION

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.reports) \
            and all(s.strictly_above for s in self.scans)

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "config_fingerprint": self.config_fingerprint,
            "reports": [row.to_json() for row in self.reports],
            "scans": [s.to_json() for s in self.scans],
            "timings": {k: float(v) for k, v in dict(self.timings).items()},
        }


def validate_bundle_data(data: Mapping) -> None:
    """Schema-check a bundle document; unknown fields are rejected."""
    jsonschema.validate(instance=data, schema=BUNDLE_SCHEMA)


def write_bundle(bundle: ReportBundle, path: str | Path) -> Path:
    path = Path(path)
    data = bundle.to_json()
    validate_bundle_data(data)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    return path


def load_bundle(path: str | Path) -> ReportBundle:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    validate_bundle_data(data)
    return ReportBundle(
        config_fingerprint=data["config_fingerprint"],
        reports=tuple(ReportRow.from_json(r) for r in data["reports"]),
        scans=tuple(ScanRecord.from_json(s) for s in data["scans"]),
        timings=data["timings"],
        version=data["version"],
    )


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return fmt17(value)


def write_reports_csv(rows: Iterable[ReportRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_CSV_COLUMNS)
        for row in rows:
            writer.writerow([_csv_cell(getattr(row, col))
                             for col in REPORT_CSV_COLUMNS])
    return path


def write_scan_csv(record: ScanRecord, path: str | Path) -> Path:
    """One row per window, columns fixed by SCAN_CSV_COLUMNS."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCAN_CSV_COLUMNS)
        for k in range(len(record.lengths)):
            fitted = record.fitted_exponents[k]
            writer.writerow([
                fmt17(record.lengths[k]),
                fmt17(record.min_quotients[k]),
                fmt17(record.mu_squared),
                fmt17(record.gaps[k]),
                "nan" if fitted is None or (isinstance(fitted, float)
                                            and math.isnan(fitted))
                else fmt17(fitted),
            ])
    return path


def write_extremizer_csv(result: ExtremizerSequenceResult,
                         path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EXTREMIZER_CSV_COLUMNS)
        for b, rho, rem in zip(result.outer_radii, result.ratios,
                               result.remainder_ratios):
            writer.writerow([fmt17(b), fmt17(rho), fmt17(rem)])
    return path


def render_bundle_summary(bundle: ReportBundle, source: str = "") -> str:
    """Human-readable digest of a bundle: verdict lines plus totals."""
    lines: list[str] = []
    header = f"bundle {source}".rstrip()
    lines.append(f"{header} (config {bundle.config_fingerprint[:12]})")
    n_pass = sum(1 for r in bundle.reports if r.passed)
    for row in bundle.reports:
        verdict = "PASS" if row.passed else "FAIL"
        where = f"{row.group}/{row.norm}/{row.field}"
        alpha = "" if row.alpha is None else f" alpha={row.alpha:g}"
        if row.rejected:
            tail = f"rejected ({row.reject_reason})"
        else:
            tail = f"rel={row.relative_residual:.3e} tol={row.tolerance:.1e}"
        lines.append(f"  {verdict} {row.check_name} @ {where}{alpha} {tail}")
    for scan in bundle.scans:
        verdict = "PASS" if scan.strictly_above else "FAIL"
        lines.append(
            f"  {verdict} scan {scan.name} @ {scan.group} alpha={scan.alpha:g}"
            f" decay={scan.decay_exponent if scan.decay_exponent is not None else float('nan'):.3f}"
            f" limit={scan.extrapolated_quotient:.6g}"
            f" (mu^2={scan.mu_squared:.6g})")
    lines.append(f"  {n_pass}/{len(bundle.reports)} checks passed,"
                 f" {len(bundle.scans)} scans")
    return "\n".join(lines)
