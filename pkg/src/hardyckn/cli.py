"""Command-line front end.

Subcommands:
    verify     --config <path> [--only <check-name>] [--out <dir>]
    sharpness  --config <path> --out <dir>
    report     <bundle.json> [<bundle.json> ...]

Exit codes: 0 all checks passed, 1 at least one check failed, 2 malformed
configuration or bundle, 3 a hypothesis guard fired outside the configured
expect-reject list.  The output directory resolves as --out, then the
HARDYCKN_OUT environment variable, then [output] directory from the config,
then ./out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from collections import defaultdict
from pathlib import Path

import jsonschema

from . import __version__
from .config import (KNOWN_CHECKS, VerifyConfig, build_field, build_group,
                     build_norm, load_config)
from .errors import (ConfigError, HardycknError, HypothesisViolationError)
from .fields import annulus_samples, gradient_selfcheck, power_of_norm_field
from .groups import QuasiNorm, check_homogeneity
from .identities import (build_fingerprint, verify_alpha_one_inequality,
                         verify_alpha_zero_identity, verify_ckn_inequality,
                         verify_ibp_identity, verify_product_rule,
                         verify_remainder_identity, verify_schwarz_step,
                         verify_uncertainty, weighted_norm_triple)
from .reporting import (ReportBundle, ReportRow, ScanRecord, load_bundle,
                        rejection_row, render_bundle_summary,
                        row_from_identity_report, write_bundle,
                        write_extremizer_csv, write_reports_csv,
                        write_scan_csv)
from .sharpness import extremizer_quotients, sharpness_scan

_HOMOGENEITY_SCALES = (0.5, 2.0, 3.0)
_SAMPLE_ANNULUS = (0.5, 4.0)


def resolve_out(cli_out: str | None, config: VerifyConfig) -> Path:
    target = cli_out or os.environ.get("HARDYCKN_OUT") or config.output_dir or "out"
    return Path(target)


def run_verify(config: VerifyConfig, only: str | None = None) -> ReportBundle:
    """Execute the configured check matrix and collect one bundle."""
    if only is not None:
        if only not in KNOWN_CHECKS:
            raise ConfigError(f"--only: unknown check {only!r}; known: {KNOWN_CHECKS}")
        if only not in config.checks:
            raise ConfigError(f"--only: check {only!r} is not enabled in this config")
    enabled = tuple(c for c in config.checks if only is None or c == only)
    settings = config.quadrature
    tol = config.tolerances
    counts = config.samples

    rows: list[ReportRow] = []
    timings: dict = defaultdict(float)
    t_start = time.perf_counter()

    def guarded(check: str, gname: str, nname: str, fname: str,
                alpha: float | None, fn):
        """Run one check; translate hypothesis rejections into rows."""
        expected = config.expects_reject(check, gname)
        t0 = time.perf_counter()
        try:
            report = fn()
        except HypothesisViolationError as exc:
            fp = build_fingerprint(check, spec, None, fname, alpha, settings)
            rows.append(rejection_row(check, gname, str(exc), fp, expected))
            return
        finally:
            timings[check] += time.perf_counter() - t0
        row = row_from_identity_report(report, gname, nname, fname, alpha)
        if expected:
            # the configuration promised a rejection that did not happen
            rows.append(ReportRow(
                check_name=row.check_name, group=row.group, norm=row.norm,
                field=row.field, alpha=row.alpha, route=row.route,
                lhs=row.lhs, rhs=row.rhs, residual=row.residual,
                relative_residual=row.relative_residual,
                tolerance=row.tolerance, ratio=row.ratio, strict=row.strict,
                vacuous=row.vacuous, rejected=False,
                reject_reason="expected a hypothesis rejection, but the check ran",
                passed=False, fingerprint=row.fingerprint,
                details=row.details))
        else:
            rows.append(row)

    for gname in config.run_groups:
        gcfg = config.group_configs[gname]
        spec = build_group(gcfg)

        # group-level guard for the alpha = 1 inequality: below Q = 5 it is
        # rejected once per group, independent of gauge and field
        if "alpha-one-inequality" in enabled and spec.Q < 5.0:
            expected = config.expects_reject("alpha-one-inequality", gname)
            fp = build_fingerprint("alpha-one-inequality", spec, None, "-",
                                   1.0, settings)
            reason = f"requires homogeneous dimension Q >= 5, got Q = {spec.Q:g}"
            rows.append(rejection_row("alpha-one-inequality", gname, reason,
                                      fp, expected))

        for nname in gcfg.norms:
            qn = build_norm(spec, config.norm_configs[nname])

            if "homogeneity" in enabled:
                t0 = time.perf_counter()
                gauge = power_of_norm_field(qn, 1.0)
                pts = annulus_samples(qn, *_SAMPLE_ANNULUS, counts.homogeneity,
                                      counts.seed)
                rep = check_homogeneity(spec, qn, gauge, 1.0, pts,
                                        _HOMOGENEITY_SCALES, tol)
                timings["homogeneity"] += time.perf_counter() - t0
                residual = max(rep.euler_residual, rep.scaling_residual)
                rows.append(ReportRow(
                    check_name="homogeneity", group=gname, norm=nname,
                    field="gauge", alpha=None, route="pointwise",
                    lhs=rep.euler_residual, rhs=rep.scaling_residual,
                    residual=residual, relative_residual=residual,
                    tolerance=rep.tolerance, ratio=None, strict=None,
                    vacuous=False, rejected=False, reject_reason=None,
                    passed=rep.passed and rep.consistent,
                    fingerprint=build_fingerprint("homogeneity", spec, qn,
                                                  "gauge", None, settings),
                    details={"euler_residual": rep.euler_residual,
                             "scaling_residual": rep.scaling_residual,
                             "consistent": rep.consistent,
                             "samples_used": rep.samples_used}))

            for fname in config.run_fields:
                f = build_field(qn, config.field_configs[fname])
                a, b = f.support

                if "gradient-selfcheck" in enabled:
                    t0 = time.perf_counter()
                    pts = annulus_samples(qn, a, b, counts.product_rule,
                                          counts.seed)
                    rep = gradient_selfcheck(f, pts, tolerances=tol)
                    timings["gradient-selfcheck"] += time.perf_counter() - t0
                    rows.append(ReportRow(
                        check_name="gradient-selfcheck", group=gname,
                        norm=nname, field=fname, alpha=None,
                        route="pointwise", lhs=rep.observed_order, rhs=2.0,
                        residual=rep.max_error_at_reference_step,
                        relative_residual=rep.max_error_at_reference_step,
                        tolerance=1e-6, ratio=None, strict=None,
                        vacuous=False, rejected=False, reject_reason=None,
                        passed=rep.passed,
                        fingerprint=build_fingerprint("gradient-selfcheck",
                                                      spec, qn, fname, None,
                                                      settings),
                        details={"reference_step": rep.reference_step,
                                 "observed_order": rep.observed_order}))

                if "alpha-zero-identity" in enabled:
                    guarded("alpha-zero-identity", gname, nname, fname, 0.0,
                            lambda: verify_alpha_zero_identity(
                                spec, qn, f, settings, tol))
                if "ibp-identity" in enabled:
                    guarded("ibp-identity", gname, nname, fname, None,
                            lambda: verify_ibp_identity(spec, qn, f, settings,
                                                        tol))
                if "uncertainty" in enabled:
                    guarded("uncertainty", gname, nname, fname, None,
                            lambda: verify_uncertainty(spec, qn, f, settings,
                                                       tol))

                share_triple = ("remainder-identity" in enabled
                                and "ckn-inequality" in enabled)
                for alpha in config.alphas:
                    triple = None
                    if share_triple:
                        t0 = time.perf_counter()
                        triple = weighted_norm_triple(spec, qn, f, alpha,
                                                      settings)
                        timings["weighted-norms"] += time.perf_counter() - t0
                    if "remainder-identity" in enabled:
                        guarded("remainder-identity", gname, nname, fname,
                                alpha,
                                lambda: verify_remainder_identity(
                                    spec, qn, f, alpha, settings, tol,
                                    triple=triple))
                    if "ckn-inequality" in enabled:
                        guarded("ckn-inequality", gname, nname, fname, alpha,
                                lambda: verify_ckn_inequality(
                                    spec, qn, f, alpha, settings, tol,
                                    triple=triple))
                    if "product-rule" in enabled:
                        pts = annulus_samples(qn, a, b, counts.product_rule,
                                              counts.seed + 1)
                        guarded("product-rule", gname, nname, fname, alpha,
                                lambda: verify_product_rule(
                                    spec, qn, f, alpha, pts, tol, settings))

                if "alpha-one-inequality" in enabled and spec.Q >= 5.0:
                    guarded("alpha-one-inequality", gname, nname, fname, 1.0,
                            lambda: verify_alpha_one_inequality(
                                spec, qn, f, settings, tol))

        if "schwarz-step" in enabled and spec.is_isotropic:
            euclid = QuasiNorm("euclidean", spec)
            for fname in config.run_fields:
                f = build_field(euclid, config.field_configs[fname])
                a, b = f.support
                pts = annulus_samples(euclid, a, b, counts.schwarz,
                                      counts.seed + 2)
                guarded("schwarz-step", gname, "euclidean", fname, None,
                        lambda: verify_schwarz_step(spec, f, pts, settings,
                                                    tol))

    timings["total"] = time.perf_counter() - t_start
    return ReportBundle(config_fingerprint=config.fingerprint,
                        reports=tuple(rows), scans=(),
                        timings=dict(timings))


def bundle_exit_code(bundle: ReportBundle) -> int:
    if any(row.rejected and not row.passed for row in bundle.reports):
        return 3
    if not bundle.all_passed:
        return 1
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    outdir = resolve_out(args.out, config)
    bundle = run_verify(config, only=args.only)
    bundle_path = write_bundle(bundle, outdir / "verify_bundle.json")
    csv_path = write_reports_csv(bundle.reports, outdir / "verify_reports.csv")
    print(render_bundle_summary(bundle, source="verify"))
    print(f"wrote {bundle_path} and {csv_path}")
    return bundle_exit_code(bundle)


def run_sharpness(config: VerifyConfig, outdir: Path) -> tuple[ReportBundle, list[Path]]:
    """Execute the configured scans and extremizer sequences."""
    rows: list[ReportRow] = []
    records: list[ScanRecord] = []
    written: list[Path] = []
    timings: dict = defaultdict(float)
    t_start = time.perf_counter()

    for scan_cfg in config.scans:
        spec = build_group(config.group_configs[scan_cfg.group])
        t0 = time.perf_counter()
        scan = sharpness_scan(spec, scan_cfg.alpha, scan_cfg.lengths,
                              scan_cfg.grid_size, scan_cfg.reference_length,
                              config.tolerances)
        timings["scan"] += time.perf_counter() - t0
        record = ScanRecord.from_scan(scan_cfg.name, scan_cfg.group, scan)
        records.append(record)
        written.append(write_scan_csv(record, outdir / f"scan_{scan_cfg.name}.csv"))

    for ext in config.extremizers:
        spec = build_group(config.group_configs[ext.group])
        qn = build_norm(spec, config.norm_configs[ext.norm])
        t0 = time.perf_counter()
        seq = extremizer_quotients(spec, qn, ext.alpha, ext.outer_radii,
                                   ext.inner_radius, ext.taper,
                                   config.quadrature, config.tolerances)
        timings["extremizer"] += time.perf_counter() - t0
        written.append(write_extremizer_csv(seq, outdir / f"extremizer_{ext.name}.csv"))
        fp = build_fingerprint("extremizer-ratio", spec, qn, ext.name,
                               ext.alpha, config.quadrature)
        margin = config.tolerances.strictness_margin
        for radius, rho, rem in zip(seq.outer_radii, seq.ratios,
                                    seq.remainder_ratios):
            rows.append(ReportRow(
                check_name="extremizer-ratio", group=ext.group, norm=ext.norm,
                field=ext.name, alpha=ext.alpha, route="radial",
                lhs=rho, rhs=1.0, residual=max(0.0, rho - 1.0),
                relative_residual=max(0.0, rho - 1.0),
                tolerance=config.tolerances.inequality_slack, ratio=rho,
                strict=rho < 1.0 - margin, vacuous=False, rejected=False,
                reject_reason=None, passed=rho < 1.0 - margin,
                fingerprint=fp,
                details={"outer_radius": radius, "remainder_ratio": rem}))
        rows.append(ReportRow(
            check_name="extremizer-trend", group=ext.group, norm=ext.norm,
            field=ext.name, alpha=ext.alpha, route="radial",
            lhs=seq.ratios[0], rhs=seq.ratios[-1], residual=0.0,
            relative_residual=0.0, tolerance=config.tolerances.inequality_slack,
            ratio=None, strict=seq.all_strict, vacuous=False, rejected=False,
            reject_reason=None,
            passed=(seq.ratios_increasing and seq.remainder_decreasing
                    and seq.all_strict),
            fingerprint=fp,
            details={"ratios_increasing": seq.ratios_increasing,
                     "remainder_decreasing": seq.remainder_decreasing,
                     "all_strict": seq.all_strict}))

    timings["total"] = time.perf_counter() - t_start
    bundle = ReportBundle(config_fingerprint=config.fingerprint,
                          reports=tuple(rows), scans=tuple(records),
                          timings=dict(timings))
    return bundle, written


def cmd_sharpness(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    outdir = resolve_out(args.out, config)
    if not config.scans and not config.extremizers:
        raise ConfigError("no [scan ...] or [extremizer ...] sections in this config")
    bundle, written = run_sharpness(config, outdir)
    bundle_path = write_bundle(bundle, outdir / "sharpness_bundle.json")
    print(render_bundle_summary(bundle, source="sharpness"))
    names = " ".join(str(p) for p in [bundle_path, *written])
    print(f"wrote {names}")
    return bundle_exit_code(bundle)


def cmd_report(args: argparse.Namespace) -> int:
    all_passed = True
    for path in args.bundles:
        try:
            bundle = load_bundle(path)
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError,
                KeyError, TypeError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return 2
        print(render_bundle_summary(bundle, source=str(path)))
        all_passed = all_passed and bundle.all_passed
    return 0 if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardyckn",
        description="Numerical verification and sharp-constant exploration"
                    " for weighted Hardy identities under anisotropic"
                    " dilations.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser(
        "verify", help="run the configured identity and inequality checks")
    p_verify.add_argument("--config", required=True,
                          help="path to an INI run configuration")
    p_verify.add_argument("--only", default=None, metavar="CHECK",
                          help="restrict the run to one check by name")
    p_verify.add_argument("--out", default=None, metavar="DIR",
                          help="output directory for the bundle and CSV")

    p_sharp = sub.add_parser(
        "sharpness", help="run window-ladder scans and extremizer sequences")
    p_sharp.add_argument("--config", required=True,
                         help="path to an INI run configuration")
    p_sharp.add_argument("--out", default=None, metavar="DIR",
                         help="output directory for bundles and CSVs")

    p_report = sub.add_parser(
        "report", help="summarize previously written result bundles")
    p_report.add_argument("bundles", nargs="+", metavar="BUNDLE",
                          help="bundle JSON files to summarize")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "sharpness":
            return cmd_sharpness(args)
        if args.command == "report":
            return cmd_report(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HypothesisViolationError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 3
    except HardycknError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable: argparse enforces a command")


def entrypoint() -> None:
    try:
        code = main()
    except BrokenPipeError:
        # downstream pager closed early; not an error of ours
        try:
            sys.stdout.close()
        except OSError:
            pass
        code = 0
    sys.exit(code)
