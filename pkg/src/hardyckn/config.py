"""Run configuration: INI parsing, validation, and object builders.

A run file declares dilation structures, gauges, test fields, weight
exponents, the checks to execute, window-scan ladders, and numerical knobs.
Parsing is strict: unknown sections, unknown keys, dangling references, and
malformed values all raise ConfigError (CLI exit code 2) with the offending
section and key named.  Every parsed configuration carries a fingerprint,
the SHA-256 of a canonical re-serialization, so bundles can be traced back
to the exact settings that produced them regardless of comment or
whitespace formatting.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .errors import ConfigError, HardycknError
from .fields import (ScalarField, phase_wrapped_bump, product_field,
                     radial_bump)
from .groups import GroupSpec, QuasiNorm
from .quadrature import QuadratureSettings
from .tolerances import DEFAULT_TOLERANCES, ToleranceProfile

KNOWN_CHECKS = (
    "homogeneity",
    "gradient-selfcheck",
    "remainder-identity",
    "alpha-zero-identity",
    "ibp-identity",
    "product-rule",
    "ckn-inequality",
    "uncertainty",
    "schwarz-step",
    "alpha-one-inequality",
)

_NORM_FAMILIES = ("p-sum", "max", "euclidean", "koranyi")
_FIELD_KINDS = ("radial-bump", "phase-bump", "product-bump")

_RUN_KEYS = {"groups", "alphas", "checks", "fields", "expect_reject"}
_QUAD_KEYS = {"panels", "nodes_per_panel", "cartesian_resolution",
              "mc_samples", "mc_seed"}
_SAMPLE_KEYS = {"product_rule", "schwarz", "homogeneity", "seed"}
_OUTPUT_KEYS = {"directory"}
_GROUP_KEYS = {"nu", "norms"}
_NORM_KEYS = {"family", "p"}
_FIELD_KEYS = {"kind", "center", "width", "phase_scale", "axis", "normalized"}
_SCAN_KEYS = {"group", "alpha", "lengths", "grid_size", "reference_length"}
_EXTREMIZER_KEYS = {"group", "norm", "alpha", "outer_radii", "inner_radius",
                    "taper"}
# tolerance overrides accept every scalar field of ToleranceProfile
_TOLERANCE_KEYS = {f for f in ToleranceProfile.__dataclass_fields__
                   if f != "fd_window"}


@dataclass(frozen=True)
class SampleSettings:
    """Pointwise-check sample counts and the shared sampling seed."""

    product_rule: int = 48
    schwarz: int = 1000
    homogeneity: int = 32
    seed: int = 1234


@dataclass(frozen=True)
class NormConfig:
    name: str
    family: str
    p: float | None = None


@dataclass(frozen=True)
class GroupConfig:
    name: str
    nu: tuple[float, ...]
    norms: tuple[str, ...]


@dataclass(frozen=True)
class FieldConfig:
    name: str
    kind: str
    center: float = 2.0
    width: float = 1.0
    phase_scale: float = 1.0
    axis: int = 0
    normalized: bool = False


@dataclass(frozen=True)
class ScanConfig:
    name: str
    group: str
    alpha: float
    lengths: tuple[float, ...] = (4.0, 8.0, 16.0, 32.0)
    grid_size: int = 4096
    reference_length: float = 16.0


@dataclass(frozen=True)
class ExtremizerConfig:
    name: str
    group: str
    norm: str
    alpha: float
    outer_radii: tuple[float, ...] = (1e2, 1e4, 1e6, 1e8)
    inner_radius: float = 1.0
    taper: float = 1.0


@dataclass(frozen=True)
class VerifyConfig:
    """Validated contents of one run file."""

    source: str
    fingerprint: str
    run_groups: tuple[str, ...]
    alphas: tuple[float, ...]
    checks: tuple[str, ...]
    run_fields: tuple[str, ...]
    expect_reject: tuple[tuple[str, str], ...]
    group_configs: dict
    norm_configs: dict
    field_configs: dict
    scans: tuple[ScanConfig, ...]
    extremizers: tuple[ExtremizerConfig, ...]
    quadrature: QuadratureSettings = QuadratureSettings()
    samples: SampleSettings = SampleSettings()
    tolerances: ToleranceProfile = DEFAULT_TOLERANCES
    output_dir: str | None = None

    def expects_reject(self, check: str, group: str) -> bool:
        return (check, group) in self.expect_reject


def _floats(raw: str, where: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in raw.split())
    except ValueError as exc:
        raise ConfigError(f"{where}: expected numbers, got {raw!r}") from exc


def _positive_int(raw: str, where: str) -> int:
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from exc
    if value <= 0:
        raise ConfigError(f"{where}: must be positive, got {value}")
    return value


def _axis_index(raw: str, where: str) -> int:
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from exc
    if value < 0:
        raise ConfigError(f"{where}: must be a coordinate index >= 0, got {value}")
    return value


def _boolean(raw: str, where: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {raw!r}")


def _check_keys(section: str, present, allowed: set, required: set) -> None:
    unknown = set(present) - allowed
    if unknown:
        raise ConfigError(
            f"[{section}]: unknown key(s) {sorted(unknown)};"
            f" allowed: {sorted(allowed)}")
    missing = required - set(present)
    if missing:
        raise ConfigError(f"[{section}]: missing required key(s) {sorted(missing)}")


def canonical_text(parser: configparser.ConfigParser) -> str:
    """Whitespace- and order-insensitive serialization used for fingerprints."""
    lines: list[str] = []
    for section in sorted(parser.sections()):
        lines.append(f"[{section}]")
        for key in sorted(parser.options(section)):
            value = " ".join(parser.get(section, key).split())
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def config_fingerprint(parser: configparser.ConfigParser) -> str:
    return hashlib.sha256(canonical_text(parser).encode("utf-8")).hexdigest()


def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                       inline_comment_prefixes=None)
    parser.optionxform = str  # keys are case-sensitive
    return parser


def parse_config_text(text: str, source: str = "<string>") -> VerifyConfig:
    parser = _new_parser()
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return _build(parser, source)


def load_config(path: str | Path) -> VerifyConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text(encoding="utf-8"), source=str(path))


def default_config_text() -> str:
    return resources.files("hardyckn").joinpath("data/default.ini") \
        .read_text(encoding="utf-8")


def load_default_config() -> VerifyConfig:
    return parse_config_text(default_config_text(), source="<packaged default>")


def _build(parser: configparser.ConfigParser, source: str) -> VerifyConfig:
    sections = parser.sections()
    fingerprint = config_fingerprint(parser)

    group_configs: dict = {}
    norm_configs: dict = {}
    field_configs: dict = {}
    scans: list[ScanConfig] = []
    extremizers: list[ExtremizerConfig] = []

    plain = {"run", "quadrature", "samples", "tolerances", "output"}
    for section in sections:
        if section in plain:
            continue
        head, _, name = section.partition(" ")
        if head not in ("group", "norm", "field", "scan", "extremizer") or not name:
            raise ConfigError(f"{source}: unknown section [{section}]")

    if not parser.has_section("run"):
        raise ConfigError(f"{source}: missing required section [run]")

    # typed sub-sections first so [run] references can be resolved
    for section in sections:
        head, _, name = section.partition(" ")
        items = dict(parser.items(section))
        if head == "group" and name:
            _check_keys(section, items, _GROUP_KEYS, {"nu", "norms"})
            nu = _floats(items["nu"], f"[{section}] nu")
            if not nu or any(v <= 0 for v in nu):
                raise ConfigError(f"[{section}] nu: dilation exponents must be positive")
            norms = tuple(items["norms"].split())
            if not norms:
                raise ConfigError(f"[{section}] norms: at least one gauge is required")
            group_configs[name] = GroupConfig(name=name, nu=nu, norms=norms)
        elif head == "norm" and name:
            _check_keys(section, items, _NORM_KEYS, {"family"})
            family = items["family"].strip()
            if family not in _NORM_FAMILIES:
                raise ConfigError(
                    f"[{section}] family: unknown family {family!r};"
                    f" expected one of {_NORM_FAMILIES}")
            p = None
            if "p" in items:
                p = _floats(items["p"], f"[{section}] p")[0]
            if family == "p-sum" and p is None:
                raise ConfigError(f"[{section}]: family p-sum requires key p")
            if family != "p-sum" and p is not None:
                raise ConfigError(f"[{section}]: key p is only valid for family p-sum")
            norm_configs[name] = NormConfig(name=name, family=family, p=p)
        elif head == "field" and name:
            _check_keys(section, items, _FIELD_KEYS, {"kind"})
            kind = items["kind"].strip()
            if kind not in _FIELD_KINDS:
                raise ConfigError(
                    f"[{section}] kind: unknown kind {kind!r};"
                    f" expected one of {_FIELD_KINDS}")
            kwargs = {}
            for key in ("center", "width", "phase_scale"):
                if key in items:
                    kwargs[key] = _floats(items[key], f"[{section}] {key}")[0]
            if "axis" in items:
                kwargs["axis"] = _axis_index(items["axis"], f"[{section}] axis")
            if "normalized" in items:
                kwargs["normalized"] = _boolean(items["normalized"],
                                                f"[{section}] normalized")
            field_configs[name] = FieldConfig(name=name, kind=kind, **kwargs)
        elif head == "scan" and name:
            _check_keys(section, items, _SCAN_KEYS, {"group", "alpha"})
            kwargs = {
                "name": name,
                "group": items["group"].strip(),
                "alpha": _floats(items["alpha"], f"[{section}] alpha")[0],
            }
            if "lengths" in items:
                kwargs["lengths"] = _floats(items["lengths"], f"[{section}] lengths")
            if "grid_size" in items:
                kwargs["grid_size"] = _positive_int(items["grid_size"],
                                                    f"[{section}] grid_size")
            if "reference_length" in items:
                kwargs["reference_length"] = _floats(
                    items["reference_length"], f"[{section}] reference_length")[0]
            scans.append(ScanConfig(**kwargs))
        elif head == "extremizer" and name:
            _check_keys(section, items, _EXTREMIZER_KEYS,
                        {"group", "norm", "alpha"})
            kwargs = {
                "name": name,
                "group": items["group"].strip(),
                "norm": items["norm"].strip(),
                "alpha": _floats(items["alpha"], f"[{section}] alpha")[0],
            }
            if "outer_radii" in items:
                kwargs["outer_radii"] = _floats(items["outer_radii"],
                                                f"[{section}] outer_radii")
            if "inner_radius" in items:
                kwargs["inner_radius"] = _floats(items["inner_radius"],
                                                 f"[{section}] inner_radius")[0]
            if "taper" in items:
                kwargs["taper"] = _floats(items["taper"], f"[{section}] taper")[0]
            extremizers.append(ExtremizerConfig(**kwargs))

    # [run]
    run_items = dict(parser.items("run"))
    _check_keys("run", run_items, _RUN_KEYS, {"groups", "alphas", "checks"})
    run_groups = tuple(run_items["groups"].split())
    alphas = _floats(run_items["alphas"], "[run] alphas")
    checks = tuple(run_items["checks"].split())
    run_fields = tuple(run_items.get("fields", "").split()) \
        or tuple(field_configs)
    expect_reject: list[tuple[str, str]] = []
    for token in run_items.get("expect_reject", "").split():
        check, sep, group = token.partition("@")
        if not sep or not check or not group:
            raise ConfigError(
                f"[run] expect_reject: entries take the form check@group,"
                f" got {token!r}")
        expect_reject.append((check, group))

    for check in checks:
        if check not in KNOWN_CHECKS:
            raise ConfigError(f"[run] checks: unknown check {check!r};"
                              f" known: {KNOWN_CHECKS}")
    for check, group in expect_reject:
        if check not in KNOWN_CHECKS:
            raise ConfigError(f"[run] expect_reject: unknown check {check!r}")
        if group not in run_groups:
            raise ConfigError(f"[run] expect_reject: group {group!r} is not listed"
                              f" under [run] groups")
    if not run_groups:
        raise ConfigError("[run] groups: at least one group is required")
    if not alphas:
        raise ConfigError("[run] alphas: at least one weight exponent is required")

    for gname in run_groups:
        if gname not in group_configs:
            raise ConfigError(f"[run] groups: no section [group {gname}]")
    for gname, gcfg in group_configs.items():
        for nname in gcfg.norms:
            if nname not in norm_configs:
                raise ConfigError(f"[group {gname}] norms: no section [norm {nname}]")
    for fname in run_fields:
        if fname not in field_configs:
            raise ConfigError(f"[run] fields: no section [field {fname}]")
    for scan in scans:
        if scan.group not in group_configs:
            raise ConfigError(f"[scan {scan.name}] group: no section"
                              f" [group {scan.group}]")
        if len(scan.lengths) < 2 or any(
                b <= a for a, b in zip(scan.lengths, scan.lengths[1:])):
            raise ConfigError(f"[scan {scan.name}] lengths: need at least two"
                              f" strictly increasing window lengths")
    for ext in extremizers:
        if ext.group not in group_configs:
            raise ConfigError(f"[extremizer {ext.name}] group: no section"
                              f" [group {ext.group}]")
        if ext.norm not in norm_configs:
            raise ConfigError(f"[extremizer {ext.name}] norm: no section"
                              f" [norm {ext.norm}]")
        if len(ext.outer_radii) < 2 or any(
                b <= a for a, b in zip(ext.outer_radii, ext.outer_radii[1:])):
            raise ConfigError(f"[extremizer {ext.name}] outer_radii: need at"
                              f" least two strictly increasing radii")
        if ext.inner_radius <= 0 or ext.outer_radii[0] <= ext.inner_radius:
            raise ConfigError(f"[extremizer {ext.name}]: inner_radius must be"
                              f" positive and below every outer radius")

    # [quadrature]
    quadrature = QuadratureSettings()
    if parser.has_section("quadrature"):
        items = dict(parser.items("quadrature"))
        _check_keys("quadrature", items, _QUAD_KEYS, set())
        kwargs = {}
        for key in _QUAD_KEYS:
            if key in items:
                kwargs[key] = _positive_int(items[key], f"[quadrature] {key}")
        try:
            quadrature = QuadratureSettings(**kwargs)
        except ValueError as exc:
            raise ConfigError(f"[quadrature]: {exc}") from exc

    # [samples]
    samples = SampleSettings()
    if parser.has_section("samples"):
        items = dict(parser.items("samples"))
        _check_keys("samples", items, _SAMPLE_KEYS, set())
        kwargs = {key: _positive_int(items[key], f"[samples] {key}")
                  for key in _SAMPLE_KEYS if key in items}
        samples = SampleSettings(**kwargs)

    # [tolerances]
    tolerances = DEFAULT_TOLERANCES
    if parser.has_section("tolerances"):
        items = dict(parser.items("tolerances"))
        _check_keys("tolerances", items, _TOLERANCE_KEYS, set())
        overrides = {}
        for key, raw in items.items():
            value = _floats(raw, f"[tolerances] {key}")[0]
            if value <= 0:
                raise ConfigError(f"[tolerances] {key}: must be positive")
            overrides[key] = value
        tolerances = replace(DEFAULT_TOLERANCES, **overrides)

    # [output]
    output_dir = None
    if parser.has_section("output"):
        items = dict(parser.items("output"))
        _check_keys("output", items, _OUTPUT_KEYS, set())
        output_dir = items.get("directory")

    return VerifyConfig(
        source=source, fingerprint=fingerprint, run_groups=run_groups,
        alphas=alphas, checks=checks, run_fields=run_fields,
        expect_reject=tuple(expect_reject), group_configs=group_configs,
        norm_configs=norm_configs, field_configs=field_configs,
        scans=tuple(scans), extremizers=tuple(extremizers),
        quadrature=quadrature, samples=samples, tolerances=tolerances,
        output_dir=output_dir)


# -- builders -----------------------------------------------------------------


def build_group(cfg: GroupConfig) -> GroupSpec:
    try:
        return GroupSpec(nu=cfg.nu)
    except (ValueError, HardycknError) as exc:
        raise ConfigError(f"[group {cfg.name}]: {exc}") from exc


def build_norm(spec: GroupSpec, cfg: NormConfig) -> QuasiNorm:
    try:
        return QuasiNorm(family=cfg.family, group=spec, p=cfg.p)
    except (ValueError, HardycknError) as exc:
        raise ConfigError(f"[norm {cfg.name}] on this group: {exc}") from exc


def build_field(qn: QuasiNorm, cfg: FieldConfig) -> ScalarField:
    try:
        if cfg.kind == "radial-bump":
            return radial_bump(qn, cfg.center, cfg.width, label=cfg.name)
        if cfg.kind == "phase-bump":
            return phase_wrapped_bump(qn, cfg.center, cfg.width,
                                      phase_scale=cfg.phase_scale,
                                      label=cfg.name)
        if cfg.kind == "product-bump":
            return product_field(qn, cfg.center, cfg.width, axis=cfg.axis,
                                 normalized=cfg.normalized, label=cfg.name)
    except (ValueError, HardycknError) as exc:
        raise ConfigError(f"[field {cfg.name}]: {exc}") from exc
    raise ConfigError(f"[field {cfg.name}]: unknown kind {cfg.kind!r}")
