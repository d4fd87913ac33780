"""Command-line surface: subcommands, reports, and the measure gallery.

Each run reads one flat config file (dotted keys), validates it fully
before computing anything, executes a single subcommand, and writes a JSON
report plus CSV tables.  Reports embed the sha256 of the canonical config
text and the seed, and are byte-identical across repeat runs up to the
timestamp field.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .config import ConfigError, RunConfig, parse_config
from .dimension import (
    DimensionReport,
    correlation_curve,
    density_field,
    flatness_detector,
    scaling_quantile_bounds,
    young_criterion,
)
from .measures import (
    GALLERY_NAMES,
    CylinderMeasure,
    LineMeasure,
    conformal_cylinder_measure,
    gallery,
    sample,
    setwise_discrepancy,
    truncation_singularity,
    tv_distance,
    weak_discrepancy,
)
from .pressure import (
    ConvergenceFailure,
    analytic_bowen_solve,
    bowen_solve,
    truncation_scan,
)
from .systems import (
    InvalidSystem,
    MapDescriptor,
    SimilitudeFamily,
    SystemSpec,
    borderline_family,
    cantor_system,
    continued_fraction_system,
    gdms_system,
    golden_family,
)
from .transfer import (
    DegenerateSystemError,
    PotentialSpec,
    ReducibilityError,
    build_operator,
    eigenmeasure,
    entropy_lyapunov,
    operator_bowen_solve,
)

__all__ = [
    "Report",
    "cmd_bowen",
    "cmd_converge",
    "cmd_dimension",
    "cmd_gibbs",
    "cmd_scan",
    "main",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NON_CONVERGENCE = 3
EXIT_IRREGULAR = 4


# ---------------------------------------------------------------------------
# report plumbing


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _csv_table(header: list[str], rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


@dataclass
class Report:
    """One command's full output: results, diagnostics, and CSV tables.

    ``canonical_body`` excludes the timestamp, so two runs with the same
    config and seed produce identical bytes there — the determinism contract
    the golden-file tests pin down.
    """

    command: str
    config_hash: str
    config_echo: dict[str, str]
    seed: Optional[int]
    results: dict
    diagnostics: dict = field(default_factory=dict)
    tables: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    timestamp: str = ""

    def body_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "config": self.config_echo,
            "seed": self.seed,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "tables": self.tables,
            "warnings": self.warnings,
        }

    def canonical_body(self) -> str:
        return json.dumps(self.body_dict(), sort_keys=True, indent=2)

    def to_json(self) -> str:
        blob = self.body_dict()
        blob["timestamp"] = self.timestamp
        return json.dumps(blob, sort_keys=True, indent=2)

    def write(self, out_dir: Path, fmt: str) -> list[Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = [out_dir / f"{self.command}-report.json"]
        paths[0].write_text(self.to_json() + "\n")
        if fmt == "csv":
            for name, text in sorted(self.tables.items()):
                path = out_dir / f"{self.command}-{name}.csv"
                path.write_text(text)
                paths.append(path)
        return paths


def _report(command: str, cfg: RunConfig, **kwargs) -> Report:
    # out.* keys steer where the report lands, not what it says; keeping them
    # out of the echoed config makes bodies byte-stable across output dirs
    analysis = RunConfig({k: v for k, v in cfg.raw.items() if not k.startswith("out.")})
    return Report(
        command=command,
        config_hash=analysis.digest(),
        config_echo=dict(sorted(analysis.raw.items())),
        seed=int(cfg.raw["sample.seed"]) if cfg.has("sample.seed") else None,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **kwargs,
    )


# ---------------------------------------------------------------------------
# system construction from config


SYSTEM_KEYS = [
    "system.family",
    "system.size",
    "system.ratios",
    "system.maps",
    "system.incidence",
    "system.a",
    "system.label",
]
OUTPUT_KEYS = ["out.dir", "out.format"]
SAMPLE_KEYS = ["sample.count", "sample.seed"]


def _parse_map(entry: str) -> MapDescriptor:
    parts = [p.strip() for p in entry.split(":")]
    kind = parts[0]
    try:
        if kind in ("similitude", "affine-1d"):
            if len(parts) != 3:
                raise ConfigError(
                    f"system.maps: {entry!r} must be '{kind}:ratio:offset'"
                )
            return MapDescriptor(kind, ratio=float(parts[1]), offset=float(parts[2]))
        if kind in ("moebius", "moebius-1d"):
            if len(parts) != 2:
                raise ConfigError(f"system.maps: {entry!r} must be 'moebius:q'")
            return MapDescriptor("moebius-1d", q=int(parts[1]))
    except (ValueError, InvalidSystem) as err:
        raise ConfigError(f"system.maps: {entry!r}: {err}") from None
    raise ConfigError(f"system.maps: unknown map kind {kind!r}")


def _custom_system(cfg: RunConfig) -> SystemSpec:
    raw_maps = cfg.get_str("system.maps")
    maps = tuple(_parse_map(e) for e in raw_maps.split(";") if e.strip())
    if not maps:
        raise ConfigError("system.maps: empty map list")
    incidence = None
    if cfg.has("system.incidence"):
        rows = []
        for row in cfg.get_str("system.incidence").split(";"):
            row = row.strip()
            if not set(row) <= {"0", "1"} or not row:
                raise ConfigError(
                    f"system.incidence: rows must be 0/1 strings, got {row!r}"
                )
            rows.append(tuple(int(ch) for ch in row))
        incidence = tuple(rows)
    label = cfg.get_str("system.label", default="custom")
    try:
        return gdms_system(((0.0, 1.0),), maps, incidence=incidence, label=label)
    except InvalidSystem as err:
        raise ConfigError(f"system: {err}") from None


def _build_source(cfg: RunConfig) -> Union[SimilitudeFamily, SystemSpec]:
    family = cfg.get_str("system.family")
    if family == "golden":
        fam: SimilitudeFamily = golden_family()
    elif family == "borderline":
        fam = borderline_family()
    elif family == "cantor":
        ratios = cfg.get_floats("system.ratios")
        try:
            return cantor_system(ratios)
        except InvalidSystem as err:
            raise ConfigError(f"system.ratios: {err}") from None
    elif family == "continued-fraction":
        return continued_fraction_system(cfg.get_int("system.size", lo=1, hi=64))
    elif family == "custom":
        return _custom_system(cfg)
    else:
        raise ConfigError(
            f"system.family: unknown family {family!r} (expected golden | borderline"
            " | cantor | continued-fraction | custom | gallery:<name>)"
        )
    if cfg.has("system.size"):
        return fam.truncate(cfg.get_int("system.size", lo=1, hi=64))
    return fam


def _gallery_family(cfg: RunConfig, family: str):
    name = family.split(":", 1)[1]
    if name not in GALLERY_NAMES:
        raise ConfigError(
            f"system.family: unknown gallery member {name!r}; run gallery-list"
        )
    a = cfg.get_float("system.a", default=0.5)
    if not (0.0 < a < 1.0):
        raise ConfigError(f"system.a: must lie in (0, 1), got {a}")
    return gallery(name, a=a)


# ---------------------------------------------------------------------------
# subcommands


def cmd_bowen(cfg: RunConfig) -> Report:
    cfg.check_keys("bowen", ["bowen.depth", "bowen.tol"])
    tol = cfg.get_float("bowen.tol", default=1e-10, lo=1e-15, hi=1e-2)
    source = _build_source(cfg)
    if isinstance(source, SimilitudeFamily):
        sol = analytic_bowen_solve(source, tol=min(tol, 1e-12))
    else:
        default_depth = 1 if source.is_similitude() else 12
        depth = cfg.get_int("bowen.depth", default=default_depth, lo=1, hi=24)
        sol = bowen_solve(source, depth=depth, tol=tol)
    results = {
        "h": sol.h,
        "regular": sol.regular,
        "residual": sol.residual,
        "bracket_lo": sol.bracket[0],
        "bracket_hi": sol.bracket[1],
        "method": sol.method,
        "depth": sol.depth,
        "pressure_gap": sol.gap,
    }
    warnings = []
    if not sol.regular:
        warnings.append(
            "irregular: the pressure stays negative, the root is the "
            "infimum of the finite-pressure exponents, not a zero"
        )
    table = _csv_table(
        ["h", "bracket_lo", "bracket_hi", "residual", "regular", "method"],
        [[sol.h, sol.bracket[0], sol.bracket[1], sol.residual, sol.regular, sol.method]],
    )
    return _report(
        "bowen",
        cfg,
        results=results,
        diagnostics={
            "bracket_width": sol.bracket[1] - sol.bracket[0],
            "iterations": sol.iterations,
        },
        tables={"root": table},
        warnings=warnings,
    )


def _cf_scan_depth(level: int) -> int:
    depth = 1
    while level ** (depth + 1) <= 100_000 and depth < 12:
        depth += 1
    return depth


def cmd_scan(cfg: RunConfig) -> Report:
    cfg.check_keys("scan", ["scan.levels", "scan.depth", "scan.tol"])
    levels = cfg.get_levels("scan.levels")
    if min(levels) < 2:
        raise ConfigError("scan.levels: truncation levels must be >= 2")
    tol = cfg.get_float("scan.tol", default=1e-10, lo=1e-15, hi=1e-2)
    family = cfg.get_str("system.family")
    depth: Union[int, None, object]
    if family in ("golden", "borderline"):
        source = golden_family() if family == "golden" else borderline_family()
        depth = cfg.get_int("scan.depth", default=1, lo=1, hi=24)
    elif family == "continued-fraction":
        source = continued_fraction_system
        depth = (
            cfg.get_int("scan.depth", lo=1, hi=16)
            if cfg.has("scan.depth")
            else _cf_scan_depth
        )
    else:
        raise ConfigError(
            "system.family: scan needs a parametrised family "
            "(golden | borderline | continued-fraction)"
        )
    scan = truncation_scan(source, levels, depth=depth, tol=tol)
    rows = [
        [r.level, r.h, r.gap, r.residual, r.regular, r.depth, r.note] for r in scan.rows
    ]
    hs = [r.h for r in scan.rows if not math.isnan(r.h)]
    results = {
        "levels": [r.level for r in scan.rows],
        "monotone": all(a <= b + 1e-15 for a, b in zip(hs, hs[1:])),
        "first_h": hs[0] if hs else None,
        "last_h": hs[-1] if hs else None,
        "limit_h": scan.limit,
        "limit_regular": scan.limit_regular,
        "final_gap_to_limit": (scan.limit - hs[-1]) if (hs and scan.limit) else None,
        "regular": scan.limit_regular if scan.limit_regular is not None else True,
    }
    return _report(
        "scan",
        cfg,
        results=results,
        diagnostics={"worst_pressure_gap": max((r.gap for r in scan.rows if not math.isnan(r.gap)), default=None)},
        tables={
            "levels": _csv_table(
                ["level", "h", "pressure_gap", "residual", "regular", "depth", "note"],
                rows,
            )
        },
    )


def _kron_power(vec: np.ndarray, depth: int) -> np.ndarray:
    out = vec
    for _ in range(depth - 1):
        out = np.kron(out, vec)
    return out


def cmd_converge(cfg: RunConfig) -> Report:
    cfg.check_keys(
        "converge",
        ["converge.levels", "converge.cylinder_depths", "converge.singularity_depth"],
    )
    family = cfg.get_str("system.family")
    if family.startswith("gallery:"):
        return _converge_gallery(cfg, family)

    source = _build_source(cfg)
    if not isinstance(source, SimilitudeFamily) or source.log_mass is None:
        raise ConfigError(
            "system.family: converge compares truncations against a family "
            "limit; use golden, borderline, or gallery:<name>"
        )
    levels = cfg.get_levels("converge.levels", default="2:10")
    if min(levels) < 2:
        raise ConfigError("converge.levels: levels must be >= 2")
    depths = cfg.get_levels("converge.cylinder_depths", default="1,2,3")
    if min(depths) < 1 or max(depths) > 6:
        raise ConfigError("converge.cylinder_depths: depths must lie in 1..6")
    sing_depth = cfg.get_int("converge.singularity_depth", default=200, lo=1, hi=100_000)

    limit_sol = analytic_bowen_solve(source)
    if not limit_sol.regular:
        return _report(
            "converge",
            cfg,
            results={"regular": False, "limit_h": limit_sol.h},
            warnings=[
                "irregular family: the limit pressure never reaches zero, so "
                "no limit conformal measure exists to compare against"
            ],
        )
    h = limit_sol.h
    top = max(levels)
    h_top = bowen_solve(source.truncate(top), depth=1).h

    rows = []
    for n in levels:
        ratios = np.array([abs(source.ratio_fn(i)) for i in range(1, n + 1)])
        h_n = bowen_solve(source.truncate(n), depth=1).h
        weights_n = ratios**h_n
        weights_n /= weights_n.sum()
        limit_weights = ratios**h
        row: list = [n, h_n]
        for d in depths:
            diff = np.abs(_kron_power(weights_n, d) - _kron_power(limit_weights, d))
            row.append(float(diff.max()))
        row.append(max(0.0, 1.0 - truncation_singularity(source, n, top, h_top, sing_depth)))
        rows.append(row)

    header = ["level", "h"]
    header += [f"cylinder_discrepancy_depth{d}" for d in depths]
    header += ["tv_lower_bound"]
    last = rows[-1]
    results = {
        "regular": True,
        "limit_h": h,
        "final_level": last[0],
        "final_discrepancies": {f"depth{d}": last[2 + i] for i, d in enumerate(depths)},
        "tv_lower_bound_min": min(r[-1] for r in rows),
        "singularity_depth": sing_depth,
    }
    return _report(
        "converge",
        cfg,
        results=results,
        diagnostics={"reference_level": top, "reference_h": h_top},
        tables={"levels": _csv_table(header, rows)},
    )


def _converge_gallery(cfg: RunConfig, family: str) -> Report:
    fam = _gallery_family(cfg, family)
    if fam.limit is None:
        raise ConfigError(
            f"system.family: {family} has no closed-form limit measure; "
            "pick a gallery family with one"
        )
    levels = cfg.get_levels("converge.levels", default="2:10")
    if min(levels) < 1:
        raise ConfigError("converge.levels: levels must be >= 1")
    rows = []
    for n in levels:
        nu = fam.at(n)
        tv = tv_distance(nu, fam.limit)
        weak = weak_discrepancy(nu, fam.limit, moments=8)
        if nu.atoms:
            sets: list = [("points", tuple(loc for loc, _ in nu.atoms))]
        else:
            sets = [(i / 8.0, (i + 1) / 8.0) for i in range(8)]
        setwise = setwise_discrepancy(nu, fam.limit, sets)
        rows.append([n, tv, weak, setwise])
    results = {
        "regular": True,
        "family": fam.name,
        "note": fam.note,
        "final_tv": rows[-1][1],
        "final_weak": rows[-1][2],
        "final_setwise": rows[-1][3],
    }
    return _report(
        "converge",
        cfg,
        results=results,
        tables={"levels": _csv_table(["level", "tv", "weak", "setwise"], rows)},
    )


DIMENSION_KEYS = [
    "dimension.member",
    "dimension.depth",
    "dimension.r_min",
    "dimension.r_max",
    "dimension.r_count",
    "dimension.fit_lo",
    "dimension.fit_hi",
    "dimension.density_r_min",
    "dimension.density_r_max",
    "dimension.density_points",
    "dimension.flatness",
    "dimension.tolerance",
]


def cmd_dimension(cfg: RunConfig) -> Report:
    cfg.check_keys("dimension", DIMENSION_KEYS)
    if not cfg.has("sample.seed"):
        raise ConfigError("sample.seed: required whenever sampling is requested")
    seed = cfg.get_int("sample.seed")
    count = cfg.get_int("sample.count", default=10_000, lo=100, hi=10_000_000)
    r_min = cfg.get_float("dimension.r_min", default=1e-4, lo=0.0)
    r_max = cfg.get_float("dimension.r_max", default=0.25)
    r_count = cfg.get_int("dimension.r_count", default=24, lo=4, hi=400)
    fit_window = None
    if cfg.has("dimension.fit_lo") or cfg.has("dimension.fit_hi"):
        fit_window = (cfg.get_float("dimension.fit_lo"), cfg.get_float("dimension.fit_hi"))
    tolerance = cfg.get_float("dimension.tolerance", default=0.05, lo=0.0, hi=1.0)

    family = cfg.get_str("system.family")
    bowen_root: Optional[float] = None
    ratio: Optional[float] = None
    warnings: list[str] = []
    measure: Union[LineMeasure, CylinderMeasure]
    if family.startswith("gallery:"):
        fam = _gallery_family(cfg, family)
        member = cfg.get_str("dimension.member", default="limit")
        if member == "limit":
            if fam.limit is None:
                raise ConfigError(
                    f"dimension.member: {family} has no limit measure; give an index"
                )
            measure = fam.limit
            label = f"{fam.name}[limit]"
        else:
            try:
                index = int(member)
            except ValueError:
                raise ConfigError(
                    f"dimension.member: expected 'limit' or an integer, got {member!r}"
                ) from None
            if index < 1:
                raise ConfigError(f"dimension.member: index must be >= 1, got {index}")
            measure = fam.at(index)
            label = f"{fam.name}[{index}]"
    else:
        source = _build_source(cfg)
        if isinstance(source, SimilitudeFamily):
            raise ConfigError(
                "system.size: required to build a finite system for dimension"
            )
        cyl_depth = cfg.get_int("dimension.depth", default=12, lo=1, hi=16)
        word_depth = 1 if source.is_similitude() else 12
        sol = bowen_solve(source, depth=word_depth)
        bowen_root = sol.h
        measure = conformal_cylinder_measure(source, bowen_root, depth=cyl_depth)
        label = f"{source.label}[conformal]"
        op_depth = 1 if source.is_similitude() else 2
        try:
            state = eigenmeasure(build_operator(source, PotentialSpec(bowen_root), op_depth))
            ratio = entropy_lyapunov(state).ratio
        except (ConvergenceFailure, ReducibilityError, DegenerateSystemError) as err:
            warnings.append(f"entropy/lyapunov ratio unavailable: {err}")

    cloud = sample(measure, count, seed=seed)
    curve = correlation_curve(cloud, r_min, r_max, count=r_count, fit_window=fit_window)
    if curve.degenerate:
        warnings.append("sample cloud is a single point; slope pinned to zero")

    density_points = cfg.get_int("dimension.density_points", default=300, lo=1, hi=100_000)
    d_rmin = cfg.get_float("dimension.density_r_min", default=max(r_min, 1e-12))
    d_rmax = cfg.get_float("dimension.density_r_max", default=min(r_max, 0.4))
    fld = density_field(measure, cloud.points[:density_points], d_rmin, d_rmax)
    crit = young_criterion(fld)
    bounds = scaling_quantile_bounds(fld)

    flatness = None
    flat_csv = None
    lo_supp, hi_supp = measure.support_bounds if isinstance(measure, LineMeasure) else (0.0, 1.0)
    flat_default = isinstance(measure, LineMeasure) and 0.0 <= lo_supp and hi_supp <= 1.0
    if cfg.get_bool("dimension.flatness", default=flat_default):
        if not isinstance(measure, LineMeasure):
            raise ConfigError(
                "dimension.flatness: only piecewise measures support the detector"
            )
        if family == "gallery:staircase":
            a = cfg.get_float("system.a", default=0.5)
            ladder = [a ** (k * k) for k in range(1, 9)]
        else:
            ladder = list(d_rmax * 0.5 ** np.arange(0, 12))
            ladder = [r for r in ladder if r >= d_rmin] or [d_rmax]
        flat = flatness_detector(measure, ladder)
        flat_csv = flat.as_csv()
        flatness = {
            "fired": flat.fired,
            "final_exponent": float(flat.exponents[int(np.argmin(flat.radii))]),
        }

    summary = DimensionReport(
        bowen_root=bowen_root,
        ratio=ratio,
        correlation_slope=curve.slope,
        gamma_lower=bounds.lower,
        gamma_upper=bounds.upper,
        tolerance=tolerance,
    )
    results = {
        "measure": label,
        "report": summary.json_dict(),
        "young_exponent": crit.c,
        "young_fraction": crit.fraction,
        "slope": curve.slope,
        "slope_stderr": curve.slope_stderr,
        "degenerate_cloud": curve.degenerate,
        "flatness": flatness,
        "regular": True,
    }
    tables = {"correlation": curve.as_csv(), "density": fld.as_csv()}
    if flat_csv is not None:
        tables["flatness"] = flat_csv
    return _report(
        "dimension",
        cfg,
        results=results,
        diagnostics={
            "sample_count": count,
            "density_points_used": int(fld.inside.sum()),
            "fit_window": list(curve.fit_window),
        },
        tables=tables,
        warnings=warnings,
    )


def cmd_gibbs(cfg: RunConfig) -> Report:
    cfg.check_keys("gibbs", ["gibbs.exponent", "gibbs.depth"])
    source = _build_source(cfg)
    if isinstance(source, SimilitudeFamily):
        raise ConfigError("system.size: required to build a finite system for gibbs")
    depth = cfg.get_int(
        "gibbs.depth", default=1 if source.is_similitude() else 2, lo=1, hi=12
    )
    raw_exp = cfg.get_str("gibbs.exponent", default="bowen")
    if raw_exp == "bowen":
        exponent = operator_bowen_solve(source, depth=depth).h
    else:
        try:
            exponent = float(raw_exp)
        except ValueError:
            raise ConfigError(
                f"gibbs.exponent: expected a number or 'bowen', got {raw_exp!r}"
            ) from None
    operator = build_operator(source, PotentialSpec(exponent), depth=depth)
    state = eigenmeasure(operator)
    el = entropy_lyapunov(state)
    results = {
        "exponent": exponent,
        "eigenvalue": state.eigenvalue,
        "log_eigenvalue": state.log_eigenvalue,
        "entropy": el.entropy,
        "lyapunov": el.lyapunov,
        "ratio": el.ratio,
        "dimension_interpretation": abs(state.eigenvalue - 1.0) < 1e-6,
        "states": len(operator),
        "regular": True,
    }
    mass_rows = [
        [".".join(map(str, w.symbols)), float(m), float(inv)]
        for w, m, inv in zip(state.words, state.eigenmeasure, state.invariant)
    ]
    return _report(
        "gibbs",
        cfg,
        results=results,
        diagnostics={
            "residual": state.residual,
            "density_residual": state.density_residual,
            "iterations": state.iterations,
            "variation_bound": operator.variation_bound,
            "shift_invariance_defect": state.shift_invariance_defect(),
        },
        tables={
            "masses": _csv_table(["word", "eigenmeasure", "invariant"], mass_rows)
        },
    )


COMMANDS = {
    "bowen": cmd_bowen,
    "scan": cmd_scan,
    "converge": cmd_converge,
    "dimension": cmd_dimension,
    "gibbs": cmd_gibbs,
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifsdim",
        description=(
            "Hausdorff-dimension and conformal-measure toolkit for conformal "
            "iterated function systems and graph-directed Markov systems"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "bowen": "solve the pressure equation for the dimension exponent",
        "scan": "dimension of each truncated subsystem in a ladder",
        "converge": "truncation measures against the limit: cylinder/TV/weak tables",
        "dimension": "sample a measure and run every empirical estimator",
        "gibbs": "transfer-operator eigendata and the entropy/Lyapunov ratio",
    }
    for name, help_text in helps.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, default=None, help="dotted-key config file")
        cmd.add_argument("--seed", type=int, default=None, help="overrides sample.seed")
        cmd.add_argument("--out", type=Path, default=None, help="output directory")
        cmd.add_argument(
            "--format", choices=("csv", "json"), default=None, help="table output format"
        )
    sub.add_parser("gallery-list", help="list the built-in measure families")
    return parser


def _gallery_listing() -> str:
    lines = []
    for name in GALLERY_NAMES:
        fam = gallery(name)
        limit = "limit available" if fam.limit is not None else "no closed-form limit"
        lines.append(f"{name:24s} {limit}; {fam.note}")
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gallery-list":
        print(_gallery_listing())
        return EXIT_OK

    try:
        raw: dict[str, str] = {}
        if args.config is not None:
            if not args.config.exists():
                raise ConfigError(f"--config: {args.config} does not exist")
            raw = parse_config(args.config.read_text())
        if args.seed is not None:
            raw["sample.seed"] = str(args.seed)
        if args.out is not None:
            raw["out.dir"] = str(args.out)
        if args.format is not None:
            raw["out.format"] = args.format
        cfg = RunConfig(raw)
        out_dir = Path(cfg.get_str("out.dir", default="."))
        fmt = cfg.get_str("out.format", default="csv", choices=("csv", "json"))
        report = COMMANDS[args.command](cfg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceFailure as err:
        print(f"non-convergence: {err}", file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    except (ReducibilityError, DegenerateSystemError) as err:
        print(f"irregular system: {err}", file=sys.stderr)
        return EXIT_IRREGULAR
    except (InvalidSystem, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    paths = report.write(out_dir, fmt)
    for key in sorted(report.results):
        value = report.results[key]
        if isinstance(value, (int, float, bool, str)) or value is None:
            print(f"{key} = {value}")
    for warning in report.warnings:
        print(f"warning: {warning}")
    for path in paths:
        print(f"wrote {path}")
    if report.results.get("regular") is False:
        return EXIT_IRREGULAR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
