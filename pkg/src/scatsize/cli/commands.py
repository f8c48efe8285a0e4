"""Command implementations and the argument parser."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .. import selftest
from ..errors import ConfigError, GeometryError, ScatsizeError
from ..estimator import (
    PotentialModel,
    compute_ladder,
    estimate_width,
    fit_extent,
    lemma1_oracle,
    model_support,
    solve_field,
    sweep_widths,
)
from ..geometry import support_extent, width
from .config import RunConfig

log = logging.getLogger("scatsize")

EXIT_OK, EXIT_SELFTEST, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _fmt(x) -> str:
    return "%.17g" % x


def write_table(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("" if x is None else (x if isinstance(x, str) else _fmt(x))
                              for x in row))
    path.write_text("\n".join(lines) + "\n")


def _map(func, items, threads: int):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


def _require_directions(cfg: RunConfig, command: str):
    if not cfg.directions:
        raise ConfigError(f"'{command}' needs a non-empty 'directions' list")
    return cfg.directions


def _shared_field(cfg: RunConfig, model):
    if isinstance(model, PotentialModel) and model.method == "ls":
        return solve_field(model, cfg.alpha, cfg.k)
    return None


def cmd_ladder(cfg: RunConfig, model, out: Path, threads: int = 1) -> list:
    pairs = _require_directions(cfg, "ladder")
    b = cfg.b_values()
    field_grid = _shared_field(cfg, model)
    ladders = _map(lambda p: compute_ladder(model, cfg.alpha, p[0], p[1], b, cfg.k, field_grid),
                   list(pairs), threads)
    paths = []
    for j, lad in enumerate(ladders):
        slopes = [None] + list(lad.pairwise_slopes)
        rows = [(bi, lm, lm / (cfg.k * bi), s)
                for bi, lm, s in zip(lad.b_grid, lad.logmag, slopes)]
        path = out / f"ladder_{j:02d}.csv"
        write_table(path, ("b", "logmag", "logmag_over_bk", "pairwise_slope"), rows)
        for w in lad.warnings:
            log.warning("direction pair %d: %s", j, w)
        paths.append(path)
    return paths


def _fit_dict(est) -> dict:
    return {
        "d_hat": est.d_hat,
        "slope": est.slope,
        "log_coefficient": est.log_coefficient,
        "constant": est.constant,
        "residual_rms": est.residual_rms,
        "median_pairwise_slope": est.median_slope,
    }


def cmd_estimate(cfg: RunConfig, model, out: Path, threads: int = 1) -> Path:
    pairs = _require_directions(cfg, "estimate")
    b = cfg.b_values()
    field_grid = _shared_field(cfg, model)
    shape = model_support(model)
    results = _map(lambda p: estimate_width(model, cfg.alpha, p[0], p[1], b, cfg.k, field_grid),
                   list(pairs), threads)
    entries = []
    for (w, v), res in zip(pairs, results):
        warnings = sorted(set(res.plus.warnings) | set(res.minus.warnings))
        entry = {
            "w": list(w),
            "v": list(v),
            "d_hat_plus": res.plus.d_hat,
            "d_hat_minus": res.minus.d_hat,
            "width_hat": res.width_hat,
            "fit_plus": _fit_dict(res.plus),
            "fit_minus": _fit_dict(res.minus),
            "warnings": warnings,
        }
        if shape is not None:
            hp, hm, wd = support_extent(shape, v), support_extent(shape, -v), width(shape, v)
            entry["extent_true_plus"] = hp
            entry["extent_true_minus"] = hm
            entry["width_true"] = wd
            entry["rel_error_plus"] = (res.plus.d_hat - hp) / abs(hp) if hp else None
            entry["rel_error_minus"] = (res.minus.d_hat - hm) / abs(hm) if hm else None
            entry["rel_error"] = (res.width_hat - wd) / wd
        entries.append(entry)
    summary = {
        "k": cfg.k,
        "b_grid": [float(x) for x in b],
        "fit_model": "logmag = slope*b + log_coefficient*ln(b) + constant; d_hat = slope/k",
        "directions": entries,
        "config": cfg.to_dict(),
    }
    path = out / "summary.json"
    path.write_text(json.dumps(summary, indent=2) + "\n")
    return path


def cmd_oracle(cfg: RunConfig, model, out: Path, threads: int = 1) -> list:
    pairs = _require_directions(cfg, "oracle")
    shape = cfg.scatterer.shape()
    if shape is None:
        raise ConfigError("'oracle' needs an analytic shape (sphere, ball, box or union)")
    b = cfg.b_values()
    paths = []
    for j, (_, v) in enumerate(pairs):
        rows = []
        for bi in b:
            lnJ = lemma1_oracle(shape, v, float(bi), cfg.k)
            rows.append((bi, lnJ, lnJ / (bi * cfg.k)))
        path = out / f"oracle_{j:02d}.csv"
        write_table(path, ("b", "lnJ", "lnJ_over_bk"), rows)
        paths.append(path)
    return paths


def cmd_sweep(cfg: RunConfig, model, out: Path, threads: int = 1) -> Path:
    if cfg.sweep is None:
        raise ConfigError("'sweep' needs a 'sweep' section")
    sw = cfg.sweep
    rows_out = sweep_widths(model, cfg.alpha, sw.count, sw.plane_normal, cfg.b_values(),
                            cfg.k, sw.start)
    shape = model_support(model)
    header = ["vx", "vy", "vz", "width_hat", "extent_hat_plus", "extent_hat_minus"]
    if shape is not None:
        header.append("width_true")
    rows = []
    for v, res in rows_out:
        row = [v.x, v.y, v.z, res.width_hat, res.plus.d_hat, res.minus.d_hat]
        if shape is not None:
            row.append(width(shape, v))
        rows.append(row)
    path = out / "sweep.csv"
    write_table(path, header, rows)
    return path


def cmd_selftest(perturb_mie: float | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    results = selftest.run_all(perturb_mie)
    for r in results:
        print(r.line(), file=stream)
    ok = all(r.passed for r in results)
    print(f"selftest: {sum(r.passed for r in results)}/{len(results)} checks passed",
          file=stream)
    return EXIT_OK if ok else EXIT_SELFTEST


COMMANDS = {"ladder": cmd_ladder, "estimate": cmd_estimate, "oracle": cmd_oracle,
            "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatsize",
        description="Estimate scatterer extents from amplitudes at complex directions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("ladder", "tabulate ln|A| along b for each direction pair"),
        ("estimate", "fit extents and widths and write summary.json"),
        ("oracle", "tabulate the surface-integral oracle ln J(b)"),
        ("sweep", "width profile over directions in a plane"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.add_argument("--verbose", action="store_true")
    p = sub.add_parser("selftest", help="run the embedded invariant suite")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--threads", type=int, default=1, help=argparse.SUPPRESS)
    p.add_argument("--perturb-mie", type=float, default=None, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if args.command == "selftest":
        return cmd_selftest(args.perturb_mie)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = RunConfig.load(args.config)
        model = cfg.build_model()
        out = Path(args.out or cfg.output_dir or ".")
        if not out.is_absolute() and args.out is None and cfg.output_dir:
            out = Path(cfg.base_dir) / out
        out.mkdir(parents=True, exist_ok=True)
        cfg.b_values()
    except (ConfigError, GeometryError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = COMMANDS[args.command](cfg, model, out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScatsizeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for path in result if isinstance(result, list) else [result]:
        log.info("wrote %s", path)
    return EXIT_OK
