"""Command-line front end.

Each subcommand runs one computation, writes a CSV into the output
directory and prints a short summary. Exit status: 0 success, 1 a claimed
inequality was not certified, 2 bad invocation.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import PositivityError
from .specfun import QuadratureSettings

CONFIG_ENV = "POSITIVITY_KIT_CONFIG"
SIGNIFICANT = 10


# ---------------------------------------------------------------------------
# number formatting and CSV
# ---------------------------------------------------------------------------

def format_number(x) -> str:
    """Round to 10 significant digits (half-even on the shortest repr)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    d = Decimal(repr(x))
    exp = d.adjusted()
    q = d.quantize(Decimal(1).scaleb(exp - SIGNIFICANT + 1), rounding=ROUND_HALF_EVEN)
    if q.adjusted() != exp:  # rounding carried into a new digit
        q = q.quantize(Decimal(1).scaleb(q.adjusted() - SIGNIFICANT + 1),
                       rounding=ROUND_HALF_EVEN)
    if -5 <= q.adjusted() < 15:
        text = format(q, "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text
    mant, _, power = format(q, "e").partition("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    return f"{mant}e{int(power)}"


def render_csv(rows: Sequence[Mapping], comments: Sequence[str] = ()) -> str:
    if not rows:
        raise ValueError("refusing to write an empty table")
    columns = list(rows[0].keys())
    for row in rows:
        if list(row.keys()) != columns:
            raise ValueError("rows have inconsistent columns")
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row[c]) for c in columns])
    return buf.getvalue()


def emit_csv(rows: Sequence[Mapping], path, comments: Sequence[str] = ()) -> Path:
    """Write ``rows`` (dicts sharing their keys) as CSV with fixed formatting."""
    text = render_csv(rows, comments)
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    output_dir: Path = Path(".")
    steps: dict = field(default_factory=lambda: {"realarch": 0.01, "gl2": 0.005,
                                                 "maass": 0.001})
    zero_file: Path | None = None


_QUAD_KEYS = {"rel_tol": float, "abs_tol": float, "max_subdivisions": int, "tail_cut": float}


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` lines; '#' starts a comment."""
    cfg = RunConfig()
    quad = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or not key:
            raise ValueError(f"config line {lineno}: expected key = value")
        if key in _QUAD_KEYS:
            quad[key] = _QUAD_KEYS[key](value)
        elif key == "output_dir":
            cfg.output_dir = Path(value)
        elif key == "zero_file":
            cfg.zero_file = Path(value)
        elif key.endswith("_step") and key[:-5] in cfg.steps:
            cfg.steps[key[:-5]] = float(value)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    if quad:
        cfg.quadrature = replace(cfg.quadrature, **quad)
    q = cfg.quadrature
    if not (q.rel_tol > 0 and q.abs_tol > 0 and q.max_subdivisions > 0):
        raise ValueError("tolerances must be positive")
    if any(not s > 0 for s in cfg.steps.values()):
        raise ValueError("grid steps must be positive")
    return cfg


def load_config(path: str | None) -> RunConfig:
    """Explicit path first, then $POSITIVITY_KIT_CONFIG, else defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    return parse_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def int_range(text: str) -> list[int]:
    """'3..8' -> [3, ..., 8]; '5' -> [5]; '2,4,6' -> [2, 4, 6]."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None


def float_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split("..")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, expected lo..hi") from None


def complex_list(text: str) -> list[complex]:
    try:
        return [complex(t.replace(" ", "").replace("i", "j")) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex list {text!r}") from None


def test_function(name: str, p: float | None = None, sech_scale: float | None = None):
    from . import testfuncs
    key = name.lower().replace("h", "g", 1) if name.lower().startswith("h") else name.lower()
    makers = {"g1": testfuncs.g1, "g2": testfuncs.g2, "g3": testfuncs.g3,
              "g1m": testfuncs.g1m, "g2m": testfuncs.g2m, "g3m": testfuncs.g3m}
    if key not in makers:
        raise argparse.ArgumentTypeError(f"unknown test function {name!r}")
    kw = {}
    if p is not None:
        kw["p"] = p
    if sech_scale is not None:
        kw["sech_scale"] = sech_scale
    return makers[key](**kw)


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(round((hi - lo) / step))
    return np.linspace(lo, hi, n + 1)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_lterm(args, cfg: RunConfig):
    from .lterm import l_digamma_route, l_exp_route
    tf = test_function(args.function, args.p, args.sech_scale)
    rows, worst = [], 0.0
    for eta in args.eta:
        a = l_exp_route(tf, eta)
        row = {"eta_re": eta.real, "eta_im": eta.imag, "re_l": a.value.real,
               "im_l": a.value.imag, "err": a.err}
        if args.route == "both":
            b = l_digamma_route(tf, eta, settings=replace(
                cfg.quadrature, rel_tol=min(cfg.quadrature.rel_tol, 1e-13)))
            gap = abs(a.value - b.value)
            worst = max(worst, gap)
            row["digamma_re_l"] = b.value.real
            row["route_gap"] = gap
        rows.append(row)
    ok = worst <= 1e-8
    return rows, [], ok, f"{len(rows)} values; largest route gap {worst:.3g}"


def cmd_criteria(args, cfg: RunConfig):
    from .criteria import ArchimedeanData, evaluate_criteria
    data = ArchimedeanData(len(args.shifts), args.conductor, tuple(args.shifts))
    v = evaluate_criteria(data, test_function(args.plain), test_function(args.modified),
                          polar=args.polar)
    rows = [{"degree": data.degree, "conductor": data.conductor,
             "existence_sum": v.existence_sum, "existence_err": v.existence_err,
             "lowzero_sum": v.lowzero_sum, "lowzero_err": v.lowzero_err,
             "verdict": v.verdict, "lowzero_flag": v.lowzero_flag}]
    return rows, [], True, f"verdict {v.verdict}"


def cmd_realarch(args, cfg: RunConfig):
    from .criteria import realarch_grid_proof, realarch_partition_proof
    grid = realarch_grid_proof(args.eta_max, cfg.steps["realarch"])
    part = realarch_partition_proof()
    c = part.constants
    rows = [
        {"quantity": "grid_min_margin", "value": grid.grid.min_margin, "ok": grid.grid.ok},
        {"quantity": "tail_min_margin", "value": grid.tail.min_margin, "ok": grid.tail.ok},
        {"quantity": "tail_min_l1", "value": grid.tail_l1_min, "ok": grid.fallback_ok},
        {"quantity": "n_end", "value": c.n_end, "ok": c.sign_pattern_ok},
        {"quantity": "p_start", "value": c.p_start, "ok": c.sign_pattern_ok},
        {"quantity": "min_l1_on_N", "value": c.min_l1_n, "ok": True},
        {"quantity": "max_diff_on_N", "value": c.max_diff_n, "ok": True},
        {"quantity": "min_l1_on_P", "value": c.min_l1_p, "ok": True},
        {"quantity": "max_diff_on_P", "value": c.max_diff_p, "ok": True},
        {"quantity": "ratio_bound_lower", "value": part.lower, "ok": True},
        {"quantity": "ratio_bound_upper", "value": part.upper,
         "ok": part.interval_contradiction},
        {"quantity": "kappa_N", "value": part.kappa_n, "ok": True},
        {"quantity": "kappa_P", "value": part.kappa_p, "ok": part.contradiction},
    ]
    ok = grid.ok and c.sign_pattern_ok and part.contradiction
    return rows, [], ok, (f"grid proof {'ok' if grid.ok else 'FAILED'}; partition "
                          f"contradiction {'ok' if part.contradiction else 'FAILED'}")


def cmd_gl2(args, cfg: RunConfig):
    from .criteria import gl2_figure_checks
    rep = gl2_figure_checks(step=cfg.steps["gl2"])
    rows = [{"check": c.name, "ok": c.ok, "min_margin": c.min_margin, "at": c.at,
             "max_err": c.max_err, "kind": "certificate"} for c in rep.checks]
    rows += [{"check": f"crossing {k}", "ok": rep.crossing_ok[k], "min_margin": v,
              "at": v, "max_err": 1e-9, "kind": "certificate"} for k, v in rep.crossings.items()]
    rows += [{"check": c.name, "ok": c.ok, "min_margin": c.min_margin, "at": c.at,
              "max_err": c.max_err, "kind": "window"} for c in rep.window_checks]
    return rows, [], rep.ok, f"{sum(c.ok for c in rep.checks)}/{len(rep.checks)} certificates"


def cmd_eig_bounds(args, cfg: RunConfig):
    from .lterm import s_grid
    from .spectral import certified_d
    grid = s_grid()
    rows = []
    for n in args.n:
        row = certified_d(n, grid)
        rows.append({"n": n, "d": row.d, "lambda": row.eigenvalue,
                     "max_at_d": row.margin_at_d, "max_at_d_plus_1": row.max_at_d_plus_1})
    return rows, [], True, ", ".join(f"n={r['n']}: d={r['d']}" for r in rows)


def cmd_lubotzky(args, cfg: RunConfig):
    from .spectral import lubotzky_table
    d_small = dict(zip(range(3, 9), args.d_small)) if args.d_small else \
        {3: 174, 4: 212, 5: 273, 6: 318, 7: 376, 8: 424}
    rep = lubotzky_table(d_small)
    rows = [{"a": r.a, "r_max": r.r_max, "lower": r.lower, "upper": r.upper,
             "contradiction": r.contradiction} for r in rep.rows]
    comments = [f"threshold = {format_number(rep.threshold)}",
                f"lambda_68 = {format_number(rep.eigenvalue_68)}"]
    ok = all(r.contradiction for r in rep.rows)
    return rows, comments, ok, f"threshold {rep.threshold:.4f}; lambda(68) {rep.eigenvalue_68:.2f}"


def cmd_cohomology(args, cfg: RunConfig):
    from .cohomology import default_p, vanishing_scan
    rows = []
    for n in args.n:
        cands = args.p or [default_p(n)]
        (r,) = vanishing_scan([n], cands)
        rows.append({"n": n, "p": r.best_p, "lhs": r.value, "err": r.err,
                     "verdict": r.verdict})
    ok = all(r["verdict"] == "vanishes" for r in rows)
    return rows, [], ok, f"{sum(r['verdict'] == 'vanishes' for r in rows)}/{len(rows)} vanish"


def cmd_maass(args, cfg: RunConfig):
    from .maass import exclusion_proof
    step = cfg.steps["maass"]
    rep = exclusion_proof(_grid(6.07, 6.14, step))
    rows = [{"r": n.r, "w3_prime": n.w3_prime, "lead1": n.lead1, "lead2": n.lead2,
             "ratio": n.ratio, "a2_lower": n.a2_lower, "slack": n.slack}
            for n in rep.nodes]
    comments = [f"tail f' = {format_number(rep.tails[0].bound)}",
                f"tail f''' = {format_number(rep.tails[1].bound)}"]
    return rows, comments, rep.ok, (f"min ratio {rep.min_ratio:.4f} at {rep.min_ratio_at}; "
                                    + ("ok" if rep.ok else "; ".join(rep.failures)))


def cmd_zeta(args, cfg: RunConfig):
    from .zeta import bundled_zeros, explicit_formula_residual, load_zeros
    source = args.zeros or (str(cfg.zero_file) if cfg.zero_file else "100")
    zeros = bundled_zeros(int(source)) if source in ("100", "1000") else load_zeros(source)
    tf = test_function(args.function, args.p)
    res = explicit_formula_residual(zeros, tf)
    rows = [{"zeros": res.zeros_used, "lhs": res.lhs, "rhs": res.rhs,
             "residual": res.residual, "tail_bound": res.tail_bound,
             "quad_err": res.quad_err, "ok": res.ok}]
    return rows, [], res.ok, f"residual {res.residual:.3g}, tail bound {res.tail_bound:.3g}"


def cmd_plot_grid(args, cfg: RunConfig):
    from .testfuncs import sign_grid
    tf = test_function(args.function)
    re_vals = _grid(*args.re, args.step)
    im_vals = _grid(*args.im, args.step)
    signs = sign_grid(tf, re_vals, im_vals)
    rows = [{"im": y, "re": x, "sign": int(s)}
            for y, line in zip(im_vals, signs) for x, s in zip(re_vals, line)]
    return rows, [], True, f"{len(rows)} nodes, {int((signs < 0).sum())} negative"


COMMANDS = {
    "lterm": cmd_lterm, "criteria": cmd_criteria, "realarch": cmd_realarch,
    "gl2": cmd_gl2, "eig-bounds": cmd_eig_bounds, "lubotzky": cmd_lubotzky,
    "cohomology": cmd_cohomology, "maass-exclude": cmd_maass, "zeta-verify": cmd_zeta,
    "plot-grid": cmd_plot_grid,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="positivity-kit",
                                 description="Positivity certificates for L-functions.")
    ap.add_argument("--config", help=f"key = value file (default ${CONFIG_ENV})")
    ap.add_argument("--output-dir", help="directory for CSV output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lterm", help="evaluate l(eta)")
    p.add_argument("--function", default="g1")
    p.add_argument("--p", type=float)
    p.add_argument("--sech-scale", type=float)
    p.add_argument("--eta", type=complex_list, default=[0j])
    p.add_argument("--route", choices=("exp", "both"), default="exp")

    p = sub.add_parser("criteria", help="apply the positivity criteria")
    p.add_argument("--shifts", type=complex_list, required=True)
    p.add_argument("--conductor", type=float, default=1.0)
    p.add_argument("--plain", default="g1")
    p.add_argument("--modified", default="g3m")
    p.add_argument("--polar", action="store_true", help="add the pole term")

    p = sub.add_parser("realarch", help="real-shift certificates")
    p.add_argument("--eta-max", type=float, default=100.0)

    sub.add_parser("gl2", help="GL(2) sign certificates")

    p = sub.add_parser("eig-bounds", help="certified Laplace eigenvalue bounds")
    p.add_argument("--n", type=int_range, default=list(range(3, 9)))

    p = sub.add_parser("lubotzky", help="residual spectrum table")
    p.add_argument("--d-small", type=int_range, help="certified d for a = 3..8")

    p = sub.add_parser("cohomology", help="Rankin-Selberg positivity for SL_n")
    p.add_argument("--n", type=int_range, default=list(range(2, 27)))
    p.add_argument("--p", type=lambda s: [float(t) for t in s.split(",")])

    sub.add_parser("maass-exclude", help="level-2 Maass form exclusion")

    p = sub.add_parser("zeta-verify", help="explicit formula for zeta")
    p.add_argument("--zeros", help="zero file, or 100 / 1000 for the bundled tables")
    p.add_argument("--function", default="g1")
    p.add_argument("--p", type=float)

    p = sub.add_parser("plot-grid", help="sign grid of Re h")
    p.add_argument("--function", default="h1m")
    p.add_argument("--re", type=float_range, default=(0.0, 30.0))
    p.add_argument("--im", type=float_range, default=(0.0, 0.49))
    p.add_argument("--step", type=float, default=0.05)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.output_dir:
            cfg.output_dir = Path(args.output_dir)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        rows, comments, ok, summary = COMMANDS[args.command](args, cfg)
    except (argparse.ArgumentTypeError, ValueError, OSError, PositivityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = emit_csv(rows, cfg.output_dir / f"{args.command}.csv", comments)
    print(f"{args.command}: {summary}")
    print(f"wrote {out}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
