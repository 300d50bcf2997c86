"""Command-line interface: ``digraph-pstar <command> [options]``.

Exit codes: 0 success, 2 usage error, 3 convergence or resource error,
4 failed comparison criterion.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from ._backend import BACKEND
from .curve import CRIT_GUARD, CURVE_XTOL, critical_point, curve_point
from .entropy import REGION_TOL, RegionES, classify_es, entropy, solve_bipodal
from .errors import ConvergenceError, DomainError, PStarError, ResourceError
from .formatting import to_csv, to_json
from .free_energy import (RegionU, _split_beta1_s, _split_e_beta2, edge_density,
                          ergm_free_energy, free_energy_e, free_energy_s, star_density)
from .grid import MAX_RESOLUTION, MIN_RESOLUTION, Plane, Quantity, surface_grid
from .oracle import (MEMORY_BUDGET, conditional_row_law, default_delta, default_n_max,
                     exact_joint_law, sample_conditioned, window_log_prob)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_COMPARE = 4

ENV_PREFIX = "DIGRAPH_PSTAR_"
# flag -> (environment variable, built-in default)
SETTINGS = {
    "tol_root": (ENV_PREFIX + "TOL_ROOT", CURVE_XTOL),
    "tol_region": (ENV_PREFIX + "TOL_REGION", REGION_TOL),
}


class UsageError(Exception):
    pass


def resolve_setting(name: str, flag_value: float | None) -> tuple[float, str]:
    """Flag > environment variable > built-in default; returns (value, source)."""
    env, default = SETTINGS[name]
    if flag_value is not None:
        return float(flag_value), "flag"
    raw = os.environ.get(env)
    if raw is not None and raw.strip():
        try:
            value = float(raw)
        except ValueError:
            raise UsageError(f"{env}={raw!r} is not a number") from None
        return value, "env"
    return default, "default"


def _tolerances(args) -> tuple[float, float]:
    tol_root, _ = resolve_setting("tol_root", args.tol_root)
    tol_region, _ = resolve_setting("tol_region", args.tol_region)
    for name, v in (("tol-root", tol_root), ("tol-region", tol_region)):
        if not (v > 0.0 and math.isfinite(v)):
            raise UsageError(f"--{name} must be positive and finite")
    return tol_root, tol_region


def _p_type(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid star order {text!r}") from None
    if p < 2:
        raise argparse.ArgumentTypeError(f"star order must be >= 2, got {p}")
    return p


def _n_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid n list {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("n list must contain positive integers")
    return values


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def _record(rec: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(rec)
    return to_csv(list(rec), [list(rec.values())])


def _table(columns: list[str], rows: list[list[Any]], fmt: str,
           extra: dict[str, Any] | None = None) -> str:
    if fmt == "json":
        doc = dict(extra or {})
        doc["columns"] = columns
        doc["rows"] = rows
        return to_json(doc)
    return to_csv(columns, rows)


def cmd_critical(args) -> int:
    cp = critical_point(args.p)
    rec = {"p": args.p, "beta1_c": cp.beta1_c, "beta2_c": cp.beta2_c,
           "e_c": cp.e_c, "s_c": cp.s_c}
    _emit(_record(rec, args.format or "json"), args.out)
    return EXIT_OK


CURVE_COLUMNS = ["beta1", "beta2", "x1", "x2", "qprime", "dx1_dbeta1", "dx2_dbeta1"]


def cmd_curve(args) -> int:
    tol_root, _ = _tolerances(args)
    cp = critical_point(args.p)
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not args.beta1_min < args.beta1_max:
        raise UsageError("--beta1-min must be below --beta1-max")
    if args.beta1_max >= cp.beta1_c - CRIT_GUARD:
        raise UsageError(f"beta1 range must stay below the critical value {cp.beta1_c!r}")
    rows = []
    for b1 in np.linspace(args.beta1_min, args.beta1_max, args.steps).tolist():
        pt = curve_point(args.p, b1, xtol=tol_root)
        rows.append([pt.beta1, pt.beta2, pt.x1, pt.x2, pt.qprime,
                     pt.dx1_dbeta1, pt.dx2_dbeta1])
    _emit(_table(CURVE_COLUMNS, rows, args.format or "csv", {"p": args.p}), args.out)
    return EXIT_OK


def cmd_grid(args) -> int:
    tol_root, tol_region = _tolerances(args)
    if not MIN_RESOLUTION <= args.resolution <= MAX_RESOLUTION:
        raise UsageError(f"--resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}]")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    grid = surface_grid(args.p, args.quantity, args.resolution, plane=args.plane,
                        range1=args.range1, range2=args.range2, tol=tol_region,
                        xtol=tol_root, workers=args.workers)
    fmt = args.format or "csv"
    _emit(grid.to_json() if fmt == "json" else grid.to_csv(), args.out)
    return EXIT_OK


def _point_es(p, e, s, tol_root, tol_region) -> dict[str, Any]:
    region = classify_es(p, e, s, tol_region)
    rec: dict[str, Any] = {"p": p, "e": e, "s": s,
                           "psi": entropy(p, e, s, tol=tol_region, xtol=tol_root),
                           "region": region.value}
    if region is RegionES.INTERIOR:
        prof = solve_bipodal(p, e, s, tol=tol_region, xtol=tol_root)
        rec.update(x1=prof.x1, x2=prof.x2, **{"lambda": prof.lam},
                   beta1=prof.beta1, beta2=prof.beta2, degenerate=prof.degenerate)
    return rec


def _bipodal_fields(pt, lam: float) -> dict[str, Any]:
    return {"x1": pt.x1, "x2": pt.x2, "lambda": lam, "beta1": pt.beta1, "beta2": pt.beta2}


def _point_e_beta2(p, e, beta2, tol_root, tol_region) -> dict[str, Any]:
    if not 0.0 <= e <= 1.0:
        raise DomainError(f"e must lie in [0, 1], got {e!r}")
    region, pt = _split_e_beta2(p, e, beta2, tol_region, CRIT_GUARD, tol_root)
    rec: dict[str, Any] = {"p": p, "e": e, "beta2": beta2,
                           "psi": free_energy_e(p, e, beta2, tol_region, xtol=tol_root),
                           "star_density": star_density(p, e, beta2, tol_region,
                                                        xtol=tol_root),
                           "region": region.value}
    if region is RegionU.BIPODAL:
        rec.update(_bipodal_fields(pt, (pt.x2 - e) / (pt.x2 - pt.x1)))
    return rec


def _point_beta1_s(p, beta1, s, tol_root, tol_region) -> dict[str, Any]:
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s!r}")
    region, pt = _split_beta1_s(p, beta1, s, tol_region, CRIT_GUARD, tol_root)
    rec: dict[str, Any] = {"p": p, "beta1": beta1, "s": s,
                           "psi": free_energy_s(p, beta1, s, tol_region, xtol=tol_root),
                           "edge_density": edge_density(p, beta1, s, tol_region,
                                                        xtol=tol_root),
                           "region": region.value}
    if region is RegionU.BIPODAL:
        lam = (pt.x2**p - s) / (pt.x2**p - pt.x1**p)
        rec.update(_bipodal_fields(pt, lam))
    return rec


def cmd_point(args) -> int:
    tol_root, tol_region = _tolerances(args)
    given = {k for k in ("e", "s", "beta1", "beta2") if getattr(args, k) is not None}
    forms = [{"e", "s"}, {"e", "beta2"}, {"beta1", "s"}, {"beta1", "beta2"}]
    if given not in forms:
        raise UsageError("give exactly one of: --e --s | --e --beta2 | --beta1 --s | "
                         "--beta1 --beta2")
    p = args.p
    if given == {"e", "s"}:
        rec = _point_es(p, args.e, args.s, tol_root, tol_region)
    elif given == {"e", "beta2"}:
        rec = _point_e_beta2(p, args.e, args.beta2, tol_root, tol_region)
    elif given == {"beta1", "s"}:
        rec = _point_beta1_s(p, args.beta1, args.s, tol_root, tol_region)
    else:
        res = ergm_free_energy(p, args.beta1, args.beta2)
        rec = {"p": p, "beta1": args.beta1, "beta2": args.beta2, "psi": res.value,
               "argmax": list(res.argmax)}
    fmt = args.format or "json"
    if fmt == "csv" and "argmax" in rec:
        rec["argmax"] = ";".join(format(x, ".17g") for x in rec["argmax"])
    _emit(_record(rec, fmt), args.out)
    return EXIT_OK


COMPARE_COLUMNS = ["n", "delta", "psi_n", "psi", "gap"]


def compare_report(p: int, e: float, s: float, delta: float | None, n_list: Sequence[int],
                   tol_root: float = CURVE_XTOL, tol_region: float = REGION_TOL
                   ) -> tuple[dict[str, Any], bool]:
    """Finite-n window rates against the limit; ``ok`` iff every gap is finite and
    the gaps decrease strictly along ``n_list``."""
    psi = entropy(p, e, s, tol=tol_region, xtol=tol_root)
    rows = []
    for n in n_list:
        d = default_delta(n) if delta is None else delta
        psi_n = window_log_prob(exact_joint_law(n, p), e, s, d)
        gap = abs(psi_n - psi) if math.isfinite(psi_n) else math.inf
        rows.append([n, d, psi_n, psi, gap])
    gaps = [r[-1] for r in rows]
    ok = all(math.isfinite(g) for g in gaps) and all(
        b < a for a, b in zip(gaps, gaps[1:]))
    n_top = max(n_list)
    hist = None
    if math.isfinite(rows[n_list.index(n_top)][2]):
        d = default_delta(n_top) if delta is None else delta
        law = conditional_row_law(n_top, p, e, s, d)
        hist = {"n": n_top, "d": list(range(n_top + 1)),
                "rate": law.rates().tolist(), "probability": law.probabilities.tolist()}
    doc = {"p": p, "e": e, "s": s, "psi": psi, "columns": COMPARE_COLUMNS, "rows": rows,
           "monotone_decreasing": ok, "row_law": hist}
    return doc, ok


def cmd_compare(args) -> int:
    tol_root, tol_region = _tolerances(args)
    if args.e is None or args.s is None:
        raise UsageError("compare needs --e and --s")
    if args.delta is not None and not args.delta > 0.0:
        raise UsageError("--delta must be positive")
    n_max = default_n_max(args.p)
    if max(args.n_list) > n_max:
        raise UsageError(f"n-list entries must not exceed n_max={n_max} for p={args.p}")
    doc, ok = compare_report(args.p, args.e, args.s, args.delta, args.n_list,
                             tol_root, tol_region)
    if (args.format or "json") == "json":
        text = to_json(doc)
    else:
        text = to_csv(COMPARE_COLUMNS, doc["rows"])
        if doc["row_law"] is not None:
            h = doc["row_law"]
            text += "\n" + to_csv(["d", "rate", "probability"],
                                  zip(h["d"], h["rate"], h["probability"]))
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_COMPARE


def cmd_oracle(args) -> int:
    if args.n is None:
        raise UsageError("oracle needs --n")
    fmt = args.format or "json"
    law = exact_joint_law(args.n, args.p, cache_dir=args.cache_dir)
    window = [v is not None for v in (args.e, args.s)]
    if not any(window):
        rows = [[int(a), int(b), float(w)] for a, b, w in zip(law.E, law.S, law.logw)]
        _emit(_table(["E", "S", "log_weight"], rows, fmt, {"n": law.n, "p": law.p}),
              args.out)
        return EXIT_OK
    if not all(window):
        raise UsageError("--e and --s must be given together")
    delta = default_delta(args.n) if args.delta is None else args.delta
    if not delta > 0.0:
        raise UsageError("--delta must be positive")
    rec: dict[str, Any] = {"n": law.n, "p": law.p, "e": args.e, "s": args.s,
                           "delta": delta,
                           "psi_n": window_log_prob(law, args.e, args.s, delta)}
    if math.isfinite(rec["psi_n"]):
        rec["row_law"] = conditional_row_law(args.n, args.p, args.e, args.s,
                                             delta).probabilities.tolist()
        if args.count:
            seed = 0 if args.seed is None else args.seed
            rec["seed"] = seed
            rec["samples"] = sample_conditioned(args.n, args.p, args.e, args.s, delta,
                                                seed, args.count).tolist()
    if fmt == "csv":
        flat = {k: v for k, v in rec.items() if k not in ("row_law", "samples")}
        text = to_csv(list(flat), [list(flat.values())])
        if "row_law" in rec:
            text += "\n" + to_csv(["d", "probability"], enumerate(rec["row_law"]))
        if "samples" in rec:
            text += "\n" + to_csv([f"d{i + 1}" for i in range(args.n)], rec["samples"])
    else:
        text = to_json(rec)
    _emit(text, args.out)
    return EXIT_OK if math.isfinite(rec["psi_n"]) else EXIT_USAGE


def cmd_config(args) -> int:
    rec: dict[str, Any] = {"version": __version__, "backend": BACKEND}
    for name, (env, default) in SETTINGS.items():
        flag = getattr(args, name, None)
        value, source = resolve_setting(name, flag)
        rec[name] = value
        rec[name + "_default"] = default
        rec[name + "_env"] = env
        rec[name + "_source"] = source
    rec.update(crit_guard=CRIT_GUARD, memory_budget=MEMORY_BUDGET,
               n_max_p2=default_n_max(2), n_max_p3=default_n_max(3),
               resolution_min=MIN_RESOLUTION, resolution_max=MAX_RESOLUTION)
    _emit(_record(rec, args.format or "json"), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_p_type, default=2, help="star order (>= 2)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--tol-root", type=float, default=None,
                        help=f"root tolerance (env {SETTINGS['tol_root'][0]})")
    common.add_argument("--tol-region", type=float, default=None,
                        help=f"region tolerance (env {SETTINGS['tol_region'][0]})")

    parser = argparse.ArgumentParser(
        prog="digraph-pstar",
        description="Edge/p-star densities of uniform directed graphs: transition curve, "
                    "entropy and free-energy surfaces, exact finite-n oracle.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("critical", parents=[common], help="critical point of the curve")

    c = sub.add_parser("curve", parents=[common], help="trace the transition curve")
    c.add_argument("--beta1-min", type=float, required=True)
    c.add_argument("--beta1-max", type=float, required=True)
    c.add_argument("--steps", type=int, default=50)

    g = sub.add_parser("grid", parents=[common], help="evaluate a surface grid")
    g.add_argument("--quantity", choices=[q.value for q in Quantity], required=True)
    g.add_argument("--plane", choices=[p.value for p in Plane], default=None,
                   help="parameter plane for region_tag (default e_beta2)")
    g.add_argument("--resolution", type=int, default=64)
    g.add_argument("--range1", type=_range, default=None, help="lo,hi for the first axis")
    g.add_argument("--range2", type=_range, default=None, help="lo,hi for the second axis")
    g.add_argument("--workers", type=int, default=1)

    pt = sub.add_parser("point", parents=[common], help="evaluate at a single point")
    for name in ("e", "s", "beta1", "beta2"):
        pt.add_argument(f"--{name}", type=float, default=None)

    cm = sub.add_parser("compare", parents=[common], help="finite-n oracle vs the limit")
    cm.add_argument("--e", type=float, default=None)
    cm.add_argument("--s", type=float, default=None)
    cm.add_argument("--delta", type=float, default=None,
                    help="window half-width (default max(0.05, 2/n) per n)")
    cm.add_argument("--n-list", type=_n_list, default=[8, 12, 16])

    o = sub.add_parser("oracle", parents=[common], help="exact finite-n law")
    o.add_argument("--n", type=int, default=None)
    o.add_argument("--e", type=float, default=None)
    o.add_argument("--s", type=float, default=None)
    o.add_argument("--delta", type=float, default=None)
    o.add_argument("--seed", type=int, default=None)
    o.add_argument("--count", type=int, default=0, help="number of conditioned samples")
    o.add_argument("--cache-dir", default=None)

    sub.add_parser("config", parents=[common], help="print effective settings")
    return parser


COMMANDS = {"critical": cmd_critical, "curve": cmd_curve, "grid": cmd_grid,
            "point": cmd_point, "compare": cmd_compare, "oracle": cmd_oracle,
            "config": cmd_config}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ConvergenceError, ResourceError) as exc:
        print(f"digraph-pstar: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, PStarError) as exc:
        print(f"digraph-pstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"digraph-pstar: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
