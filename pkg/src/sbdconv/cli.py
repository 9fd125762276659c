"""``sbdconv`` command line: desk-scale reproductions writing CSV files.

Every subcommand accepts ``--config FILE``: a ``key = value`` file whose
entries override the command-line flags (keys use the long flag names with
dashes or underscores).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .benchmarks import (
    conditioning_table,
    cp_conjecture_table,
    fit_decay_rate,
    run_bench,
    sbd_error_curve,
)
from .operator import kernel_from_spec
from .quadrature import K_SAFE, aliasing_error_bound, ring_quadrature_error, ring_size


def _floats(text):
    return [float(t) for t in str(text).replace(",", " ").split()]


def _ints(text):
    return [int(float(t)) for t in str(text).replace(",", " ").split()]


def _write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])
    print(f"wrote {path}")


def _load_config(path, parser, args):
    cp = configparser.ConfigParser()
    text = Path(path).read_text(encoding="utf-8")
    cp.read_string("[sbdconv]\n" + text)
    known = {a.dest: a for a in parser._actions}
    for key, value in cp["sbdconv"].items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("help", "config"):
            raise SystemExit(f"unknown config key {key!r}")
        action = known[dest]
        setattr(args, dest, action.type(value) if action.type else value)
    return args


def cmd_bench(args):
    rows = []

    def log(rep):
        print(
            f"N={rep.N:>9d}  off-line {rep.offline_seconds:8.3f}s  on-line {rep.online_seconds:8.4f}s  "
            f"memory {rep.operator_bytes / 1e6:9.2f} MB  ratio {100 * rep.dense_ratio:8.4f}%  "
            f"err {rep.max_error_vs_direct:.2e}",
            flush=True,
        )
        rows.append(rep.row())

    run_bench(_ints(args.n), eps=args.eps, alpha=args.alpha, seed=args.seed,
              kernel=kernel_from_spec(args.kernel), log=log)
    header = list(rows[0].keys())
    _write_csv(args.out / "bench.csv", header, [[r[h] for h in header] for r in rows])


def cmd_sbd_error(args):
    kernel = kernel_from_spec(args.kernel)
    P_list = _ints(args.p) if args.p else list(range(max(1, int(1.5 / args.a)), int(7 / args.a) + 1, 2))
    rows = sbd_error_curve(kernel, args.a, P_list)
    _write_csv(args.out / "sbd_error.csv", ["gamma", "P", "linf_error"], rows)
    try:
        rate, floor, g_floor = fit_decay_rate([r[0] for r in rows], [r[2] for r in rows])
        print(f"decay rate {rate:.3f} per unit gamma; floor {floor:.2e} at gamma {g_floor:.2f}")
    except ValueError as exc:
        print(f"no rate fitted: {exc}")


def cmd_conditioning(args):
    gammas = np.linspace(*_floats(args.gammas)[:2], int(_floats(args.gammas)[2]))
    rows = conditioning_table(_ints(args.p), gammas)
    _write_csv(args.out / "conditioning.csv",
               ["gamma", "P", "lambda_min", "theorem_bound", "conjecture_bound"], rows)


def cmd_cp_conjecture(args):
    rows = cp_conjecture_table(args.n)
    _write_csv(args.out / "cp_conjecture.csv", ["p", "v_p", "w_p"], rows)
    v = np.array([r[1] for r in rows])
    w = np.array([r[2] for r in rows])
    print(f"min v_p = {v.min():.3e}, min w_p = {w.min():.3e}, both positive: {bool(v.min() > 0 and w.min() > 0)}")


def cmd_quad_check(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    worst = 0.0
    for _ in range(args.n):
        rho = rng.uniform(0.0, args.rmax)
        M = ring_size(rho, args.tol) + int(rng.integers(0, 8))
        x = rng.uniform(-1, 1, size=(256, 2))
        x /= np.maximum(1.0, np.linalg.norm(x, axis=1))[:, None]
        x[0] = (1.0, 0.0)
        err = float(np.max(ring_quadrature_error(rho, M, x)))
        bound = float(aliasing_error_bound(rho, M))
        worst = max(worst, err / args.tol)
        rows.append((rho, M, err, bound))
    _write_csv(args.out / "quad_check.csv", ["rho", "M", "max_error", "bound"], rows)
    print(f"K_safe = {K_SAFE}; worst error / tol = {worst:.3e}")


def cmd_soundcancel(args):
    from .soundcancel import field_intensity, make_problem, optimize_phases, write_grid

    t0 = time.perf_counter()
    prob = make_problem(n_sources=args.n, k=args.k, n_quad=args.q, eps=args.eps, seed=args.seed,
                        zone_center=tuple(_floats(args.zone)[:2]), zone_radius=_floats(args.zone)[2])
    res = optimize_phases(prob.operator, prob.phases, max_evals=args.evals)
    elapsed = time.perf_counter() - t0
    print(f"{res.evaluations} evaluations in {elapsed:.1f}s; objective {res.initial:.4e} -> {res.final:.4e} "
          f"({res.reduction_db:.2f} dB reduction in the silence zone)")
    out = args.out
    _write_csv(out / "phases.csv", ["source", "x", "y", "phase_initial", "phase_final"],
               [(i, *map(float, prob.sources[i]), float(prob.phases[i]), float(res.phases[i]))
                for i in range(len(prob.sources))])
    _write_csv(out / "objective_trace.csv", ["step", "objective"], list(enumerate(map(float, res.trace))))
    if args.grid > 0:
        lo, hi = -1.0, 1.0
        g = np.linspace(lo, hi, args.grid)
        X, Y = np.meshgrid(g, g)
        pts = np.column_stack([X.ravel(), Y.ravel()])
        for tag, ph in (("before", prob.phases), ("after", res.phases)):
            I = field_intensity(prob.sources, ph, args.k, pts, eps=1e-4).reshape(X.shape)
            db = 10 * np.log10(np.maximum(I, 1e-30))
            write_grid(out / f"field_{tag}_db.f64", db, (lo, hi, lo, hi))
            print(f"wrote {out / f'field_{tag}_db.f64'}")
    summary = {"evaluations": res.evaluations, "seconds": elapsed, "initial": res.initial,
               "final": res.final, "reduction_db": res.reduction_db}
    (out / "soundcancel.json").write_text(json.dumps(summary, indent=2))


def build_parser():
    p = argparse.ArgumentParser(prog="sbdconv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_default, n_help, eps=1e-3):
        sp.add_argument("--eps", type=float, default=eps, help="target accuracy")
        sp.add_argument("--alpha", type=float, default=0.0, help="off-line/on-line trade-off in [0, 1/6]")
        sp.add_argument("--n", type=type(n_default), default=n_default, help=n_help)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--kernel", default="laplace", help="laplace or helmholtz:<k>")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--config", help="key = value file overriding flags")

    sp = sub.add_parser("bench", help="compression and timing table")
    common(sp, "1000,10000,100000", "comma-separated cloud sizes")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("sbd-error", help="SBD error against gamma")
    common(sp, 0, "unused")
    sp.add_argument("--a", type=float, default=0.05, help="inner radius")
    sp.add_argument("--p", default="", help="orders (default: gamma from 1.5 to 7)")
    sp.set_defaults(func=cmd_sbd_error)

    sp = sub.add_parser("conditioning", help="smallest Gram eigenvalue against gamma")
    common(sp, 0, "unused")
    sp.add_argument("--p", default="10,50,150", help="orders")
    sp.add_argument("--gammas", default="0.1,6,60", help="start,stop,count")
    sp.set_defaults(func=cmd_conditioning)

    sp = sub.add_parser("cp-conjecture", help="bracketing of the normalization constants")
    common(sp, 1000, "number of constants")
    sp.set_defaults(func=cmd_cp_conjecture)

    sp = sub.add_parser("quad-check", help="circular quadrature against its bound")
    common(sp, 1000, "number of random rings")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--rmax", type=float, default=200.0)
    sp.set_defaults(func=cmd_quad_check)

    sp = sub.add_parser("soundcancel", help="phase optimization for a silence zone")
    common(sp, 100, "number of sources", eps=1e-6)
    sp.add_argument("--k", type=float, default=90.0, help="wavenumber")
    sp.add_argument("--q", type=int, default=10_000, help="quadrature points in the zone")
    sp.add_argument("--zone", default="0,-0.6,0.25", help="center x, center y, radius")
    sp.add_argument("--evals", type=int, default=500, help="objective+gradient evaluations")
    sp.add_argument("--grid", type=int, default=0, help="field image side (0: none)")
    sp.set_defaults(func=cmd_soundcancel)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        args = _load_config(args.config, sub, args)
    args.out = Path(args.out)
    args.out.mkdir(parents=True, exist_ok=True)
    args.func(args)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
