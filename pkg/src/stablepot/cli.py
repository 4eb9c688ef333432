"""Command line front end: evaluate kernels, verify identities, sample, report.

Subcommands
-----------
eval     print one kernel value;
verify   run an identity suite, emit a JSON report, exit 1 on any FAIL;
sample   draw from one of the exact samplers into a CSV file;
report   write a plot-ready CSV curve (monotone abscissa + value columns).

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 I/O error.  All randomized commands take --seed (default 42, printed);
equal seeds reproduce byte-identical outputs.  STABLEPOT_THREADS caps
the number of worker threads used by ``verify all``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import analysis, halfspace, montecarlo, relativistic, sphere
from .core import INFINITY, StableParams, basis_last
from .errors import DivergenceError, DomainError
from .montecarlo import RngStream, WalkConfig
from .relativistic import RelativisticParams
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

KERNELS = ("phi", "poisson-D", "green-D", "martin-D", "poisson-H", "green-H",
           "martin-H", "ball-poisson", "phi-rel", "poisson-H-rel", "u-lambda")

CURVES = ("phi", "one-minus-phi", "omega-alpha", "qm", "poisson-H-profile",
          "fatou-decay", "hardy-schedule")


def _parse_point(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return INFINITY
    try:
        return np.array([float(tok) for tok in text.replace("(", "")
                        .replace(")", "").split(",") if tok != ""])
    except ValueError as exc:
        raise DomainError(f"cannot parse point {text!r}: {exc}") from exc


def _parse_range(text: str) -> np.ndarray:
    try:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise DomainError(f"range must look like start:stop:count, got {text!r}") from exc


def _scalar(point, name: str) -> float:
    if isinstance(point, np.ndarray) and point.size == 1:
        return float(point[0])
    raise DomainError(f"--{name} must be a single number for this kernel")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stablepot",
        description="kernels, verification suites and hitting samplers for "
                    "stable processes off a sphere or hyperplane")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--alpha", type=float, default=1.5)
        sp.add_argument("--m", type=float, default=1.0)
        sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
        sp.add_argument("--p", dest="pexp", type=float, default=1.0)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--n", type=int, default=10_000)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    se = sub.add_parser("eval", help="evaluate a kernel at given points")
    se.add_argument("kernel", choices=KERNELS)
    se.add_argument("--x", type=str, default=None)
    se.add_argument("--y", type=str, default=None)
    se.add_argument("--z", type=str, default=None)
    se.add_argument("--center", type=str, default="0,0")
    se.add_argument("--radius", type=float, default=1.0)
    se.add_argument("--r", type=float, default=None)
    common(se)

    sv = sub.add_parser("verify", help="run an identity suite")
    sv.add_argument("suite", choices=tuple(SUITES) + ("all",))
    common(sv)

    ss = sub.add_parser("sample", help="draw from an exact sampler")
    ss.add_argument("sampler", choices=("ball-exit", "halfplane-hit",
                                        "walk-on-balls"))
    ss.add_argument("--x", type=str, default=None)
    ss.add_argument("--stream", type=int, default=0)
    ss.add_argument("--eps-shell", type=float, default=1e-4)
    ss.add_argument("--r-max", type=float, default=1e3)
    common(ss)

    sr = sub.add_parser("report", help="write a plot-ready CSV curve")
    sr.add_argument("--curve", choices=CURVES, required=True)
    sr.add_argument("--r", type=str, default="0.01:10:200",
                    help="abscissa range start:stop:count")
    sr.add_argument("--beta", type=float, default=1.0)
    sr.add_argument("--depth", type=int, default=20)
    common(sr)
    return ap


# --- eval -------------------------------------------------------------------

def _cmd_eval(args) -> int:
    p = StableParams(args.d, args.alpha)
    k = args.kernel
    if k == "phi":
        if args.r is not None:
            value = sphere.phi(p, args.r)
        else:
            value = sphere.hitting_probability(p, _parse_point(args.x))
    elif k == "poisson-D":
        value = sphere.poisson_kernel(p, _parse_point(args.x), _parse_point(args.z))
    elif k == "green-D":
        value = sphere.green_function(p, _parse_point(args.x), _parse_point(args.y))
    elif k == "martin-D":
        value = sphere.martin_kernel(p, _parse_point(args.x), _parse_point(args.z))
    elif k == "poisson-H":
        value = halfspace.poisson_kernel(p, _parse_point(args.x), _parse_point(args.z))
    elif k == "green-H":
        value = halfspace.green_function(p, _parse_point(args.x), _parse_point(args.y))
    elif k == "martin-H":
        value = halfspace.martin_kernel(p, _parse_point(args.x), _parse_point(args.z))
    elif k == "ball-poisson":
        value = sphere.ball_poisson_kernel(p, _parse_point(args.center),
                                           args.radius, _parse_point(args.x),
                                           _parse_point(args.y))
    elif k == "phi-rel":
        rp = RelativisticParams(p, args.m)
        value = relativistic.hitting_probability_sphere(
            rp, args.radius, _parse_point(args.x) if args.x else args.r)
    elif k == "poisson-H-rel":
        rp = RelativisticParams(p, args.m)
        value = relativistic.poisson_kernel_halfspace(
            rp, _parse_point(args.x), _parse_point(args.z))
    elif k == "u-lambda":
        rp = RelativisticParams(p, args.m, args.lam)
        value = relativistic.lambda_potential(
            rp, _scalar(_parse_point(args.x), "x"), _scalar(_parse_point(args.y), "y"))
    else:  # pragma: no cover
        raise DomainError(f"unknown kernel {k}")
    if args.format == "json":
        import json
        print(json.dumps({"kernel": k, "value": value}, sort_keys=True))
    else:
        print(repr(float(value)))
    return EXIT_OK


# --- verify -----------------------------------------------------------------

def _cmd_verify(args) -> int:
    threads = int(os.environ.get("STABLEPOT_THREADS", "1"))
    rep = run_suite(args.suite, d=args.d, alpha=args.alpha, tol=args.tol,
                    seed=args.seed, threads=max(threads, 1))
    text = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if rep.ok else EXIT_VERIFY_FAIL


# --- sample -----------------------------------------------------------------

def _cmd_sample(args) -> int:
    p = StableParams(args.d, args.alpha)
    stream = RngStream(args.seed, args.stream)
    rng = stream.generator()
    meta = {"sampler": args.sampler, "d": args.d, "alpha": args.alpha,
            "seed": args.seed, "stream": args.stream, "n": args.n}
    if args.sampler == "ball-exit":
        draws = montecarlo.sample_ball_exit_center(p, rng, args.n)
        sample = montecarlo.EmpiricalSample(draws, meta)
        radii = np.linalg.norm(draws, axis=1)
        summary = (f"n={args.n} seed={args.seed} mean|y|={radii.mean():.6g} "
                   f"P(|y|>2)={np.mean(radii > 2):.6g}")
    elif args.sampler == "halfplane-hit":
        x = _parse_point(args.x) if args.x else basis_last(args.d)
        meta["x"] = ",".join(repr(v) for v in x)
        draws = montecarlo.sample_halfplane_hit(p, x, rng, args.n)
        sample = montecarlo.EmpiricalSample(draws, meta)
        m = draws[:, 0].mean()
        se = draws[:, 0].std() / math.sqrt(args.n)
        summary = f"n={args.n} seed={args.seed} mean[0]={m:.6g} stderr={se:.6g}"
    else:
        x = _parse_point(args.x) if args.x else np.zeros(args.d)
        meta["x"] = ",".join(repr(v) for v in x)
        cfg = WalkConfig(eps_shell=args.eps_shell, r_max=args.r_max)
        res = montecarlo.walk_on_balls_hitting(p, x, cfg, args.n, rng)
        draws = np.array([[res.estimate]])
        sample = montecarlo.EmpiricalSample(
            np.array([[float(res.hits), float(res.escapes),
                       float(res.inconclusive)]]),
            meta | {"estimate": res.estimate, "stderr": res.stderr,
                    "bias_budget": res.bias_budget})
        summary = (f"n={args.n} seed={args.seed} estimate={res.estimate:.6g} "
                   f"stderr={res.stderr:.6g} bias_budget={res.bias_budget:.6g}")
    if args.out:
        sample.to_csv(args.out)
        summary += f" out={args.out}"
    print(summary)
    return EXIT_OK


# --- report -----------------------------------------------------------------

def _write_curve(path, meta: dict, header: list[str], rows) -> None:
    lines = [f"# {k}={v}" for k, v in sorted(meta.items())]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                              for v in row))
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_report(args) -> int:
    p = StableParams(args.d, args.alpha)
    meta = {"curve": args.curve, "d": args.d, "alpha": args.alpha,
            "seed": args.seed}
    if args.curve in ("phi", "one-minus-phi"):
        rs = _parse_range(args.r)
        if rs[0] < 1.0 < rs[-1]:
            # snap the nearest point onto the sphere so the boundary value
            # (phi = 1 there) shows up in the table
            rs[int(np.argmin(np.abs(rs - 1.0)))] = 1.0
        fn = sphere.phi if args.curve == "phi" else sphere.phi_complement
        rows = [(float(r), fn(p, float(r))) for r in rs]
        _write_curve(args.out, meta, ["r", args.curve.replace("-", "_")], rows)
    elif args.curve == "omega-alpha":
        rs = _parse_range(args.r)
        rows = [(float(r), halfspace.omega_alpha_density(
            p, np.concatenate([[float(r)], np.zeros(args.d - 2)])))
            for r in rs]
        _write_curve(args.out, meta, ["radius", "density"], rows)
    elif args.curve == "qm":
        rp = RelativisticParams(p, args.m)
        meta["m"] = args.m
        rs = _parse_range(args.r)
        rows = [(float(r), relativistic.subordinator_potential(rp, float(r)))
                for r in rs if r > 0]
        _write_curve(args.out, meta, ["x", "qm"], rows)
    elif args.curve == "poisson-H-profile":
        rs = _parse_range(args.r)
        x = basis_last(args.d)
        rows = [(float(r), halfspace.poisson_kernel(
            p, x, np.concatenate([[float(r)], np.zeros(args.d - 2)])))
            for r in rs]
        _write_curve(args.out, meta, ["ybar", "kernel"], rows)
    elif args.curve == "fatou-decay":
        meta["beta"] = args.beta
        smooth = analysis.BoundaryFunction(lambda pts: 1.0 + 0.5 * pts[:, 0])
        rep = analysis.HarmonicRepresentation(analysis.SPHERE, density=smooth)
        rng = RngStream(args.seed, 9).generator()
        probe = analysis.fatou_probe(p, rep, np.array([1.0, 0.0]), args.beta,
                                     args.depth, rng)
        running = probe.running_max_tail
        rows = [(k + 1, float(probe.deviations[k].max()), float(running[k]))
                for k in range(args.depth)]
        _write_curve(args.out, meta, ["depth", "deviation", "running_max"], rows)
    elif args.curve == "hardy-schedule":
        meta["p"] = args.pexp
        phi_fun = lambda pts: np.array([sphere.phi(p, float(np.linalg.norm(q)))
                                        for q in np.atleast_2d(pts)])
        grid = analysis.sphere_quadrature(p, 64)
        est = analysis.hardy_norm(p, analysis.SPHERE, phi_fun, args.pexp,
                                  grid=grid)
        rows = [(float(s), float(v)) for s, v in est.slices]
        _write_curve(args.out, meta, ["r", "slice_norm"], rows)
    else:  # pragma: no cover
        raise DomainError(f"unknown curve {args.curve}")
    return EXIT_OK


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "report":
            return _cmd_report(args)
        raise DomainError(f"unknown command {args.command}")
    except (DomainError, DivergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
