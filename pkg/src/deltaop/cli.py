"""Command-line front end.

Every subcommand loads plain JSON/CSV inputs, runs one computation from the
library, writes its artifact under --out with a full parameter echo, and
prints a one-line summary.  Runs are deterministic for a fixed seed: fixed
reduction orders inside the library, canonical JSON, 17-significant-digit
CSV, no timestamps — two identical invocations produce byte-identical files.

Exit codes: 0 success, 1 a tolerance failure inside the reference suite,
2 input or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .calculus import Dunford, Eigen, ResolventLimit, TimeQuadrature, apply
from .commutators import commutator, double_moment_commutator, single_moment_check
from .errors import DeltaOpError, ParameterError
from .io import (
    ensure_out_dir,
    header_comment,
    load_matrix,
    matrix_to_json,
    meta_block,
    parse_contour_spec,
    parse_function_spec,
    parse_grid_spec,
    parse_kernel_spec,
    parse_vector_spec,
    read_csv_columns,
    write_csv,
    write_json,
)
from .kernels import (
    GAUSSIAN,
    LORENTZIAN,
    SmoothingKernel,
    default_grid,
    default_width,
    density_curve,
    lorentzian_delta,
)
from .measures import BorelSet, EpsilonSchedule, spectral_family, spectral_measure, stone_formula_study
from .models import (
    CompactOperatorSpec,
    Grid1D,
    GridFunction,
    build_bounded_momentum,
    build_laplacian,
    build_momentum,
    build_position,
    laplacian_family_closed_form,
    momentum_family_closed_form,
    schmidt_resolve,
    schmidt_solve,
)
from .operators import HermitianOperator, decompose, eigenprojectors, new_hermitian
from .resolvent import dunford_apply, hille_yosida_resolvent, resolvent
from .suite import run_suite


@dataclass(frozen=True)
class RunConfig:
    """Resolved global options shared by every subcommand."""

    out_dir: Path
    config: dict
    threads: int
    seed: int
    plot: bool

    def params(self) -> dict:
        return {"threads": self.threads, "seed": self.seed}


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParameterError("config file must hold a JSON object")
    return obj


def _load_operator(path) -> HermitianOperator:
    return new_hermitian(load_matrix(path))


def _matrix_norm(m) -> float:
    return float(np.max(np.abs(m)))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_eig(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    dec = decompose(op)
    pairs = eigenprojectors(dec)
    params = {"matrix": args.matrix, **run.params()}
    payload = {
        "meta": meta_block("eig", params),
        "eigenvalues": [float(e) for e in dec.eigenvalues],
        "projectors": [
            {"eigenvalue": float(e), "matrix": matrix_to_json(p)} for e, p in pairs
        ],
    }
    out = run.out_dir / "eig.json"
    write_json(out, payload)
    print(f"eigenvalues: {' '.join('%.12g' % e for e in dec.eigenvalues)}")
    print(f"wrote {out}")
    return 0


def cmd_density(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    dec = decompose(op)
    width = args.width if args.width is not None else default_width(dec)
    kernel = parse_kernel_spec(args.kernel, width)
    grid = parse_grid_spec(args.grid) if args.grid else default_grid(dec, kernel.width)
    x = parse_vector_spec(args.x, op.n)
    y = parse_vector_spec(args.y, op.n) if args.y else x
    curve = density_curve(op, x, y, grid, kernel,
                          x_label=args.x, y_label=args.y or args.x)
    params = {"matrix": args.matrix, "x": args.x, "y": args.y or args.x,
              "kernel": kernel.kind, "width": kernel.width,
              "grid": f"{grid[0]:g}:{grid[-1]:g}:{grid.size}", **run.params()}
    out = run.out_dir / "density.csv"
    write_csv(out, header_comment("density", params), ["lambda", "re", "im"],
              ((lam, v.real, v.imag) for lam, v in zip(curve.grid, curve.values)))
    mass = np.trapezoid(curve.values, curve.grid) if hasattr(np, "trapezoid") \
        else np.trapz(curve.values, curve.grid)
    print(f"curve mass {complex(mass).real:.6g}; wrote {out}")
    if run.plot:
        from .plotting import plot_density

        png = run.out_dir / "density.png"
        plot_density(curve, png)
        print(f"wrote {png}")
    return 0


def _method_from_args(args, op: HermitianOperator, run: RunConfig):
    name = args.method
    if name == "eigen":
        return Eigen()
    if name == "dunford":
        spec = args.contour or run.config.get("contour")
        if spec is None:
            dec = decompose(op)
            lo, hi = float(dec.eigenvalues[0]), float(dec.eigenvalues[-1])
            pad = max(1.0, 0.25 * (hi - lo))
            spec = {"kind": "circle", "center": [(lo + hi) / 2.0, 0.0],
                    "radius": (hi - lo) / 2.0 + pad, "n_nodes": args.nodes}
        return Dunford(parse_contour_spec(spec))
    if name == "time":
        return TimeQuadrature(args.sigma or 0.0, args.t_cut, args.n_t)
    if name == "resolvent":
        width = args.width if args.width is not None else default_width(decompose(op))
        kernel = parse_kernel_spec(args.kernel or GAUSSIAN, width)
        grid = parse_grid_spec(args.grid) if args.grid else None
        return ResolventLimit(kernel, grid)
    raise ParameterError(f"unknown method {name!r}")


def cmd_apply(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    f = parse_function_spec(args.f)
    method = _method_from_args(args, op, run)
    result = apply(op, f, method)
    params = {"matrix": args.matrix, "f": args.f, "method": args.method,
              **run.params()}
    payload = {"meta": meta_block("apply", params), "matrix": matrix_to_json(result)}
    out = run.out_dir / "apply.json"
    write_json(out, payload)
    print(f"|f(T)|_max = {_matrix_norm(result):.12g}; wrote {out}")
    return 0


def cmd_stone(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    if args.eps_schedule:
        values = tuple(float(v) for v in args.eps_schedule.split(","))
        schedule = EpsilonSchedule(values)
    else:
        schedule = EpsilonSchedule.default()
    study = stone_formula_study(op, args.a, args.b, schedule, args.n_lambda)
    deviations = [(eps, _matrix_norm(m - study.extrapolated))
                  for eps, m in study.per_eps]
    params = {"matrix": args.matrix, "a": args.a, "b": args.b,
              "eps_schedule": ",".join("%g" % e for e in schedule.values),
              "n_lambda": args.n_lambda, **run.params()}
    payload = {
        "meta": meta_block("stone", params),
        "matrix": matrix_to_json(study.extrapolated),
        "per_eps": [{"eps": float(e), "deviation": float(d)} for e, d in deviations],
    }
    out = run.out_dir / "stone.json"
    write_json(out, payload)
    for eps, dev in deviations:
        print(f"eps {eps:<10g} deviation from limit {dev:.3e}")
    print(f"wrote {out}")
    if run.plot:
        from .plotting import plot_stone_study

        png = run.out_dir / "stone.png"
        plot_stone_study([e for e, _ in deviations], [d for _, d in deviations], png)
        print(f"wrote {png}")
    return 0


def cmd_projector(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    if args.set:
        try:
            config = json.loads(args.set)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"--set is not valid JSON: {exc}") from exc
        borel = BorelSet.from_config(config)
        set_echo = args.set
    elif args.interval:
        grid = str(args.interval).split(":")
        if len(grid) != 2:
            raise ParameterError("--interval must be a:b")
        borel = BorelSet.interval(float(grid[0]), float(grid[1]))
        set_echo = f"({grid[0]},{grid[1]})"
    else:
        raise ParameterError("need --set or --interval")
    p = spectral_measure(op, borel)
    params = {"matrix": args.matrix, "set": set_echo, **run.params()}
    payload = {"meta": meta_block("projector", params), "matrix": matrix_to_json(p)}
    out = run.out_dir / "projector.json"
    write_json(out, payload)
    print(f"trace {np.trace(p).real:.12g} (rank of the projector); wrote {out}")
    return 0


def cmd_dunford(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    f = parse_function_spec(args.f)
    spec = args.contour or run.config.get("contour")
    if spec is None:
        raise ParameterError("need --contour (or a contour entry in --config)")
    contour = parse_contour_spec(spec)
    result = dunford_apply(op, f, contour)
    params = {"matrix": args.matrix, "f": args.f,
              "contour": spec if isinstance(spec, str) else json.dumps(spec, sort_keys=True),
              **run.params()}
    payload = {"meta": meta_block("dunford", params), "matrix": matrix_to_json(result),
               "node_spacing": float(contour.spacing())}
    out = run.out_dir / "dunford.json"
    write_json(out, payload)
    print(f"|result|_max = {_matrix_norm(result):.12g}; wrote {out}")
    return 0


def cmd_hille_yosida(args, run: RunConfig) -> int:
    op = _load_operator(args.matrix)
    z = complex(args.z.replace(" ", ""))
    hy = hille_yosida_resolvent(op, z, args.t_cut, args.n_t or 16384)
    direct = resolvent(op, z).matrix
    err = _matrix_norm(hy - direct)
    params = {"matrix": args.matrix, "z": args.z, "t_cut": args.t_cut,
              "n_t": args.n_t or 16384, **run.params()}
    payload = {"meta": meta_block("hille-yosida", params),
               "matrix": matrix_to_json(hy), "direct_error": float(err)}
    out = run.out_dir / "hille_yosida.json"
    write_json(out, payload)
    print(f"half-line quadrature vs direct solve: {err:.3e}; wrote {out}")
    return 0


def _load_phi(grid: Grid1D, path) -> GridFunction:
    if path is None:
        # width L/10 keeps the outer 10% of nodes below the support threshold
        w = grid.length / 10.0
        return GridFunction(grid, np.exp(-grid.nodes() ** 2 / (2.0 * w * w)))
    data = read_csv_columns(path)
    if data.shape[1] < 3:
        raise ParameterError("phi file needs columns x,re,im")
    if data.shape[0] != grid.n:
        raise ParameterError(f"phi file has {data.shape[0]} rows, grid has {grid.n}")
    if not np.allclose(data[:, 0], grid.nodes(), atol=1e-9 * grid.h):
        raise ParameterError("phi abscissae do not match the grid")
    return GridFunction(grid, data[:, 1] + 1j * data[:, 2])


def cmd_model(args, run: RunConfig) -> int:
    params = {"model": args.model, "n": args.n, "L": args.length,
              "lambda": args.lam, **run.params()}
    out = run.out_dir / f"model_{args.model.replace('-', '_')}.csv"
    if args.model in ("momentum", "laplacian"):
        grid = Grid1D(args.n, args.length)
        phi = _load_phi(grid, args.phi)
        build = build_momentum if args.model == "momentum" else build_laplacian
        closed_form = momentum_family_closed_form if args.model == "momentum" \
            else laplacian_family_closed_form
        closed = closed_form(phi, args.lam).values
        oracle = spectral_family(build(grid), args.lam) @ phi.values
        scale = np.sqrt(grid.h * np.sum(np.abs(oracle) ** 2))
        err = np.sqrt(grid.h * np.sum(np.abs(closed - oracle) ** 2)) / max(scale, 1e-300)
        params["l2_rel_error"] = "%.6g" % err
        write_csv(out, header_comment("model", params),
                  ["x", "re_closed", "im_closed", "re_projector", "im_projector"],
                  ((x, c.real, c.imag, o.real, o.imag)
                   for x, c, o in zip(grid.nodes(), closed, oracle)))
        print(f"relative L2 closed-form vs projector: {err:.4e}; wrote {out}")
        if run.plot:
            from .plotting import plot_model_comparison

            png = run.out_dir / f"model_{args.model}.png"
            plot_model_comparison(grid.nodes(), closed, oracle,
                                  f"{args.model} family at lambda={args.lam:g}", png)
            print(f"wrote {png}")
        return 0
    if args.model == "position":
        grid = Grid1D(args.n, args.length)
        op = build_position(grid)
        eps = args.width if args.width is not None else 0.1
        delta = lorentzian_delta(op, args.lam, eps)
        profile = SmoothingKernel(LORENTZIAN, eps).profile(args.lam - grid.nodes())
        off = delta - np.diag(np.diag(delta))
        params["width"] = eps
        params["offdiag_max"] = "%.3e" % _matrix_norm(off)
        write_csv(out, header_comment("model", params),
                  ["x", "re_delta_diag", "im_delta_diag", "profile"],
                  ((x, d.real, d.imag, p)
                   for x, d, p in zip(grid.nodes(), np.diag(delta), profile)))
        print(f"off-diagonal max {_matrix_norm(off):.3e}; wrote {out}")
        return 0
    if args.model == "bounded-momentum":
        n_modes = args.n if args.n % 2 == 1 else args.n + 1
        op = build_bounded_momentum(n_modes)
        family = np.real(np.diag(spectral_family(op, args.lam)))
        modes = np.arange(-(n_modes // 2), n_modes // 2 + 1)
        truncation = (modes <= np.floor(args.lam)).astype(float)
        params["n"] = n_modes
        write_csv(out, header_comment("model", params),
                  ["mode", "family_diag", "truncation"],
                  ((m, fd, tr) for m, fd, tr in zip(modes, family, truncation)))
        err = float(np.max(np.abs(family - truncation)))
        print(f"family vs floor truncation: {err:.3e}; wrote {out}")
        return 0
    raise ParameterError(f"unknown model {args.model!r}")


def cmd_schmidt(args, run: RunConfig) -> int:
    mu = tuple(float(v) for v in args.mu.split(","))
    spec = CompactOperatorSpec(mu)
    coeffs = np.ones(spec.m, dtype=complex) if args.coeffs is None \
        else parse_vector_spec(args.coeffs, spec.m)
    if (args.z is None) == (args.lam is None):
        raise ParameterError("need exactly one of --z or --lambda")
    if args.z is not None:
        z = complex(args.z.replace(" ", ""))
        result = schmidt_solve(spec, coeffs, z)
        mode = f"solve z={args.z}"
    else:
        result = schmidt_resolve(spec, coeffs, args.lam)
        mode = f"resolve lambda={args.lam:g}"
    params = {"mu": args.mu, "coeffs": args.coeffs or "ones",
              "mode": mode, **run.params()}
    payload = {"meta": meta_block("schmidt", params),
               "output": [[float(v.real), float(v.imag)] for v in result]}
    out = run.out_dir / "schmidt.json"
    write_json(out, payload)
    print(f"{mode}: |out|_max = {float(np.max(np.abs(result))):.12g}; wrote {out}")
    return 0


def cmd_commutator(args, run: RunConfig) -> int:
    s = _load_operator(args.matrix_s)
    t = _load_operator(args.matrix_t)
    dec_s, dec_t = decompose(s), decompose(t)
    lo = min(dec_s.eigenvalues[0], dec_t.eigenvalues[0])
    hi = max(dec_s.eigenvalues[-1], dec_t.eigenvalues[-1])
    sigma = args.sigma if args.sigma is not None else max(0.05 * (hi - lo), 0.02)
    kernel = SmoothingKernel(GAUSSIAN, sigma)
    lam_grid = default_grid(dec_s, sigma)
    mu_grid = default_grid(dec_t, sigma)
    direct = commutator(s, t)
    double = double_moment_commutator(s, t, kernel, lam_grid, mu_grid)
    m_s = single_moment_check(s, kernel, lam_grid)
    m_t = single_moment_check(t, kernel, mu_grid)
    factorized = m_s @ m_t - m_t @ m_s
    err_direct = _matrix_norm(double - direct)
    err_paths = _matrix_norm(double - factorized)
    params = {"matrix_s": args.matrix_s, "matrix_t": args.matrix_t,
              "sigma": sigma, **run.params()}
    payload = {
        "meta": meta_block("commutator", params),
        "commutator": matrix_to_json(direct),
        "double_moment": matrix_to_json(double),
        "errors": {"double_vs_direct": float(err_direct),
                   "factorized_vs_double": float(err_paths)},
    }
    out = run.out_dir / "commutator.json"
    write_json(out, payload)
    print(f"double moment vs [S,T]: {err_direct:.3e}; "
          f"two quadrature paths: {err_paths:.3e}; wrote {out}")
    return 0


def cmd_paper_suite(args, run: RunConfig) -> int:
    if args.inputs is not None and not Path(args.inputs).is_dir():
        raise ParameterError(f"inputs directory {args.inputs} does not exist")
    tolerances = run.config.get("suite_tolerances", {})
    results = run_suite(args.inputs, tolerances, run.seed)
    width = max(len(r.case_id) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += 0 if r.passed else 1
        print(f"{status}  {r.case_id:<{width}}  observed {r.observed:.3e}  "
              f"tol {r.tolerance:.3e}")
    print(f"{len(results) - failures}/{len(results)} cases passed")
    params = {"inputs": args.inputs or "builtin", **run.params()}
    payload = {
        "meta": meta_block("paper-suite", params),
        "cases": [
            {"id": r.case_id, "description": r.description,
             "observed": float(r.observed), "tolerance": float(r.tolerance),
             "passed": r.passed}
            for r in results
        ],
        "passed": failures == 0,
    }
    out = run.out_dir / "suite_report.json"
    write_json(out, payload)
    print(f"wrote {out}")
    if run.plot:
        from .plotting import plot_suite

        png = run.out_dir / "suite_report.png"
        plot_suite([r.case_id for r in results], [r.observed for r in results],
                   [r.tolerance for r in results], png)
        print(f"wrote {png}")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory (created if missing)")
    common.add_argument("--config", default=None, help="JSON file with extra defaults")
    common.add_argument("--threads", type=int, default=1,
                        help="worker hint, echoed into output metadata")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--plot", action="store_true",
                        help="also render PNG figures next to the data files")

    parser = argparse.ArgumentParser(
        prog="deltaop",
        description="Spectral delta-operator toolbox: smoothed deltas, spectral "
                    "measures, and four routes to f(T).")
    parser.add_argument("--version", action="version", version=f"deltaop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", parents=[common], help="eigenvalues and eigenprojectors")
    p.add_argument("matrix", help="JSON matrix file")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("density", parents=[common], help="smoothed spectral density curve")
    p.add_argument("matrix")
    p.add_argument("--x", default="e0", help="vector spec: e<k> or comma list")
    p.add_argument("--y", default=None, help="defaults to --x")
    p.add_argument("--grid", default=None, help="a:b:n (defaults to spectrum + margin)")
    p.add_argument("--kernel", default=LORENTZIAN, help="lorentzian or gaussian")
    p.add_argument("--width", type=float, default=None)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("apply", parents=[common], help="f(T) by a chosen route")
    p.add_argument("matrix")
    p.add_argument("--f", default="one", help="function spec, e.g. gaussian:0:1")
    p.add_argument("--method", default="eigen",
                   choices=["eigen", "dunford", "time", "resolvent"])
    p.add_argument("--contour", default=None, help="JSON contour spec (dunford)")
    p.add_argument("--nodes", type=int, default=256, help="contour nodes (dunford)")
    p.add_argument("--sigma", type=float, default=None, help="damping (time)")
    p.add_argument("--t-cut", dest="t_cut", type=float, default=None)
    p.add_argument("--n-t", dest="n_t", type=int, default=None)
    p.add_argument("--kernel", default=None, help="kernel kind (resolvent)")
    p.add_argument("--width", type=float, default=None, help="kernel width (resolvent)")
    p.add_argument("--grid", default=None, help="a:b:n quadrature grid (resolvent)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("stone", parents=[common],
                       help="interval projector from the resolvent boundary sweep")
    p.add_argument("matrix")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--eps-schedule", dest="eps_schedule", default=None,
                   help="comma list, descending, e.g. 0.1,0.05,0.025")
    p.add_argument("--n-lambda", dest="n_lambda", type=int, default=2001)
    p.set_defaults(func=cmd_stone)

    p = sub.add_parser("projector", parents=[common],
                       help="spectral measure of a Borel set")
    p.add_argument("matrix")
    p.add_argument("--set", default=None,
                   help='JSON list of {"a","b","a_closed","b_closed"}')
    p.add_argument("--interval", default=None, help="a:b shorthand, open interval")
    p.set_defaults(func=cmd_projector)

    p = sub.add_parser("dunford", parents=[common],
                       help="contour functional calculus")
    p.add_argument("matrix")
    p.add_argument("--f", default="one")
    p.add_argument("--contour", default=None, help="JSON contour spec")
    p.set_defaults(func=cmd_dunford)

    p = sub.add_parser("hille-yosida", parents=[common],
                       help="resolvent from the damped half-line time integral")
    p.add_argument("matrix")
    p.add_argument("--z", required=True, help="complex shift, e.g. 1+0.5j")
    p.add_argument("--t-cut", dest="t_cut", type=float, default=None)
    p.add_argument("--n-t", dest="n_t", type=int, default=None)
    p.set_defaults(func=cmd_hille_yosida)

    p = sub.add_parser("model", parents=[common],
                       help="discretized model operators vs closed-form kernels")
    p.add_argument("model", choices=["momentum", "laplacian", "position",
                                     "bounded-momentum"])
    p.add_argument("--n", type=int, default=256, help="grid points (or mode count)")
    p.add_argument("--L", dest="length", type=float, default=20.0, help="half-width")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--phi", default=None, help="CSV x,re,im sample file")
    p.add_argument("--width", type=float, default=None, help="kernel width (position)")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("schmidt", parents=[common],
                       help="eigenbasis series for compact operators")
    p.add_argument("--mu", required=True, help="comma list, descending modulus, nonzero")
    p.add_argument("--coeffs", default=None, help="comma list (default all ones)")
    p.add_argument("--z", default=None, help="solve (I - zK)x = y")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="resolve (lambda I - K)^-1 y")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("commutator", parents=[common],
                       help="moment identities for two operators")
    p.add_argument("matrix_s")
    p.add_argument("matrix_t")
    p.add_argument("--sigma", type=float, default=None)
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("paper-suite", parents=[common],
                       help="run the golden reference cases")
    p.add_argument("--inputs", default=None,
                   help="optional directory with reference inputs (viola.json)")
    p.set_defaults(func=cmd_paper_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = RunConfig(
            out_dir=ensure_out_dir(args.out),
            config=_load_config(args.config),
            threads=max(1, args.threads),
            seed=args.seed,
            plot=args.plot,
        )
        return args.func(args, run)
    except DeltaOpError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
