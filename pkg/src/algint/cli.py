"""Command-line front end.

Subcommands: synthesize, verify, weil, check-measure, sample, reduce-bench.
Artifacts are deterministic for a fixed configuration: every delimited file
begins with a header line carrying the tool version and a hash of the
effective configuration, and reports embed the same metadata.  Wall-clock
timings go to stderr only, so artifact bytes do not depend on the clock.

Exit codes: 0 success, 2 verification failure (containment, admissibility, or
no obstruction found), 1 runtime errors, 64 usage errors.
"""

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
import mpmath as mp

from . import __version__, measures, plotting, sampling, synth, verify, weil
from .errors import AlgintError, NoObstructionFound
from .lattice import LatticeBasis, block_reduce, lll_reduce, successive_minima_exact
from .mputil import default_precision
from .polyarith import IntPoly, aberth_roots

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAIL = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _log(stage, msg):
    print(f"[{stage}] {msg}", file=sys.stderr)


def _config_hash(cfg):
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _header(cfg_hash):
    return f"# algint {__version__} config={cfg_hash}"


def _write_lines(path, lines, cfg_hash):
    path.write_text("\n".join([_header(cfg_hash)] + list(lines)) + "\n")


def _write_json(path, doc, cfg_hash):
    out = {"meta": {"tool": f"algint {__version__}", "config_hash": cfg_hash}}
    out.update(doc)
    path.write_text(json.dumps(out, indent=2, sort_keys=True, default=str) + "\n")


def _load_measure(arg):
    text = arg.strip()
    if not text.startswith("{"):
        text = Path(arg).read_text()
    return measures.MeasureSpec.from_json(text)


def _resolve_precision(args, n):
    if getattr(args, "precision_bits", None):
        return args.precision_bits
    env = os.environ.get("ALGINT_PRECISION_BITS")
    if env:
        return int(env)
    return default_precision(n)


def _add_common(p):
    p.add_argument("--out-dir", default=".", help="artifact directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision-bits", type=int, default=None,
                   help="working precision (default max(256, 12 n); env "
                        "ALGINT_PRECISION_BITS overrides)")
    p.add_argument("--threads", type=int, default=1,
                   help="cap on internal parallelism (current build is serial)")
    p.add_argument("--plots", dest="plots", action="store_true", default=True)
    p.add_argument("--no-plots", dest="plots", action="store_false")


def build_parser():
    ap = _Parser(prog="algint", description=__doc__)
    ap.add_argument("--version", action="version", version=f"algint {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="synthesize a polynomial for a measure")
    p.add_argument("--measure", required=True, help="measure JSON path or inline JSON")
    p.add_argument("--n", type=int, required=True, help="output degree")
    p.add_argument("--rho", type=float, default=0.25)
    p.add_argument("--reducer", choices=["lll", "block"], default="lll")
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--block-k", type=int, default=None)
    p.add_argument("--grid-density", type=int, default=32)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--diagnostics", action="store_true",
                   help="dump Gram-Schmidt norms of the reduced lattice")
    _add_common(p)

    p = sub.add_parser("verify", help="re-verify a polynomial against a measure")
    p.add_argument("--poly", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--rho", type=float, default=0.25)
    p.add_argument("--bins", type=int, default=40)
    _add_common(p)

    p = sub.add_parser("weil", help="find an abelian variety that is not a Jacobian")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n-ext", type=int, default=2)
    p.add_argument("--degree", type=int, default=290)
    p.add_argument("--margin", type=float, default=None)
    p.add_argument("--retries", type=int, default=8)
    _add_common(p)

    p = sub.add_parser("check-measure", help="admissibility screen for a measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--max-height", type=int, default=3)
    p.add_argument("--tolerance", type=float, default=1e-3)
    _add_common(p)

    p = sub.add_parser("sample", help="build and dump a sample plan")
    p.add_argument("--measure", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["RealLine", "Complex"], default=None)
    _add_common(p)

    p = sub.add_parser("reduce-bench", help="reduction quality against the exact oracle")
    p.add_argument("--dims", default="2,3,4,5,6")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--entry-bound", type=int, default=50)
    p.add_argument("--reducer", choices=["lll", "block"], default="lll")
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--block-k", type=int, default=None)
    _add_common(p)
    return ap


# ------------------------------------------------------------------ commands

def _cmd_synthesize(args):
    spec = _load_measure(args.measure)
    prec = _resolve_precision(args, args.n)
    opts = synth.SynthOptions(
        precision=prec, seed=args.seed,
        reducer=synth.Reducer(args.reducer, args.delta, args.block_k),
        rho=args.rho, grid_density=args.grid_density)
    cfg = opts.config_dict(spec, args.n, prec)
    cfg["measure"] = json.loads(spec.to_json())
    h = _config_hash(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    _log("synthesize", f"n={args.n} precision={prec} seed={args.seed}")
    report = synth.synthesize(spec, args.n, opts)
    for stage, dt in report.timings.items():
        _log("timing", f"{stage}: {dt:.2f}s")

    _write_lines(out / "poly.txt", report.output.to_lines(), h)
    rows = ["re,im,residual"] + [
        f"{mp.nstr(mp.re(z), 17)},{mp.nstr(mp.im(z), 17)},{mp.nstr(res, 8)}"
        for z, res in zip(report.roots.roots, report.roots.residuals)]
    _write_lines(out / "roots.csv", rows, h)
    hist = verify.histogram_rows(report.roots, spec, bins=args.bins)
    _write_lines(out / "histogram.csv",
                 ["bin_left,bin_right,count,target_mass"]
                 + [f"{l:.12g},{r:.12g},{c},{m:.12g}" for l, r, c, m in hist], h)
    doc = report.to_json_dict()
    _write_json(out / "report.json", doc, h)
    if args.diagnostics:
        gs = report.lattice_diagnostics.get("gs_log_norms", [])
        _write_lines(out / "gs_norms.csv", ["index,log_gs_norm"]
                     + [f"{i},{v:.12g}" for i, v in enumerate(gs)], h)
    if args.plots:
        plotting.save_roots_figure(report.roots, spec, out / "roots.png",
                                   title=f"roots, n={args.n}")
        plotting.save_histogram_figure(hist, out / "histogram.png",
                                       title=f"root histogram, n={args.n}")
        if spec.kind == measures.CONFORMAL_PULLBACK and \
                spec.params["map"] == measures.MAP_SQUARE_MINUS_ONE:
            plotting.save_mapped_angles_figure(report.roots,
                                               out / "mapped_angles.png")
    _log("synthesize", f"containment pass={report.containment.passed} "
         f"distance={report.distribution.value:.4f}")
    return EXIT_OK if report.containment.passed else EXIT_VERIFY_FAIL


def _cmd_verify(args):
    spec = _load_measure(args.measure)
    poly = IntPoly.from_lines(Path(args.poly).read_text().splitlines())
    prec = _resolve_precision(args, poly.degree)
    cfg = {"command": "verify", "poly": str(args.poly), "rho": args.rho,
           "precision": prec, "measure": json.loads(spec.to_json())}
    h = _config_hash(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _log("verify", f"degree={poly.degree} precision={prec}")
    roots = aberth_roots(poly, precision=min(prec, 512))
    cont = verify.containment(roots, spec, args.rho)
    kind = (verify.SUP_CDF_1D if measures.is_real_line(spec)
            else verify.CELL_DISCREPANCY_2D)
    dist = verify.distribution_distance(roots, spec, kind)
    hist = verify.histogram_rows(roots, spec, bins=args.bins)
    _write_lines(out / "histogram.csv",
                 ["bin_left,bin_right,count,target_mass"]
                 + [f"{l:.12g},{r:.12g},{c},{m:.12g}" for l, r, c, m in hist], h)
    _write_json(out / "verify_report.json", {
        "degree": poly.degree,
        "containment": {"rho": cont.rho, "inside": cont.inside_count,
                        "pass": cont.passed, "worst": cont.worst},
        "distribution_distance": {"kind": dist.kind, "value": dist.value},
    }, h)
    if args.plots:
        plotting.save_roots_figure(roots, spec, out / "roots.png")
        plotting.save_histogram_figure(hist, out / "histogram.png")
    _log("verify", f"containment pass={cont.passed} distance={dist.value:.4f}")
    return EXIT_OK if cont.passed else EXIT_VERIFY_FAIL


def _cmd_weil(args):
    params = weil.WeilParams(q=args.q, n_ext=args.n_ext, degree=args.degree,
                             margin=args.margin)
    prec = _resolve_precision(args, args.degree)
    cfg = {"command": "weil", "q": args.q, "n_ext": args.n_ext,
           "degree": args.degree, "margin": params.margin, "seed": args.seed,
           "precision": prec, "retries": args.retries}
    h = _config_hash(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _log("weil", f"q={args.q} degree={args.degree} margin={params.margin:.6f}")
    opts = synth.SynthOptions(precision=prec)
    try:
        rep = weil.find_non_jacobian(params, seed=args.seed,
                                     retry_budget=args.retries, opts=opts)
    except NoObstructionFound as e:
        _log("weil", str(e))
        return EXIT_VERIFY_FAIL
    _write_lines(out / "poly.txt", rep.poly.to_lines(), h)
    (out / "certificate.txt").write_text(
        _header(h) + "\n" + rep.certificate_text() + "\n")
    _write_json(out / "obstruction.json", {
        "q": rep.q,
        "degree": rep.poly.degree,
        "seed": rep.seed,
        "N": [str(v) for v in rep.N],
        "M": [str(v) for v in rep.M],
        "first_violation": rep.first_violation,
        "certified": rep.certified,
    }, h)
    if args.plots and rep.synthesis is not None:
        spec = weil.interval_transport(weil.circle_measure(params.q, params.margin))
        hist = verify.histogram_rows(rep.synthesis.roots, spec, bins=40)
        plotting.save_histogram_figure(hist, out / "histogram.png",
                                       title=f"Frobenius traces, q={args.q}")
        plotting.save_roots_figure(rep.synthesis.roots, spec, out / "roots.png")
    _log("weil", f"certified={rep.certified} first_violation={rep.first_violation}")
    return EXIT_OK


def _cmd_check_measure(args):
    spec = _load_measure(args.measure)
    cfg = {"command": "check-measure", "max_degree": args.max_degree,
           "max_height": args.max_height, "tolerance": args.tolerance,
           "measure": json.loads(spec.to_json())}
    h = _config_hash(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rep = measures.admissibility_check(spec, args.max_degree, args.max_height,
                                       tolerance=args.tolerance)
    worst_q, worst_v = rep.worst()
    _write_json(out / "admissibility.json", {
        "pass": rep.passed,
        "min_value": rep.min_value,
        "tolerance": rep.tolerance,
        "catalog_size": len(rep.catalog),
        "worst": {"coefficients": list(worst_q.coeffs), "value": worst_v},
    }, h)
    _log("check-measure", f"min integral {rep.min_value:.6g} over "
         f"{len(rep.catalog)} polynomials; pass={rep.passed}")
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAIL


def _cmd_sample(args):
    spec = _load_measure(args.measure)
    prec = _resolve_precision(args, args.n)
    cfg = {"command": "sample", "n": args.n, "mode": args.mode,
           "seed": args.seed, "precision": prec,
           "measure": json.loads(spec.to_json())}
    h = _config_hash(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plan = sampling.build_plan(spec, args.n, mode=args.mode, seed=args.seed,
                               precision=prec)
    _write_json(out / "plan.json", plan.to_json_dict(), h)
    pts = plan.all_points()
    _write_lines(out / "points.csv", ["re,im"] + [
        f"{mp.nstr(mp.re(z), 17)},{mp.nstr(mp.im(z), 17)}" for z in pts], h)
    if args.plots:
        plotting.save_points_figure(pts, spec, out / "points.png",
                                    title=f"plan, n={plan.n}")
    _log("sample", f"{plan.total_points} points, M={plan.grid.M}")
    return EXIT_OK


def _cmd_reduce_bench(args):
    dims = [int(d) for d in args.dims.split(",") if d.strip()]
    rng = np.random.default_rng(np.random.PCG64(args.seed))
    cfg = {"command": "reduce-bench", "dims": dims, "count": args.count,
           "seed": args.seed, "reducer": args.reducer, "delta": args.delta}
    h = _config_hash(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = ["dim,instance,j,norm,lambda_j,ratio,bound"]
    worst = 0.0
    for d in dims:
        for inst in range(args.count):
            cols = _random_full_rank(rng, d, args.entry_bound)
            basis = LatticeBasis([list(map(int, c)) for c in cols], 256)
            if args.reducer == "lll":
                res = lll_reduce(basis, args.delta)
            else:
                res = block_reduce(basis, args.block_k or d, args.delta)
            if d <= 6:
                minima = successive_minima_exact(basis)
                for j in range(d):
                    col = [float(v) for v in res.reduced.columns[j]]
                    norm = math.sqrt(sum(v * v for v in col))
                    lam = math.sqrt(minima[j][0])
                    ratio = norm / lam
                    worst = max(worst, ratio)
                    bnd = math.exp(res.minima_log_bounds[j]) if args.reducer == "block" \
                        else 2.0 ** ((d - 1) / 2.0)
                    rows.append(f"{d},{inst},{j},{norm:.6g},{lam:.6g},"
                                f"{ratio:.6g},{bnd:.6g}")
    _write_lines(out / "reduce_bench.csv", rows, h)
    _log("reduce-bench", f"worst ||b_j||/lambda_j ratio: {worst:.4f}")
    return EXIT_OK


def _random_full_rank(rng, d, bound):
    while True:
        m = rng.integers(-bound, bound + 1, size=(d, d))
        if abs(np.linalg.det(m.astype(float))) > 0.5:
            return [list(m[:, j]) for j in range(d)]


COMMANDS = {
    "synthesize": _cmd_synthesize,
    "verify": _cmd_verify,
    "weil": _cmd_weil,
    "check-measure": _cmd_check_measure,
    "sample": _cmd_sample,
    "reduce-bench": _cmd_reduce_bench,
}


def run(argv=None):
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except AlgintError as e:
        _log(args.command, f"error: {e}")
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        _log(args.command, f"error: {e}")
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
