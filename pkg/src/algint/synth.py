"""The synthesis pipeline: monomials in the pivot frame, lattice reduction,
nearest-integer rounding in the reduced basis, and Eisenstein assembly.

The output polynomial is x^n + 2 W(x) where W is an integral polynomial of
degree < n with odd constant term, chosen as the nearest lattice rounding of
(pivot - x^n)/2.  Every non-leading coefficient of the output is even and the
constant term is 2 mod 4, so the result is Eisenstein at 2 and irreducible;
the output differs from the pivot polynomial by 2(W - (pivot - x^n)/2), which
the reduction keeps small in the weighted evaluation frame, so the roots
track the plan's sample points.
"""

import time
import warnings
from dataclasses import dataclass, field

import mpmath as mp

from . import measures, sampling, verify
from .errors import (DegenerateNode, EisensteinViolation, IllConditionedSolve,
                     NoConvergence, PrecisionLoss)
from .lattice import LatticeBasis, block_reduce, lll_reduce
from .mputil import default_precision, round_half_up
from .polyarith import IntPoly, RealPoly, aberth_roots, is_eisenstein_at_2, n_norm


@dataclass
class Reducer:
    kind: str = "lll"        # "lll" or "block"
    delta: float = 0.99
    k: int = None            # block size for "block"
    deep: bool = True        # deep insertions in the LLL path

    def run(self, basis):
        if self.kind == "lll":
            return lll_reduce(basis, self.delta, deep=self.deep)
        if self.kind == "block":
            k = self.k or max(2, round(mp.log(basis.count) / mp.log(mp.log(basis.count))))
            return block_reduce(basis, int(k), self.delta)
        raise ValueError(f"unknown reducer {self.kind!r}")


@dataclass
class PivotFrame:
    plan: object
    pivot: RealPoly
    basis: list              # deflation family, canonical order
    monomial_coords: list    # column k = coordinates of x^k in the family
    precision: int

    @property
    def dimension(self):
        return len(self.monomial_coords)


@dataclass
class IntegerBasis:
    polys: list              # IntPoly Q_0..Q_{n-1}
    s_coords: list           # their pivot-frame coordinate columns (mpf)
    norms: list              # log sup |s_coords| per element: n-norm estimate
    reduction: object        # ReductionResult (transform, inverse, gs_norms)


@dataclass
class SynthesisReport:
    output: IntPoly
    eisenstein: bool
    roots: object
    containment: object
    distribution: object
    log_n_norm: float
    timings: dict
    config: dict
    lattice_diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self, include_timings=False):
        doc = {
            "config": self.config,
            "degree": self.output.degree,
            "coefficients": [str(c) for c in self.output.coeffs],
            "eisenstein": self.eisenstein,
            "roots": [[mp.nstr(mp.re(z), 17), mp.nstr(mp.im(z), 17)]
                      for z in self.roots.roots],
            "containment": {
                "rho": self.containment.rho,
                "inside": self.containment.inside_count,
                "outside": [[mp.nstr(mp.re(z), 17), mp.nstr(mp.im(z), 17), d]
                            for z, d in self.containment.outside],
                "pass": self.containment.passed,
            },
            "distribution_distance": {
                "kind": self.distribution.kind,
                "value": self.distribution.value,
            },
            "log_n_norm": self.log_n_norm,
        }
        if include_timings:
            doc["timings"] = self.timings
        return doc


def build_pivot_frame(plan, precision=None, pivot=None):
    """Family members plus the change-of-basis columns writing each monomial
    x^k in the family, via the Lagrange identity
    x^k = sum_j (z_j^k / p'(z_j)) p(x)/(x - z_j),
    with conjugate pairs recombined into the plus/minus members."""
    if precision is None:
        precision = plan.precision
    if pivot is None:
        pivot = sampling.pivot_polynomial(plan, precision)
    family = sampling.basis_family(plan, precision, pivot=pivot)
    dim = plan.member_count()
    with mp.workprec(precision + 16):
        # p'(z_j): for real z via the deflation member, for pairs via the
        # quadratic quotient times (z - conj z)
        weights = []   # (kind, z, 1/p'(z)); pair entries carry complex values
        fam_iter = iter(family)
        floor_log = -0.9 * precision * mp.log(2)
        for kind, z in plan.members():
            if kind == "real":
                q = next(fam_iter)
                dp = q(z)
                if dp == 0 or mp.log(abs(dp)) < floor_log:
                    raise DegenerateNode(f"p'({z}) underflows")
                weights.append(("real", z, 1 / dp))
            else:
                next(fam_iter)          # plus member, not needed here
                q2 = next(fam_iter)     # minus member = p / ((x-z)(x-conj z))
                dp = q2(z) * (z - mp.conj(z))
                if dp == 0 or mp.log(abs(dp)) < floor_log:
                    raise DegenerateNode(f"p'({z}) underflows")
                weights.append(("pair", z, 1 / dp))

        cols = []
        powers = [mp.mpf(1) if kind == "real" else mp.mpc(1)
                  for kind, _, _ in weights]
        for k in range(dim):
            col = []
            for idx, (kind, z, w) in enumerate(weights):
                c = powers[idx] * w
                if kind == "real":
                    col.append(mp.re(c))
                else:
                    col.append(2 * mp.re(c))
                    col.append(-2 * mp.im(c) * mp.im(z))
                powers[idx] *= z
            cols.append(col)

    frame = PivotFrame(plan, pivot, family, cols, precision)
    _verify_reconstruction(frame, ks=(0, max(0, dim // 2), dim - 1))
    return frame


def monomial_coords(frame, k):
    """Coordinates of x^k in the pivot family (column k of the frame)."""
    if not 0 <= k < frame.dimension:
        raise ValueError(f"k must lie in [0, {frame.dimension})")
    return list(frame.monomial_coords[k])


def _verify_reconstruction(frame, ks):
    with mp.workprec(frame.precision):
        tol = mp.mpf(2) ** (-frame.precision // 4)
        for k in ks:
            coeffs = [mp.mpf(0)] * frame.dimension
            for ci, member in zip(frame.monomial_coords[k], frame.basis):
                for d, mc in enumerate(member.coeffs):
                    coeffs[d] += ci * mc
            scale = max(1, max(abs(c) for c in coeffs))
            for d in range(frame.dimension):
                want = 1 if d == k else 0
                if abs(coeffs[d] - want) > tol * scale:
                    raise PrecisionLoss(
                        f"monomial x^{k} fails to reconstruct at coefficient {d}")


def integer_basis(frame, reducer=None):
    """Short basis of integral polynomials of degree < n.

    The lattice of integer polynomials is embedded through the pivot-frame
    coordinates (columns = monomials); the reducer's integer transform columns
    are the output polynomials in the monomial basis."""
    if reducer is None:
        reducer = Reducer()
    basis = LatticeBasis([list(c) for c in frame.monomial_coords], frame.precision)
    res = reducer.run(basis)
    dim = frame.dimension
    polys = [IntPoly(res.transform_column(j)) for j in range(dim)]
    s_coords = [list(col) for col in res.reduced.columns]
    with mp.workprec(64):
        norms = [float(mp.log(max(abs(e) for e in col))) for col in s_coords]
    return IntegerBasis(polys, s_coords, norms, res)


def round_to_integer(target, basis, frame):
    """Nearest integer combination of the reduced basis to a real polynomial.

    The target's coordinates against the reduced basis come from the exact
    inverse transform (a triangular solve through the maintained inverse);
    each coordinate is rounded to the nearest integer, half-up on exact
    halves, so every coordinate residual is at most 1/2."""
    dim = frame.dimension
    if target.degree >= dim:
        raise ValueError("target degree must be below the lattice dimension")
    red = basis.reduction
    Ti = red.transform_inv
    with mp.workprec(frame.precision + 16):
        tc = list(target.coeffs) + [mp.mpf(0)] * (dim - len(target.coeffs))
        coords = []
        for i in range(dim):
            acc = mp.mpf(0)
            row = Ti[i]
            for j in range(dim):
                if row[j]:
                    acc += row[j] * tc[j]
            if not mp.isfinite(acc):
                raise IllConditionedSolve("non-finite coordinate in solve")
            coords.append(acc)
        rounded = [round_half_up(c) for c in coords]
    T = red.transform
    out = [0] * dim
    for j, cj in enumerate(rounded):
        if cj:
            for i in range(dim):
                out[i] += cj * T[i][j]
    return IntPoly(out)


def _assemble_eisenstein(pivot, ibasis, frame, n, prec):
    """Closest Eisenstein-at-2 polynomial to the pivot.

    Any x^n + 2 W(x) with integral W of degree < n and odd constant term is
    Eisenstein at 2 (all lower coefficients even, constant 2 mod 4).  Rounding
    (pivot - x^n)/2 onto the full integer lattice and then repairing the
    parity of the constant coordinate reaches every such W, which halves the
    attainable perturbation compared to assembling 4 H - 2 from a rounding of
    (pivot - x^n)/4 + 1/2 (that classical form restricts the non-constant
    perturbation coefficients to multiples of 4)."""
    with mp.workprec(prec + 16):
        h2 = RealPoly([c / 2 for c in pivot.coeffs[:n]], prec)
    W, fracs = _round_with_fracs(h2, ibasis, frame)
    if W.coeffs and W.coeffs[0] % 2 == 0 or not W.coeffs:
        # flip one coordinate whose basis element has an odd constant term,
        # in the direction that keeps the added residual smallest
        best = None
        for j, q in enumerate(ibasis.polys):
            if q.coeffs and q.coeffs[0] % 2:
                for sign in (1, -1):
                    cost = abs(fracs[j] - sign) * mp.e ** ibasis.norms[j]
                    if best is None or cost < best[0]:
                        best = (cost, j, sign)
        if best is None:
            raise EisensteinViolation(
                "no reduced basis element has an odd constant term")
        _, j, sign = best
        W = W + sign * ibasis.polys[j]
    out = [0] * (n + 1)
    for i, c in enumerate(W.coeffs):
        out[i] = 2 * c
    out[n] += 1
    return IntPoly(out)


def _round_with_fracs(target, basis, frame):
    """round_to_integer plus the fractional parts of the solved coordinates."""
    dim = frame.dimension
    Ti = basis.reduction.transform_inv
    with mp.workprec(frame.precision + 16):
        tc = list(target.coeffs) + [mp.mpf(0)] * (dim - len(target.coeffs))
        coords = []
        for i in range(dim):
            acc = mp.mpf(0)
            row = Ti[i]
            for j in range(dim):
                if row[j]:
                    acc += row[j] * tc[j]
            coords.append(acc)
        rounded = [round_half_up(c) for c in coords]
        fracs = [float(c - r) for c, r in zip(coords, rounded)]
    T = basis.reduction.transform
    out = [0] * dim
    for j, cj in enumerate(rounded):
        if cj:
            for i in range(dim):
                out[i] += cj * T[i][j]
    return IntPoly(out), fracs


@dataclass
class SynthOptions:
    precision: int = None
    seed: int = 0
    mode: str = None
    reducer: Reducer = field(default_factory=Reducer)
    rho: float = 0.25
    grid_density: int = 32
    screen_admissibility: bool = True
    root_precision: int = None

    def resolve(self, n):
        prec = self.precision or default_precision(n)
        rprec = self.root_precision or min(prec, 512)
        return prec, rprec

    def config_dict(self, spec, n, prec):
        return {
            "measure": {"kind": spec.kind},
            "n": n,
            "precision": prec,
            "seed": self.seed,
            "mode": self.mode or ("RealLine" if measures.is_real_line(spec)
                                  else "Complex"),
            "reducer": {"kind": self.reducer.kind, "delta": self.reducer.delta,
                        "k": self.reducer.k},
            "rho": self.rho,
            "grid_density": self.grid_density,
        }


def synthesize(spec, n, opts=None):
    """Full pipeline: plan, pivot, reduce, round, assemble, verify.

    Returns a SynthesisReport whose fields are all recomputed from the output
    polynomial (roots, containment, distribution distance, n-norm), never
    cached from intermediates."""
    if n < 5:
        raise ValueError("need n >= 5")
    opts = opts or SynthOptions()
    prec, root_prec = opts.resolve(n)
    timings = {}
    t0 = time.perf_counter()

    if opts.screen_admissibility:
        rep = measures.admissibility_check(spec, 1, 1, precision=96)
        if not rep.passed:
            q, v = rep.worst()
            warnings.warn(
                f"admissibility screen failed: integral of log|Q| is {v:.4g} "
                f"for Q with coefficients {q.coeffs}; output roots may not "
                f"equidistribute", stacklevel=2)
    timings["screen"] = time.perf_counter() - t0

    t = time.perf_counter()
    plan = sampling.build_plan(spec, n - 1, mode=opts.mode, seed=opts.seed,
                               precision=prec)
    timings["plan"] = time.perf_counter() - t

    t = time.perf_counter()
    pivot = sampling.pivot_polynomial(plan, prec)
    frame = build_pivot_frame(plan, prec, pivot=pivot)
    timings["frame"] = time.perf_counter() - t

    t = time.perf_counter()
    ibasis = integer_basis(frame, opts.reducer)
    red = ibasis.reduction
    lattice_diag = {
        "gs_log_norms": [float(mp.log(g)) for g in red.gs_norms],
        "swaps": red.swaps,
        "element_log_norms": list(ibasis.norms),
    }
    timings["reduce"] = time.perf_counter() - t

    t = time.perf_counter()
    g = _assemble_eisenstein(pivot, ibasis, frame, n, prec)
    if not is_eisenstein_at_2(g):
        raise EisensteinViolation("assembled output is not Eisenstein at 2")
    timings["round"] = time.perf_counter() - t

    t = time.perf_counter()
    warm = [complex(z) for z in plan.all_points()]
    try:
        roots = aberth_roots(g, precision=root_prec, initial=warm)
    except NoConvergence:
        # warm start trapped in a bad configuration; run the global phases
        roots = aberth_roots(g, precision=root_prec, max_iter=1500 * n)
    containment = verify.containment(roots, spec, opts.rho)
    kind = (verify.SUP_CDF_1D if measures.is_real_line(spec)
            else verify.CELL_DISCREPANCY_2D)
    distribution = verify.distribution_distance(roots, spec, kind)
    log_nn = n_norm(g, spec, n, opts.grid_density)
    timings["verify"] = time.perf_counter() - t
    timings["total"] = time.perf_counter() - t0

    return SynthesisReport(
        output=g,
        eisenstein=True,
        roots=roots,
        containment=containment,
        distribution=distribution,
        log_n_norm=log_nn,
        timings=timings,
        config=opts.config_dict(spec, n, prec),
        lattice_diagnostics=lattice_diag,
    )
