"""Box partitions, stratified sample placement, and the pivot polynomial family.

A SamplePlan carries n+1 points approximating the target measure: quantiles of
the CDF on the real line, or per-box placements mirrored across the real axis
in the complex case.  The pivot polynomial is the monic polynomial with the
plan's points as roots; the basis family consists of its single-point
deflations, recombined per conjugate pair into a degree-n "plus" member and a
degree-(n-1) "minus" member so every member has real coefficients.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import mpmath as mp

from . import measures
from .errors import InfeasibleSeparation, PrecisionLoss, ZeroMassSupport
from .mputil import mpf_to_str
from .polyarith import RealPoly, deflate_linear, deflate_quadratic, from_roots

MODE_COMPLEX = "Complex"
MODE_REAL = "RealLine"

MAX_REPULSION_ITERS = 100


def sep_min_for(n, mode):
    # order bounds from the covering argument, with a 1/4 safety factor
    if mode == MODE_REAL:
        return 0.25 * n ** (-4.0 / 3.0)
    return 0.25 * n ** (-5.0 / 6.0)


@dataclass
class BoxGrid:
    M: int
    box: tuple          # (a, b, c): [a, b] x [-c, c]
    mode: str
    masses: np.ndarray  # (2M,) real mode, (2M, 2M) complex mode [i, j]

    def x_edge(self, i):
        a, b, _ = self.box
        return a + i * (b - a) / (2 * self.M)

    def y_edge(self, j):
        _, _, c = self.box
        return -c + j * (2 * c) / (2 * self.M)

    def x_index(self, x):
        a, b, _ = self.box
        i = int((x - a) / (b - a) * 2 * self.M)
        return min(max(i, 0), 2 * self.M - 1)

    def y_index(self, y):
        _, _, c = self.box
        if c == 0:
            return 0
        j = int((y + c) / (2 * c) * 2 * self.M)
        return min(max(j, 0), 2 * self.M - 1)


@dataclass
class SamplePlan:
    spec: object
    grid: BoxGrid
    counts: np.ndarray
    adjustments: np.ndarray
    n: int                      # sum of counts = n + 1
    mode: str
    seed: int
    precision: int
    real_points: list           # mpf, sorted
    pairs: list                 # mpc with positive imaginary part

    @property
    def total_points(self):
        return len(self.real_points) + 2 * len(self.pairs)

    def all_points(self):
        """Real points, then each pair as (z, conj z); precision preserved."""
        with mp.workprec(self.precision + 8):
            pts = [mp.mpc(x) for x in self.real_points]
            for z in self.pairs:
                pts.append(z)
                pts.append(mp.conj(z))
        return pts

    def members(self):
        """Basis-family slots in canonical order: ('real', x) then ('pair', z)."""
        out = [("real", x) for x in self.real_points]
        out.extend(("pair", z) for z in self.pairs)
        return out

    def member_count(self):
        return len(self.real_points) + 2 * len(self.pairs)

    def to_json_dict(self):
        return {
            "n": self.n,
            "mode": self.mode,
            "seed": self.seed,
            "precision": self.precision,
            "M": self.grid.M,
            "box": list(self.grid.box),
            "counts": self.counts.tolist(),
            "adjustments": self.adjustments.tolist(),
            "points": [[mpf_to_str(mp.re(z), self.precision),
                        mpf_to_str(mp.im(z), self.precision)]
                       for z in self.all_points()],
        }


def build_plan(spec, n, mode=None, seed=0, precision=256):
    """Stratified sample plan with n + 1 points.

    n must be odd (complex mode requires it; in real mode an even n is handled
    by building with n + 1 points and dropping the one nearest the median).
    M = floor(n^(1/3)); counts come from largest-remainder rounding of the box
    masses, paired across conjugate rows in complex mode.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if mode is None:
        mode = MODE_REAL if measures.is_real_line(spec) else MODE_COMPLEX
    if mode == MODE_REAL and not measures.is_real_line(spec):
        raise ValueError(f"{spec.kind} is not supported on the real line")

    drop_one = False
    n_build = n
    if n % 2 == 0:
        if mode == MODE_COMPLEX:
            # conjugate pairing needs an even point count unless real atoms
            # supply the odd one (empirical passthrough)
            if spec.kind != measures.EMPIRICAL_POINTS:
                raise ValueError("complex-mode plans need odd n (conjugate pairing)")
        else:
            drop_one = True
            n_build = n + 1

    M = max(1, int(n_build ** (1.0 / 3.0)))
    L = int(math.ceil(n_build ** (1.0 / 3.0)))

    if mode == MODE_REAL:
        plan = _build_real_plan(spec, n_build, M, L, seed, precision, drop_one)
    else:
        plan = _build_complex_plan(spec, n_build, M, L, seed, precision)
    plan.n = n
    audit_separation(plan)
    return plan


# ------------------------------------------------------------------ real mode

def _build_real_plan(spec, n, M, L, seed, precision, drop_one):
    a, b = measures.real_support_interval(spec)
    grid = BoxGrid(M, (a, b, 0.0), MODE_REAL, np.zeros(2 * M))
    for i in range(2 * M):
        grid.masses[i] = float(
            measures.cdf(spec, grid.x_edge(i + 1), precision)
            - measures.cdf(spec, grid.x_edge(i), precision))

    total = n + 1
    pts = measures.inverse_cdf_sample(spec, total, precision)
    if drop_one:
        med = measures.quantile(spec, mp.mpf(1) / 2, precision)
        k = min(range(len(pts)), key=lambda i: abs(pts[i] - med))
        pts = pts[:k] + pts[k + 1:]
        total -= 1

    counts = np.zeros(2 * M, dtype=int)
    for x in pts:
        counts[grid.x_index(float(x))] += 1
    floors = np.floor(total * grid.masses).astype(int)
    adjustments = counts - floors
    if np.abs(adjustments).max() > max(L, 2):
        raise PrecisionLoss("count adjustments exceed the allowed bound")

    sep = sep_min_for(n, MODE_REAL)
    # Real-line boundary margin: sep/2 keeps cross-box neighbors >= sep apart
    # without displacing edge-singular quantile clusters (a 1/(8M) margin
    # would clamp the arcsine edge mass into an artificial comb and wreck the
    # lattice conditioning).
    bnd = sep / 2.0
    width = (b - a) / (2 * M)
    if width <= 2 * bnd:
        raise InfeasibleSeparation("boxes narrower than twice the boundary margin")

    pts = _enforce_real_margins(pts, grid, counts, sep, bnd)
    plan = SamplePlan(spec, grid, counts, adjustments, n, MODE_REAL, seed,
                      precision, real_points=pts, pairs=[])
    return plan


def _enforce_real_margins(pts, grid, counts, sep, bnd):
    """Clamp quantile points into per-box margins and restore min gaps."""
    out = []
    idx = 0
    with mp.workprec(512):
        sep = mp.mpf(sep)
        for i in range(2 * grid.M):
            cnt = counts[i]
            if cnt == 0:
                continue
            lo = mp.mpf(grid.x_edge(i)) + bnd
            hi = mp.mpf(grid.x_edge(i + 1)) - bnd
            if (cnt - 1) * sep > hi - lo:
                raise InfeasibleSeparation(
                    f"box {i} holds {cnt} points but fits "
                    f"{int((hi - lo) / sep) + 1} at separation {float(sep):g}")
            chunk = []
            for x in pts[idx:idx + cnt]:
                if x < lo:
                    x = lo
                elif x > hi:
                    x = hi
                chunk.append(x)
            idx += cnt
            for k in range(1, cnt):
                if chunk[k] - chunk[k - 1] < sep:
                    chunk[k] = chunk[k - 1] + sep
            if chunk and chunk[-1] > hi:
                chunk[-1] = hi
                for k in range(cnt - 2, -1, -1):
                    if chunk[k + 1] - chunk[k] < sep:
                        chunk[k] = chunk[k + 1] - sep
            out.extend(chunk)
    return out


# ------------------------------------------------------------------ complex mode

def _build_complex_plan(spec, n, M, L, seed, precision):
    a, b, c = spec.bounding_box
    if c <= 0:
        raise ValueError("complex mode needs a bounding box with positive height")
    grid = BoxGrid(M, (a, b, c), MODE_COMPLEX, np.zeros((2 * M, 2 * M)))
    total = n + 1
    if total % 2 and spec.kind != measures.EMPIRICAL_POINTS:
        raise ValueError("complex plans need an even point count")

    curve_cache = None
    if spec.kind not in (measures.EMPIRICAL_POINTS, measures.ANNULUS_UNIFORM):
        curve_cache = measures.curve_quantile_points(
            spec, max(8192, 64 * total), precision)
    for i in range(2 * M):
        for j in range(2 * M):
            grid.masses[i, j] = max(0.0, measures.box_mass(
                spec, grid.x_edge(i), grid.x_edge(i + 1),
                grid.y_edge(j), grid.y_edge(j + 1),
                precision, curve_cache=curve_cache))

    mass_total = grid.masses.sum()
    if mass_total < 2.0 ** -precision:
        raise ZeroMassSupport("all box masses below resolvable threshold")
    grid.masses /= mass_total
    if spec.kind != measures.EMPIRICAL_POINTS:
        # conjugation symmetry of the grid, then exact symmetrization;
        # empirical atoms sitting on the axis legitimately land on one side
        mirrored = grid.masses[:, ::-1]
        if np.abs(grid.masses - mirrored).max() > 1e-6:
            raise PrecisionLoss("box masses violate conjugation symmetry")
        grid.masses = 0.5 * (grid.masses + mirrored)

    if spec.kind == measures.EMPIRICAL_POINTS:
        reals, pairs = _empirical_passthrough(spec, total)
        counts = _tally_counts(grid, pairs, reals)
    elif curve_cache is not None:
        # curve-supported measures: parameter quantiles restricted to the
        # upper half plane, mirrored below; the placement then matches the
        # measure to quantile accuracy instead of box-count accuracy
        reals, pairs = [], _curve_halfplane_quantiles(spec, total, precision)
        counts = _tally_counts(grid, pairs)
    else:
        # per-pair largest-remainder allocation on the upper half plane
        upper = [(i, j) for i in range(2 * M) for j in range(M, 2 * M)]
        quota = {bj: total * grid.masses[bj] for bj in upper}
        counts = np.zeros((2 * M, 2 * M), dtype=int)
        for bj in upper:
            counts[bj] = int(quota[bj])
        deficit = total // 2 - int(sum(counts[bj] for bj in upper))
        order = sorted(upper, key=lambda bj: quota[bj] - counts[bj], reverse=True)
        for t in range(deficit):
            counts[order[t % len(order)]] += 1
        counts[:, :M] = counts[:, 2 * M - 1:M - 1:-1]  # mirror rows j < M
        reals, pairs = [], _place_pairs(spec, grid, counts, seed, precision,
                                        sep_min_for(n, MODE_COMPLEX),
                                        1.0 / (8.0 * M))
    adjustments = counts - np.floor(total * grid.masses).astype(int)
    if np.abs(adjustments).max() > max(L, 2) + 2:
        raise PrecisionLoss("count adjustments exceed the allowed bound")
    return SamplePlan(spec, grid, counts, adjustments, n, MODE_COMPLEX, seed,
                      precision, real_points=reals, pairs=pairs)


def _curve_halfplane_quantiles(spec, total, precision):
    """Upper half-plane quantile points for curve-supported measures.

    CircleFourier: the angular CDF satisfies F(1/2) = 1/2 exactly (cosine
    harmonics), so the upper semicircle carries the quantiles at
    (k - 1/2)/total for k = 1..total/2.  The square-root preimage pullback
    splits into the two branch sheets, each carrying half the base measure;
    branch "+" is in the upper half plane for base angles in (0, 1/2) and
    branch "-" for base angles in (1/2, 1)."""
    need = total // 2
    with mp.workprec(precision + 8):
        if spec.kind == measures.CIRCLE_FOURIER:
            r = spec.params["radius"]
            out = []
            for k in range(1, need + 1):
                t = measures.quantile(spec, (mp.mpf(k) - mp.mpf(1) / 2) / total,
                                      precision)
                out.append(r * mp.exp(mp.mpc(0, 2 * mp.pi * t)))
            return sorted(out, key=lambda z: (mp.re(z), mp.im(z)))
        if spec.kind == measures.CONFORMAL_PULLBACK and \
                spec.params["map"] == measures.MAP_SQUARE_MINUS_ONE:
            base = spec.params["base"]
            rb = base.params["radius"]
            k_plus = (need + 1) // 2
            k_minus = need - k_plus
            out = []
            for k in range(1, k_plus + 1):
                # base-angle quantiles of the (0, 1/2) half at mass rank k
                t = measures.quantile(base, (mp.mpf(k) - mp.mpf(1) / 2) / (2 * k_plus),
                                      precision)
                u = rb * mp.exp(mp.mpc(0, 2 * mp.pi * t))
                out.append(mp.sqrt(1 + u))
            for k in range(1, k_minus + 1):
                t = 1 - measures.quantile(base, (mp.mpf(k) - mp.mpf(1) / 2) / (2 * k_minus),
                                          precision)
                u = rb * mp.exp(mp.mpc(0, 2 * mp.pi * t))
                out.append(-mp.sqrt(1 + u))
            fixed = []
            for z in out:
                if mp.im(z) <= 0:
                    z = mp.conj(z)
                fixed.append(z)
            return sorted(fixed, key=lambda z: (mp.re(z), mp.im(z)))
    raise ValueError(f"no half-plane quantiles for {spec.kind}")


def _tally_counts(grid, pairs, reals=()):
    M = grid.M
    counts = np.zeros((2 * M, 2 * M), dtype=int)
    for z in pairs:
        i = grid.x_index(float(mp.re(z)))
        j = grid.y_index(float(mp.im(z)))
        counts[i, j] += 1
        counts[i, 2 * M - 1 - j] += 1
    for x in reals:
        counts[grid.x_index(float(x)), grid.y_index(0.0)] += 1
    return counts


def _empirical_passthrough(spec, total):
    """Use the atoms themselves when their count matches the plan size."""
    pts = spec.params["points"]
    if len(pts) != total:
        raise ValueError(
            f"empirical passthrough needs exactly {total} atoms, got {len(pts)}")
    reals = sorted(mp.mpf(x) for x, y, _ in pts if y == 0)
    pairs = sorted((mp.mpc(x, y) for x, y, _ in pts if y > 0),
                   key=lambda z: (mp.re(z), mp.im(z)))
    n_lower = sum(1 for _, y, _ in pts if y < 0)
    if n_lower != len(pairs):
        raise ValueError("atoms are not closed under conjugation")
    return reals, pairs


def _place_pairs(spec, grid, counts, seed, precision, sep, bnd):
    """Place counts[i, j] points in each upper-half box, then mirror."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    M = grid.M
    pairs = []
    for i in range(2 * M):
        for j in range(M, 2 * M):
            cnt = int(counts[i, j])
            if cnt == 0:
                continue
            x0, x1 = grid.x_edge(i) + bnd, grid.x_edge(i + 1) - bnd
            y0, y1 = grid.y_edge(j) + bnd, grid.y_edge(j + 1) - bnd
            if x1 <= x0 or y1 <= y0:
                raise InfeasibleSeparation(f"box ({i},{j}) thinner than its margins")
            pts = _stratified_box_points(spec, cnt, x0, x1, y0, y1, rng)
            pts = _repel(pts, x0, x1, y0, y1, sep, spec)
            pairs.extend(mp.mpc(p[0], p[1]) for p in pts)
    return sorted(pairs, key=lambda z: (mp.re(z), mp.im(z)))


def _stratified_box_points(spec, cnt, x0, x1, y0, y1, rng):
    """Jittered subgrid placement restricted to the support (annulus case).

    Scans progressively finer subgrids for cells inside the support, so
    sliver intersections (corner boxes grazing the annulus) still yield
    candidates, then picks cnt of them round-robin with jitter."""
    if cnt <= 0:
        return []
    for g in (max(2, int(math.ceil(math.sqrt(cnt)))), 8, 16, 32, 64):
        wx, wy = (x1 - x0) / g, (y1 - y0) / g
        cells = [(ix, iy) for ix in range(g) for iy in range(g)
                 if measures.support_distance(
                     spec, complex(x0 + (ix + 0.5) * wx, y0 + (iy + 0.5) * wy)) == 0.0]
        if len(cells) >= min(cnt, 3):
            out = []
            k = 0
            while len(out) < cnt:
                ix, iy = cells[k % len(cells)]
                k += 1
                x = x0 + (ix + 0.25 + 0.5 * rng.random()) * wx
                y = y0 + (iy + 0.25 + 0.5 * rng.random()) * wy
                if measures.support_distance(spec, complex(x, y)) == 0.0:
                    out.append((x, y))
                elif k > 100 * cnt:
                    out.append((x0 + (ix + 0.5) * wx, y0 + (iy + 0.5) * wy))
            return out
    raise InfeasibleSeparation("cannot place points inside the support")


def _repel(pts, x0, x1, y0, y1, sep, spec=None):
    """Lloyd-style pairwise repulsion inside the margin box, <= 100 rounds."""
    pts = [list(p) for p in pts]
    for _ in range(MAX_REPULSION_ITERS):
        moved = False
        for i in range(len(pts)):
            fx = fy = 0.0
            for j in range(len(pts)):
                if i == j:
                    continue
                dx = pts[i][0] - pts[j][0]
                dy = pts[i][1] - pts[j][1]
                d = math.hypot(dx, dy)
                if d < sep:
                    push = 0.5 * (sep - d) / max(d, 1e-300)
                    fx += dx * push
                    fy += dy * push
                    moved = True
            if fx or fy:
                pts[i][0] = min(max(pts[i][0] + fx, x0), x1)
                pts[i][1] = min(max(pts[i][1] + fy, y0), y1)
        if not moved:
            break
    return [(p[0], p[1]) for p in pts]


def audit_separation(plan):
    """Recompute in-box pairwise distances; violations are hard errors."""
    sep = sep_min_for(max(plan.n, 3), plan.mode)
    if plan.mode == MODE_REAL:
        pts = sorted(float(x) for x in plan.real_points)
        for a_, b_ in zip(pts, pts[1:]):
            if b_ - a_ < sep * (1 - 1e-9):
                raise InfeasibleSeparation(
                    f"points {a_} and {b_} closer than {sep:g}")
        return
    by_box = {}
    for z in plan.pairs:
        key = (plan.grid.x_index(float(mp.re(z))), plan.grid.y_index(float(mp.im(z))))
        by_box.setdefault(key, []).append(complex(z))
    for key, zs in by_box.items():
        for i in range(len(zs)):
            for j in range(i + 1, len(zs)):
                if abs(zs[i] - zs[j]) < sep * (1 - 1e-9):
                    raise InfeasibleSeparation(
                        f"box {key}: points {zs[i]} and {zs[j]} closer than {sep:g}")


# ------------------------------------------------------------------ pivot family

def pivot_polynomial(plan, precision=None):
    """Monic polynomial with the plan's points as roots (balanced product tree).

    Conjugate pairs multiply into real quadratics first, so coefficients are
    exactly real.  A residual audit at the plan's own points guards against
    precision loss at large degree."""
    if precision is None:
        precision = plan.precision
    p = from_roots(plan.all_points(), precision)
    with mp.workprec(precision):
        scale = max(abs(c) for c in p.coeffs)
        check = plan.real_points[:1] + plan.pairs[:1]
        for z in check:
            if abs(p(z)) > scale * mp.mpf(2) ** (-precision // 2):
                raise PrecisionLoss("pivot polynomial residual too large at a root")
    return p


def basis_family(plan, precision=None, pivot=None):
    """The deflation family of the pivot polynomial, one member per point.

    Real point x: p / (x - z).  Conjugate pair z: the quotient
    q = p / ((x - z)(x - conj z)) contributes q * (x - Re z) of degree n
    (the "plus" member) and q of degree n - 1 (the "minus" member).
    Deflations are synthetic divisions of the expanded pivot, never re-expanded
    from scratch.  Order matches plan.members() with pairs flattened as
    (plus, minus)."""
    if precision is None:
        precision = plan.precision
    if pivot is None:
        pivot = pivot_polynomial(plan, precision)
    out = []
    with mp.workprec(precision + 16):
        scale = max(abs(c) for c in pivot.coeffs)
        tol = scale * mp.mpf(2) ** (-precision // 2)
        for kind, z in plan.members():
            if kind == "real":
                q, rem = deflate_linear(pivot, z)
                if abs(rem) > tol:
                    raise PrecisionLoss(f"deflation remainder {rem} at {z}")
                out.append(q)
            else:
                re_z, im_z = mp.re(z), mp.im(z)
                q, (r1, r0) = deflate_quadratic(pivot, -2 * re_z,
                                                re_z * re_z + im_z * im_z)
                if abs(r1) > tol or abs(r0) > tol:
                    raise PrecisionLoss(f"quadratic deflation remainder at {z}")
                plus = q * RealPoly([-re_z, 1], precision)
                out.append(plus)
                out.append(q)
    return out


def discrete_energy(plan):
    """Off-diagonal sum of log|z_i - z_j| / (n+1)^2 over the plan's points."""
    pts = [complex(z) for z in plan.all_points()]
    total = len(pts)
    acc = 0.0
    for i in range(total):
        for j in range(total):
            if i != j:
                acc += math.log(abs(pts[i] - pts[j]))
    return acc / total ** 2
