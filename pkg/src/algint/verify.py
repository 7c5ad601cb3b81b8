"""Post-hoc verification: root containment and distribution distances."""

import math
from dataclasses import dataclass

import numpy as np
import mpmath as mp

from . import measures
from .errors import KindMismatch

SUP_CDF_1D = "SupCDF_1D"
CELL_DISCREPANCY_2D = "CellDiscrepancy_2D"


@dataclass
class ContainmentVerdict:
    rho: float
    inside_count: int
    outside: list      # (root, distance to support) for offenders
    passed: bool

    @property
    def worst(self):
        return max((d for _, d in self.outside), default=0.0)


@dataclass
class DistributionDistance:
    kind: str
    value: float
    cells: tuple = None   # (nx, ny) for the 2-D kind


def _root_list(roots):
    return list(getattr(roots, "roots", roots))


def containment(roots, spec, rho):
    """Distance of every root to the support; pass iff all within rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    inside, outside = 0, []
    for z in _root_list(roots):
        d = measures.support_distance(spec, complex(z))
        if d < rho:
            inside += 1
        else:
            outside.append((z, float(d)))
    return ContainmentVerdict(float(rho), inside, outside, not outside)


def sup_cdf_gap(values, cdf_fn):
    """Kolmogorov distance between the empirical CDF of `values` and cdf_fn."""
    xs = sorted(float(v) for v in values)
    n = len(xs)
    gap = 0.0
    for i, x in enumerate(xs):
        f = float(cdf_fn(x))
        gap = max(gap, abs(f - i / n), abs(f - (i + 1) / n))
    return gap


def sup_cdf_gap_to_uniform(angles):
    """Kolmogorov distance of values in [0, 1) against the uniform law."""
    return sup_cdf_gap([a % 1.0 for a in angles], lambda x: min(max(x, 0.0), 1.0))


def distribution_distance(roots, spec, kind, cells=(20, 20), precision=96):
    """SupCDF_1D: Kolmogorov distance of real root parts against the measure's
    CDF.  CellDiscrepancy_2D: max cell-mass deviation on a cells[0] x cells[1]
    grid over the bounding box."""
    zs = _root_list(roots)
    if kind == SUP_CDF_1D:
        if not measures.is_real_line(spec):
            raise KindMismatch("SupCDF_1D needs a real-line measure")
        xs = [float(mp.re(z)) for z in zs]
        return DistributionDistance(
            kind, sup_cdf_gap(xs, lambda x: measures.cdf(spec, x, precision)))
    if kind == CELL_DISCREPANCY_2D:
        a, b, c = spec.bounding_box
        if c == 0:
            c = max(1e-9, (b - a) / 4)
        nx, ny = cells
        n = len(zs)
        worst = 0.0
        curve_cache = None
        if spec.kind in (measures.CIRCLE_FOURIER, measures.CONFORMAL_PULLBACK):
            try:
                curve_cache = measures.curve_quantile_points(spec, 8192, precision)
            except Exception:
                curve_cache = None
        for i in range(nx):
            for j in range(ny):
                x0 = a + (b - a) * i / nx
                x1 = a + (b - a) * (i + 1) / nx
                y0 = -c + 2 * c * j / ny
                y1 = -c + 2 * c * (j + 1) / ny
                emp = sum(1 for z in zs
                          if x0 <= mp.re(z) < x1 and y0 <= mp.im(z) < y1) / n
                tgt = measures.box_mass(spec, x0, x1, y0, y1, precision,
                                        curve_cache=curve_cache)
                worst = max(worst, abs(emp - tgt))
        return DistributionDistance(kind, worst, (nx, ny))
    raise KindMismatch(f"unknown distance kind {kind!r}")


def histogram_rows(roots, spec, bins=40, precision=96):
    """Rows (bin_left, bin_right, count, target_mass) over the support hull.

    Directly plottable; target masses come from the measure's CDF for
    real-line kinds and are left at 0 otherwise."""
    zs = _root_list(roots)
    xs = [float(mp.re(z)) for z in zs]
    a, b, _ = spec.bounding_box
    lo = min(min(xs, default=a), a)
    hi = max(max(xs, default=b), b)
    edges = np.linspace(lo, hi, bins + 1)
    rows = []
    real = measures.is_real_line(spec)
    for k in range(bins):
        left, right = float(edges[k]), float(edges[k + 1])
        count = sum(1 for x in xs if left <= x < right or (k == bins - 1 and x == right))
        if real:
            mass = float(measures.cdf(spec, right, precision)
                         - measures.cdf(spec, left, precision))
        else:
            mass = 0.0
        rows.append((left, right, count, mass))
    return rows
