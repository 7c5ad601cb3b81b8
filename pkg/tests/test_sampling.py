import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from algint import (annulus_uniform, basis_family, build_plan, empirical,
                    equilibrium_interval, lemniscate_pullback,
                    pivot_polynomial)
from algint import measures, sampling
from algint.polyarith import from_roots
from algint.sampling import BoxGrid, SamplePlan, discrete_energy, sep_min_for


# ---------------------------------------------------------------- plans

def test_real_plan_small_symmetric(eq22):
    plan = build_plan(eq22, 3, seed=1, precision=256)
    pts = [float(x) for x in plan.real_points]
    assert len(pts) == 4
    assert pts == sorted(pts)
    assert all(-2 <= x <= 2 for x in pts)
    assert pts[0] == pytest.approx(-pts[3], abs=1e-12)
    assert pts[1] == pytest.approx(-pts[2], abs=1e-12)
    gaps = [b - a for a, b in zip(pts, pts[1:])]
    assert min(gaps) >= sep_min_for(3, "RealLine") * (1 - 1e-9)
    assert plan.counts.sum() == 4


def test_real_plan_counts_and_adjustments(serre):
    plan = build_plan(serre, 99, seed=0, precision=320)
    assert plan.counts.sum() == 100
    L = math.ceil(99 ** (1 / 3))
    assert np.abs(plan.adjustments).max() <= max(L, 2)
    # empirical CDF of the points stays near the target CDF
    xs = sorted(float(x) for x in plan.real_points)
    gap = max(abs(float(measures.cdf(serre, x)) - (i + 0.5) / 100)
              for i, x in enumerate(xs))
    assert gap <= 0.05


def test_even_n_drops_median_point(eq22):
    plan = build_plan(eq22, 4, seed=0, precision=256)
    assert plan.total_points == 5
    assert plan.n == 4


def test_complex_plan_even_n_rejected():
    with pytest.raises(ValueError):
        build_plan(annulus_uniform(1, 2), 4, mode="Complex", seed=0)


def test_empirical_passthrough():
    pts = []
    for k in range(50):
        th = math.pi * (k + 0.5) / 50  # upper half angles, well separated
        r = 1.3 + 0.2 * ((k * 7) % 5) / 5
        pts.append((r * math.cos(th), r * math.sin(th), 1 / 101))
        pts.append((r * math.cos(th), -r * math.sin(th), 1 / 101))
    pts.append((0.9, 0.0, 1 / 101))
    spec = empirical(pts)
    plan = build_plan(spec, 100, mode="Complex", seed=0, precision=256)
    assert plan.total_points == 101
    got = sorted((round(float(mp.re(z)), 9), round(float(mp.im(z)), 9))
                 for z in plan.all_points())
    want = sorted((round(x, 9), round(y, 9)) for x, y, _ in pts)
    assert got == want
    assert plan.counts.sum() == 101


def test_annulus_plan_symmetry_and_separation():
    spec = annulus_uniform(1.0, 2.0)
    plan = build_plan(spec, 49, seed=3, precision=320)
    assert plan.total_points == 50
    assert not plan.real_points
    counts = plan.counts
    M = plan.grid.M
    assert np.array_equal(counts, counts[:, ::-1])  # conjugate row symmetry
    # all points strictly inside the annulus and the box
    for z in plan.pairs:
        r = abs(complex(z))
        assert 1.0 <= r <= 2.0
        assert float(mp.im(z)) > 0
    sampling.audit_separation(plan)


def test_lemniscate_plan_points_near_curve():
    spec = lemniscate_pullback()
    plan = build_plan(spec, 49, seed=1, precision=320)
    for z in plan.pairs:
        w = complex(z) ** 2 - 1
        assert abs(abs(w) - 1.0) < 0.25


# ---------------------------------------------------------------- pivot family

def _manual_real_plan(points, spec, precision=192):
    n = len(points) - 1
    grid = BoxGrid(1, (min(points) - 0.1, max(points) + 0.1, 0.0), "RealLine",
                   np.array([0.5, 0.5]))
    return SamplePlan(spec, grid, np.array([len(points) // 2,
                                            len(points) - len(points) // 2]),
                      np.array([0, 0]), n, "RealLine", 0, precision,
                      real_points=[mp.mpf(x) for x in sorted(points)], pairs=[])


def _manual_pair_plan(pairs, spec, precision=192, reals=()):
    grid = BoxGrid(1, (-2.0, 2.0, 2.0), "Complex",
                   np.full((2, 2), 0.25))
    n = 2 * len(pairs) + len(reals) - 1
    return SamplePlan(spec, grid, np.full((2, 2), 1, dtype=int),
                      np.zeros((2, 2), dtype=int), n, "Complex", 0, precision,
                      real_points=[mp.mpf(x) for x in sorted(reals)],
                      pairs=[mp.mpc(z) for z in pairs])


def test_pivot_conjugate_pair(eq22):
    plan = _manual_pair_plan([1j], eq22)
    p = pivot_polynomial(plan)
    assert [float(c) for c in p.coeffs] == pytest.approx([1, 0, 1])


def test_pivot_three_reals(eq22):
    plan = _manual_real_plan([0.0, 1.0, -1.0], eq22)
    p = pivot_polynomial(plan)
    assert [float(c) for c in p.coeffs] == pytest.approx([0, -1, 0, 1])


def test_pivot_serre_vanishes_at_points(serre):
    plan = build_plan(serre, 99, seed=0, precision=640)
    p = pivot_polynomial(plan)
    assert p.degree == 100
    with mp.workprec(640):
        scale = max(abs(c) for c in p.coeffs)
        for z in plan.real_points[::17]:
            assert abs(p(z)) <= scale * mp.mpf(2) ** -300


def test_family_pair_example(eq22):
    plan = _manual_pair_plan([1j], eq22)
    fam = basis_family(plan)
    assert [[float(c) for c in q.coeffs] for q in fam] == [[0, 1], [1]]


def test_family_real_example(eq22):
    plan = _manual_real_plan([0.0, 1.0, -1.0], eq22)
    fam = basis_family(plan)
    got = {tuple(round(float(c), 9) for c in q.coeffs) for q in fam}
    assert got == {(-1.0, 0.0, 1.0), (0.0, 1.0, 1.0), (0.0, -1.0, 1.0)}


# ------------------------------------------------- determinant identity (exact)

def _exact_family_matrix(pairs):
    """Coefficient matrix of the pivot family over Gaussian rationals.

    pairs: list of (re, im) Fractions with im > 0.  Returns (matrix columns,
    points) where each column lists Fraction coefficients of p+ then p-."""
    def qmul(a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return out

    quads = [[re * re + im * im, -2 * re, Fraction(1)] for re, im in pairs]
    pivot = [Fraction(1)]
    for q in quads:
        pivot = qmul(pivot, q)

    def qdiv(p, q):
        p = list(p)
        out = [Fraction(0)] * (len(p) - len(q) + 1)
        for k in range(len(out) - 1, -1, -1):
            c = p[k + len(q) - 1] / q[-1]
            out[k] = c
            for j, qj in enumerate(q):
                p[k + j] -= c * qj
        assert all(v == 0 for v in p[:len(q) - 1])
        return out

    n1 = len(pivot) - 1  # n + 1 points
    cols = []
    for (re, im), q in zip(pairs, quads):
        base = qdiv(pivot, q)
        plus = qmul(base, [-re, Fraction(1)]) + [Fraction(0)] * 0
        plus = plus + [Fraction(0)] * (n1 - len(plus))
        minus = base + [Fraction(0)] * (n1 - len(base))
        cols.append(plus)
        cols.append(minus)
    return cols


def _fraction_det(mat):
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


@pytest.mark.parametrize("n_pairs", [2, 4, 6])
def test_determinant_identity_exact(n_pairs):
    # |det A|^2 = 2^-(n+1) prod |Im z|^-1 prod |z_i - z_j|^2 over all points,
    # verified in exact rational arithmetic on rational sample points
    rng = np.random.default_rng(100 + n_pairs)
    pairs = []
    seen = set()
    while len(pairs) < n_pairs:
        re = Fraction(int(rng.integers(-8, 9)), 4)
        im = Fraction(int(rng.integers(1, 9)), 4)
        if (re, im) not in seen:
            seen.add((re, im))
            pairs.append((re, im))
    cols = _exact_family_matrix(pairs)
    det = _fraction_det([[cols[j][i] for j in range(len(cols))]
                         for i in range(len(cols))])
    pts = []
    for re, im in pairs:
        pts.append((re, im))
        pts.append((re, -im))
    n1 = len(pts)
    rhs = Fraction(1, 2 ** n1)
    for _, im in pts:
        rhs /= abs(im)
    for i in range(n1):
        for j in range(i + 1, n1):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            rhs *= dx * dx + dy * dy
    assert det * det == rhs


# ---------------------------------------------------------------- energy

def test_discrete_energy_tracks_measure(eq22):
    plan99 = build_plan(eq22, 99, seed=0, precision=320)
    assert abs(discrete_energy(plan99)) <= 0.15
    plan399 = build_plan(eq22, 399, seed=0, precision=320)
    assert abs(discrete_energy(plan399)) <= 0.08


def test_plan_json_round_trip(eq22):
    plan = build_plan(eq22, 7, seed=2, precision=256)
    doc = plan.to_json_dict()
    assert doc["n"] == 7
    assert len(doc["points"]) == 8
    from algint.mputil import str_to_mpf
    back = [str_to_mpf(re, 256) for re, _ in doc["points"]]
    for x, y in zip(back, plan.all_points()):
        assert abs(x - mp.re(y)) < mp.mpf(2) ** -200
