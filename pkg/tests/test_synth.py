import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from algint import (IntPoly, RealPoly, SynthOptions, build_plan,
                    build_pivot_frame, equilibrium_interval, integer_basis,
                    is_eisenstein_at_2, monomial_coords, n_norm,
                    round_to_integer, synthesize)
from algint.polyarith import from_roots
from algint.sampling import BoxGrid, SamplePlan
from algint.synth import Reducer


def _manual_real_plan(points, spec, precision=224):
    grid = BoxGrid(1, (min(points) - 0.1, max(points) + 0.1, 0.0), "RealLine",
                   np.array([0.5, 0.5]))
    return SamplePlan(spec, grid, np.array([1, len(points) - 1]),
                      np.array([0, 0]), len(points) - 1, "RealLine", 0,
                      precision, real_points=[mp.mpf(x) for x in sorted(points)],
                      pairs=[])


@pytest.fixture(scope="module")
def tiny_frame(eq22):
    plan = _manual_real_plan([-1.0, 0.0, 1.0], eq22)
    return build_pivot_frame(plan)


def test_monomial_coords_examples(tiny_frame):
    # members in sorted-point order: p/(x+1), p/x, p/(x-1) with p = x^3 - x
    col0 = [float(v) for v in monomial_coords(tiny_frame, 0)]
    assert col0 == pytest.approx([0.5, -1.0, 0.5])
    col2 = [float(v) for v in monomial_coords(tiny_frame, 2)]
    assert col2 == pytest.approx([0.5, 0.0, 0.5])


def test_monomial_coords_exact_rational(eq22, rng):
    # reconstruction against an exact Fraction Lagrange oracle
    for trial in range(4):
        pts = sorted(set(Fraction(int(v), 8) for v in rng.integers(-12, 13, 9)))
        if len(pts) < 5:
            continue
        pts = pts[:7]
        plan = _manual_real_plan([float(x) for x in pts], eq22, precision=320)
        frame = build_pivot_frame(plan)
        n1 = len(pts)
        for k in (0, n1 - 1):
            # oracle weights z^k / prod(z - others)
            want = []
            for j, z in enumerate(pts):
                dp = Fraction(1)
                for i, w in enumerate(pts):
                    if i != j:
                        dp *= z - w
                want.append(Fraction(z ** k, 1) / dp)
            got = monomial_coords(frame, k)
            for a, b in zip(got, want):
                assert abs(float(a) - float(b)) < 1e-40 * max(1, abs(float(b)))


def test_frame_reconstructs_monomials(serre):
    plan = build_plan(serre, 19, seed=1, precision=320)
    frame = build_pivot_frame(plan)
    with mp.workprec(320):
        for k in (0, 7, 19):
            coeffs = [mp.mpf(0)] * frame.dimension
            for ci, member in zip(frame.monomial_coords[k], frame.basis):
                for d, c in enumerate(member.coeffs):
                    coeffs[d] += ci * c
            for d in range(frame.dimension):
                want = 1 if d == k else 0
                assert abs(coeffs[d] - want) < mp.mpf(2) ** -64


def test_integer_basis_outputs_are_integral(eq22):
    plan = build_plan(eq22, 11, seed=0, precision=256)
    frame = build_pivot_frame(plan)
    ib = integer_basis(frame)
    assert len(ib.polys) == 12
    for q in ib.polys:
        assert isinstance(q, IntPoly)
    # transform exactness: s_coords must equal the polynomial evaluations
    with mp.workprec(256):
        dpv = frame.pivot.derivative()
        for j in (0, 5):
            q = ib.polys[j]
            for i in (3, 6):
                z = plan.real_points[i]
                direct = q(z) / dpv(z)
                assert abs(direct - ib.s_coords[j][i]) < 1e-30 * max(1, abs(direct))


def test_reduction_never_worsens_max_norm(eq22):
    plan = build_plan(eq22, 19, seed=0, precision=320)
    frame = build_pivot_frame(plan)
    ib = integer_basis(frame)
    n = frame.dimension
    raw = [n_norm(IntPoly([0] * k + [1]), eq22, n, grid_density=16)
           for k in range(n)]
    red = [n_norm(q, eq22, n, grid_density=16) for q in ib.polys]
    assert max(red) <= max(raw) + 1e-9


def test_round_to_integer_fixed_point(eq22):
    plan = build_plan(eq22, 11, seed=0, precision=256)
    frame = build_pivot_frame(plan)
    ib = integer_basis(frame)
    combo = ib.polys[0] + (-3) * ib.polys[4] + 2 * ib.polys[7]
    target = RealPoly([mp.mpf(c) for c in combo.coeffs], 256)
    got = round_to_integer(target, ib, frame)
    assert got == combo


def test_round_to_integer_small_multiple_rounds_to_zero(eq22):
    plan = build_plan(eq22, 11, seed=0, precision=256)
    frame = build_pivot_frame(plan)
    ib = integer_basis(frame)
    target = RealPoly([mp.mpf("0.4") * c for c in ib.polys[0].coeffs], 256)
    got = round_to_integer(target, ib, frame)
    assert got.is_zero


def test_synthesize_small_eisenstein(eq22):
    rep = synthesize(eq22, 24, SynthOptions(seed=5))
    assert rep.output.degree == 24
    assert rep.output.is_monic
    assert rep.eisenstein and is_eisenstein_at_2(rep.output)
    assert rep.output.coeffs[0] % 4 == 2
    assert all(c % 2 == 0 for c in rep.output.coeffs[:-1])
    assert len(rep.roots) == 24


def test_synthesize_deterministic(eq22):
    r1 = synthesize(eq22, 20, SynthOptions(seed=9))
    r2 = synthesize(eq22, 20, SynthOptions(seed=9))
    assert r1.output == r2.output
    assert r1.distribution.value == r2.distribution.value
    d1 = r1.to_json_dict()
    d2 = r2.to_json_dict()
    assert d1 == d2


def test_synthesize_rejects_tiny_degree(eq22):
    with pytest.raises(ValueError):
        synthesize(eq22, 4)


def test_block_reducer_smoke(eq22):
    rep = synthesize(eq22, 12, SynthOptions(
        seed=1, reducer=Reducer("block", 0.99, k=3)))
    assert rep.eisenstein
