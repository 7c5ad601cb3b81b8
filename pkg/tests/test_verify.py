import math

import mpmath as mp
import numpy as np
import pytest

from algint import (annulus_uniform, empirical, equilibrium_interval,
                    inverse_cdf_sample)
from algint import measures, verify
from algint.errors import KindMismatch
from algint.polyarith import RootSet


def _rootset(points):
    return RootSet([mp.mpc(z) for z in points],
                   [mp.mpf(0)] * len(points), [1] * len(points), 128)


def test_containment_inside(eq22):
    v = verify.containment(_rootset([0.0, 1.0]), eq22, 0.1)
    assert v.passed and v.inside_count == 2 and not v.outside


def test_containment_offender(eq22):
    v = verify.containment(_rootset([3.0]), eq22, 0.5)
    assert not v.passed
    assert v.outside[0][1] == pytest.approx(1.0)


def test_containment_monotone_in_rho(eq22, rng):
    roots = _rootset([complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
                      for _ in range(24)])
    for rho1, rho2 in [(0.2, 0.5), (0.5, 1.2)]:
        v1 = verify.containment(roots, eq22, rho1)
        v2 = verify.containment(roots, eq22, rho2)
        if v1.passed:
            assert v2.passed


def test_supcdf_of_quantiles_is_small(eq22):
    n = 40
    xs = inverse_cdf_sample(eq22, n)
    d = verify.distribution_distance(_rootset([float(x) for x in xs]), eq22,
                                     verify.SUP_CDF_1D)
    assert d.value <= 1.0 / n + 1e-12


def test_cell_discrepancy_concentrated():
    spec = annulus_uniform(1.0, 2.0)
    roots = _rootset([1.5 + 0j] * 50)
    d = verify.distribution_distance(roots, spec, verify.CELL_DISCREPANCY_2D)
    assert d.value > 0.9


def test_distance_invariant_under_relabeling_and_conjugation(eq22, rng):
    pts = [complex(rng.uniform(-2, 2), 0) for _ in range(30)]
    d1 = verify.distribution_distance(_rootset(pts), eq22, verify.SUP_CDF_1D)
    rng.shuffle(pts)
    d2 = verify.distribution_distance(_rootset(pts), eq22, verify.SUP_CDF_1D)
    d3 = verify.distribution_distance(_rootset([z.conjugate() for z in pts]),
                                      eq22, verify.SUP_CDF_1D)
    assert d1.value == d2.value == d3.value


def test_kind_mismatch():
    spec = annulus_uniform(1, 2)
    with pytest.raises(KindMismatch):
        verify.distribution_distance(_rootset([1.5]), spec, verify.SUP_CDF_1D)


def test_uniform_angle_gap():
    n = 128
    angles = [(k + 0.5) / n for k in range(n)]
    assert verify.sup_cdf_gap_to_uniform(angles) <= 1.0 / n + 1e-12
    assert verify.sup_cdf_gap_to_uniform([0.1] * n) > 0.85


def test_histogram_rows(eq22):
    xs = [float(v) for v in inverse_cdf_sample(eq22, 64)]
    rows = verify.histogram_rows(_rootset(xs), eq22, bins=16)
    assert len(rows) == 16
    assert sum(r[2] for r in rows) == 64
    assert sum(r[3] for r in rows) == pytest.approx(1.0, abs=1e-6)
    for left, right, _, _ in rows:
        assert right > left
