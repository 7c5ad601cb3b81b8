"""algint: monic integral irreducible polynomials whose roots approximate a
prescribed measure, via lattice reduction in a weighted evaluation frame, with
an application producing abelian varieties over finite fields that are not
isogenous to Jacobians."""

__version__ = "0.1.0"

from .errors import AlgintError
from .measures import (MeasureSpec, admissibility_check, annulus_uniform,
                       circle_fourier, empirical, energy, equilibrium_interval,
                       inverse_cdf_sample, joukowski_image, lemniscate_pullback,
                       potential, serre_mixture)
from .polyarith import (IntPoly, RealPoly, RootSet, aberth_roots, eval_log_abs,
                        is_eisenstein_at_2, n_norm, newton_power_sums)
from .sampling import SamplePlan, basis_family, build_plan, pivot_polynomial
from .lattice import (LatticeBasis, ReductionResult, block_reduce, lll_reduce,
                      shortest_vector_exact, successive_minima_exact)
from .synth import (IntegerBasis, PivotFrame, Reducer, SynthesisReport,
                    SynthOptions, build_pivot_frame, integer_basis,
                    monomial_coords, round_to_integer, synthesize)
from .verify import (ContainmentVerdict, DistributionDistance, containment,
                     distribution_distance, histogram_rows, sup_cdf_gap,
                     sup_cdf_gap_to_uniform)
from .weil import (ObstructionReport, WeilParams, circle_measure,
                   find_non_jacobian, frobenius_point_counts,
                   interval_transport, trace_recurrence)
