"""Abelian varieties over finite fields that are not Jacobians.

The pipeline targets the Fourier-perturbed circle measure at radius
sqrt(alpha), alpha = q (1 - margin), transports it to the real interval
[-2 sqrt(alpha), 2 sqrt(alpha)] through z -> z + alpha/z, synthesizes an
irreducible real-rooted polynomial against the transported measure, and
computes exact hypothetical point counts N_r and degree counts M_r.  A
negative N_r or M_r is impossible for a curve, so the corresponding abelian
variety (via Honda-Tate) is not isogenous to any Jacobian over F_{q^r}.

The coefficient of the cosine perturbation is c = 6/(10 pi^2); its k-th
Fourier mass c/(2 k^2) drags the mean of sum_j cos(r 2 pi theta_j) positive,
which makes N_r = q^r + 1 - 2 q^{r/2} sum_j cos(r 2 pi theta_j) go negative
once the dimension is large enough.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import measures
from .errors import AlphaTooSmall, NoObstructionFound, NotMonic
from .polyarith import IntPoly, newton_power_sums, is_eisenstein_at_2
from .synth import SynthOptions, synthesize

CIRCLE_COEFF = 6.0 / (10.0 * math.pi ** 2)
ALPHA_FLOOR = 1.65


@dataclass
class WeilParams:
    q: int                  # prime power
    n_ext: int              # obstruct extensions F_{q^r}, r <= n_ext
    degree: int             # target polynomial degree (= dimension of the variety)
    margin: float = None    # interval shrink factor; default tracks 1/(5 n sqrt q)

    def __post_init__(self):
        if self.q < 2 or not _is_prime_power(self.q):
            raise ValueError(f"q = {self.q} is not a prime power >= 2")
        if self.n_ext < 1:
            raise ValueError("n_ext must be >= 1")
        if self.degree < 5:
            raise ValueError("degree must be >= 5")
        if self.margin is None:
            self.margin = min(0.01, 1.0 / (5.0 * self.degree * math.sqrt(self.q)))
        if not 0 < self.margin < 0.1:
            raise ValueError("margin must lie in (0, 0.1)")


@dataclass
class ObstructionReport:
    poly: IntPoly
    q: int
    N: list                    # exact ints, N_1..N_{n_ext}
    M: list                    # exact Fractions, M_1..M_{n_ext}
    first_violation: int       # least r with N_r < 0 or M_r < 0, else None
    certified: bool
    eisenstein: bool = True
    real_rooted: bool = True
    inside_open_interval: bool = True
    seed: int = 0
    synthesis: object = None

    def certificate_text(self):
        lines = [
            f"q = {self.q}, dimension g = {self.poly.degree}",
            f"polynomial: monic, integral, Eisenstein at 2: {self.eisenstein}",
            f"all roots real and inside (-2 sqrt {self.q}, 2 sqrt {self.q}): "
            f"{self.real_rooted and self.inside_open_interval}",
            " r | N_r (points over F_{q^r}) | M_r (degree-r places)",
        ]
        for r, (nr, mr) in enumerate(zip(self.N, self.M), start=1):
            mark = "  <-- negative" if (nr < 0 or mr < 0) else ""
            lines.append(f"{r:2d} | {nr} | {mr}{mark}")
        if self.first_violation:
            r = self.first_violation
            lines.append(
                f"N_{r} or M_{r} is negative: no curve over F_(q^{r}) has this "
                f"zeta function, so the variety is not isogenous to a Jacobian "
                f"over F_(q^m) for m = 1..{r}.")
        else:
            lines.append("no violation found up to the requested extension degree")
        return "\n".join(lines)


def _is_prime_power(n):
    for p in range(2, int(n ** 0.5) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return True


def circle_measure(q, margin):
    """CircleFourier spec at radius sqrt(alpha), alpha = q (1 - margin).

    Requires alpha > 1.65; below that the positivity bound of the potential
    fails and the measure is not known to be arithmetic."""
    if q < 2:
        raise ValueError("q must be >= 2")
    if not 0 < margin < 0.5:
        raise ValueError("margin must lie in (0, 0.5)")
    alpha = q * (1.0 - margin)
    if alpha <= ALPHA_FLOOR:
        raise AlphaTooSmall(
            f"alpha = {alpha:.4g} <= {ALPHA_FLOOR}; q too small for this margin")
    return measures.circle_fourier(math.sqrt(alpha), CIRCLE_COEFF)


def interval_transport(circle):
    """Pushforward of the circle measure under z -> z + alpha/z.

    The image of the circle of radius sqrt(alpha) is [-2 sqrt(alpha),
    2 sqrt(alpha)]; the CDF follows by the change of variable
    beta = 2 sqrt(alpha) cos(2 pi theta)."""
    if circle.kind != measures.CIRCLE_FOURIER:
        raise ValueError("interval_transport expects a CircleFourier spec")
    r = circle.params["radius"]
    return measures.joukowski_image(circle, r * r)


def _chebyshev_like_coeffs(r, q):
    """Integer coefficients of t_r(beta) with t_r = beta t_{r-1} - q t_{r-2},
    t_0 = 2, t_1 = beta; t_r(beta) = alpha^r + (q/alpha)^r for alpha + q/alpha
    = beta."""
    t_prev = [2]
    t_cur = [0, 1]
    if r == 0:
        return t_prev
    for _ in range(r - 1):
        nxt = [0] + t_cur
        for i, c in enumerate(t_prev):
            nxt[i] -= q * c
        t_prev, t_cur = t_cur, nxt
    return t_cur


def trace_recurrence(beta, q, r, precision=256):
    """t_r = alpha^r + (q/alpha)^r evaluated by the integer recurrence at
    floating (possibly complex) beta; test hook for the exactness criterion."""
    with mp.workprec(precision):
        b = mp.mpmathify(beta)
        t0, t1 = b * 0 + 2, b
        if r == 0:
            return t0
        for _ in range(r - 1):
            t0, t1 = t1, b * t1 - q * t0
        return t1


def frobenius_point_counts(p, q, r_max):
    """Exact N_r and M_r for the real Weil polynomial p.

    N_r = q^r + 1 - sum_j t_r(beta_j) with the trace sums evaluated through
    Newton power sums of p (pure integer arithmetic); M_r by Mobius inversion.
    """
    if not isinstance(p, IntPoly) or not p.is_monic:
        raise NotMonic("frobenius_point_counts requires a monic IntPoly")
    s = newton_power_sums(p, max(r_max, 1))
    g = p.degree

    def power_sum(m):
        if m == 0:
            return g
        return s[m - 1]

    N = []
    for r in range(1, r_max + 1):
        coeffs = _chebyshev_like_coeffs(r, q)
        trace_sum = sum(c * power_sum(m) for m, c in enumerate(coeffs) if c)
        N.append(q ** r + 1 - trace_sum)
    M = []
    for r in range(1, r_max + 1):
        acc = Fraction(0)
        for d in range(1, r + 1):
            if r % d == 0:
                acc += _mobius(d) * N[r // d - 1]
        M.append(acc / r)
    return N, M


def _mobius(n):
    if n == 1:
        return 1
    out = 1
    for p in range(2, int(n ** 0.5) + 1):
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
    if n > 1:
        out = -out
    return out


def find_non_jacobian(params, seed=0, retry_budget=8, opts=None):
    """Synthesize real Weil polynomials until some N_r or M_r goes negative.

    Each attempt builds the transported interval measure, synthesizes a
    degree-`params.degree` polynomial, checks Eisenstein irreducibility and
    real-rootedness strictly inside (-2 sqrt q, 2 sqrt q), and computes the
    exact counts.  Raises NoObstructionFound after the retry budget (the
    mechanism needs the dimension large enough that q^{r/2} c / r^2 times the
    dimension dominates q^r + 1)."""
    circle = circle_measure(params.q, params.margin)
    interval = interval_transport(circle)
    half_open = 2.0 * math.sqrt(params.q)
    base_opts = opts or SynthOptions()
    last = None
    for attempt in range(retry_budget):
        run_opts = SynthOptions(
            precision=base_opts.precision, seed=seed + attempt,
            mode="RealLine", reducer=base_opts.reducer,
            rho=base_opts.rho, grid_density=base_opts.grid_density,
            screen_admissibility=False,
            root_precision=base_opts.root_precision)
        rep = synthesize(interval, params.degree, run_opts)
        g = rep.output
        eis = is_eisenstein_at_2(g)
        max_im = float(rep.roots.max_imag())
        real_ok = max_im < 1e-8
        inside = all(abs(float(mp.re(z))) < half_open for z in rep.roots.roots)
        N, M = frobenius_point_counts(g, params.q, params.n_ext)
        first = next((r for r in range(1, params.n_ext + 1)
                      if N[r - 1] < 0 or M[r - 1] < 0), None)
        certified = bool(first and eis and real_ok and inside)
        last = ObstructionReport(
            poly=g, q=params.q, N=N, M=M, first_violation=first,
            certified=certified, eisenstein=eis, real_rooted=real_ok,
            inside_open_interval=inside, seed=seed + attempt, synthesis=rep)
        if certified:
            return last
    raise NoObstructionFound(
        f"no negative N_r or M_r within {retry_budget} seeds at degree "
        f"{params.degree}; raise the degree (last N = {last.N if last else None})")
