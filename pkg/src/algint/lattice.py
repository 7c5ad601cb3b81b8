"""Lattice basis reduction over real-valued bases.

The reducer follows the floating-Gram design: the input basis is lifted to a
scaled integer basis, the Gram matrix and the unimodular transform (plus its
exact inverse) are maintained in integer arithmetic, and the Gram-Schmidt
data (mu, r) lives in gmpy2 mpfr with a fixed mantissa and an effectively
unbounded exponent.  A row is re-derived from the exact Gram matrix whenever
size reduction needed coefficients beyond the mantissa, and every
REFRESH_SWAPS swaps; a final exact-sourced audit verifies size reduction and
the Lovasz condition.  Failures surface as PrecisionExhausted and the driver
retries with more guard bits.

On this pipeline's matrices (monomials in the pivot frame) dimension 100
reduces in seconds and dimension 290 in minutes, dominated by exact row
operations on the Gram matrix.
"""

import math
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpfr, mpz
import mpmath as mp

from .errors import (DimensionTooLarge, EnumerationBudgetExceeded,
                     PrecisionExhausted)

FP_PREC = 192           # mantissa bits for the mu/r shadow
REFRESH_SWAPS = 32      # exact re-orthogonalization cadence
SIZE_ETA = 0.5 + 2.0 ** -40
HARD_DIM_CAP = 10       # exact enumeration oracle cap


def _mpfr_to_mpf(x):
    m, e = x.as_mantissa_exp()
    return mp.ldexp(int(m), int(e))


@dataclass
class LatticeBasis:
    """Column vectors at a stated binary precision (mpf or int entries)."""

    columns: list
    precision: int = 256

    def __post_init__(self):
        self.columns = [list(col) for col in self.columns]
        if not self.columns:
            raise ValueError("empty basis")
        d = len(self.columns[0])
        if any(len(c) != d for c in self.columns):
            raise ValueError("ragged columns")

    @property
    def dimension(self):
        return len(self.columns[0])

    @property
    def count(self):
        return len(self.columns)

    def is_integral(self):
        return all(isinstance(e, (int, type(mpz(0)))) and not isinstance(e, bool)
                   for col in self.columns for e in col)


@dataclass
class ReductionResult:
    reduced: LatticeBasis
    transform: list            # integer matrix; column j = reduced_j in input coords
    transform_inv: list
    gs_norms: list             # Gram-Schmidt norms of the reduced basis (mpf)
    minima_log_bounds: list    # log upper bounds on ||b_j|| / lambda_j
    gs_mu: list = None         # float mu matrix of the reduced basis (|mu| <= ~1/2)
    swaps: int = 0
    stats: dict = field(default_factory=dict)

    def transform_column(self, j):
        return [row[j] for row in self.transform]


# ------------------------------------------------------------------ lifting

def _lift_to_integers(basis, guard_bits):
    """Scale all columns by one global power of two and round to integers.

    The shift keeps the weakest column with at least `guard_bits` significant
    bits; entries never carry more than range + precision bits.  Returns
    (mpz columns, shift) with integer ~ entry * 2^shift."""
    with mp.workprec(basis.precision + 16):
        cols = [[mp.mpf(e) for e in col] for col in basis.columns]
        col_max = []
        for col in cols:
            m = max(abs(e) for e in col)
            if m == 0:
                raise PrecisionExhausted("zero column in basis")
            col_max.append(m)
        g_max, g_min = max(col_max), min(col_max)
        norm_shift = -int(mp.floor(mp.log(g_max, 2))) - 1
        range_bits = int(mp.ceil(mp.log(g_max / g_min, 2)))
        shift = norm_shift + range_bits + guard_bits
        two = mp.mpf(2) ** shift
        icols = [[mpz(int(mp.nint(e * two))) for e in col] for col in cols]
        for col in icols:
            if all(e == 0 for e in col):
                raise PrecisionExhausted("column rounded to zero; raise precision")
        return icols, shift


def _gram(cols):
    n = len(cols)
    G = [[None] * n for _ in range(n)]
    for i in range(n):
        ci = cols[i]
        for j in range(i + 1):
            s = mpz(0)
            for a, b in zip(ci, cols[j]):
                s += a * b
            G[i][j] = s
            G[j][i] = s
    return G


# ------------------------------------------------------------------ core

class _GramLLL:
    """Exact-Gram LLL with an mpfr Gram-Schmidt shadow.

    With deep=True, a failed Lovasz test inserts b_k at the earliest position
    whose projection it beats (Schnorr-Euchner deep insertion) instead of
    swapping one step; noticeably shorter bases on the pipeline's skewed
    frames for a modest extra cost."""

    def __init__(self, icols, delta, fp_prec=FP_PREC, deep=False):
        self.n = len(icols)
        self.delta = delta
        self.fp_prec = fp_prec
        self.deep = deep
        self.G = _gram(icols)
        n = self.n
        self.T = [[mpz(int(i == j)) for j in range(n)] for i in range(n)]
        self.Ti = [[mpz(int(i == j)) for j in range(n)] for i in range(n)]
        self.mu = [[mpfr(0)] * n for _ in range(n)]
        self.r = [mpfr(0)] * n
        self.swaps = 0
        self.reds = 0

    def compute_row(self, k, tolerant=False):
        """Derive mu row k and r[k] from the exact Gram matrix.

        While row k is far from size-reduced the diagonal suffers
        cancellation beyond the mantissa and may come out nonpositive; the
        lazy loop passes tolerant=True and keeps reducing until it settles."""
        G, mu, r = self.G, self.mu, self.r
        muk = mu[k]
        v = [None] * k  # v[l] = mu[k][l] * r[l]
        for j in range(k):
            s = mpfr(G[k][j])
            muj = mu[j]
            for l in range(j):
                s -= muj[l] * v[l]
            if r[j] <= 0:
                raise PrecisionExhausted("nonpositive Gram-Schmidt norm")
            muk[j] = s / r[j]
            v[j] = muk[j] * r[j]
        s = mpfr(G[k][k])
        for l in range(k):
            s -= muk[l] * v[l]
        if s <= 0 and not tolerant:
            raise PrecisionExhausted("nonpositive Gram-Schmidt norm")
        r[k] = s

    # kept name for the exact re-orthogonalization of settled rows
    def refresh_row(self, k):
        self.compute_row(k, tolerant=False)

    def lazy_reduce_row(self, k):
        """Full lazy size reduction for a row whose mu data is unknown:
        recompute from the exact Gram matrix, reduce the oversized
        coefficients, repeat.  Each pass removes about fp_prec bits."""
        for _ in range(256):
            self.compute_row(k, tolerant=True)
            muk = self.mu[k]
            pending = [l for l in range(k - 1, -1, -1) if abs(muk[l]) > SIZE_ETA]
            if not pending:
                if self.r[k] <= 0:
                    raise PrecisionExhausted("nonpositive Gram-Schmidt norm")
                return
            for l in pending:
                if abs(muk[l]) > SIZE_ETA:
                    self._apply_red(k, l, mpz(gmpy2.rint(muk[l])))
        raise PrecisionExhausted("lazy size reduction did not settle")

    def _apply_red(self, k, l, q):
        """b_k <- b_k - q b_l on Gram, transform, inverse transform, mu row."""
        G, n = self.G, self.n
        self.reds += 1
        gkk = G[k][k] - 2 * q * G[k][l] + q * q * G[l][l]
        Gk, Gl = G[k], G[l]
        for j in range(n):
            Gk[j] -= q * Gl[j]
        for i in range(n):
            G[i][k] -= q * G[i][l]
        G[k][k] = gkk
        T, Ti = self.T, self.Ti
        for i in range(n):
            T[i][k] -= q * T[i][l]
        Til, Tik = Ti[l], Ti[k]
        for j in range(n):
            Til[j] += q * Tik[j]
        muk, mul = self.mu[k], self.mu[l]
        qf = mpfr(q)
        for j in range(l):
            muk[j] -= qf * mul[j]
        muk[l] -= qf

    def swap(self, k):
        """Exchange columns k-1 and k in the exact data (Gram, transform,
        inverse transform).  Gram-Schmidt rows are re-derived on arrival, so
        no floating update is carried across the swap."""
        G, T, Ti, n = self.G, self.T, self.Ti, self.n
        self.swaps += 1
        G[k], G[k - 1] = G[k - 1], G[k]
        for i in range(n):
            G[i][k], G[i][k - 1] = G[i][k - 1], G[i][k]
        for i in range(n):
            T[i][k], T[i][k - 1] = T[i][k - 1], T[i][k]
        Ti[k], Ti[k - 1] = Ti[k - 1], Ti[k]

    def insert_at(self, k, i):
        """Move column k to position i < k, shifting i..k-1 right (deep
        insertion); exact data only, Gram-Schmidt re-derived on arrival."""
        G, T, Ti, n = self.G, self.T, self.Ti, self.n
        self.swaps += 1
        order = list(range(i)) + [k] + list(range(i, k)) + list(range(k + 1, n))
        self.G = [[G[a][b] for b in order] for a in order]
        for row in T:
            row[:] = [row[b] for b in order]
        self.Ti = [Ti[a] for a in order]

    def run(self):
        """Schnorr-Euchner loop with each row re-derived from the exact Gram
        matrix on arrival (lazy size reduction).  Incremental floating updates
        of rows away from the working index amplify error through large mu
        values, so nothing beyond the working index is trusted between visits;
        rows below the working index stay valid because exchanges at position
        k only touch columns at and above their insertion point."""
        n, r, mu = self.n, self.r, self.mu
        if n == 1:
            self.refresh_row(0)
            return self
        max_swaps = 1000 * n * n + 10 ** 6
        self.refresh_row(0)
        k = 1
        while k < n:
            self.lazy_reduce_row(k)
            if not self.deep:
                if r[k] >= (mpfr(self.delta) - mu[k][k - 1] ** 2) * r[k - 1]:
                    k += 1
                    continue
                self.swap(k)
                if self.swaps > max_swaps:
                    raise PrecisionExhausted(
                        "swap budget exceeded; basis may be degenerate")
                if k == 1:
                    self.refresh_row(0)
                k = max(k - 1, 1)
                continue
            # deep insertion: find the earliest projection b_k undercuts
            muk = mu[k]
            c = mpfr(self.G[k][k])
            target = None
            for i in range(k):
                if c < mpfr(self.delta) * r[i]:
                    target = i
                    break
                c -= muk[i] * muk[i] * r[i]
            if target is None:
                k += 1
                continue
            self.insert_at(k, target)
            if self.swaps > max_swaps:
                raise PrecisionExhausted(
                    "swap budget exceeded; basis may be degenerate")
            if target == 0:
                self.refresh_row(0)
            k = max(target, 1)
        self.audit()
        return self

    def audit(self):
        """Recompute all rows from the exact Gram matrix and verify the
        LLL conditions, fixing residual size-reduction drift in place."""
        n, mu, r = self.n, self.mu, self.r
        for k in range(n):
            self.refresh_row(k)
        tol = 0.5 + 2.0 ** -(self.fp_prec // 4)
        for k in range(1, n):
            if any(abs(mu[k][l]) > tol for l in range(k)):
                self.size_reduce_row(k)
        slack = 1 - mpfr(2) ** -(self.fp_prec // 3)
        for k in range(1, n):
            if r[k] < (mpfr(self.delta) - mu[k][k - 1] ** 2) * r[k - 1] * slack:
                raise PrecisionExhausted(f"Lovasz audit failed at index {k}")

    def gs_floats(self):
        """(mu floats, r relative floats) for enumeration; r scaled by max."""
        n = self.n
        rmax = max(self.r)
        mu = [[float(self.mu[i][j]) if j < i else 0.0 for j in range(n)]
              for i in range(n)]
        rr = [float(self.r[i] / rmax) for i in range(n)]
        return mu, rr


def _with_fp_context(fn):
    def wrapped(*args, **kwargs):
        saved = gmpy2.get_context().copy()
        try:
            gmpy2.get_context().precision = FP_PREC
            return fn(*args, **kwargs)
        finally:
            gmpy2.set_context(saved)
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_with_fp_context
def lll_reduce(basis, delta=0.99, guard_bits=None, deep=False):
    """LLL-reduce a real or integer basis.

    Output is size-reduced (|mu_ij| <= 1/2 + eps) and satisfies the Lovasz
    condition at `delta`.  The integer transform is unimodular by
    construction; its exact integer inverse is returned alongside.  The
    fixed-point lift carries the basis precision on top of the cross-column
    dynamic range; a reduced Gram-Schmidt norm that sinks toward the rounding
    noise floor triggers a retry with a doubled guard.  Raises
    PrecisionExhausted when retries are exhausted."""
    if not 0.25 < delta < 1:
        raise ValueError("delta must lie in (0.25, 1)")
    if guard_bits is None:
        guard_bits = max(192, basis.precision)
    last_err = None
    for attempt in range(3):
        try:
            icols, shift = _lift_to_integers(basis, guard_bits << attempt)
            core = _GramLLL(icols, delta, deep=deep).run()
            # noise floor: integer rounding noise has norm ~ sqrt(d)/2
            if min(core.r) < mpfr(basis.count) * mpfr(2) ** 128:
                raise PrecisionExhausted(
                    "reduced Gram-Schmidt norms reach the rounding noise floor")
            return _package(basis, core.T, core.Ti, core.r, shift,
                            kind="lll", delta=delta, swaps=core.swaps,
                            reds=core.reds, mu=core.mu)
        except PrecisionExhausted as e:
            last_err = e
    raise last_err


def _package(basis, T, Ti, r_mpfr, shift, kind, delta, swaps=0, reds=0,
             k_block=None, mu=None):
    n = len(T)
    T = [[int(v) for v in row] for row in T]
    Ti = [[int(v) for v in row] for row in Ti]
    with mp.workprec(basis.precision + 64):
        in_cols = [[mp.mpf(e) for e in col] for col in basis.columns]
        red_cols = []
        for j in range(n):
            col = [mp.mpf(0)] * basis.dimension
            for i in range(n):
                t = T[i][j]
                if t:
                    ci = in_cols[i]
                    for rr in range(basis.dimension):
                        col[rr] += t * ci[rr]
            red_cols.append(col)
        scale = mp.mpf(2) ** (-shift)
        gs = [mp.sqrt(_mpfr_to_mpf(x)) * scale for x in r_mpfr]
    if kind == "lll":
        bounds = [0.5 * (n - 1) * math.log(2.0)] * n
    else:
        bounds = semi_k_minima_log_bounds(n, k_block)
    gs_mu = None
    if mu is not None:
        gs_mu = [[float(mu[i][j]) if j < i else 0.0 for j in range(n)]
                 for i in range(n)]
    return ReductionResult(
        reduced=LatticeBasis(red_cols, basis.precision),
        transform=T,
        transform_inv=Ti,
        gs_norms=gs,
        minima_log_bounds=bounds,
        gs_mu=gs_mu,
        swaps=swaps,
        stats={"reds": reds, "shift": shift, "kind": kind, "delta": delta,
               "k": k_block},
    )


def semi_k_minima_log_bounds(n, k):
    """Explicit log bound on ||b_j|| / lambda_j for a semi k-reduced basis.

    Chains ||b_s*|| <= (2 alpha_k)^{n/k - floor(s/k)} alpha_k lambda_j with
    alpha_k <= k^{1 + ln k} and sums over s <= j."""
    log_ak = (1 + math.log(k)) * math.log(k) if k >= 2 else math.log(2.0)
    log_2ak = math.log(2.0) + log_ak
    out = []
    for j in range(1, n + 1):
        terms = [log_ak + (n / k - (s // k)) * log_2ak for s in range(1, j + 1)]
        m = max(terms)
        out.append(m + math.log(sum(math.exp(t - m) for t in terms)))
    return out


# ------------------------------------------------------------------ enumeration

def _enumerate_all(mu, r, n, radius2, budget, collect=True):
    """All coefficients x (first nonzero from the top positive) whose lattice
    vector has squared norm <= radius2 in the scaled Gram-Schmidt frame.

    Plain interval-bounded Fincke-Pohst; depth-first over levels n-1..0."""
    out = []
    x = [0] * n
    nodes = 0

    def rec(level, dist):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationBudgetExceeded(f"enumeration exceeded {budget} nodes")
        if level < 0:
            if any(x):
                out.append(list(x))
            return
        if r[level] <= 0:
            raise PrecisionExhausted("nonpositive projected norm in enumeration")
        c = -sum(x[j] * mu[j][level] for j in range(level + 1, n))
        rem = radius2 * (1 + 1e-12) - dist
        if rem < 0:
            return
        s = math.sqrt(max(rem, 0.0) / r[level])
        lo_i = math.ceil(c - s)
        hi_i = math.floor(c + s)
        if level == n - 1:
            lo_i = max(lo_i, 0)
        for xi in range(lo_i, hi_i + 1):
            d2 = dist + (xi - c) ** 2 * r[level]
            if d2 <= radius2 * (1 + 1e-12):
                x[level] = xi
                rec(level - 1, d2)
        x[level] = 0

    rec(n - 1, 0.0)
    return out


def _enumerate_shortest(mu, r, lo, hi, radius2, budget):
    """Shortest nonzero vector of the lattice projected onto rows lo..hi-1.

    Returns (norm2, coefficients over columns lo..hi-1) strictly below
    radius2, or None.  Candidates are visited nearest-to-center first so the
    radius shrinks quickly."""
    m = hi - lo
    best = [radius2]
    best_x = [None]
    x = [0] * m
    nodes = 0

    def rec(level, dist):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationBudgetExceeded(f"enumeration exceeded {budget} nodes")
        if level < 0:
            if any(x) and dist < best[0]:
                best[0] = dist
                best_x[0] = list(x)
            return
        rl = r[lo + level]
        if rl <= 0:
            raise PrecisionExhausted("nonpositive projected norm in enumeration")
        c = -sum(x[j] * mu[lo + j][lo + level] for j in range(level + 1, m))
        rem = best[0] * (1 + 1e-12) - dist
        if rem < 0:
            return
        s = math.sqrt(max(rem, 0.0) / rl)
        lo_i = math.ceil(c - s)
        hi_i = math.floor(c + s)
        if level == m - 1:
            lo_i = max(lo_i, 0)
        cands = sorted(range(lo_i, hi_i + 1), key=lambda v: abs(v - c))
        for xi in cands:
            d2 = dist + (xi - c) ** 2 * rl
            if d2 < best[0] * (1 + 1e-12):
                x[level] = xi
                rec(level - 1, d2)
        x[level] = 0

    rec(m - 1, 0.0)
    if best_x[0] is None:
        return None
    return best[0], best_x[0]


# ------------------------------------------------------------------ semi-k reduction

def _unimodular_with_first_column(c):
    """Unimodular integer matrix U with U[:,0] = c; requires gcd(c) = 1."""
    m = len(c)
    work = list(c)
    V = [[int(i == j) for j in range(m)] for i in range(m)]
    for i in range(1, m):
        while work[i]:
            q = work[0] // work[i]
            for j in range(m):
                V[0][j] -= q * V[i][j]
            work[0] -= q * work[i]
            V[0], V[i] = V[i], V[0]
            work[0], work[i] = work[i], work[0]
    if work[0] < 0:
        V[0] = [-v for v in V[0]]
        work[0] = -work[0]
    if work[0] != 1:
        raise ValueError("gcd of insertion coefficients is not 1")
    return _int_matrix_inverse(V)


def _int_matrix_inverse(M):
    """Exact inverse of a unimodular integer matrix (small dimensions)."""
    from fractions import Fraction
    m = len(M)
    A = [[Fraction(M[i][j]) for j in range(m)]
         + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    for col in range(m):
        piv = next(i for i in range(col, m) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for i in range(m):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [v - f * w for v, w in zip(A[i], A[col])]
    out = [[A[i][m + j] for j in range(m)] for i in range(m)]
    if any(v.denominator != 1 for row in out for v in row):
        raise ValueError("matrix is not unimodular")
    return [[int(v) for v in row] for row in out]


def _compose_block(B, T, Ti, pos, U):
    """Right-multiply columns pos..pos+m-1 of B and T by U; update Ti rows."""
    m = len(U)
    Uinv = _int_matrix_inverse(U)
    idx = list(range(pos, pos + m))
    oldB = [list(B[j]) for j in idx]
    dim = len(oldB[0])
    for a, j in enumerate(idx):
        col = [mpz(0)] * dim
        for b in range(m):
            u = U[b][a]
            if u:
                src = oldB[b]
                for t in range(dim):
                    col[t] += u * src[t]
        B[j] = col
    nrows = len(T)
    oldT = [[T[i][j] for i in range(nrows)] for j in idx]
    for a, j in enumerate(idx):
        for i in range(nrows):
            acc = 0
            for b in range(m):
                if U[b][a]:
                    acc += U[b][a] * oldT[b][i]
            T[i][j] = acc
    oldTi = [list(Ti[j]) for j in idx]
    ncols = len(Ti[0])
    for a, j in enumerate(idx):
        for col in range(ncols):
            acc = 0
            for b in range(m):
                if Uinv[a][b]:
                    acc += Uinv[a][b] * oldTi[b][col]
            Ti[j][col] = acc


def _compose_lll(B, T, Ti, delta):
    """LLL the current integer columns, composing the running transforms."""
    core = _GramLLL([list(c) for c in B], delta).run()
    n = len(T)
    B2 = _apply_transform_int(B, core.T)
    T2 = [[sum(T[i][l] * int(core.T[l][j]) for l in range(n)) for j in range(n)]
          for i in range(n)]
    Ti2 = [[sum(int(core.Ti[i][l]) * Ti[l][j] for l in range(n)) for j in range(n)]
           for i in range(n)]
    return B2, T2, Ti2, core


def _apply_transform_int(cols, T):
    n = len(cols)
    d = len(cols[0])
    out = []
    for j in range(n):
        col = [mpz(0)] * d
        for i in range(n):
            t = T[i][j]
            if t:
                ci = cols[i]
                for rr in range(d):
                    col[rr] += t * ci[rr]
        out.append(col)
    return out


@_with_fp_context
def block_reduce(basis, k, delta=0.99, guard_bits=None, node_budget=10 ** 7,
                 max_passes=256):
    """Schnorr semi-k reduction.

    The output is size-reduced, satisfies the boundary condition
    ||b*_{ik}||^2 <= 2 ||b*_{ik+1}||^2 between consecutive blocks, and every
    k-block of projections is Korkine-Zolotarev reduced (enforced by exact
    enumeration, budgeted at node_budget nodes per call).  k = dimension
    yields a fully KZ-reduced basis.  The last block may be shorter when k
    does not divide the dimension."""
    n = basis.count
    if k < 2 or k > n:
        raise ValueError("need 2 <= k <= dimension")
    if guard_bits is None:
        guard_bits = max(192, basis.precision)
    icols, shift = _lift_to_integers(basis, guard_bits)
    B = [list(c) for c in icols]
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    Ti = [[int(i == j) for j in range(n)] for i in range(n)]
    B, T, Ti, core = _compose_lll(B, T, Ti, delta)

    for _ in range(max_passes):
        changed = False
        mu, rr = core.gs_floats()
        # boundary condition (6) between consecutive blocks
        for i in range(1, (n + k - 1) // k):
            j = i * k - 1
            if j + 1 < n and rr[j] > 2.0 * rr[j + 1] * (1 + 1e-9):
                B[j], B[j + 1] = B[j + 1], B[j]
                for row in T:
                    row[j], row[j + 1] = row[j + 1], row[j]
                Ti[j], Ti[j + 1] = Ti[j + 1], Ti[j]
                changed = True
        if changed:
            B, T, Ti, core = _compose_lll(B, T, Ti, delta)
            continue
        # KZ inside each block, first improvable position wins
        for lo in range(0, n, k):
            hi = min(lo + k, n)
            for pos in range(lo, hi - 1):
                res = _enumerate_shortest(mu, rr, pos, hi,
                                          rr[pos] * (1 - 1e-9), node_budget)
                if res is None:
                    continue
                _, coeffs = res
                g = 0
                for c in coeffs:
                    g = math.gcd(g, abs(c))
                coeffs = [c // max(g, 1) for c in coeffs]
                U = _unimodular_with_first_column(coeffs)
                _compose_block(B, T, Ti, pos, U)
                changed = True
                break
            if changed:
                break
        if not changed:
            break
        B, T, Ti, core = _compose_lll(B, T, Ti, delta)
    else:
        raise PrecisionExhausted("semi-k reduction did not stabilize")

    return _package(basis, T, Ti, core.r, shift, kind="block", delta=delta,
                    swaps=core.swaps, k_block=k, mu=core.mu)


# ------------------------------------------------------------------ exact oracles

@_with_fp_context
def shortest_vector_exact(basis, node_budget=10 ** 7):
    """Exact shortest nonzero lattice vector by enumeration (dimension <= 10).

    For integer bases the winner is selected by exact integer norm among all
    enumeration candidates; the returned vector is in ambient coordinates."""
    n = basis.count
    if n > HARD_DIM_CAP:
        raise DimensionTooLarge(f"exact enumeration capped at dimension {HARD_DIM_CAP}")
    mins = successive_minima_exact(basis, count=1, node_budget=node_budget)
    return mins[0][1]


@_with_fp_context
def successive_minima_exact(basis, count=None, node_budget=10 ** 7):
    """Successive minima of a lattice by exhaustive enumeration (test oracle).

    Returns [(norm2, vector), ...] with exact integer norms for integer bases.
    Vectors are chosen greedily by norm among all enumeration candidates,
    keeping only those independent of the ones already selected."""
    n = basis.count
    if count is None:
        count = n
    if n > HARD_DIM_CAP:
        raise DimensionTooLarge(f"exact enumeration capped at dimension {HARD_DIM_CAP}")
    integral = basis.is_integral()
    if integral:
        icols = [[mpz(int(e)) for e in col] for col in basis.columns]
        shift = 0
    else:
        icols, shift = _lift_to_integers(basis, max(192, basis.precision))
    core = _GramLLL(icols, 0.99).run()
    B = _apply_transform_int(icols, core.T)
    mu, rr = core.gs_floats()
    G = _gram(B)
    rmax = max(core.r)
    radius = max(float(mpfr(G[j][j]) / rmax) for j in range(n)) * (1 + 1e-9)
    while True:
        coeff_vecs = _enumerate_all(mu, rr, n, radius, node_budget)
        cand = []
        for coeffs in coeff_vecs:
            v = [0] * basis.dimension
            for j, c in enumerate(coeffs):
                if c:
                    Bj = B[j]
                    for i in range(basis.dimension):
                        v[i] += c * int(Bj[i])
            norm2 = sum(int(e) * int(e) for e in v)
            if norm2 > 0:
                cand.append((norm2, v))
        cand.sort(key=lambda t: t[0])
        chosen, rows = [], []
        for norm2, v in cand:
            if _rank_extends(rows, v):
                if integral:
                    chosen.append((norm2, v))
                else:
                    with mp.workprec(basis.precision):
                        sc = mp.mpf(2) ** (-shift)
                        chosen.append((norm2 * float(sc) ** 2,
                                       [e * sc for e in map(mp.mpf, v)]))
                rows.append(v)
                if len(chosen) == count:
                    return chosen
        radius *= 2.0


def _rank_extends(rows, v):
    """True if v is independent of `rows` (exact Fraction elimination)."""
    from fractions import Fraction
    mat = [list(map(Fraction, r)) for r in rows] + [list(map(Fraction, v))]
    m, d = len(mat), len(mat[0])
    rank = 0
    for col in range(d):
        piv = next((i for i in range(rank, m) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        for i in range(m):
            if i != rank and mat[i][col]:
                f = mat[i][col] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank == len(rows) + 1
