"""Integer and arbitrary-precision real polynomial arithmetic.

Coefficients are stored lowest degree first throughout.  IntPoly carries exact
Python integers; RealPoly carries mpmath mpf coefficients together with the
precision (in bits) they were computed at.  The root finder is a simultaneous
Aberth-Ehrlich iteration with a float64 pre-phase and an mpmath polishing
phase, suitable for the degree-100..300 integer polynomials the synthesis
pipeline produces.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import mpmath as mp

from .errors import ExactZero, NoConvergence, NotMonic, PrecisionLoss
from .mputil import mpf_to_str, prec_to_dps


def _strip(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return coeffs[:n]


class IntPoly:
    """Polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(_strip([int(c) for c in coeffs]))

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([other * c for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly([])
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = IntPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self):
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, z):
        acc = 0 if isinstance(z, int) else z * 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __repr__(self):
        return f"IntPoly(degree={self.degree})"

    # File format: optional leading '#' comment lines, a 'degree N' header,
    # then one decimal coefficient per line, lowest degree first.
    def to_lines(self):
        return [f"degree {self.degree}"] + [str(c) for c in self.coeffs]

    @classmethod
    def from_lines(cls, lines):
        rows = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or not rows[0].startswith("degree"):
            raise ValueError("missing 'degree N' header")
        deg = int(rows[0].split()[1])
        coeffs = [int(r) for r in rows[1:]]
        if deg >= 0 and len(coeffs) != deg + 1:
            raise ValueError(f"expected {deg + 1} coefficients, got {len(coeffs)}")
        return cls(coeffs)


class RealPoly:
    """Polynomial with mpf coefficients at a recorded binary precision."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs, precision):
        self.precision = int(precision)
        with mp.workprec(self.precision):
            cs = [mp.mpf(c) for c in coeffs]
        n = len(cs)
        while n and cs[n - 1] == 0:
            n -= 1
        self.coeffs = cs[:n]

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        prec = min(self.precision, other.precision)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        with mp.workprec(prec):
            out = list(a)
            for i, c in enumerate(b):
                out[i] = out[i] + c
        return RealPoly(out, prec)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        prec = min(self.precision, other.precision)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RealPoly([], prec)
        with mp.workprec(prec + 16):
            out = [mp.mpf(0)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return RealPoly(out, prec)

    def scale(self, s):
        with mp.workprec(self.precision):
            return RealPoly([c * s for c in self.coeffs], self.precision)

    def derivative(self):
        return RealPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.precision)

    def __call__(self, z):
        with mp.workprec(self.precision + 16):
            acc = mp.mpf(0) if not self.coeffs else self.coeffs[0] * 0
            for c in reversed(self.coeffs):
                acc = acc * z + c
        return acc

    def to_intpoly(self):
        with mp.workprec(self.precision + 8):
            return IntPoly([int(mp.nint(c)) for c in self.coeffs])

    def __repr__(self):
        return f"RealPoly(degree={self.degree}, precision={self.precision})"

    def to_lines(self):
        return [f"precision {self.precision}", f"degree {self.degree}"] + [
            mpf_to_str(c, self.precision) for c in self.coeffs
        ]


@dataclass
class RootSet:
    """Roots of a polynomial with residual and multiplicity bookkeeping."""

    roots: list
    residuals: list
    multiplicities: list
    precision: int

    def __len__(self):
        return len(self.roots)

    def real_parts(self):
        return [mp.re(z) for z in self.roots]

    def max_imag(self):
        return max((abs(mp.im(z)) for z in self.roots), default=mp.mpf(0))


def from_roots(points, precision):
    """Monic RealPoly with the given roots, expanded by a balanced product tree.

    Conjugate pairs are multiplied into real quadratics first, so the product
    tree runs entirely over real polynomials and the result is exactly real.
    Raises PrecisionLoss if the conjugate pairing leaves an unmatched complex
    point whose imaginary part cannot be cancelled.
    """
    with mp.workprec(precision + 32):
        reals, upper = [], []
        pending = [mp.mpc(z) for z in points]
        pending.sort(key=lambda z: (mp.re(z), mp.im(z)))
        used = [False] * len(pending)
        imag_tol = mp.mpf(2) ** (-(precision // 2))
        scale = max((abs(z) for z in pending), default=mp.mpf(1)) + 1
        for i, z in enumerate(pending):
            if used[i]:
                continue
            if abs(mp.im(z)) <= imag_tol * scale:
                reals.append(mp.re(z))
                used[i] = True
                continue
            best, best_d = None, None
            for j in range(i + 1, len(pending)):
                if used[j]:
                    continue
                d = abs(pending[j] - mp.conj(z))
                if best_d is None or d < best_d:
                    best, best_d = j, d
            if best is None or best_d > imag_tol * scale:
                raise PrecisionLoss(
                    f"unmatched complex point {z}; product tree would leave imaginary residue"
                )
            used[i] = used[best] = True
            if mp.im(z) > 0:
                upper.append((z + mp.conj(pending[best])) / 2)
            else:
                upper.append((pending[best] + mp.conj(z)) / 2)

        factors = [RealPoly([-r, 1], precision) for r in reals]
        for z in upper:
            factors.append(RealPoly([mp.re(z) ** 2 + mp.im(z) ** 2, -2 * mp.re(z), 1], precision))
        if not factors:
            return RealPoly([1], precision)
        while len(factors) > 1:
            nxt = []
            for k in range(0, len(factors) - 1, 2):
                nxt.append(factors[k] * factors[k + 1])
            if len(factors) % 2:
                nxt.append(factors[-1])
            factors = nxt
        return factors[0]


def deflate_linear(p, z):
    """Synthetic division of RealPoly p by (x - z) for real z.

    Returns (quotient, remainder) where remainder = p(z)."""
    with mp.workprec(p.precision + 16):
        z = mp.mpf(z)
        n = p.degree
        out = [mp.mpf(0)] * n
        acc = p.coeffs[n]
        for k in range(n - 1, -1, -1):
            out[k] = acc
            acc = p.coeffs[k] + acc * z
        return RealPoly(out, p.precision), acc


def deflate_quadratic(p, b, c):
    """Synthetic division of RealPoly p by x^2 + b x + c; remainder dropped.

    Returns (quotient, (r1, r0)) with remainder r1 x + r0."""
    with mp.workprec(p.precision + 16):
        b, c = mp.mpf(b), mp.mpf(c)
        n = p.degree
        out = [mp.mpf(0)] * (n - 1)
        u = mp.mpf(0)  # coefficient carried two ahead
        v = mp.mpf(0)  # coefficient carried one ahead
        for k in range(n, 1, -1):
            q = p.coeffs[k] - b * v - c * u
            out[k - 2] = q
            u, v = v, q
        r1 = p.coeffs[1] - b * v - c * u
        r0 = p.coeffs[0] - c * v
        return RealPoly(out, p.precision), (r1, r0)


def _coeff_scale_at(coeffs_abs, az):
    """sum |a_k| |z|^k, the natural residual scale for backward error."""
    acc = mp.mpf(0)
    for c in reversed(coeffs_abs):
        acc = acc * az + c
    return acc


def eval_log_abs(p, z, precision=128):
    """log|p(z)| with scaling safe against overflow and underflow.

    Horner runs at extended mpmath precision, whose exponent range is
    unbounded, so degree-300 integer polynomials with 100-digit coefficients
    evaluate without overflow.  Near-roots cancel catastrophically against the
    coefficient scale; the working precision escalates until the value is
    resolved, and ExactZero is raised only when p(z) stays below the roundoff
    scale at the escalation cap (z is a root to working precision).
    """
    coeffs = p.coeffs
    if not coeffs:
        raise ValueError("zero polynomial")
    cap = max(65536, 64 * precision)
    wp = precision + 32
    while True:
        with mp.workprec(wp):
            zz = mp.mpc(z) if isinstance(z, (complex, mp.mpc)) else mp.mpf(z)
            acc = zz * 0
            for c in reversed(coeffs):
                acc = acc * zz + c
            mag = abs(acc)
            scale = _coeff_scale_at(
                [abs(c) if isinstance(c, mp.mpf) else abs(mp.mpf(c))
                 for c in coeffs], abs(zz))
            if mag > 0 and (scale == 0 or mag > scale * mp.mpf(2) ** (-wp + 24)):
                with mp.workprec(precision + 16):
                    return mp.log(mag)
        if wp >= cap:
            raise ExactZero(z)
        wp = min(2 * wp, cap)


def _aberth_mp(mcoeffs, dcoeffs, roots, n, target, budget, wp):
    """mpmath Aberth sweeps until every root is either backward-stable
    (|p(z)| at the evaluation roundoff scale, so no better root exists at
    this precision) or its relative step drops below `target`, or `budget`
    single-root updates are spent.  Returns (roots, updates_spent); the
    caller decides whether exhaustion is fatal."""
    with mp.workprec(wp):
        abs_coeffs = [abs(c) for c in mcoeffs]
        floor = mp.mpf(2) ** (-wp + 8)
        spent = 0
        while spent < budget:
            spent += n
            max_step = mp.mpf(0)
            for i in range(n):
                zi = roots[i]
                az = abs(zi)
                pv = mp.mpc(0)
                sc = mp.mpf(0)
                for c, ac in zip(reversed(mcoeffs), reversed(abs_coeffs)):
                    pv = pv * zi + c
                    sc = sc * az + ac
                if abs(pv) <= floor * sc:
                    continue  # backward-stable at working precision
                dv = mp.mpc(0)
                for c in reversed(dcoeffs):
                    dv = dv * zi + c
                if dv == 0:
                    roots[i] = zi + floor * max(az, 1)
                    continue
                newton = pv / dv
                s = mp.mpc(0)
                for j in range(n):
                    if j != i:
                        d = zi - roots[j]
                        if d == 0:
                            d = mp.mpc(floor)
                        s += 1 / d
                denom = 1 - newton * s
                corr = newton if denom == 0 else newton / denom
                roots[i] = zi - corr
                rel = abs(corr) / max(abs(roots[i]), mp.mpf(2) ** -wp)
                if rel > max_step:
                    max_step = rel
            if max_step < target:
                return roots, spent
    return roots, spent


def _bini_guesses_from_logs(log2_abs, n):
    """Starting points on annuli from the upper convex hull of (k, log2|a_k|).

    One point per root on the annulus of its hull segment, with angles spread
    and rotated off the real axis; a per-index twist keeps guesses distinct
    even when many segments share a radius.  Working off logs keeps the
    construction valid for coefficients far outside double range."""
    pts = [(k, v) for k, v in enumerate(log2_abs) if v is not None]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    idx = 0
    for s in range(len(hull) - 1):
        (k1, y1), (k2, y2) = hull[s], hull[s + 1]
        m = k2 - k1
        r = 2.0 ** min(max((y1 - y2) / m, -300.0), 300.0)
        for j in range(m):
            theta = 2 * math.pi * ((j + 0.5) / m + 0.61803398875 * idx / max(n, 1)) + 0.7
            out.append(r * complex(math.cos(theta), math.sin(theta)))
            idx += 1
    if len(out) != n:  # degenerate hull; fall back to a single circle
        out = [complex(math.cos(t), math.sin(t))
               for t in np.linspace(0.4, 2 * math.pi + 0.4, n, endpoint=False)]
    return out


def _aberth_f64(coeffs_f, z, max_iter=400):
    """Vectorized float64 Aberth sweeps; returns (roots, converged).

    Callers pass coefficients rescaled so the roots sit in a moderate disk;
    iterates that still produce non-finite values are pulled back inward and
    convergence is only reported once a full sweep finishes without rescues."""
    n = len(z)
    dcoeffs = np.array([k * coeffs_f[k] for k in range(1, len(coeffs_f))])
    coeffs = np.array(coeffs_f)
    r_cap = 4.0 * float(np.abs(z).max()) + 1.0
    for it in range(max_iter):
        rescued = False
        bad = ~np.isfinite(z)
        if bad.any():
            rescued = True
            ang = 2.4 * np.arange(n)[bad] + 0.3 * it
            z[bad] = (0.4 + 0.01 * it % 0.3) * (np.cos(ang) + 1j * np.sin(ang))
        big = np.abs(z) > r_cap
        if big.any():
            rescued = True
            z[big] *= r_cap / np.abs(z[big])
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            pv = np.zeros(n, dtype=complex)
            for c in coeffs[::-1]:
                pv = pv * z + c
            dv = np.zeros(n, dtype=complex)
            for c in dcoeffs[::-1]:
                dv = dv * z + c
            newton = np.where(dv != 0, pv / dv, 0.1 + 0.1j)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            small = np.abs(diff) < 1e-280
            diff = np.where(small, np.inf, diff)
            sums = (1.0 / diff).sum(axis=1)
            corr = newton / (1.0 - newton * sums)
        nonfinite = ~np.isfinite(corr)
        if nonfinite.any():
            rescued = True
            # pull stalled iterates inward instead of freezing them
            z = np.where(nonfinite, z * 0.6, z)
            corr = np.where(nonfinite, 0.0, corr)
        z = z - corr
        with np.errstate(invalid="ignore"):
            step = np.nanmax(np.abs(corr) / np.maximum(np.abs(z), 1e-300))
        if not rescued and np.isfinite(step) and step < 2e-13:
            return z, True
    return z, False


def aberth_roots(p, precision=128, max_iter=None, initial=None):
    """Simultaneous Aberth-Ehrlich root finder.

    A float64 phase (when the rescaled coefficients fit in double range) finds
    the root configuration, with an mpmath medium-precision phase standing in
    otherwise; mpmath sweeps at the working precision then polish.  Callers
    that know the approximate configuration (the synthesis pipeline: the
    output's roots track the sample plan) can pass it as `initial`.
    Conjugate closure is enforced on output for real-coefficient input.
    """
    coeffs = list(p.coeffs)
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("degree must be >= 1")
    if max_iter is None:
        max_iter = 200 * n

    # factor out exact roots at zero so the annulus initialization is valid
    n_zero = 0
    while coeffs and not coeffs[0]:
        coeffs.pop(0)
        n_zero += 1
    n = len(coeffs) - 1
    if n == 0:
        zero = mp.mpc(0)
        return RootSet([zero] * n_zero, [mp.mpf(0)] * n_zero,
                       [n_zero] * n_zero, precision)

    is_int = isinstance(p, IntPoly)
    with mp.workprec(precision + 32):
        mcoeffs = [mp.mpf(c) if is_int else c for c in coeffs]
        lead = mcoeffs[-1]
        mcoeffs = [c / lead for c in mcoeffs]

        # float64 pre-phase runs in a rescaled variable (Fujiwara root bound)
        # so values stay inside double range; when even the rescaled
        # coefficients leave double range an mpmath pre-phase at modest
        # precision takes over, since mpf exponents never overflow
        log2_abs = [float(mp.log(abs(c), 2)) if c != 0 else None
                    for c in mcoeffs]
        log2_R = 0.0
        for k in range(n):
            if log2_abs[k] is not None:
                log2_R = max(log2_R, (log2_abs[k] - (1 if k == 0 else 0)) / (n - k))
        scale = mp.mpf(2) ** (1 + log2_R)
        scaled = []
        fits_double = True
        for k, c in enumerate(mcoeffs):
            if c == 0:
                scaled.append(0.0)
                continue
            l2 = log2_abs[k] + (k - n) * (1 + log2_R)
            if abs(l2) > 500:
                fits_double = False
                break
            scaled.append(float(mp.sign(c) * mp.mpf(2) ** l2))

        used = 0
        if initial is not None:
            if len(initial) != n:
                raise ValueError(f"need {n} initial guesses, got {len(initial)}")
            roots = [mp.mpc(w) for w in initial]
        else:
            guesses = _bini_guesses_from_logs(log2_abs, n)
            if fits_double:
                sguess = np.array([complex(g) / float(scale) for g in guesses])
                zf, _ = _aberth_f64(scaled, sguess, max_iter=max(400, 6 * n))
                if not np.all(np.isfinite(zf)):
                    zf = sguess
                roots = [mp.mpc(w) * scale for w in zf]
            else:
                roots = [mp.mpc(g) for g in guesses]

        dcoeffs = [k * mcoeffs[k] for k in range(1, n + 1)]
        target = mp.mpf(2) ** (-(precision * 3) // 4)
        if initial is None and not fits_double:
            # medium-precision global phase before the full-precision polish
            roots, used = _aberth_mp(mcoeffs, dcoeffs, roots, n,
                                     mp.mpf(2) ** -50, max_iter // 2, 192)
        left = max(max_iter - used, 20 * n)
        roots, spent = _aberth_mp(mcoeffs, dcoeffs, roots, n, target, left,
                                  precision + 32)
        if spent >= left:
            raise NoConvergence(
                f"Aberth did not converge within {max_iter} iterations")

        # conjugate closure for real input
        real_input = is_int or all(getattr(c, "imag", 0) == 0 for c in coeffs)
        if real_input:
            roots = _enforce_conjugate_closure(roots, precision)

        residuals, mults = [], []
        abs_coeffs = [abs(c) for c in mcoeffs]
        for z in roots:
            pv = mp.mpc(0)
            for c in reversed(mcoeffs):
                pv = pv * z + c
            residuals.append(abs(pv) * abs(lead) * abs(z) ** n_zero)
        pair_tol = mp.mpf(2) ** (-(precision // 8))
        for i, z in enumerate(roots):
            m = sum(1 for w in roots if abs(w - z) < pair_tol * max(1, abs(z)))
            mults.append(m)

        # residual acceptance: backward error relative to coefficient scale
        thresh = mp.mpf(2) ** (-(precision // 4))
        for z, res in zip(roots, residuals):
            scale = _coeff_scale_at([abs(lead) * c for c in abs_coeffs], abs(z))
            if scale > 0 and res > thresh * scale:
                raise NoConvergence(
                    f"residual {mp.nstr(res / scale, 5)} above threshold at root {mp.nstr(z, 8)}"
                )
        if n_zero:
            roots = [mp.mpc(0)] * n_zero + roots
            residuals = [mp.mpf(0)] * n_zero + residuals
            mults = [n_zero] * n_zero + mults
        order = sorted(range(len(roots)), key=lambda i: (mp.re(roots[i]), mp.im(roots[i])))
        return RootSet(
            roots=[roots[i] for i in order],
            residuals=[residuals[i] for i in order],
            multiplicities=[mults[i] for i in order],
            precision=precision,
        )


def _enforce_conjugate_closure(roots, precision):
    tol = mp.mpf(2) ** (-(precision // 4))
    out = []
    used = [False] * len(roots)
    scale = max((abs(z) for z in roots), default=mp.mpf(1)) + 1
    order = sorted(range(len(roots)), key=lambda i: (mp.re(roots[i]), mp.im(roots[i])))
    for i in order:
        if used[i]:
            continue
        z = roots[i]
        if abs(mp.im(z)) <= tol * scale:
            out.append(mp.mpc(mp.re(z)))
            used[i] = True
            continue
        best, best_d = None, None
        for j in order:
            if j == i or used[j]:
                continue
            d = abs(roots[j] - mp.conj(z))
            if best_d is None or d < best_d:
                best, best_d = j, d
        if best is not None and best_d <= tol * scale:
            used[i] = used[best] = True
            w = (z + mp.conj(roots[best])) / 2
            out.append(w)
            out.append(mp.conj(w))
        else:
            # no partner within tolerance; keep as-is
            used[i] = True
            out.append(z)
    return out


def newton_power_sums(p, r_max):
    """Exact power sums s_r = sum(roots^r) for r = 1..r_max via Newton's identities.

    Pure integer arithmetic on the coefficients; p must be monic."""
    if not isinstance(p, IntPoly) or not p.is_monic:
        raise NotMonic("newton_power_sums requires a monic IntPoly")
    n = p.degree
    # p = x^n + c_{n-1} x^{n-1} + ... + c_0 and e_k = (-1)^k c_{n-k}
    e = [0] * (n + 1)
    e[0] = 1
    for k in range(1, n + 1):
        e[k] = (-1) ** k * p.coeffs[n - k]
    s = []
    for r in range(1, r_max + 1):
        if r <= n:
            acc = (-1) ** (r - 1) * r * e[r]
            for i in range(1, r):
                acc += (-1) ** (r - 1 + i) * e[r - i] * s[i - 1]
        else:
            acc = 0
            for i in range(1, n + 1):
                acc += (-1) ** (i - 1) * e[i] * s[r - i - 1]
        s.append(acc)
    return s


def is_eisenstein_at_2(p):
    """Eisenstein criterion at 2: monic, lower coefficients even, constant = 2 mod 4."""
    if not isinstance(p, IntPoly) or not p.is_monic:
        raise NotMonic("Eisenstein check requires a monic IntPoly")
    if p.degree < 1:
        return False
    if any(c % 2 for c in p.coeffs[:-1]):
        return False
    return p.coeffs[0] % 4 == 2


def n_norm(p, spec, n, grid_density=32, precision=192):
    """log of the n-norm lower bound max_z |p(z)| e^{-n U(z)} over an evaluation set.

    The evaluation set is a grid_density x grid_density grid over the measure's
    bounding box inflated by 25% (flattened boxes get a synthetic height so the
    grid is genuinely two-dimensional), plus a ring of samples at four box
    radii where the potential is within O(r/|z|) of log|z|.  The result is a
    lower bound on the true sup; grid refinement is the caller's check.
    Returned as a log to avoid overflow.
    """
    from . import measures

    if p.degree > n:
        raise ValueError("deg p must be <= n")
    a, b, c = spec.bounding_box
    h = max(c, (b - a) / 4)
    cx, cy = (a + b) / 2, 0.0
    half_w = (b - a) / 2 * 1.25
    half_h = h * 1.25
    best = None
    with mp.workprec(precision):
        pts = []
        for i in range(grid_density):
            for j in range(grid_density):
                x = cx - half_w + (2 * half_w) * (i + 0.5) / grid_density
                y = cy - half_h + (2 * half_h) * (j + 0.5) / grid_density
                pts.append(mp.mpc(x, y))
        if spec.bounding_box[2] == 0:
            # real-supported measure: the sup typically sits on the axis
            # between the roots; scan it densely enough to resolve the bumps
            m_line = grid_density * grid_density
            for i in range(m_line):
                x = cx - half_w + (2 * half_w) * (i + 0.5) / m_line
                pts.append(mp.mpc(x, 0.0))
        ring_r = 4 * math.hypot(half_w, half_h)
        m_ring = max(8, 4 * grid_density)
        for k in range(m_ring):
            th = 2 * math.pi * (k + 0.5) / m_ring
            pts.append(mp.mpc(cx + ring_r * math.cos(th), cy + ring_r * math.sin(th)))
        for z in pts:
            try:
                lv = eval_log_abs(p, z, precision)
            except ExactZero:
                continue
            u = measures.potential(spec, z, precision)
            if not mp.isfinite(u):
                continue
            d = lv - n * u
            if best is None or d > best:
                best = d
    if best is None:
        raise PrecisionLoss("no finite evaluation point for n_norm")
    return float(best)
