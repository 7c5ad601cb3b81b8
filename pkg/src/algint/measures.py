"""Target measures on compact subsets of the complex plane.

A MeasureSpec describes a probability measure symmetric about the real axis.
Each kind carries closed forms (or rapidly convergent series) for its
logarithmic potential, energy, CDF (for kinds supported on the real line), and
support geometry.  Everything is evaluated with mpmath at a caller-chosen
binary precision.

Kinds
-----
EquilibriumInterval  arcsine law on [a, b]
SerreMixture         c * equilibrium on [a,b] + (1-c) * pushforward of the
                     equilibrium measure on [1/b, 1/a] under t -> 1/t
EmpiricalPoints      finite atoms with weights, closed under conjugation
CircleFourier        density 1 + sum_k c_f cos(2 pi k theta)/k^2 on a circle
AnnulusUniform       normalized area measure on r_in <= |z| <= r_out
ConformalPullback    base measure moved through a named conformal map
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import mpmath as mp

from .errors import (CatalogTooLarge, NonconvergentQuadrature, UnsupportedKind)
from .polyarith import IntPoly

EQUILIBRIUM_INTERVAL = "EquilibriumInterval"
SERRE_MIXTURE = "SerreMixture"
EMPIRICAL_POINTS = "EmpiricalPoints"
CIRCLE_FOURIER = "CircleFourier"
ANNULUS_UNIFORM = "AnnulusUniform"
CONFORMAL_PULLBACK = "ConformalPullback"

KINDS = (EQUILIBRIUM_INTERVAL, SERRE_MIXTURE, EMPIRICAL_POINTS,
         CIRCLE_FOURIER, ANNULUS_UNIFORM, CONFORMAL_PULLBACK)

# named conformal maps for ConformalPullback
MAP_SQUARE_MINUS_ONE = "square_minus_one_preimage"   # measure whose image under z^2-1 is base
MAP_JOUKOWSKI = "joukowski_image"                    # image of base under z -> z + alpha/z


@dataclass
class MeasureSpec:
    kind: str
    params: dict
    bounding_box: tuple  # (a, b, c): box [a, b] x [-c, c]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        self.bounding_box = tuple(float(v) for v in self.bounding_box)
        validate(self)

    def to_json(self):
        params = dict(self.params)
        if self.kind == CONFORMAL_PULLBACK:
            params["base"] = json.loads(self.params["base"].to_json())
        return json.dumps(
            {"kind": self.kind, "params": params,
             "bounding_box": list(self.bounding_box)},
            indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        params = dict(doc["params"])
        if doc["kind"] == CONFORMAL_PULLBACK:
            params["base"] = cls.from_json(json.dumps(params["base"]))
        if doc["kind"] == EMPIRICAL_POINTS:
            params["points"] = [tuple(p) for p in params["points"]]
        return cls(doc["kind"], params, tuple(doc["bounding_box"]))


# ---------------------------------------------------------------- constructors

def equilibrium_interval(a, b):
    a, b = float(a), float(b)
    return MeasureSpec(EQUILIBRIUM_INTERVAL, {"a": a, "b": b}, (a, b, 0.0))


def serre_mixture(a, b, c):
    a, b, c = float(a), float(b), float(c)
    return MeasureSpec(SERRE_MIXTURE, {"a": a, "b": b, "c": c}, (a, b, 0.0))


def empirical(points):
    """points: iterable of (re, im, weight)."""
    pts = [(float(x), float(y), float(w)) for x, y, w in points]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = 1e-12
    return MeasureSpec(EMPIRICAL_POINTS, {"points": pts},
                       (min(xs) - pad, max(xs) + pad,
                        max(abs(v) for v in ys) + pad))


def circle_fourier(radius, c_f):
    radius, c_f = float(radius), float(c_f)
    return MeasureSpec(CIRCLE_FOURIER, {"radius": radius, "c_f": c_f},
                       (-radius, radius, radius))


def annulus_uniform(r_in, r_out):
    r_in, r_out = float(r_in), float(r_out)
    return MeasureSpec(ANNULUS_UNIFORM, {"r_in": r_in, "r_out": r_out},
                       (-r_out, r_out, r_out))


def lemniscate_pullback(base=None):
    """Pullback of `base` (default: uniform unit circle) under z -> z^2 - 1."""
    if base is None:
        base = circle_fourier(1.0, 0.0)
    # support = preimage of the base circle; for the unit circle it is the
    # lemniscate |z^2 - 1| = 1, contained in |z| <= sqrt(2)
    rr = math.sqrt(base.params["radius"] + 1.0)
    return MeasureSpec(CONFORMAL_PULLBACK,
                       {"base": base, "map": MAP_SQUARE_MINUS_ONE},
                       (-rr, rr, rr))


def joukowski_image(base, alpha):
    """Image of `base` (circle of radius sqrt(alpha)) under z -> z + alpha/z."""
    alpha = float(alpha)
    half = 2.0 * math.sqrt(alpha)
    return MeasureSpec(CONFORMAL_PULLBACK,
                       {"base": base, "map": MAP_JOUKOWSKI, "alpha": alpha},
                       (-half, half, 0.0))


# ---------------------------------------------------------------- validation

def validate(spec):
    p = spec.params
    if spec.kind == EQUILIBRIUM_INTERVAL:
        if not p["a"] < p["b"]:
            raise ValueError("need a < b")
    elif spec.kind == SERRE_MIXTURE:
        if not 0 < p["a"] < p["b"]:
            raise ValueError("SerreMixture needs 0 < a < b")
        if not 0 <= p["c"] <= 1:
            raise ValueError("mixture weight must lie in [0, 1]")
    elif spec.kind == EMPIRICAL_POINTS:
        pts = p["points"]
        total = math.fsum(w for _, _, w in pts)
        if abs(total - 1.0) > 1e-9 * max(1.0, len(pts)):
            raise ValueError(f"weights sum to {total}, not 1")
        if any(w < 0 for _, _, w in pts):
            raise ValueError("negative weight")
        _check_conjugation_closure(pts)
    elif spec.kind == CIRCLE_FOURIER:
        if p["radius"] <= 0:
            raise ValueError("radius must be positive")
        if abs(p["c_f"]) * (math.pi ** 2 / 6) >= 1:
            raise ValueError("c_f too large: density would go negative")
    elif spec.kind == ANNULUS_UNIFORM:
        if not 0 <= p["r_in"] < p["r_out"]:
            raise ValueError("need 0 <= r_in < r_out")
    elif spec.kind == CONFORMAL_PULLBACK:
        if p["map"] not in (MAP_SQUARE_MINUS_ONE, MAP_JOUKOWSKI):
            raise ValueError(f"unknown map {p['map']!r}")
        if p["map"] == MAP_JOUKOWSKI:
            base = p["base"]
            if base.kind != CIRCLE_FOURIER:
                raise ValueError("joukowski image requires a CircleFourier base")
            rad = base.params["radius"]
            if abs(rad * rad - p["alpha"]) > 1e-9 * max(1.0, p["alpha"]):
                raise ValueError("base radius must equal sqrt(alpha)")


def _check_conjugation_closure(pts, tol=1e-9):
    unmatched = list(range(len(pts)))
    while unmatched:
        i = unmatched.pop()
        x, y, w = pts[i]
        if abs(y) <= tol:
            continue
        for k, j in enumerate(unmatched):
            xj, yj, wj = pts[j]
            if abs(xj - x) <= tol and abs(yj + y) <= tol and abs(wj - w) <= tol:
                unmatched.pop(k)
                break
        else:
            raise ValueError(f"point ({x}, {y}) has no conjugate partner")


def is_real_line(spec):
    """True when the measure is supported on the real line (CDF available)."""
    if spec.kind in (EQUILIBRIUM_INTERVAL, SERRE_MIXTURE):
        return True
    if spec.kind == EMPIRICAL_POINTS:
        return all(abs(y) < 1e-15 for _, y, _ in spec.params["points"])
    if spec.kind == CONFORMAL_PULLBACK and spec.params["map"] == MAP_JOUKOWSKI:
        return True
    return False


def real_support_interval(spec):
    """(lo, hi) hull of the support for real-line kinds."""
    if spec.kind == EQUILIBRIUM_INTERVAL or spec.kind == SERRE_MIXTURE:
        return spec.params["a"], spec.params["b"]
    if spec.kind == CONFORMAL_PULLBACK and spec.params["map"] == MAP_JOUKOWSKI:
        half = 2.0 * math.sqrt(spec.params["alpha"])
        return -half, half
    if spec.kind == EMPIRICAL_POINTS and is_real_line(spec):
        xs = [x for x, _, _ in spec.params["points"]]
        return min(xs), max(xs)
    raise UnsupportedKind(f"{spec.kind} has no real support interval")


# ---------------------------------------------------------------- potentials

def _u_eq_interval(z, a, b):
    """Potential of the arcsine law on [a, b]: log((b-a)/4) + log|w + sqrt(w^2-1)|.

    The square-root branch is the exterior inverse Joukowski map; on the slit
    the product sqrt(w-1) sqrt(w+1) lands on the unit circle so the potential
    takes the limiting value log((b-a)/4)."""
    w = (2 * mp.mpc(z) - a - b) / (b - a)
    s = mp.sqrt(w - 1) * mp.sqrt(w + 1)
    m = abs(w + s)
    if m < 1:  # interior branch leaked through rounding; use the mirror
        m = abs(w - s)
    return mp.log((b - a) / mp.mpf(4)) + mp.log(m)


def _u_circle_fourier(z, radius, c_f, precision):
    """Potential of the Fourier-perturbed circle measure.

    Expansion of log|z - radius e^{2 pi i t}| in harmonics gives
    log max(|z|, radius) - (c_f/2) sum_k ratio^k cos(k arg z) / k^3 with
    ratio = min/max of (|z|, radius); the sum is Re Li_3(ratio e^{i arg z}),
    finite and smooth up to and including the circle itself."""
    z = mp.mpc(z)
    az = abs(z)
    if az == 0:
        return mp.log(radius)
    lead = mp.log(max(az, mp.mpf(radius)))
    if c_f == 0:
        return lead
    ratio = min(az, mp.mpf(radius)) / max(az, mp.mpf(radius))
    phi = mp.arg(z)
    li3 = mp.polylog(3, ratio * mp.exp(mp.mpc(0, phi)))
    return lead - (mp.mpf(c_f) / 2) * mp.re(li3)


def potential(spec, z, precision=128):
    """Logarithmic potential U(z) = integral of log|z - w| d mu(w).

    Closed forms for every analytic kind; exact finite sum for EmpiricalPoints
    (returning -inf when z hits an atom)."""
    with mp.workprec(precision + 16):
        p = spec.params
        if spec.kind == EQUILIBRIUM_INTERVAL:
            return mp.mpf(_u_eq_interval(z, p["a"], p["b"]).real)
        if spec.kind == SERRE_MIXTURE:
            a, b, c = p["a"], p["b"], p["c"]
            u1 = _u_eq_interval(z, a, b).real
            # nu = pushforward of arcsine on [1/b, 1/a] under t -> 1/t:
            # U_nu(z) = U_eq(1/z) + log|z| - U_eq(0) on [1/b, 1/a]
            zc = mp.mpc(z)
            u0 = _u_eq_interval(mp.mpf(0), 1 / b, 1 / a).real
            if abs(zc) == 0:
                u2 = -u0
            else:
                u2 = _u_eq_interval(1 / zc, 1 / b, 1 / a).real + mp.log(abs(zc)) - u0
            return mp.mpf(c * u1 + (1 - c) * u2)
        if spec.kind == EMPIRICAL_POINTS:
            zc = mp.mpc(z)
            acc = mp.mpf(0)
            for x, y, w in p["points"]:
                d = abs(zc - mp.mpc(x, y))
                if d == 0:
                    return mp.mpf("-inf")
                acc += w * mp.log(d)
            return acc
        if spec.kind == CIRCLE_FOURIER:
            return mp.mpf(_u_circle_fourier(z, p["radius"], p["c_f"], precision))
        if spec.kind == ANNULUS_UNIFORM:
            r1, r2 = mp.mpf(p["r_in"]), mp.mpf(p["r_out"])
            az = abs(mp.mpc(z))
            denom = r2 ** 2 - r1 ** 2

            def j(rin, rout):
                lo = rin ** 2 * (2 * mp.log(rin) - 1) / 2 if rin > 0 else mp.mpf(0)
                hi = rout ** 2 * (2 * mp.log(rout) - 1) / 2
                return hi - lo

            if az >= r2:
                return mp.log(az)
            if az <= r1:
                return j(r1, r2) / denom
            return ((az ** 2 - r1 ** 2) * mp.log(az) + j(az, r2)) / denom
        if spec.kind == CONFORMAL_PULLBACK:
            base = p["base"]
            if p["map"] == MAP_SQUARE_MINUS_ONE:
                # preimage pair +-sqrt(1+u): log|z-s| + log|z+s| = log|z^2-1-u|
                return potential(base, mp.mpc(z) ** 2 - 1, precision) / 2
            alpha = p["alpha"]
            w = mp.mpc(z)
            s = mp.sqrt(w * w - 4 * alpha)
            z1, z2 = (w + s) / 2, (w - s) / 2
            return (potential(base, z1, precision) + potential(base, z2, precision)
                    - potential(base, mp.mpf(0), precision))
        raise UnsupportedKind(spec.kind)


def energy(spec, precision=128):
    """Logarithmic energy I(mu) = double integral of log|z1 - z2|."""
    with mp.workprec(precision + 16):
        p = spec.params
        if spec.kind == EQUILIBRIUM_INTERVAL:
            return mp.log((p["b"] - p["a"]) / mp.mpf(4))
        if spec.kind == EMPIRICAL_POINTS:
            pts = p["points"]
            acc = mp.mpf(0)
            for i, (x1, y1, w1) in enumerate(pts):
                for j, (x2, y2, w2) in enumerate(pts):
                    if i == j:
                        continue
                    d = mp.hypot(x1 - x2, y1 - y2)
                    if d == 0:
                        return mp.mpf("-inf")
                    acc += w1 * w2 * mp.log(d)
            return acc
        if spec.kind == CIRCLE_FOURIER:
            # orthogonality: I = log(radius) - c_f^2 zeta(5) / 4
            return mp.log(p["radius"]) - mp.mpf(p["c_f"]) ** 2 * mp.zeta(5) / 4
        if spec.kind == SERRE_MIXTURE:
            return _quadrature_energy_1d(spec, precision)
        if spec.kind == ANNULUS_UNIFORM:
            r1, r2 = p["r_in"], p["r_out"]

            def f(r):
                return 2 * r / (r2 ** 2 - r1 ** 2) * potential(spec, mp.mpf(r), precision)

            return _adaptive_quad(f, r1, r2, precision)
        if spec.kind == CONFORMAL_PULLBACK:
            base = p["base"]
            if p["map"] == MAP_SQUARE_MINUS_ONE:
                return energy(base, precision) / 2
            return 2 * energy(base, precision) - potential(base, mp.mpf(0), precision)
        raise UnsupportedKind(spec.kind)


def _adaptive_quad(f, lo, hi, precision):
    """mpmath adaptive quadrature with an error check against the precision."""
    rel_tol = mp.mpf(2) ** (-min(precision // 2, 80))
    with mp.workprec(precision + 32):
        for maxdegree in (6, 8, 10):
            val, err = mp.quad(f, [lo, hi], error=True, maxdegree=maxdegree)
            if err <= rel_tol * max(1, abs(val)):
                return val
    raise NonconvergentQuadrature(
        f"quadrature error {mp.nstr(err, 5)} above tolerance {mp.nstr(rel_tol, 5)}")


def _quadrature_energy_1d(spec, precision):
    """I(mu) = integral of U(x) d mu(x) in the cosine substitution.

    x = ((a+b) + (b-a) cos phi)/2 absorbs the inverse-square-root endpoint
    singularities of both mixture components."""
    a, b, c = (spec.params["a"], spec.params["b"], spec.params["c"])

    def f(phi):
        x = ((a + b) + (b - a) * mp.cos(phi)) / 2
        u = potential(spec, x, precision)
        # component densities against dphi: arcsine -> 1/pi;
        # inverted arcsine -> sqrt(ab)/(pi x)
        dens = c / mp.pi + (1 - c) * mp.sqrt(mp.mpf(a) * b) / (mp.pi * x)
        return u * dens

    return _adaptive_quad(f, 0, mp.pi, precision)


# ---------------------------------------------------------------- CDFs

def _bern3(u):
    return u ** 3 - mp.mpf(3) / 2 * u ** 2 + u / 2


def cdf(spec, x, precision=128):
    """Distribution function F(x) for real-line kinds."""
    if not is_real_line(spec):
        raise UnsupportedKind(f"{spec.kind} is not supported on the real line")
    with mp.workprec(precision + 16):
        x = mp.mpf(x)
        p = spec.params
        if spec.kind == EQUILIBRIUM_INTERVAL:
            return _arcsine_cdf(x, p["a"], p["b"])
        if spec.kind == SERRE_MIXTURE:
            a, b, c = p["a"], p["b"], p["c"]
            f1 = _arcsine_cdf(x, a, b)
            if x <= a:
                return mp.mpf(0)
            if x >= b:
                return mp.mpf(1)
            f2 = 1 - _arcsine_cdf(1 / x, 1 / b, 1 / a)
            return c * f1 + (1 - c) * f2
        if spec.kind == EMPIRICAL_POINTS:
            return mp.mpf(math.fsum(w for px, _, w in p["points"] if px <= x))
        # joukowski image of the circle measure: beta = 2 sqrt(alpha) cos(2 pi t)
        alpha = p["alpha"]
        c_f = p["base"].params["c_f"]
        half = 2 * mp.sqrt(alpha)
        if x <= -half:
            return mp.mpf(0)
        if x >= half:
            return mp.mpf(1)
        theta = mp.acos(x / half) / (2 * mp.pi)  # in [0, 1/2]
        # F = mu_angle([theta, 1-theta]); the sine sum telescopes to a
        # Bernoulli polynomial: sum sin(2 pi k u)/k^3 = (2 pi^3/3) B3(u)
        return 1 - 2 * theta - (2 * c_f * mp.pi ** 2 / 3) * _bern3(theta)


def _arcsine_cdf(x, a, b):
    if x <= a:
        return mp.mpf(0)
    if x >= b:
        return mp.mpf(1)
    w = (2 * x - a - b) / (b - a)
    return mp.mpf(1) / 2 + mp.asin(w) / mp.pi


def angle_cdf(spec, theta, precision=128):
    """CDF in the angular variable for CircleFourier: F(t) = t + (c_f pi^2/3) B3(t)."""
    if spec.kind != CIRCLE_FOURIER:
        raise UnsupportedKind("angle_cdf requires CircleFourier")
    with mp.workprec(precision + 16):
        t = mp.mpf(theta)
        c_f = spec.params["c_f"]
        return t + (c_f * mp.pi ** 2 / 3) * _bern3(t)


def quantile(spec, prob, precision=128):
    """Inverse CDF by closed form (arcsine) or monotone bisection.

    Bisection accuracy is capped at 160 bits: quantiles seed sample plans at
    the 1/n approximation scale, where that is already far beyond need."""
    eff = min(precision, 160)
    with mp.workprec(precision + 16):
        prob = mp.mpf(prob)
        p = spec.params
        if spec.kind == EQUILIBRIUM_INTERVAL:
            a, b = p["a"], p["b"]
            return ((a + b) - (b - a) * mp.cos(mp.pi * prob)) / 2
        if spec.kind == CIRCLE_FOURIER:
            return _bisect(lambda t: angle_cdf(spec, t, eff) - prob,
                           mp.mpf(0), mp.mpf(1), eff)
        if not is_real_line(spec):
            raise UnsupportedKind(f"{spec.kind} has no 1-D quantile")
        lo, hi = real_support_interval(spec)
        return _bisect(lambda x: cdf(spec, x, eff) - prob,
                       mp.mpf(lo), mp.mpf(hi), eff)


def _bisect(f, lo, hi, precision, iters=None):
    if iters is None:
        iters = min(precision + 16, 400)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= mp.mpf(2) ** (-precision) * max(1, abs(hi)):
            break
    return (lo + hi) / 2


def inverse_cdf_sample(spec, n, precision=128):
    """Quantile points F^{-1}((k - 1/2)/n), k = 1..n, strictly increasing.

    CircleFourier is sampled in the angle variable; two-dimensional kinds are
    rejected (use the sampling module's box plan instead)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.kind == CIRCLE_FOURIER:
        return [quantile(spec, (mp.mpf(k) - mp.mpf(1) / 2) / n, precision)
                for k in range(1, n + 1)]
    if not is_real_line(spec) or spec.kind == EMPIRICAL_POINTS:
        raise UnsupportedKind(f"inverse_cdf_sample undefined for {spec.kind}")
    return [quantile(spec, (mp.mpf(k) - mp.mpf(1) / 2) / n, precision)
            for k in range(1, n + 1)]


# ---------------------------------------------------------------- support geometry

def support_distance(spec, z, samples=4096):
    """Euclidean distance from z to the support of the measure."""
    z = complex(z)
    p = spec.params
    if spec.kind in (EQUILIBRIUM_INTERVAL, SERRE_MIXTURE):
        return _segment_distance(z, p["a"], p["b"])
    if spec.kind == EMPIRICAL_POINTS:
        return min(abs(z - complex(x, y)) for x, y, _ in p["points"])
    if spec.kind == CIRCLE_FOURIER:
        return abs(abs(z) - p["radius"])
    if spec.kind == ANNULUS_UNIFORM:
        r = abs(z)
        return max(p["r_in"] - r, r - p["r_out"], 0.0)
    if spec.kind == CONFORMAL_PULLBACK:
        if p["map"] == MAP_JOUKOWSKI:
            half = 2.0 * math.sqrt(p["alpha"])
            return _segment_distance(z, -half, half)
        pts = support_points(spec, samples)
        return min(abs(z - w) for w in pts)
    raise UnsupportedKind(spec.kind)


def _segment_distance(z, a, b):
    x, y = z.real, z.imag
    t = min(max((x - a) / (b - a), 0.0), 1.0)
    return math.hypot(x - (a + t * (b - a)), y)


def support_points(spec, n):
    """n points tracing the support of a curve-supported measure (plot and
    distance queries); uniform in the curve parameter."""
    p = spec.params
    if spec.kind == CIRCLE_FOURIER:
        r = p["radius"]
        return [r * complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))
                for k in range(n)]
    if spec.kind == CONFORMAL_PULLBACK and p["map"] == MAP_SQUARE_MINUS_ONE:
        base = p["base"]
        r = base.params["radius"]
        out = []
        m = max(2, n // 2)
        for k in range(m):
            u = r * complex(math.cos(2 * math.pi * k / m), math.sin(2 * math.pi * k / m))
            s = complex(mp.sqrt(mp.mpc(1) + u))
            out.extend([s, -s])
        return out
    if spec.kind in (EQUILIBRIUM_INTERVAL, SERRE_MIXTURE):
        a, b = p["a"], p["b"]
        return [complex(a + (b - a) * k / (n - 1), 0.0) for k in range(n)]
    if spec.kind == CONFORMAL_PULLBACK and p["map"] == MAP_JOUKOWSKI:
        half = 2.0 * math.sqrt(p["alpha"])
        return [complex(-half + 2 * half * k / (n - 1), 0.0) for k in range(n)]
    raise UnsupportedKind(spec.kind)


def curve_quantile_points(spec, n, precision=128):
    """n weighted support samples at measure quantiles, for box-mass estimates.

    Returns a list of (complex point, weight).  Curve kinds place points at
    the quantiles of the curve parameter; EmpiricalPoints returns its atoms."""
    p = spec.params
    if spec.kind == EMPIRICAL_POINTS:
        return [(complex(x, y), w) for x, y, w in p["points"]]
    if spec.kind == CIRCLE_FOURIER:
        r = p["radius"]
        thetas = inverse_cdf_sample(spec, n, precision)
        return [(r * complex(mp.cos(2 * mp.pi * t), mp.sin(2 * mp.pi * t)), 1.0 / n)
                for t in thetas]
    if spec.kind == CONFORMAL_PULLBACK and p["map"] == MAP_SQUARE_MINUS_ONE:
        base = p["base"]
        pts = curve_quantile_points(base, max(2, n // 2), precision)
        out = []
        for u, w in pts:
            s = complex(mp.sqrt(mp.mpc(1) + u))
            out.append((s, w / 2))
            out.append((-s, w / 2))
        return out
    raise UnsupportedKind(f"no curve sampling for {spec.kind}")


def disk_rect_mass(r, x0, x1, y0, y1):
    """Area of the disk |z| <= r intersected with [x0,x1] x [y0,y1]."""

    def corner(x, y):
        # area of disk intersect [0,x] x [0,y], x,y >= 0
        if x <= 0 or y <= 0 or r <= 0:
            return 0.0
        x, y = min(x, r), min(y, r)
        if x * x + y * y <= r * r:
            return x * y  # rectangle fully inside the disk
        return ((x * math.sqrt(r * r - x * x) + y * math.sqrt(r * r - y * y)) / 2
                + (r * r / 2) * (math.asin(x / r) + math.asin(y / r) - math.pi / 2))

    def signed(x, y):
        s = 1.0
        if x < 0:
            x, s = -x, -s
        if y < 0:
            y, s = -y, -s
        return s * corner(x, y)

    return signed(x1, y1) - signed(x0, y1) - signed(x1, y0) + signed(x0, y0)


def box_mass(spec, x0, x1, y0, y1, precision=128, curve_cache=None):
    """Measure of the rectangle [x0,x1] x [y0,y1]."""
    p = spec.params
    if is_real_line(spec) and spec.kind != EMPIRICAL_POINTS:
        if y0 > 0 or y1 < 0:
            return 0.0
        return float(cdf(spec, x1, precision) - cdf(spec, x0, precision))
    if spec.kind == EMPIRICAL_POINTS:
        return math.fsum(w for x, y, w in p["points"]
                         if x0 <= x < x1 and y0 <= y < y1)
    if spec.kind == ANNULUS_UNIFORM:
        r1, r2 = p["r_in"], p["r_out"]
        area = disk_rect_mass(r2, x0, x1, y0, y1) - disk_rect_mass(r1, x0, x1, y0, y1)
        return area / (math.pi * (r2 * r2 - r1 * r1))
    if curve_cache is None:
        curve_cache = curve_quantile_points(spec, 8192, precision)
    return math.fsum(w for z, w in curve_cache
                     if x0 <= z.real < x1 and y0 <= z.imag < y1)


# ---------------------------------------------------------------- admissibility

@dataclass
class AdmissibilityReport:
    catalog: list
    values: list
    min_value: float
    passed: bool
    tolerance: float = 1e-3

    def worst(self):
        k = int(np.argmin(self.values))
        return self.catalog[k], self.values[k]


# x, x +- 1, x^2 +- x +- 1, and the cyclotomics Phi_1..Phi_12
_FIXED_CATALOG = [
    [0, 1], [-1, 1], [1, 1],
    [1, 1, 1], [-1, 1, 1], [1, -1, 1], [-1, -1, 1],
    [1, 0, 1],                       # Phi_4
    [1, 1, 1, 1, 1],                 # Phi_5
    [1, 1, 1, 1, 1, 1, 1],           # Phi_7
    [1, 0, 0, 0, 1],                 # Phi_8
    [1, 0, 0, 1, 0, 0, 1],           # Phi_9
    [1, -1, 1, -1, 1],               # Phi_10
    [1] * 11,                        # Phi_11
    [1, 0, -1, 0, 1],                # Phi_12
]


def _primitive_catalog(max_degree, max_height, budget):
    """Primitive integer polynomials, positive leading coefficient, deduplicated."""
    out = []
    seen = set()
    for deg in range(1, max_degree + 1):
        span = range(-max_height, max_height + 1)

        def rec(coeffs):
            if len(out) > budget:
                raise CatalogTooLarge(f"admissibility catalog exceeds {budget}")
            if len(coeffs) == deg:
                for lead in range(1, max_height + 1):
                    cs = tuple(coeffs + [lead])
                    g = 0
                    for c in cs:
                        g = math.gcd(g, abs(c))
                    if g != 1:
                        continue
                    if cs in seen:
                        continue
                    seen.add(cs)
                    out.append(IntPoly(cs))
                return
            for c in span:
                rec(coeffs + [c])

        rec([])
    for cs in _FIXED_CATALOG:
        t = tuple(cs)
        if t not in seen:
            seen.add(t)
            out.append(IntPoly(t))
    return out


def admissibility_check(spec, max_degree, max_height, tolerance=1e-3,
                        budget=200000, precision=128):
    """Finite necessary-condition screen: min over a catalog of integer
    polynomials Q of the integral of log|Q| d mu.

    Each integral is evaluated through the potential: log|Q| integrates to
    log|lead| + sum over roots of U(root).  This is a screen, not a proof of
    membership in the admissible class."""
    if max_degree < 1 or max_height < 1:
        raise ValueError("max_degree and max_height must be >= 1")
    catalog = _primitive_catalog(max_degree, max_height, budget)
    values = []
    for q in catalog:
        values.append(_log_integral(spec, q, precision))
    min_value = min(values)
    return AdmissibilityReport(catalog, values, float(min_value),
                               bool(min_value >= -tolerance), tolerance)


def _log_integral(spec, q, precision):
    """integral of log|Q| d mu via U at the roots of Q."""
    if spec.kind == EMPIRICAL_POINTS:
        acc = 0.0
        for x, y, w in spec.params["points"]:
            v = q(complex(x, y))
            if v == 0:
                return float("-inf")
            acc += w * math.log(abs(v))
        return acc
    roots = np.roots(list(reversed(q.coeffs)))  # high-first for numpy
    acc = mp.log(abs(q.coeffs[-1]))
    for rt in roots:
        u = potential(spec, complex(rt), precision)
        if not mp.isfinite(u):
            return float("-inf")
        acc += u
    return float(acc)
