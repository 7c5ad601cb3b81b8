"""Shared precision bookkeeping and mpmath conversion helpers."""

import mpmath as mp

# Default working precision in bits for a degree-n synthesis run.  Intermediate
# lattice coordinates scale like e^{n (k log|z| - U)} so the budget must grow
# linearly with the degree; 12 bits per degree tracks the regime where
# degree-290 outputs carry ~105-digit coefficients.
def default_precision(n):
    return max(256, 12 * int(n))


def prec_to_dps(prec):
    """Decimal digits that round-trip a binary precision of `prec` bits."""
    return int(prec * 0.30103) + 3


def mpf_to_str(x, prec):
    """Decimal string for an mpf that round-trips at `prec` bits."""
    with mp.workprec(prec + 8):
        return mp.nstr(mp.mpf(x), prec_to_dps(prec), strip_zeros=True)


def str_to_mpf(s, prec):
    with mp.workprec(prec + 8):
        return mp.mpf(s)


def clamp(x, lo, hi):
    return lo if x < lo else hi if x > hi else x


def round_half_up(x):
    """Nearest integer, ties toward +infinity (matches the rounding rule of the
    nearest-integer-polynomial step)."""
    return int(mp.floor(x + mp.mpf("0.5")))
