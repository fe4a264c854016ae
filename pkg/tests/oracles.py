"""Arbitrary-precision reference values, independent of the package code.

Everything here is written straight from the defining formulas with mpmath
and shares no code with ``concentric_casimir``.
"""
import functools

import mpmath as mp

DPS = 40


def _mpf(v):
    return mp.mpf(v) if not isinstance(v, mp.mpf) else v


@functools.lru_cache(maxsize=None)
def _riccati(l, x, dps=DPS):
    """(s_l, e_l, s_l', e_l') at x, derivatives with respect to x."""
    with mp.workdps(dps):
        x = _mpf(x)
        # s from the Bessel function; e from its terminating half-integer sum
        def s(k):
            if k == 0:
                return mp.sinh(x)
            return mp.sqrt(mp.pi * x / 2) * mp.besseli(k + mp.mpf(1) / 2, x)

        def e(k):
            total = mp.fsum(
                mp.factorial(k + j) / (mp.factorial(j) * mp.factorial(k - j) * (2 * x) ** j)
                for j in range(k + 1)
            )
            return mp.exp(-x) * total

        sl, el = s(l), e(l)
        sp = s(l - 1) - l * sl / x
        ep = -e(l - 1) - l * el / x
        return sl, el, sp, ep


def riccati(l, x, dps=DPS):
    return _riccati(int(l), float(x), dps)


def riccati_at(l, x, dps=DPS):
    """Like :func:`riccati` but for an mpf argument of any precision."""
    with mp.workdps(dps):
        return _riccati.__wrapped__(int(l), mp.mpf(x), dps)


def small_argument_series(l, x, terms=40, dps=DPS):
    """s_l(x) from its ascending series: x^(l+1)/(2l+1)!! * 0F1(; l+3/2; x^2/4)."""
    with mp.workdps(dps):
        x = _mpf(x)
        lead = x ** (l + 1) / mp.fac2(2 * l + 1)
        return lead * mp.hyp0f1(l + mp.mpf(3) / 2, x * x / 4)


def eigenvalues(l, x, y, n, dps=DPS):
    """(lambda_TM, lambda_TE) from the f- and g-factor products."""
    with mp.workdps(dps):
        n = _mpf(n)
        x, y = _mpf(x), _mpf(y)
        sx, ex, spx, epx = riccati_at(l, x, dps)
        sy, ey, spy, epy = riccati_at(l, y, dps)
        snx, _, spnx, _ = riccati_at(l, n * x, dps)
        _, eny, _, epny = riccati_at(l, n * y, dps)
        f1 = n * spx * snx - sx * spnx
        f2 = n * epy * eny - ey * epny
        f3 = n * epx * snx - ex * spnx
        f4 = n * eny * spy - epny * sy
        g1 = spx * snx - n * sx * spnx
        g2 = epy * eny - n * ey * epny
        g3 = epx * snx - n * ex * spnx
        g4 = eny * spy - n * epny * sy
        return f1 * f2 / (f3 * f4), g1 * g2 / (g3 * g4)


def metal_eigenvalues(l, x, y, dps=DPS):
    """Perfect-conductor (TM, TE) from the n -> infinity limit of the f/g forms."""
    with mp.workdps(dps):
        sx, ex, spx, epx = riccati_at(l, x, dps)
        sy, ey, spy, epy = riccati_at(l, y, dps)
        return spx * epy / (epx * spy), sx * ey / (ex * sy)


def zero_mode_tm_limit(l, ratio, n, dps=60):
    """x -> 0 limit of lambda_TM at constant n, by evaluating at tiny x."""
    with mp.workdps(dps):
        x = mp.mpf(10) ** (-12)
        tm, _ = eigenvalues(l, x, x / _mpf(ratio), n, dps)
        return tm


def metal_zero_mode_sum(ratio, dps=30):
    """Sum over l of (2l+1) ln(1 - r^(2l+1)), summed to its tail."""
    with mp.workdps(dps):
        r = _mpf(ratio)
        return mp.nsum(lambda l: (2 * l + 1) * mp.log(1 - r ** (2 * l + 1)), [1, mp.inf])


def free_energy(ratio, t, n, lmax=40, mmax=40, dps=25):
    """Brute-force beta F on a fixed (l, m) box, m = 0 from the x -> 0 limit."""
    with mp.workdps(dps):
        r = _mpf(ratio)
        total = mp.mpf(0)
        for l in range(1, lmax + 1):
            total += (2 * l + 1) * mp.log(1 - zero_mode_tm_limit(l, r, n, dps=dps + 30)) / 2
        for m in range(1, mmax + 1):
            x = m * _mpf(t)
            y = x / r
            for l in range(1, lmax + 1):
                tm, te = eigenvalues(l, x, y, n, dps)
                term = (2 * l + 1) * (mp.log(1 - tm) + mp.log(1 - te))
                total += term
                if abs(term) < mp.mpf(10) ** (-dps + 5):
                    break
        return total
