"""Shared inverse-CDF tables for the offspring laws.

G is geometric on {0,1,...} with parameter 3/4: P[G=k] = 3/4^(k+1).
B is the size-biased variant P[B=k] = C(k+2,2) P[G=k] / gamma with
gamma = E[C(G+2,2)] = 16/9; equivalently B ~ NegBin(3, 3/4).

Both backends sample by comparing one uniform against the same float64
cumulative table (searchsorted side='right' in numpy, a linear scan in C),
so the two implementations are bit-identical by construction.  Tables are
truncated when the remaining tail mass drops below 2^-60; a draw landing
past the table end (probability < 2^-60) falls back to extending the CDF
one term at a time with the same float64 arithmetic in both backends.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_TAIL = Fraction(1, 2**60)


def _geometric_cdf():
    # P[G=k] = (3/4) (1/4)^k, exact, then one rounding to float64 per entry
    out = []
    acc = Fraction(0)
    pk = Fraction(3, 4)
    while 1 - acc >= _TAIL:
        acc += pk
        out.append(float(acc))
        pk /= 4
    return np.array(out, dtype=np.float64)


def _b_cdf():
    out = []
    acc = Fraction(0)
    k = 0
    while 1 - acc >= _TAIL:
        pk = Fraction((k + 1) * (k + 2), 2) * Fraction(3, 4**(k + 1)) * Fraction(9, 16)
        acc += pk
        out.append(float(acc))
        k += 1
    return np.array(out, dtype=np.float64)


G_CDF = _geometric_cdf()
B_CDF = _b_cdf()


def extend_fallback(u, cdf, law):
    """Index for a uniform beyond the table end; float64 recursion matching
    the table construction.  law is 'G' or 'B'."""
    k = len(cdf)
    acc = float(cdf[-1])
    while True:
        if law == "G":
            pk = 0.75 * 0.25**k
        else:
            pk = ((k + 1) * (k + 2) / 2) * (3.0 / 4.0 ** (k + 1)) * (9.0 / 16.0)
        acc += pk
        if u < acc:
            return k
        k += 1
