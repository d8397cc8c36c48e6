"""Exact rational re-derivations used as independent checks.

Only cases where C**i is rational (i in {0, 1}) are handled, so every value is
computed with :class:`fractions.Fraction` and no floating point.
"""
from fractions import Fraction as F


def effort(C, i):
    C, i = F(C), F(i)
    if i == 0:
        return F(1)
    if i == 1:
        return C
    raise ValueError("oracle handles only i in {0, 1}")


def points(C, i, K, O, MP, P):
    O, MP, P, K = F(O), F(MP), F(P), F(K)
    return effort(C, i) / (K * (P - O + 1)) * (O + 4 * MP + P) / 6


def rate(C, i, K, O, P):
    # Difference quotient of the affine count over one hour of MP.
    return points(C, i, K, O, 1, P) - points(C, i, K, O, 0, P)


def current(C, i, O, P):
    return 4 * effort(C, i) / (F(P) - F(O) + 1) ** 2


def potential(C, i, K, O, MP, P):
    n = points(C, i, K, O, MP, P)
    return current(C, i, O, P) - n * rate(C, i, K, O, P) ** 2 / 2
