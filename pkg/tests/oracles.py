"""Independent ground truths shared by the test modules."""
import math
from fractions import Fraction

import mpmath

from aitbench.enumeration import dovetail


def lower_prefix(alpha, n):
    """n-bit prefix of the expansion of alpha that does not end in zeros."""
    v = math.ceil(Fraction(alpha) * (1 << n)) - 1
    return format(v, f"0{n}b") if n else ""


def stage_values(m):
    """Increasing measures found by dovetailing m for t steps on lengths <= t."""
    values = []
    longest = m.max_program_length
    for t in range(1, max(longest, m.step_ceiling(longest)) + 1):
        v = sum((Fraction(1, 1 << len(e.program)) for e in dovetail(m, t, t)), Fraction(0))
        if v and (not values or v > values[-1]):
            values.append(v)
    return values


def mp(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def census_reference(L, T):
    """Sum over a >= 1 with a + 2*floor(log2 a) + 1 <= L of 2^a 2^(-length/T)."""
    with mpmath.workprec(300):
        total = mpmath.mpf(0)
        a = 1
        while a + 2 * (a.bit_length() - 1) + 1 <= L:
            length = a + 2 * (a.bit_length() - 1) + 1
            total += mpmath.power(2, a - mpmath.mpf(length) / mp(T))
            a += 1
        return +total
