"""Certified real-root isolation and refinement for EpsPoly.

Strategy: coefficients are exactified (numeric coefficients are dyadic
rationals, so this is lossless), the polynomial is split into square-free
factors carrying multiplicities, each factor's roots are isolated by
Sturm-count bisection, and every isolated root is then either identified as
an exact rational (candidate testing up to a denominator bound) or refined
numerically to the requested tolerance.

Sturm counts rather than bare endpoint signs drive the bisection so that
root pairs hiding inside one subinterval cannot be missed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd, lcm as int_lcm

from mpmath import mp, mpf

from .errors import DegenerateInputError
from .polynomials import EpsPoly
from .scalars import EXACT, to_bigreal, to_rational, working_precision

RATIONAL_DENOMINATOR_BOUND = 10**6

# ---------------------------------------------------------------------------
# dense Fraction/int coefficient helpers (ascending order)


def _strip(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return coeffs[:n]


def _eval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _primitive(coeffs):
    """Scale by a positive rational to primitive integer coefficients."""
    coeffs = _strip(list(coeffs))
    if not coeffs:
        return []
    den = int_lcm(*(Fraction(c).denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = int_gcd(g, abs(c))
    return [c // g for c in ints]


def _rem(a, b):
    """Remainder of a by b over the rationals."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db:
        if not a[-1]:
            a.pop()
            continue
        da = len(a) - 1
        q = a[-1] / lb
        for i in range(db + 1):
            a[da - db + i] -= q * b[i]
        a.pop()
    while a and not a[-1]:
        a.pop()
    return a


def _divide_exact(a, b):
    """Exact quotient a / b over the rationals (remainder must vanish)."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    db, lb = len(b) - 1, b[-1]
    quot = [Fraction(0)] * max(len(a) - db, 1)
    while len(a) - 1 >= db:
        if not a[-1]:
            a.pop()
            continue
        da = len(a) - 1
        q = a[-1] / lb
        quot[da - db] = q
        for i in range(db + 1):
            a[da - db + i] -= q * b[i]
        a.pop()
    if _strip(a):
        raise ArithmeticError("polynomial division was expected to be exact")
    return _strip(quot)


def _gcd(a, b):
    """Primitive integer gcd of two polynomials (positive leading scale)."""
    a, b = _primitive(a), _primitive(b)
    if not a:
        return b
    if not b:
        return a
    while b:
        a, b = b, _primitive(_rem(a, b))
    return a


def _squarefree_decomposition(coeffs):
    """Musser decomposition: list of (primitive square-free factor, multiplicity)."""
    f = _primitive(coeffs)
    if len(f) <= 1:
        return []
    g = _gcd(f, _derivative(f))
    if len(g) == 1:
        return [(f, 1)]
    out = []
    w = _primitive(_divide_exact(f, g))
    i = 1
    while len(w) > 1:
        y = _gcd(w, g)
        factor = _primitive(_divide_exact(w, y))
        if len(factor) > 1:
            out.append((factor, i))
        w = y
        g = _primitive(_divide_exact(g, y))
        i += 1
    return out


# ---------------------------------------------------------------------------
# Sturm sequences


def sturm_chain(coeffs):
    """Sturm sequence of a square-free integer polynomial.

    Each remainder is normalised by a positive rational only, which preserves
    the sign structure the count relies on.
    """
    chain = [_primitive(coeffs), _primitive(_derivative(coeffs))]
    while chain[-1]:
        r = _rem(chain[-2], chain[-1])
        if not _strip(r):
            break
        chain.append(_primitive([-c for c in r]))
    return chain


def _variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def _count_open_closed(chain, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b]."""
    return _variations(chain, a) - _variations(chain, b)


def count_real_roots(p: EpsPoly, lo, hi) -> int:
    """Distinct real roots of p in the closed interval [lo, hi]."""
    coeffs = [to_rational(c) for c in p.coefficients]
    if not _strip(coeffs):
        raise DegenerateInputError("cannot count roots of the zero polynomial")
    lo, hi = to_rational(lo), to_rational(hi)
    total = 0
    for factor, _ in _squarefree_decomposition(coeffs):
        chain = sturm_chain(factor)
        total += _count_open_closed(chain, lo, hi)
        if _eval(factor, lo) == 0:
            total += 1
    return total


def _isolate(factor, lo: Fraction, hi: Fraction):
    """Disjoint intervals (a, b] each holding exactly one root of a
    square-free factor; exact hits are returned as (r, r)."""
    chain = sturm_chain(factor)
    found = []
    if _eval(factor, lo) == 0:
        found.append((lo, lo))
    stack = [(lo, hi, _count_open_closed(chain, lo, hi))]
    while stack:
        a, b, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            if _eval(factor, b) == 0:
                found.append((b, b))
            else:
                found.append((a, b))
            continue
        mid = (a + b) / 2
        while _eval(factor, mid) == 0:
            # never split at a root; nudge the split point toward a
            mid = a + (mid - a) * Fraction(136, 137)
        left = _count_open_closed(chain, a, mid)
        stack.append((a, mid, left))
        stack.append((mid, b, count - left))
    return found


# ---------------------------------------------------------------------------
# rational reconstruction


def simplest_rational_between(a: Fraction, b: Fraction) -> Fraction:
    """The rational with the smallest denominator in [a, b]."""
    if a > b:
        a, b = b, a
    if a == b:
        return a
    if a <= 0 <= b:
        return Fraction(0)
    if b < 0:
        return -simplest_rational_between(-b, -a)
    fa = a.numerator // a.denominator
    if a.denominator == 1:
        return a
    if fa + 1 <= b:
        return Fraction(fa + 1)
    return fa + 1 / simplest_rational_between(1 / (b - fa), 1 / (a - fa))


def rational_candidates(a: Fraction, b: Fraction, hints=(), max_denominator=RATIONAL_DENOMINATOR_BOUND):
    """Plausible exact rationals inside [a, b]: hint-denominator roundings
    plus the simplest rational in the interval (when its denominator is small)."""
    mid = (a + b) / 2
    out = []
    for d in hints:
        d = int(d)
        if d <= 0:
            continue
        cand = Fraction(round(mid * d), d)
        if a <= cand <= b and cand not in out:
            out.append(cand)
    simplest = simplest_rational_between(a, b)
    if simplest.denominator <= max_denominator and simplest not in out:
        out.append(simplest)
    return out


# ---------------------------------------------------------------------------
# refinement


def _bisect_exact(factor, a: Fraction, b: Fraction, chain, width: Fraction):
    """Shrink (a, b] below ``width`` keeping exactly one root inside."""
    fa = _eval(factor, a)
    while b - a > width:
        mid = (a + b) / 2
        fm = _eval(factor, mid)
        if fm == 0:
            return mid, mid
        if fa != 0 and (fm > 0) == (fa > 0):
            a, fa = mid, fm
        elif fa != 0:
            b = mid
        else:
            # endpoint sits on a root of another factor; fall back to counts
            if _count_open_closed(chain, a, mid) == 1:
                b = mid
            else:
                a, fa = mid, _eval(factor, mid)
    return a, b


def _refine_bigreal(factor, a: Fraction, b: Fraction, tol) -> mpf:
    """Bisect in BigReal arithmetic until the bracket is below tol."""
    tol_b = to_bigreal(tol)
    if not tol_b > 0:
        raise ValueError("tolerance must be positive")
    dps = max(64, int(-mp.log10(tol_b)) + 20)
    with working_precision(dps):
        coeffs = [to_bigreal(c) for c in factor]

        def f(x):
            acc = mpf(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        xa, xb = to_bigreal(a), to_bigreal(b)
        fa = f(xa)
        for _ in range(dps * 4):
            if xb - xa <= tol_b:
                break
            mid = (xa + xb) / 2
            fm = f(mid)
            if fm == 0:
                return mid
            if (fm > 0) == (fa > 0):
                xa, fa = mid, fm
            else:
                xb = mid
        return (xa + xb) / 2


def real_roots(p: EpsPoly, interval, tol, denominator_hints=()):
    """All real roots of p in [lo, hi], ascending, with multiplicity.

    In exact mode, rational roots are reported exactly (as Fractions) when
    candidate testing identifies them; other roots are refined in BigReal
    arithmetic to absolute tolerance ``tol``.  In numeric mode every root is
    reported as a BigReal.
    """
    if not isinstance(p, EpsPoly):
        raise TypeError("expected an EpsPoly")
    if p.is_zero:
        raise DegenerateInputError("the zero polynomial has every point as a root")
    lo, hi = interval
    lo, hi = to_rational(lo), to_rational(hi)
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    coeffs = [to_rational(c) for c in p.coefficients]
    if len(_strip(coeffs)) == 1:
        return []

    exact_mode = p.mode == EXACT
    reconstruction_width = Fraction(1, 4 * RATIONAL_DENOMINATOR_BOUND**2)
    results = []
    for factor, mult in _squarefree_decomposition(coeffs):
        chain = sturm_chain(factor)
        for a, b in _isolate(factor, lo, hi):
            if a == b:
                root = a if exact_mode else None
                if root is None:
                    root = to_bigreal(a, max(64, mp.dps))
                results.extend([root] * mult)
                continue
            a, b = _bisect_exact(factor, a, b, chain, reconstruction_width)
            root = None
            if a == b:
                root = a
            else:
                for cand in rational_candidates(a, b, hints=denominator_hints):
                    if _eval(factor, cand) == 0:
                        root = cand
                        break
            if root is not None and not exact_mode:
                root = to_bigreal(root, max(64, mp.dps))
            if root is None:
                root = _refine_bigreal(factor, a, b, tol)
            results.extend([root] * mult)
    results.sort(key=lambda r: to_rational(r))
    return results
