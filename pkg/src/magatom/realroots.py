"""Certified real-root counting and isolation for rational polynomials.

Polynomials are coefficient lists over `fractions.Fraction`, lowest degree
first.  Root counting uses Sturm chains, so every count and every isolating
interval is exact; refinement is plain interval bisection and therefore
keeps the certificate at any requested width.
"""

from __future__ import annotations

from fractions import Fraction

RatPoly = list[Fraction]


def trim(p: RatPoly) -> RatPoly:
    """Drop trailing zero coefficients (the zero polynomial trims to [])."""
    q = list(p)
    while q and q[-1] == 0:
        q.pop()
    return q


def degree(p: RatPoly) -> int:
    q = trim(p)
    return len(q) - 1 if q else -1


def evaluate(p: RatPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: RatPoly) -> RatPoly:
    return [k * c for k, c in enumerate(p)][1:]


def _polyrem(a: RatPoly, b: RatPoly) -> RatPoly:
    """Remainder of a / b over the rationals."""
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero polynomial")
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and trim(r):
        r = trim(r)
        if len(r) - 1 < db:
            break
        q = r[-1] / lb
        shift = len(r) - 1 - db
        for i, c in enumerate(b):
            r[i + shift] -= q * c
        r = r[:-1]
    return trim(r)


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd over the rationals."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, _polyrem(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def square_free_part(p: RatPoly) -> tuple[RatPoly, bool]:
    """Return (p / gcd(p, p'), had_multiple_roots)."""
    p = trim(p)
    if degree(p) < 1:
        return p, False
    g = poly_gcd(p, derivative(p))
    if degree(g) < 1:
        return p, False
    # exact division p // g
    q: RatPoly = []
    r = list(p)
    dg, lg = len(g) - 1, g[-1]
    for _ in range(len(p) - len(g) + 1):
        r = trim(r)
        if len(r) - 1 < dg:
            break
        c = r[-1] / lg
        q.append(c)
        shift = len(r) - 1 - dg
        for i, gc in enumerate(g):
            r[i + shift] -= c * gc
        r = r[:-1]
    q.reverse()
    return trim(q), True


def sturm_chain(p: RatPoly) -> list[RatPoly]:
    chain = [trim(p), trim(derivative(p))]
    while chain[-1]:
        rem = _polyrem(chain[-2], chain[-1])
        chain.append([-c for c in rem])
    chain.pop()
    return chain


def _variations(values: list[Fraction]) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(chain: list[RatPoly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] for a square-free chain."""
    va = _variations([evaluate(q, a) for q in chain])
    vb = _variations([evaluate(q, b) for q in chain])
    return va - vb


def root_bound(p: RatPoly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_positive_roots(p: RatPoly) -> tuple[list[tuple[Fraction, Fraction]], bool]:
    """Disjoint intervals (lo, hi], each containing exactly one distinct
    positive root of p; exact roots degenerate to lo == hi.

    Returns (intervals, had_multiple_roots).  Intervals are sorted ascending.
    """
    p = trim(p)
    if degree(p) < 1:
        return [], False
    sf, multiple = square_free_part(p)
    chain = sturm_chain(sf)
    out: list[tuple[Fraction, Fraction]] = []
    bound = root_bound(sf)
    stack = [(Fraction(0), bound, count_roots(chain, Fraction(0), bound))]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if evaluate(sf, mid) == 0:
            out.append((mid, mid))
            k -= 1
        k_left = count_roots(chain, lo, mid)
        if evaluate(sf, mid) == 0:
            k_left -= 1  # (lo, mid] counted the midpoint root
        stack.append((lo, mid, k_left))
        stack.append((mid, hi, k - k_left))
    out.sort()
    return out, multiple


def refine(p: RatPoly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval down to the requested width."""
    if lo == hi:
        return lo, hi
    flo = evaluate(p, lo)
    if flo == 0:
        return lo, lo
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = evaluate(p, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def count_distinct_in(p: RatPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of p in (lo, hi], multiplicities collapsed."""
    p = trim(p)
    if degree(p) < 1:
        return 0
    sf, _ = square_free_part(p)
    return count_roots(sturm_chain(sf), lo, hi)


def count_positive_distinct(p: RatPoly) -> int:
    """Distinct real roots of p in (0, inf)."""
    p = trim(p)
    if degree(p) < 1:
        return 0
    sf, _ = square_free_part(p)
    return count_roots(sturm_chain(sf), Fraction(0), root_bound(sf))


def count_real_distinct(p: RatPoly) -> int:
    """Distinct real roots of p on the whole line."""
    p = trim(p)
    if degree(p) < 1:
        return 0
    sf, _ = square_free_part(p)
    b = root_bound(sf)
    return count_roots(sturm_chain(sf), -b, b)
