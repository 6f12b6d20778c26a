"""Exact polynomial eigenstates from series truncation.

The ansatz R(r) = r^s exp(-gamma r^2/4) sum_j c_j r^j turns the radial
equation into the three-term recurrence

    c_{j+2} = A_j c_{j+1} + B_j c_j,
    A_j = -2Z / ((j+2)(j+2(s+1))),
    B_j = (gamma (j+s+1) - 2W) / ((j+2)(j+2(s+1))).

Killing the series at degree n (c_n != 0, c_{n+1} = c_{n+2} = 0) forces
W = gamma (n+s+1)/2, after which B_j = gamma (j-n) / ((j+2)(j+2(s+1))) and
the single remaining condition c_{n+1}(gamma) = 0 is a polynomial of degree
ceil(n/2) in gamma.  Each positive root gamma^(n,i) yields one exact bound
state; n is *not* the radial quantum number, so every state also carries its
actual node count.

All termination polynomials are built over exact rationals at Z = 1; roots
and coefficients for general Z follow from the exact covariance
gamma(Z) = gamma(1) Z^2, c_j(Z) = c_j(1) Z^j.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import exp, log

import mpmath
import numpy as np

from . import realroots
from .errors import NoQSSolutionError
from .model import ModelParams
from .realroots import RatPoly

# isolating intervals are narrowed to this absolute width before the float
# midpoint is taken; 2^-96 leaves double conversion correctly rounded with
# room to spare for every root down to gamma ~ 1e-6
_ISOLATION_WIDTH = Fraction(1, 2**96)


def recurrence_denominator(j: int, s: int) -> int:
    return (j + 2) * (j + 2 * (s + 1))


def recurrence_A(Z, s: int, j: int):
    """A_j of the recurrence; exact when Z is exact."""
    return -2 * Z / recurrence_denominator(j, s)


def recurrence_B(gamma, W, s: int, j: int):
    """B_j of the recurrence for a general shifted eigenvalue W."""
    return (gamma * (j + s + 1) - 2 * W) / recurrence_denominator(j, s)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Materialised A_j, B_j sequences for inspection and testing."""

    A: tuple
    B: tuple
    n_terms: int
    params: ModelParams
    W: float


def recurrence_coeffs(params: ModelParams, W: float, n_terms: int) -> RecurrenceCoeffs:
    A = tuple(recurrence_A(params.Z, params.s, j) for j in range(n_terms))
    B = tuple(recurrence_B(params.gamma, W, params.s, j) for j in range(n_terms))
    return RecurrenceCoeffs(A=A, B=B, n_terms=n_terms, params=params, W=W)


def ttrr_coefficients(params: ModelParams, W, n_terms: int) -> list:
    """Series coefficients c_0..c_{n_terms} generated by the recurrence.

    c_0 = 1 by normalisation and c_1 = -2 Z c_0 / (2s+1) comes from the
    j = -1 relation.  Arithmetic stays exact (Fraction) when W is an int or
    Fraction; Z and gamma are then lifted to their exact binary rationals.
    """
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    exact = isinstance(W, (int, Fraction)) and not isinstance(W, bool)
    if exact:
        Z: object = Fraction(params.Z)
        gamma: object = Fraction(params.gamma)
        one: object = Fraction(1)
    else:
        Z, gamma, one = params.Z, params.gamma, 1.0
    s = params.s
    c = [one, -2 * Z * one / (2 * s + 1)]
    for j in range(n_terms - 1):
        c.append(recurrence_A(Z, s, j) * c[j + 1] + recurrence_B(gamma, W, s, j) * c[j])
    return c[: n_terms + 1]


@dataclass(frozen=True)
class TerminationPolynomial:
    """c_{n+1} viewed as an exact polynomial in gamma (lowest degree first)."""

    n: int
    s: int
    Z: Fraction
    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return realroots.degree(list(self.coeffs))

    def __call__(self, gamma):
        acc = 0 * gamma if not isinstance(gamma, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * gamma + (c if isinstance(gamma, Fraction) else float(c))
        return acc


def _termination_poly_coeffs(n: int, s: int, Z: Fraction) -> tuple[Fraction, ...]:
    """Run the recurrence symbolically in gamma with B_j = gamma(j-n)/D_j."""
    c: list[RatPoly] = [[Fraction(1)], [Fraction(-2) * Z / (2 * s + 1)]]
    for j in range(n):
        d = recurrence_denominator(j, s)
        a = Fraction(-2) * Z / d
        nxt: RatPoly = [a * v for v in c[j + 1]]
        # + gamma (j - n)/d * c_j  (multiplication by gamma shifts degrees up)
        factor = Fraction(j - n, d)
        shifted = [Fraction(0)] + [factor * v for v in c[j]]
        if len(shifted) > len(nxt):
            nxt += [Fraction(0)] * (len(shifted) - len(nxt))
        for k, v in enumerate(shifted):
            nxt[k] += v
        c.append(nxt)
    return tuple(realroots.trim(c[n + 1]) or [Fraction(0)])


def termination_polynomial(n: int, s: int, Z) -> TerminationPolynomial:
    """The truncation condition c_{n+1}(gamma) = 0 for degree-n solutions.

    For n = 0 this is the gamma-free constant -2Z/(2s+1): no field strength
    terminates the series at degree zero unless Z = 0.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    Zq = Fraction(Z)
    if Zq <= 0:
        raise ValueError(f"termination condition requires Z > 0, got {Z}")
    return TerminationPolynomial(n=n, s=s, Z=Zq, coeffs=_termination_poly_coeffs(n, s, Zq))


@dataclass(frozen=True)
class QSSolution:
    """One exact polynomial eigenstate R(r) = r^s e^{-gamma r^2/4} P(r).

    `i` indexes roots of the termination polynomial in decreasing gamma
    (i = 1 is the largest).  Coefficients use the c_0 = 1 normalisation.
    `gamma_exact`/`coeffs_exact` are set when the root is rational (always
    the case for n <= 2).
    """

    n: int
    s: int
    i: int
    Z: float
    gamma_root: float
    W: float
    coeffs: tuple[float, ...]
    node_count: int
    gamma_exact: Fraction | None = None
    coeffs_exact: tuple[Fraction, ...] | None = None
    isolating_interval: tuple[Fraction, Fraction] | None = None

    @property
    def W_exact(self) -> Fraction | None:
        if self.gamma_exact is None:
            return None
        return self.gamma_exact * (self.n + self.s + 1) / 2


@dataclass(frozen=True)
class QSSolutionSet:
    """Solutions for one (n, s, Z) plus root-exclusion diagnostics."""

    n: int
    s: int
    Z: float
    solutions: tuple[QSSolution, ...]
    excluded_nonpositive: int
    excluded_nonreal: int
    had_multiple_roots: bool

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __getitem__(self, idx):
        return self.solutions[idx]


def _unit_series(n: int, s: int, xi) -> list:
    """d_0..d_n from the truncated recurrence at Z = 1, field xi."""
    exact = isinstance(xi, Fraction)
    one = Fraction(1) if exact else 1.0
    d = [one, -2 * one / (2 * s + 1)]
    for j in range(n - 1):
        denom = recurrence_denominator(j, s)
        d.append((-2 * d[j + 1] + xi * (j - n) * d[j]) / denom)
    return d[: n + 1]


@lru_cache(maxsize=None)
def _unit_solutions(n: int, s: int):
    """Root data of the termination polynomial at Z = 1, gamma descending."""
    poly = list(_termination_poly_coeffs(n, s, Fraction(1)))
    deg = realroots.degree(poly)
    if deg < 1:
        raise NoQSSolutionError(
            f"no QS solution at n={n} for Z != 0: c_{n + 1} is constant in gamma"
        )
    intervals, multiple = realroots.isolate_positive_roots(poly)
    sf, _ = realroots.square_free_part(poly)
    n_real = realroots.count_real_distinct(poly)
    n_pos = len(intervals)
    nonpositive = n_real - n_pos
    nonreal = realroots.degree(sf) - n_real

    roots = []
    for lo, hi in intervals:
        if deg == 1:
            xi_exact: Fraction | None = -poly[0] / poly[1]
            lo = hi = xi_exact
        else:
            lo, hi = realroots.refine(poly, lo, hi, _ISOLATION_WIDTH)
            xi_exact = lo if lo == hi else None
        mid = (lo + hi) / 2
        roots.append((float(mid), xi_exact, (lo, hi)))
    roots.sort(key=lambda t: -t[0])
    return tuple(roots), nonpositive, nonreal, multiple


def qs_solutions(n: int, s: int, Z: float) -> QSSolutionSet:
    """All exact degree-n eigenstates at charge Z, sorted by gamma descending.

    Complex or non-positive roots of the termination polynomial never yield
    bound states; they are counted in the diagnostics fields instead of
    being silently dropped.
    """
    if n < 1:
        if n == 0:
            raise NoQSSolutionError("no QS solution at n=0 for Z != 0")
        raise ValueError(f"n must be >= 1, got {n}")
    if Z <= 0:
        raise ValueError(f"qs_solutions requires Z > 0, got {Z}")
    roots, nonpositive, nonreal, multiple = _unit_solutions(n, s)
    Zsq = Z * Z
    sols = []
    for idx, (xi, xi_exact, interval) in enumerate(roots, start=1):
        if xi_exact is not None:
            d_exact = _unit_series(n, s, xi_exact)
            Zq = Fraction(Z)
            coeffs_exact = tuple(dj * Zq**j for j, dj in enumerate(d_exact))
            gamma_exact = xi_exact * Zq * Zq
            d_float = [float(v) for v in d_exact]
            node_poly = d_exact
        else:
            coeffs_exact = None
            gamma_exact = None
            d_float = _unit_series(n, s, xi)
            node_poly = [Fraction(v) for v in d_float]
        nodes = realroots.count_positive_distinct(list(node_poly))
        gamma = xi * Zsq
        sols.append(
            QSSolution(
                n=n,
                s=s,
                i=idx,
                Z=Z,
                gamma_root=gamma,
                W=gamma * (n + s + 1) / 2.0,
                coeffs=tuple(dj * Z**j for j, dj in enumerate(d_float)),
                node_count=nodes,
                gamma_exact=gamma_exact,
                coeffs_exact=coeffs_exact,
                isolating_interval=interval,
            )
        )
    return QSSolutionSet(
        n=n,
        s=s,
        Z=Z,
        solutions=tuple(sols),
        excluded_nonpositive=nonpositive,
        excluded_nonreal=nonreal,
        had_multiple_roots=multiple,
    )


def gamma_root_highprec(n: int, s: int, Z: float, i: int, digits: int = 40) -> mpmath.mpf:
    """Root gamma^(n,i) refined to `digits` significant figures."""
    roots, *_ = _unit_solutions(n, s)
    if not 1 <= i <= len(roots):
        raise ValueError(f"root index i={i} out of range 1..{len(roots)}")
    xi, xi_exact, (lo, hi) = roots[i - 1]
    poly = list(_termination_poly_coeffs(n, s, Fraction(1)))
    if xi_exact is None:
        width = Fraction(1, 10 ** (digits + 5))
        lo, hi = realroots.refine(poly, lo, hi, width)
        xi_exact = (lo + hi) / 2
    with mpmath.workdps(digits + 10):
        return mpmath.mpf(xi_exact.numerator) / xi_exact.denominator * mpmath.mpf(Z) ** 2


def count_nodes(solution: QSSolution) -> int:
    """Distinct roots of the coefficient polynomial in (0, inf).

    Counting runs a Sturm chain over exact rationals (float coefficients are
    lifted to their exact binary values), so the count is certified for the
    stored polynomial.
    """
    if solution.coeffs[-1] == 0:
        raise ValueError("leading coefficient c_n must be nonzero")
    poly: RatPoly = (
        list(solution.coeffs_exact)
        if solution.coeffs_exact is not None
        else [Fraction(c) for c in solution.coeffs]
    )
    return realroots.count_positive_distinct(poly)


def qs_wavefunction(solution: QSSolution, r):
    """R(r) = r^s e^{-gamma r^2/4} sum_j c_j r^j with c_0 = 1 (not L2-normalised)."""
    r = np.asarray(r, dtype=float)
    p = np.zeros_like(r)
    for c in reversed(solution.coeffs):
        p = p * r + c
    out = r**solution.s * np.exp(-solution.gamma_root * r * r / 4.0) * p
    return out if out.ndim else float(out)


def _horner_with_derivatives(coeffs: tuple[float, ...], r: float) -> tuple[float, float, float]:
    p = pp = ppp = 0.0
    for c in reversed(coeffs):
        ppp = ppp * r + 2.0 * pp
        pp = pp * r + p
        p = p * r + c
    return p, pp, ppp  # P, P', P''


def residual_check(solution: QSSolution, sample_points=(0.1, 1.0, 3.0)) -> float:
    """Max relative residual of (H - W) R over the samples.

    The radial operator is applied in closed form (the polynomial factor is
    differentiated exactly; the r^s Gaussian weight contributes s/r - gamma
    r/2 terms), so exact solutions are annihilated to roundoff: <= 1e-10 in
    double precision.  The denominator floor guards samples that land near a
    node of R.
    """
    gamma, W, s, Z = solution.gamma_root, solution.W, solution.s, solution.Z
    floor = 1e-12 * (1.0 + abs(W))
    worst = 0.0
    for r in sample_points:
        if r <= 0:
            raise ValueError(f"sample points must be positive, got {r}")
        P, dP, ddP = _horner_with_derivatives(solution.coeffs, r)
        g = s / r - gamma * r / 2.0
        dg = -s / (r * r) - gamma / 2.0
        f = r**s * exp(-gamma * r * r / 4.0)
        lap = ddP + 2.0 * g * dP + (g * g + dg) * P + (dP + g * P) / r
        hmw = -0.5 * lap + (s * s / (2.0 * r * r) + gamma**2 * r * r / 8.0 - Z / r - W) * P
        resid = abs(f * hmw) / (abs(W) * abs(f * P) + floor)
        worst = max(worst, resid)
    return worst


def extend_recurrence(solution: QSSolution, extra: int = 2) -> list[float]:
    """c_{n+1}..c_{n+extra} from the recurrence; all ~0 for a true solution."""
    gamma, W, s, Z = solution.gamma_root, solution.W, solution.s, solution.Z
    c = list(solution.coeffs) + [0.0] * extra
    out = []
    for j in range(solution.n - 1, solution.n - 1 + extra):
        val = recurrence_A(Z, s, j) * c[j + 1] + recurrence_B(gamma, W, s, j) * c[j]
        c[j + 2] = val
        out.append(val)
    return out
