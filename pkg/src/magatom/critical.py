"""Critical field strengths: the gamma at which W_{nu,s}(gamma) crosses zero.

W is strictly increasing in gamma (Hellmann-Feynman), so each level has a
single crossing.  The search brackets the sign change on the Rayleigh-Ritz
eigenvalue curve (basis family picked by the gamma-regime helper, base size
escalated at the bracket endpoints until the eigenvalue is converged), then
runs a safeguarded bisection to the requested residual |W(gamma_c)| <= tol.

For the exponential family the decay constant alpha is tuned to the level
under study: near the crossing the state extends to the classical turning
point r_t = (8Z/gamma^2)^{1/3}, far beyond the fixed alpha = 1 scale, and
with alpha = 1 the double-precision basis ceiling cannot even bracket
nu >= 3.  Every fixed alpha still gives a variational upper bound that is
monotone in gamma, so tuning alpha only tightens the curve and never breaks
the bracketing logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, log

import numpy as np
import scipy.optimize

from .errors import BracketError, ConditioningError, NumericalError
from .model import ModelParams
from .ritz import BasisKind, BasisSpec, select_basis_kind, spectrum

DEFAULT_WINDOW = (1e-6, 1e3)
_ALPHA_BOUNDS = (0.02, 4.0)


@dataclass(frozen=True)
class CriticalGamma:
    """One critical field with its bracketing/residual certificate.

    `bracket` is the final sign-certified interval: W(lo) < 0 < W(hi).
    `converged` records whether the endpoint eigenvalues reached the
    tol/10 Cauchy target before the basis-size ceiling; `w_cauchy` is the
    last Cauchy difference either way.
    """

    nu: int
    s: int
    Z: float
    gamma_c: float
    residual: float
    basis_used: str
    bracket: tuple[float, float]
    N_used: int
    alpha: float | None
    converged: bool
    w_cauchy: float
    uncertainty: float


def _turning_point(Z: float, gamma: float) -> float:
    return (8.0 * Z / (gamma * gamma)) ** (1.0 / 3.0)


def _heuristic_alpha(Z: float, gamma: float, N: int) -> float:
    """Match the last basis function's peak to the turning point."""
    a = (N - 1) / (2.0 * _turning_point(Z, gamma))
    return min(max(a, _ALPHA_BOUNDS[0]), _ALPHA_BOUNDS[1])


def _w_level(nu: int, s: int, Z: float, gamma: float, N: int, alpha: float,
             precision: str, dps: int) -> float:
    params = ModelParams(Z=Z, gamma=gamma, m=s)
    kind = select_basis_kind(gamma)
    if kind == BasisKind.GAUSSIAN:
        basis = BasisSpec(kind=kind, N=N, s=s, gamma=gamma)
    else:
        basis = BasisSpec(kind=kind, N=N, s=s, alpha=alpha)
    return float(spectrum(params, basis, precision=precision, dps=dps).W[nu])


def _optimize_alpha(nu: int, s: int, Z: float, gamma: float, N: int,
                    precision: str, dps: int) -> float:
    """alpha minimising the nu-th Ritz value (tightest upper bound)."""
    if gamma >= 1.0:
        return 1.0  # Gaussian regime; alpha unused
    if precision == "high":
        return _heuristic_alpha(Z, gamma, N)

    def objective(la: float) -> float:
        try:
            return _w_level(nu, s, Z, gamma, N, exp(la), precision, dps)
        except (ConditioningError, NumericalError):
            return np.inf

    res = scipy.optimize.minimize_scalar(
        objective,
        bounds=(log(_ALPHA_BOUNDS[0]), log(_ALPHA_BOUNDS[1])),
        method="bounded",
        options={"xatol": 1e-6},
    )
    return float(exp(res.x))


def critical_gamma(
    nu: int,
    s: int,
    Z: float,
    tol: float = 1e-9,
    precision: str = "double",
    n_max: int | None = None,
    dps: int = 40,
    window: tuple[float, float] = DEFAULT_WINDOW,
) -> CriticalGamma:
    """Locate gamma_c with |W_{nu,s}(gamma_c)| <= tol on the working curve.

    The returned value is only as good as the eigenvalue curve itself: when
    the basis ceiling is hit before the endpoint Cauchy test reaches tol/10
    the result is still returned, flagged `converged=False`, with the last
    Cauchy difference as an error indicator.
    """
    if Z <= 0:
        raise ValueError(f"critical_gamma requires Z > 0, got {Z}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if n_max is None:
        n_max = 12 if precision == "double" else 32
    lo_w, hi_w = window

    # stage 0: rough alpha from the hydrogenic/oscillator crossover guess
    guess = 4.0 * Z * Z / ((2 * nu + 2 * s + 1) ** 2 * (2 * nu + s + 1))
    guess = min(max(guess, 10 * lo_w), hi_w / 10)
    alpha = _optimize_alpha(nu, s, Z, guess, n_max, precision, dps)

    def w_at(gamma: float, N: int, a: float | None = None) -> float:
        use = a if a is not None else (
            alpha if precision != "high" else _heuristic_alpha(Z, gamma, N)
        )
        return _w_level(nu, s, Z, gamma, N, use, precision, dps)

    # stage 1: geometric expansion until the sign change is bracketed
    g_lo = g_hi = guess
    w_mid = w_at(guess, n_max)
    if w_mid < 0:
        w_lo, g = w_mid, guess
        while True:
            g *= 3.0
            if g > hi_w:
                raise BracketError(
                    f"no sign change of W_(nu={nu}, s={s}) for gamma <= {hi_w}"
                )
            w = w_at(g, n_max)
            if w > 0:
                g_lo, g_hi, w_hi = g / 3.0, g, w
                break
            w_lo = w
    else:
        w_hi, g = w_mid, guess
        while True:
            g /= 3.0
            if g < lo_w:
                raise BracketError(
                    f"no sign change of W_(nu={nu}, s={s}) for gamma >= {lo_w}"
                )
            w = w_at(g, n_max)
            if w < 0:
                g_lo, g_hi, w_lo = g, g * 3.0, w
                break
            w_hi = w

    # stage 2: pre-localise, then refresh alpha close to the crossing
    for _ in range(8):
        mid = 0.5 * (g_lo + g_hi)
        if w_at(mid, n_max) < 0:
            g_lo = mid
        else:
            g_hi = mid
    mid = 0.5 * (g_lo + g_hi)
    alpha = _optimize_alpha(nu, s, Z, mid, n_max, precision, dps)

    # stage 3: endpoint basis-size escalation to the tol/10 Cauchy target
    n_start = max(nu + 2, 6)
    cauchy = np.inf
    converged = False
    N_used = n_max
    prev = None
    for N in range(n_start, n_max + 1, 2):
        pair = (w_at(g_lo, N), w_at(g_hi, N))
        if prev is not None:
            cauchy = max(abs(pair[0] - prev[0]), abs(pair[1] - prev[1]))
            if cauchy <= tol / 10.0:
                converged = True
                N_used = N
                break
        prev = pair
        N_used = N
    w_lo, w_hi = w_at(g_lo, N_used), w_at(g_hi, N_used)
    if not (w_lo < 0 < w_hi):
        raise BracketError(
            f"bracket lost after basis escalation for (nu={nu}, s={s}): "
            f"W({g_lo:.6g})={w_lo:.3e}, W({g_hi:.6g})={w_hi:.3e}"
        )

    # stage 4: safeguarded bisection (Brent) on the fixed converged curve
    slope = (w_hi - w_lo) / (g_hi - g_lo)
    xtol = max(tol / max(slope, 1e-12), g_hi * 4e-16)
    gamma_c = float(
        scipy.optimize.brentq(
            lambda g: w_at(g, N_used), g_lo, g_hi, xtol=xtol, rtol=8.9e-16
        )
    )
    residual = abs(w_at(gamma_c, N_used))
    # tighten by plain bisection if Brent's x-stop left residual above tol
    b_lo, b_hi = g_lo, g_hi
    while residual > tol and (b_hi - b_lo) > g_hi * 1e-15:
        m = 0.5 * (b_lo + b_hi)
        wm = w_at(m, N_used)
        if wm < 0:
            b_lo = m
        else:
            b_hi = m
        if abs(wm) < residual:
            gamma_c, residual = m, abs(wm)
    eps = max(xtol, gamma_c * 1e-12)
    g_lo_f, g_hi_f = gamma_c - eps, gamma_c + eps
    wl, wh = w_at(g_lo_f, N_used), w_at(g_hi_f, N_used)
    while not (wl < 0 < wh):
        eps *= 4.0
        g_lo_f, g_hi_f = max(g_lo, gamma_c - eps), min(g_hi, gamma_c + eps)
        wl, wh = w_at(g_lo_f, N_used), w_at(g_hi_f, N_used)
        if g_lo_f <= g_lo and g_hi_f >= g_hi:
            g_lo_f, g_hi_f, wl, wh = g_lo, g_hi, w_lo, w_hi
            break

    kind = select_basis_kind(gamma_c)
    if kind == BasisKind.GAUSSIAN:
        desc = f"gaussian(N={N_used}, s={s}, gamma=gamma_c)"
        alpha_used = None
    else:
        alpha_used = alpha if precision != "high" else _heuristic_alpha(Z, gamma_c, N_used)
        desc = f"exponential(N={N_used}, s={s}, alpha={alpha_used:.4g})"
    uncertainty = abs(g_hi_f - g_lo_f) / 2.0 + cauchy / max(slope, 1e-12) if np.isfinite(cauchy) else np.inf
    return CriticalGamma(
        nu=nu, s=s, Z=Z, gamma_c=gamma_c, residual=residual,
        basis_used=desc, bracket=(g_lo_f, g_hi_f), N_used=N_used,
        alpha=alpha_used, converged=converged, w_cauchy=float(cauchy),
        uncertainty=float(uncertainty),
    )


def sign_certificate(
    cg: CriticalGamma,
    rel_offset: float = 1e-3,
    precision: str = "double",
    dps: int = 40,
) -> tuple[float, float]:
    """(W at gamma_c(1-offset), W at gamma_c(1+offset)) with a basis one
    size larger than the search used; the first must be negative and the
    second positive for a genuine crossing."""
    N = cg.N_used + 1
    alpha = cg.alpha if cg.alpha is not None else 1.0
    if precision == "high" and cg.alpha is not None:
        alpha = _heuristic_alpha(cg.Z, cg.gamma_c, N)
    w_minus = _w_level(cg.nu, cg.s, cg.Z, cg.gamma_c * (1 - rel_offset), N, alpha, precision, dps)
    w_plus = _w_level(cg.nu, cg.s, cg.Z, cg.gamma_c * (1 + rel_offset), N, alpha, precision, dps)
    return w_minus, w_plus


@dataclass(frozen=True)
class CriticalTable:
    """Per-level results; levels that failed keep an error annotation."""

    entries: tuple[CriticalGamma, ...]
    failures: dict[int, str]


def critical_table(
    nu_max: int,
    s: int,
    Z: float,
    tol: float = 1e-9,
    precision: str = "double",
    n_max: int | None = None,
    dps: int = 40,
) -> CriticalTable:
    """gamma_c for nu = 0..nu_max; strictly decreasing in nu when all succeed."""
    if nu_max < 0:
        raise ValueError(f"nu_max must be >= 0, got {nu_max}")
    entries = []
    failures: dict[int, str] = {}
    for nu in range(nu_max + 1):
        try:
            entries.append(
                critical_gamma(nu, s, Z, tol, precision=precision, n_max=n_max, dps=dps)
            )
        except (NumericalError, ValueError) as err:
            failures[nu] = str(err)
    return CriticalTable(entries=tuple(entries), failures=failures)


def negative_level_count(
    s: int, Z: float, gamma: float, N: int = 10,
    alpha: float = 1.0, precision: str = "double", dps: int = 40,
) -> int:
    """Number of levels with W < 0, read off the inertia of H.

    With S positive definite, Sylvester's law makes the count of negative
    generalized eigenvalues equal to the count of negative eigenvalues of H
    itself -- the determinant-style cross-check of a crossing: the count
    drops by one as gamma passes gamma_c(nu).  Reliable for small nu only;
    the eigenvalue-curve search is the primary route.
    """
    params = ModelParams(Z=Z, gamma=gamma, m=s)
    kind = select_basis_kind(gamma)
    if kind == BasisKind.GAUSSIAN:
        basis = BasisSpec(kind=kind, N=N, s=s, gamma=gamma)
    else:
        basis = BasisSpec(kind=kind, N=N, s=s, alpha=alpha)
    return int(np.sum(spectrum(params, basis, precision=precision, dps=dps).W < 0))
