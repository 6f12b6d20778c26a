"""Independent finite-difference eigenvalue oracle for the radial problem.

Writing R(r) = r^s phi(r) absorbs the centrifugal term; phi is analytic at
the origin and obeys the weak form

    (1/2) int phi' psi' r^{2s+1} dr + int [gamma^2 r^2/8 - Z/r] phi psi r^{2s+1} dr
        = W int phi psi r^{2s+1} dr.

A cell-centred finite-volume discretisation of this form (cells [kh, (k+1)h],
nodes at (k+1/2)h, face weights r^{2s+1}) is second-order accurate, yields a
symmetric tridiagonal pencil with a diagonal mass matrix, and -- because the
flux weight vanishes at r = 0 -- automatically selects the physical
(Friedrichs) solution.  The naive u = sqrt(r) R central-difference scheme
does not: for m = 0 the effective -1/(8 r^2) tail is limit-circle at the
origin and the discrete operator converges to a wrong self-adjoint extension
(or produces collapsing spurious states).

Eigenvalues are Richardson-extrapolated over two grids (h and h/2); this is
a sanity instrument for ~1e-5..1e-7 accuracy, not a precision reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log, sqrt

import numpy as np
import scipy.linalg

from .errors import NumericalError
from .model import ModelParams

_GAUSS_TAIL = log(1e12)  # e^{-gamma r^2/4} < 1e-12 at the box edge
_COULOMB_TAIL = log(1e10)  # e^{-2 Z r/(2 nu + 2s + 1)} < 1e-10 for the top level


@dataclass(frozen=True)
class GridSpec:
    """Uniform cell-centred grid on (0, r_max], Dirichlet at r_max.

    r_max = None picks the box from the decay criteria of the weight factors
    (and the classical turning point of the highest requested level).
    """

    r_max: float | None = None
    n_points: int = 4000

    def __post_init__(self) -> None:
        if self.n_points < 100:
            raise ValueError(f"n_points must be >= 100, got {self.n_points}")
        if self.r_max is not None and self.r_max <= 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")


@dataclass(frozen=True)
class OracleResult:
    """Richardson-extrapolated eigenvalues with the raw two-grid values."""

    W: tuple[float, ...]
    W_coarse: tuple[float, ...]
    W_fine: tuple[float, ...]
    r_max: float
    n_points: int
    richardson_delta: float
    warnings: tuple[str, ...] = ()

    def __iter__(self):
        return iter(self.W)

    def __len__(self) -> int:
        return len(self.W)

    def __getitem__(self, idx):
        return self.W[idx]


def default_r_max(params: ModelParams, levels: int) -> float:
    """Box size from the asymptotic decay of the highest requested level."""
    cands = [10.0]
    if params.gamma > 0:
        cands.append(sqrt(4.0 * _GAUSS_TAIL / params.gamma))
        # classical turning point of level `levels` in the oscillator tail
        cands.append(2.0 * sqrt((2.0 * levels + params.s + 2.0) / params.gamma))
    elif params.Z > 0:
        # gamma = 0: level nu decays like e^{-2Zr/(2 nu + 2s + 1)}
        cands.append(_COULOMB_TAIL * (2 * levels + 2 * params.s + 1) / (2.0 * params.Z))
    else:
        raise ValueError("gamma = 0 and Z = 0 has no bound states")
    return max(cands)


def _fv_eigenvalues(params: ModelParams, r_max: float, n: int, levels: int) -> np.ndarray:
    h = r_max / (n + 0.5)
    k = np.arange(n)
    r = (k + 0.5) * h
    faces = np.arange(n + 1) * h
    p = 2 * params.s + 2
    flux_w = faces ** (p - 1)  # r^{2s+1} at the faces; zero at r = 0
    mass = (faces[1:] ** p - faces[:-1] ** p) / p
    V = params.gamma**2 * r**2 / 8.0 - params.Z / r
    diag = 0.5 * (flux_w[:-1] + flux_w[1:]) / h + V * mass
    off = -0.5 * flux_w[1:n] / h
    # symmetrise the generalized pencil (A, diag(mass)) -> standard tridiagonal
    d = diag / mass
    e = off / np.sqrt(mass[:-1] * mass[1:])
    return scipy.linalg.eigh_tridiagonal(
        d, e, select="i", select_range=(0, levels - 1), eigvals_only=True
    )


def oracle_solve(
    params: ModelParams,
    grid: GridSpec | None = None,
    levels: int = 1,
    richardson_tol: float = 1e-3,
) -> OracleResult:
    """Lowest `levels` values of W by finite volumes + Richardson.

    The two-grid difference (an error estimate for the coarse value; the
    extrapolation shifts the fine value by a third of it) is reported; if it
    exceeds `richardson_tol` the result carries a warning rather than
    silently returning an unconverged extrapolation.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    grid = grid or GridSpec()
    r_max = grid.r_max if grid.r_max is not None else default_r_max(params, levels)
    n = grid.n_points
    w1 = _fv_eigenvalues(params, r_max, n, levels)
    w2 = _fv_eigenvalues(params, r_max, 2 * n, levels)
    extrap = (4.0 * w2 - w1) / 3.0
    delta = float(np.max(np.abs(w2 - w1)))
    warnings = ()
    if delta > richardson_tol:
        warnings = (
            f"two-grid difference {delta:.2e} above {richardson_tol:.0e}; "
            f"raw values: coarse={w1.tolist()}, fine={w2.tolist()}",
        )
    return OracleResult(
        W=tuple(float(x) for x in extrap),
        W_coarse=tuple(float(x) for x in w1),
        W_fine=tuple(float(x) for x in w2),
        r_max=r_max,
        n_points=n,
        richardson_delta=delta,
        warnings=warnings,
    )
