"""Physical parameters of the planar hydrogen atom in a uniform magnetic field.

The radial problem is

    [-1/2 (d^2/dr^2 + (1/r) d/dr) + m^2/(2 r^2) + gamma^2 r^2/8 - Z/r] R = W R,

with W = E - gamma*m/2 the shifted eigenvalue.  Eigenvalues are labelled
W_{nu,s} by the node count nu and the angular index s = |m|.  This module
holds the parameter types, the exact limiting spectra (pure Coulomb and pure
oscillator), the Z-scaling transform, and finite-difference derivative checks
against the Hellmann-Feynman signs dW/dZ < 0 < dW/dgamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import LevelTrackingError

# An eigenvalue provider: returns the lowest `levels` values of W for the
# given parameters (fixed s), sorted ascending.
SpectrumProvider = Callable[["ModelParams", int], Sequence[float]]


@dataclass(frozen=True)
class ModelParams:
    """Inputs (Z, gamma, m) of the radial problem; s = |m| is derived.

    gamma >= 0 always; gamma = 0 and Z = 0 are admitted only so the exact
    limiting cases remain expressible, individual operations enforce their
    own stricter preconditions.
    """

    Z: float
    gamma: float
    m: int
    s: int = field(init=False)

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.Z < 0:
            raise ValueError(f"Z must be >= 0, got {self.Z}")
        object.__setattr__(self, "s", abs(int(self.m)))

    def replace(self, *, Z: float | None = None, gamma: float | None = None) -> "ModelParams":
        return ModelParams(
            Z=self.Z if Z is None else Z,
            gamma=self.gamma if gamma is None else gamma,
            m=self.m,
        )


@dataclass(frozen=True)
class LevelIndex:
    """Radial quantum number nu (node count) and angular index s."""

    nu: int
    s: int

    def __post_init__(self) -> None:
        if self.nu < 0 or self.s < 0:
            raise ValueError(f"nu and s must be non-negative, got ({self.nu}, {self.s})")


def energy_from_W(W: float, params: ModelParams) -> float:
    """Physical energy E = W + gamma*m/2."""
    return W + params.gamma * params.m / 2.0


def hydrogenic_W(level: LevelIndex, Z: float) -> float:
    """Exact eigenvalue at gamma = 0: W = -2 Z^2 / (2 nu + 2 s + 1)^2."""
    if Z <= 0:
        raise ValueError(f"hydrogenic limit requires Z > 0, got {Z}")
    return -2.0 * Z * Z / (2 * level.nu + 2 * level.s + 1) ** 2


def oscillator_W(level: LevelIndex, gamma: float) -> float:
    """Exact eigenvalue at Z = 0: W = (2 nu + s + 1) gamma / 2."""
    if gamma <= 0:
        raise ValueError(f"oscillator limit requires gamma > 0, got {gamma}")
    return 0.5 * (2 * level.nu + level.s + 1) * gamma


def scale_to_unit_Z(gamma: float, Z: float) -> float:
    """Equivalent field at unit charge: xi = gamma / Z^2.

    The spectrum scales as W(Z, gamma) = Z^2 W(1, gamma/Z^2), so xi is the
    natural dimensionless field strength.
    """
    if Z == 0:
        raise ValueError("Z = 0 has no unit-charge equivalent")
    return gamma / (Z * Z)


def hft_signs(
    level: LevelIndex,
    params: ModelParams,
    eigen_solver: SpectrumProvider,
    step: float = 1e-4,
) -> tuple[float, float]:
    """Central finite-difference estimates of (dW/dZ, dW/dgamma) on one level.

    Levels are tracked by sorted index within fixed s, which is safe as long
    as no eigenvalue crossing occurs inside the stencil.  A crossing is
    flagged when the gap to the neighbouring levels at the central point is
    smaller than 10x the stencil-induced shift.

    Hellmann-Feynman fixes the signs for Z > 0, gamma > 0:
    dW/dZ = -<1/r> < 0 and dW/dgamma = (gamma/4) <r^2> > 0.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    nu = level.nu
    if level.s != params.s:
        raise ValueError(f"level.s={level.s} does not match params.s={params.s}")
    levels_needed = nu + 2

    w0 = eigen_solver(params, levels_needed)
    w_zp = eigen_solver(params.replace(Z=params.Z + step), levels_needed)
    w_zm = eigen_solver(params.replace(Z=params.Z - step), levels_needed)
    w_gp = eigen_solver(params.replace(gamma=params.gamma + step), levels_needed)
    w_gm = eigen_solver(params.replace(gamma=params.gamma - step), levels_needed)

    shift = max(abs(w_zp[nu] - w_zm[nu]), abs(w_gp[nu] - w_gm[nu]))
    gap = w0[nu + 1] - w0[nu]
    if nu > 0:
        gap = min(gap, w0[nu] - w0[nu - 1])
    if gap < 10.0 * shift:
        raise LevelTrackingError(
            f"level (nu={nu}, s={level.s}): eigenvalue gap {gap:.3e} is below "
            f"10x the stencil shift {shift:.3e}; decrease step"
        )

    dW_dZ = float(w_zp[nu] - w_zm[nu]) / (2.0 * step)
    dW_dgamma = float(w_gp[nu] - w_gm[nu]) / (2.0 * step)
    return dW_dZ, dW_dgamma
