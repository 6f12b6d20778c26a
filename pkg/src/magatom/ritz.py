"""Rayleigh-Ritz spectra in non-orthogonal monomial bases.

Two basis families share the layout phi_i(r) = r^{i+s} * weight(r),
i = 0..N-1:

  * GaussianMonomial,    weight = exp(-gamma r^2/4) -- matches the magnetic
    asymptotics, converges fast for gamma >~ 1;
  * ExponentialMonomial, weight = exp(-alpha r)     -- the small-gamma /
    Coulomb-dominated workhorse.

Overlap and Hamiltonian elements reduce to the closed-form moments
int r^k w(r)^2 dr.  Kinetic elements use the symmetric weak form
(1/2) int phi_i' phi_j' r dr, which is exact here (the boundary terms
vanish on both families) and keeps H symmetric by construction.

The generalized problem H v = W S v is solved by Cholesky reduction.  In
double precision the monomial bases are usable up to N ~ 12-16; beyond that
an extended-precision path assembles and reduces with mpmath and hands the
well-conditioned reduced matrix to LAPACK.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import exp, lgamma, log
from typing import Union

import mpmath
import numpy as np
import scipy.linalg

from .errors import ConditioningError, NumericalError
from .model import ModelParams

CONDITION_WARN_THRESHOLD = 1e12
_LOG_HUGE = 700.0  # log of the double-precision overflow edge


class BasisKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class BasisSpec:
    """A finite family phi_i(r) = r^{i+s} weight(r), i = 0..N-1."""

    kind: BasisKind
    N: int
    s: int
    gamma: float | None = None  # GaussianMonomial weight parameter
    alpha: float | None = None  # ExponentialMonomial weight parameter

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"basis size must be >= 1, got {self.N}")
        if self.s < 0:
            raise ValueError(f"angular index must be >= 0, got {self.s}")
        if self.kind == BasisKind.GAUSSIAN:
            if self.gamma is None or self.gamma <= 0:
                raise ValueError("GaussianMonomial basis requires gamma > 0")
        elif self.alpha is None or self.alpha <= 0:
            raise ValueError("ExponentialMonomial basis requires alpha > 0")

    @property
    def weight_parameter(self) -> float:
        return self.gamma if self.kind == BasisKind.GAUSSIAN else self.alpha

    def describe(self) -> str:
        if self.kind == BasisKind.GAUSSIAN:
            return f"gaussian(N={self.N}, s={self.s}, gamma={self.gamma:g})"
        return f"exponential(N={self.N}, s={self.s}, alpha={self.alpha:g})"


def select_basis_kind(gamma: float) -> BasisKind:
    """Regime guidance: Gaussian for gamma >= 1, exponential below."""
    return BasisKind.GAUSSIAN if gamma >= 1.0 else BasisKind.EXPONENTIAL


def auto_basis(params: ModelParams, N: int, alpha: float = 1.0) -> BasisSpec:
    kind = select_basis_kind(params.gamma)
    if kind == BasisKind.GAUSSIAN:
        return BasisSpec(kind=kind, N=N, s=params.s, gamma=params.gamma)
    return BasisSpec(kind=kind, N=N, s=params.s, alpha=alpha)


def moment_integral(kind: BasisKind, k: int, weight_parameter: float) -> float:
    """int_0^inf r^k weight(r)^2 dr in closed form.

    Gaussian:    (1/2) (2/gamma)^{(k+1)/2} Gamma((k+1)/2)
    Exponential: k! / (2 alpha)^{k+1}

    Evaluated through log-gamma so large k degrades gracefully; an overflow
    past double range raises NumericalError instead of returning inf.
    """
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    if weight_parameter <= 0:
        raise ValueError(f"weight parameter must be > 0, got {weight_parameter}")
    if kind == BasisKind.GAUSSIAN:
        lg = 0.5 * (k + 1) * log(2.0 / weight_parameter) + lgamma(0.5 * (k + 1)) - log(2.0)
    else:
        lg = lgamma(k + 1) - (k + 1) * log(2.0 * weight_parameter)
    if lg > _LOG_HUGE:
        raise NumericalError(
            f"moment r^{k} overflows double precision (log = {lg:.1f}); "
            "use the high-precision path"
        )
    return exp(lg)


def _moment_mp(kind: BasisKind, k: int, weight_parameter) -> mpmath.mpf:
    w = mpmath.mpf(weight_parameter)
    if kind == BasisKind.GAUSSIAN:
        return mpmath.mpf("0.5") * (2 / w) ** (mpmath.mpf(k + 1) / 2) * mpmath.gamma(mpmath.mpf(k + 1) / 2)
    return mpmath.factorial(k) / (2 * w) ** (k + 1)


Matrix = Union[np.ndarray, mpmath.matrix]


@dataclass(frozen=True)
class MatrixPair:
    """Hamiltonian/overlap pair for one (basis, params) combination.

    condition_S is a 2-norm estimate for the diagonally scaled overlap (unit
    diagonal) -- the quantity that controls the Cholesky reduction.
    """

    H: Matrix
    S: Matrix
    basis: BasisSpec
    params: ModelParams
    condition_S: float
    warnings: tuple[str, ...] = ()
    precision: str = "double"
    dps: int = 0


@dataclass(frozen=True)
class SpectrumResult:
    """Ascending eigenvalues W with S-orthonormal eigenvectors (columns)."""

    W: np.ndarray
    vectors: np.ndarray
    basis: BasisSpec
    params: ModelParams
    condition_S: float
    warnings: tuple[str, ...] = ()
    precision: str = "double"


def _element_terms(kind: BasisKind, s: int, i: int, j: int, Z, gamma, w):
    """(moment order, coefficient) pairs composing S_ij and H_ij.

    Z, gamma and the weight parameter w are taken in the caller's numeric
    type (float or mpf) and all coefficient arithmetic stays in that type:
    double-rounded coefficients would be amplified by the overlap condition
    number in the extended-precision path.
    """
    p = i + j + 2 * s
    s_terms = [(p + 1, 1)]
    h_terms = []
    ii, jj = i + s, j + s
    if ii and jj:  # phi' power-law cross term; coefficient 0 at i=j=s=0
        h_terms.append((p - 1, ii * jj / 2))
    if kind == BasisKind.GAUSSIAN:
        h_terms.append((p + 1, -w * (ii + jj) / 4))
        h_terms.append((p + 3, w * w / 8))
    else:
        h_terms.append((p, -w * (ii + jj) / 2))
        h_terms.append((p + 1, w * w / 2))
    if s:  # centrifugal m^2/(2 r^2); skipped for m = 0 so no singular moment
        h_terms.append((p - 1, s * s / 2))
    if gamma:
        h_terms.append((p + 3, gamma * gamma / 8))
    if Z:
        h_terms.append((p, -Z))
    return s_terms, h_terms


def assemble_matrices(
    basis: BasisSpec,
    params: ModelParams,
    precision: str = "double",
    dps: int = 40,
) -> MatrixPair:
    """Build H and S from closed-form moments; exact symmetry by mirroring.

    Requires basis.s == params.s, and for the Gaussian family
    basis.gamma == params.gamma (the weight must match the magnetic
    asymptotics or the QS-capture property is lost).
    """
    if basis.s != params.s:
        raise ValueError(f"basis.s={basis.s} does not match params.s={params.s}")
    if basis.kind == BasisKind.GAUSSIAN and basis.gamma != params.gamma:
        raise ValueError(
            f"Gaussian basis weight gamma={basis.gamma} must equal params.gamma={params.gamma}"
        )
    N = basis.N
    if precision == "high":
        with mpmath.workdps(dps):
            H: Matrix = mpmath.matrix(N, N)
            S: Matrix = mpmath.matrix(N, N)
            Z_mp, g_mp, w_mp = mpmath.mpf(params.Z), mpmath.mpf(params.gamma), mpmath.mpf(basis.weight_parameter)
            moments: dict[int, mpmath.mpf] = {}

            def mom(k: int) -> mpmath.mpf:
                if k not in moments:
                    moments[k] = _moment_mp(basis.kind, k, w_mp)
                return moments[k]

            for i in range(N):
                for j in range(i, N):
                    s_terms, h_terms = _element_terms(basis.kind, basis.s, i, j, Z_mp, g_mp, w_mp)
                    S[i, j] = S[j, i] = sum(c * mom(k) for k, c in s_terms)
                    H[i, j] = H[j, i] = sum(c * mom(k) for k, c in h_terms)
            scaled = np.array(
                [
                    [float(S[i, j] / mpmath.sqrt(S[i, i] * S[j, j])) for j in range(N)]
                    for i in range(N)
                ]
            )
    else:
        H = np.zeros((N, N))
        S = np.zeros((N, N))
        for i in range(N):
            for j in range(i, N):
                s_terms, h_terms = _element_terms(
                    basis.kind, basis.s, i, j, params.Z, params.gamma, basis.weight_parameter
                )
                S[i, j] = S[j, i] = sum(
                    c * moment_integral(basis.kind, k, basis.weight_parameter) for k, c in s_terms
                )
                H[i, j] = H[j, i] = sum(
                    c * moment_integral(basis.kind, k, basis.weight_parameter) for k, c in h_terms
                )
        d = 1.0 / np.sqrt(np.diag(S))
        scaled = S * d[:, None] * d[None, :]
    cond = float(np.linalg.cond(scaled))
    warnings = ()
    if cond > CONDITION_WARN_THRESHOLD:
        warnings = (
            f"overlap condition {cond:.2e} exceeds {CONDITION_WARN_THRESHOLD:.0e}; "
            "eigenvalues may lose accuracy (reduce N or use high precision)",
        )
    return MatrixPair(
        H=H, S=S, basis=basis, params=params, condition_S=cond,
        warnings=warnings, precision=precision, dps=dps,
    )


def _solve_lower_mp(L: mpmath.matrix, B: mpmath.matrix) -> mpmath.matrix:
    """X = L^{-1} B by forward substitution."""
    n = L.rows
    X = mpmath.matrix(n, B.cols)
    for col in range(B.cols):
        for i in range(n):
            acc = B[i, col]
            for k in range(i):
                acc -= L[i, k] * X[k, col]
            X[i, col] = acc / L[i, i]
    return X


def _solve_upper_mp(L: mpmath.matrix, B: mpmath.matrix) -> mpmath.matrix:
    """X = L^{-T} B by back substitution (L lower triangular)."""
    n = L.rows
    X = mpmath.matrix(n, B.cols)
    for col in range(B.cols):
        for i in reversed(range(n)):
            acc = B[i, col]
            for k in range(i + 1, n):
                acc -= L[k, i] * X[k, col]
            X[i, col] = acc / L[i, i]
    return X


def solve_generalized(pair: MatrixPair) -> SpectrumResult:
    """Solve H v = W S v via Cholesky reduction of S.

    Both paths first scale the basis to a unit overlap diagonal (a pure
    relabelling of the basis functions that leaves the pencil's eigenvalues
    untouched but greatly helps the factorisation).  Double precision uses
    LAPACK's sygv driver; the high path factorises with mpmath, forms
    L^-1 H L^-T exactly enough that its double rounding is harmless, and
    diagonalises that with LAPACK.  Returned vectors satisfy v^T S v = 1.
    """
    N = pair.basis.N
    if pair.precision == "high":
        with mpmath.workdps(pair.dps):
            d = [1 / mpmath.sqrt(pair.S[i, i]) for i in range(N)]
            Hs = mpmath.matrix(N, N)
            Ss = mpmath.matrix(N, N)
            for i in range(N):
                for j in range(N):
                    Hs[i, j] = pair.H[i, j] * d[i] * d[j]
                    Ss[i, j] = pair.S[i, j] * d[i] * d[j]
            try:
                L = mpmath.cholesky(Ss)
            except ValueError as err:
                raise ConditioningError(
                    f"overlap matrix not positive definite at N={N} "
                    f"(condition ~{pair.condition_S:.2e}) even at dps={pair.dps}: {err}"
                ) from None
            Y = _solve_lower_mp(L, Hs)
            A = _solve_lower_mp(L, Y.T)
            Ad = np.array([[float(A[i, j]) for j in range(N)] for i in range(N)])
            Ad = 0.5 * (Ad + Ad.T)
            w, u = np.linalg.eigh(Ad)
            U = mpmath.matrix(u.tolist())
            V = _solve_upper_mp(L, U)
            vectors = np.array(
                [[float(V[i, j] * d[i]) for j in range(N)] for i in range(N)]
            )
        return SpectrumResult(
            W=w, vectors=vectors, basis=pair.basis, params=pair.params,
            condition_S=pair.condition_S, warnings=pair.warnings, precision="high",
        )

    d = 1.0 / np.sqrt(np.diag(pair.S))
    Hs = pair.H * d[:, None] * d[None, :]
    Ss = pair.S * d[:, None] * d[None, :]
    try:
        w, u = scipy.linalg.eigh(Hs, Ss)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as err:
        raise ConditioningError(
            f"Cholesky reduction failed at N={N} (condition ~{pair.condition_S:.2e}): {err}; "
            "reduce the basis size or use precision='high'"
        ) from None
    vectors = u * d[:, None]
    return SpectrumResult(
        W=w, vectors=vectors, basis=pair.basis, params=pair.params,
        condition_S=pair.condition_S, warnings=pair.warnings, precision="double",
    )


def spectrum(
    params: ModelParams,
    basis: BasisSpec,
    precision: str = "double",
    dps: int = 40,
) -> SpectrumResult:
    return solve_generalized(assemble_matrices(basis, params, precision=precision, dps=dps))


@dataclass(frozen=True)
class ConvergenceTable:
    """W_nu(N) for nu < levels over a range of basis sizes.

    cauchy[r, nu] = |W_nu(N_r) - W_nu(N_{r-1})| (nan on the first row).
    If a conditioning abort truncated the sweep, `aborted_at` holds the
    failing N and the table keeps every usable row.
    """

    params: ModelParams
    kind: BasisKind
    alpha: float | None
    Ns: tuple[int, ...]
    W: np.ndarray
    cauchy: np.ndarray
    condition_S: tuple[float, ...]
    warnings: tuple[str, ...]
    aborted_at: int | None = None


def converge_spectrum(
    params: ModelParams,
    kind: BasisKind,
    N_min: int,
    N_max: int,
    levels: int,
    alpha: float = 1.0,
    precision: str = "double",
    dps: int = 40,
) -> ConvergenceTable:
    """Track the lowest `levels` eigenvalues as the basis grows."""
    if N_min < levels:
        raise ValueError(f"N_min={N_min} must be >= levels={levels}")
    if N_max < N_min:
        raise ValueError(f"N_max={N_max} must be >= N_min={N_min}")
    rows = []
    conds = []
    warnings: list[str] = []
    aborted_at = None
    Ns = []
    for N in range(N_min, N_max + 1):
        if kind == BasisKind.GAUSSIAN:
            basis = BasisSpec(kind=kind, N=N, s=params.s, gamma=params.gamma)
        else:
            basis = BasisSpec(kind=kind, N=N, s=params.s, alpha=alpha)
        try:
            result = spectrum(params, basis, precision=precision, dps=dps)
        except (ConditioningError, NumericalError) as err:
            warnings.append(f"aborted at N={N}: {err}")
            aborted_at = N
            break
        rows.append(result.W[:levels])
        conds.append(result.condition_S)
        warnings.extend(result.warnings)
        Ns.append(N)
    if not rows:
        raise ConditioningError(
            f"no usable basis size in {N_min}..{N_max}: {warnings[-1] if warnings else 'empty range'}"
        )
    W = np.array(rows)
    cauchy = np.full_like(W, np.nan)
    cauchy[1:] = np.abs(np.diff(W, axis=0))
    return ConvergenceTable(
        params=params, kind=kind,
        alpha=None if kind == BasisKind.GAUSSIAN else alpha,
        Ns=tuple(Ns), W=W, cauchy=cauchy,
        condition_S=tuple(conds), warnings=tuple(warnings), aborted_at=aborted_at,
    )


def _moment_matrix(basis: BasisSpec, power: int, mp_dps: int = 0) -> np.ndarray:
    """Gram-like matrix of r^power between basis functions (measure r dr)."""
    N = basis.N
    if mp_dps:
        with mpmath.workdps(mp_dps):
            M = np.empty((N, N), dtype=object)
            for i in range(N):
                for j in range(i, N):
                    M[i, j] = M[j, i] = _moment_mp(
                        basis.kind, i + j + 2 * basis.s + 1 + power, basis.weight_parameter
                    )
            return M
    M = np.zeros((N, N))
    for i in range(N):
        for j in range(i, N):
            M[i, j] = M[j, i] = moment_integral(
                basis.kind, i + j + 2 * basis.s + 1 + power, basis.weight_parameter
            )
    return M


def expectation_values(result: SpectrumResult, level: int) -> tuple[float, float]:
    """(<1/r>, <r^2>) in the S-normalised eigenstate `level`."""
    if not 0 <= level < len(result.W):
        raise ValueError(f"level {level} not in computed spectrum (0..{len(result.W) - 1})")
    v = result.vectors[:, level]
    if result.precision == "high":
        dps = 40
        with mpmath.workdps(dps):
            vm = [mpmath.mpf(x) for x in v]
            out = []
            for power in (-1, 2):
                M = _moment_matrix(result.basis, power, mp_dps=dps)
                acc = mpmath.mpf(0)
                for i in range(len(vm)):
                    for j in range(len(vm)):
                        acc += vm[i] * M[i, j] * vm[j]
                out.append(float(acc))
            return out[0], out[1]
    inv_r = float(v @ _moment_matrix(result.basis, -1) @ v)
    r2 = float(v @ _moment_matrix(result.basis, 2) @ v)
    return inv_r, r2


def make_solver(
    kind: BasisKind | None = None,
    N: int = 10,
    alpha: float = 1.0,
    precision: str = "double",
    dps: int = 40,
):
    """A SpectrumProvider closure for hft_signs and similar consumers.

    kind=None auto-selects the family per gamma regime at each call.
    """

    def solver(params: ModelParams, levels: int):
        use_kind = kind or select_basis_kind(params.gamma)
        n_basis = max(N, levels + 2)
        if use_kind == BasisKind.GAUSSIAN:
            basis = BasisSpec(kind=use_kind, N=n_basis, s=params.s, gamma=params.gamma)
        else:
            basis = BasisSpec(kind=use_kind, N=n_basis, s=params.s, alpha=alpha)
        return spectrum(params, basis, precision=precision, dps=dps).W[:levels]

    return solver
