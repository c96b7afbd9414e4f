"""Phase-space analysis: Wigner function, moments, non-classicality witnesses.

Convention, fixed for the whole package and recorded in exported files:
``hbar = 1``, quadratures ``x = (a + a^dag)/sqrt(2)`` and
``p = -i (a - a^dag)/sqrt(2)``, Wigner function normalized so that
``int W dx dp = 1``.  The vacuum then has ``W(0,0) = 1/pi`` and covariance
``diag(1/2, 1/2)``, and every state obeys ``W >= -1/pi``.

The Wigner function is evaluated through the displaced parity operator:
``W(x, p) = (1/pi) Tr{rho D(alpha) P D(-alpha)}`` with
``alpha = (x + i p)/sqrt(2)``.  Since ``P D(-alpha) = D(alpha) P``, the
kernel collapses to ``D(2 alpha) P``, whose number-basis matrix elements
are associated Laguerre polynomials; the grid evaluation below sums that
expansion termwise with the exponentials kept in log space so large cutoffs
cannot overflow.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .config import DEFAULT_THRESHOLDS, DEFAULT_TOLS, CategoryThresholds, Tolerances
from .errors import TruncationWarning
from .fock import (
    annihilation,
    check_dim,
    hermitize,
    number_mean,
    purity,
)
from .retrodiction import projectivity, retrodicted_state

__all__ = [
    "CONVENTION",
    "PhaseSpaceGrid",
    "WignerGrid",
    "Gaussianity",
    "NonClassicalityReport",
    "wigner",
    "negativity_volume",
    "covariance_matrix",
    "squeezing_witness",
    "gaussian_reference",
    "gaussianity_check",
    "witness_report",
    "nonclassicality_of_measurement",
]

CONVENTION = "hbar=1, x=(a+adag)/sqrt(2), int W dx dp = 1"


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Rectangular evaluation grid in the ``(x, p)`` plane."""

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    n_x: int
    n_p: int

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid extents must satisfy max > min")
        if self.n_x < 2 or self.n_p < 2:
            raise ValueError("grid needs at least 2 points per axis")

    @classmethod
    def symmetric(cls, radius: float, points: int) -> "PhaseSpaceGrid":
        """Square grid ``[-radius, radius]^2`` with ``points`` per axis."""
        r = float(radius)
        return cls(-r, r, -r, r, int(points), int(points))

    @property
    def x_axis(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_x)

    @property
    def p_axis(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_x - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.n_p - 1)

    @property
    def radius_sq(self) -> float:
        """Largest ``x**2 + p**2`` reached by a grid corner."""
        x = max(abs(self.x_min), abs(self.x_max))
        p = max(abs(self.p_min), abs(self.p_max))
        return x * x + p * p


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Wigner values on a grid; ``values[i, j] = W(x_i, p_j)``."""

    grid: PhaseSpaceGrid
    values: np.ndarray

    def riemann_sum(self) -> float:
        """Plain Riemann approximation of ``int W dx dp`` over the grid."""
        return float(np.sum(self.values)) * self.grid.dx * self.grid.dp

    def min_value(self) -> float:
        return float(np.min(self.values))

    def boundary_max_abs(self) -> float:
        v = self.values
        edges = np.concatenate([v[0, :], v[-1, :], v[:, 0], v[:, -1]])
        return float(np.max(np.abs(edges)))


def wigner(
    rho: np.ndarray, grid: PhaseSpaceGrid, tols: Tolerances = DEFAULT_TOLS
) -> WignerGrid:
    """Evaluate the Wigner function of a density matrix on a grid.

    Warns when the grid reaches further than the truncated basis can
    represent (``radius**2 > 2 * dim``).  Raises if any computed value
    breaks the quantum bound ``W >= -1/pi`` beyond ``tols.neg``, which
    indicates the input was not a valid state.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != d:
        raise ValueError(f"expected a square density matrix, got {rho.shape}")
    if grid.radius_sq > 2.0 * d:
        warnings.warn(
            f"grid reaches x^2+p^2 = {grid.radius_sq:.3g}, beyond the "
            f"resolvable region ~2*dim = {2 * d} of this truncation",
            TruncationWarning,
            stacklevel=2,
        )
    x = grid.x_axis[:, None]
    p = grid.p_axis[None, :]
    # beta = 2*alpha with alpha = (x + i p)/sqrt(2)
    beta_sq = 2.0 * (x * x + p * p)
    theta = np.arctan2(p, x)
    with np.errstate(divide="ignore"):
        log_beta = 0.5 * np.log(beta_sq, where=beta_sq > 0.0, out=np.full_like(beta_sq, -np.inf))
    acc = np.zeros_like(beta_sq)
    half_b = 0.5 * beta_sq
    for m in range(d):
        sign = -1.0 if m % 2 else 1.0
        if abs(rho[m, m]) > 1e-18:
            acc += sign * rho[m, m].real * np.exp(-half_b) * eval_genlaguerre(m, 0, beta_sq)
        for n in range(m + 1, d):
            r_mn = rho[m, n]
            if abs(r_mn) <= 1e-18:
                continue
            k = n - m
            log_coef = 0.5 * (gammaln(m + 1) - gammaln(n + 1)) + k * log_beta - half_b
            phase = np.cos(k * theta) * r_mn.real - np.sin(k * theta) * r_mn.imag
            acc += sign * 2.0 * np.exp(log_coef) * eval_genlaguerre(m, k, beta_sq) * phase
    values = acc / np.pi
    floor = -1.0 / np.pi - tols.neg
    vmin = float(np.min(values))
    if vmin < floor:
        raise ValueError(
            f"Wigner value {vmin:.6g} below the quantum bound -1/pi; "
            "input is not a valid state"
        )
    return WignerGrid(grid=grid, values=values)


def negativity_volume(wgrid: WignerGrid, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Doubled negative mass ``int |W| dx dp - int W dx dp``, Riemann-summed.

    Zero for non-negative Wigner functions.  Warns when ``|W|`` has not
    decayed below 1e-6 on the grid boundary, since the integral then misses
    weight outside the window.
    """
    edge = wgrid.boundary_max_abs()
    if edge > 1e-6:
        warnings.warn(
            f"|W| reaches {edge:.3g} on the grid boundary; negativity volume "
            "may be truncated",
            TruncationWarning,
            stacklevel=2,
        )
    v = wgrid.values
    vol = float(np.sum(np.abs(v) - v)) * wgrid.grid.dx * wgrid.grid.dp
    return max(vol, 0.0)


def covariance_matrix(rho: np.ndarray):
    """Quadrature mean vector and symmetrized 2x2 covariance matrix.

    Returns ``(mean, cov)`` with ``mean = (<x>, <p>)`` and
    ``cov[0, 1] = <xp + px>/2 - <x><p>``.  The state is padded by two
    empty levels before the quadratures are applied, so second moments
    are exact for any state inside the basis; without the padding the
    ``a a^dag`` ladder term is cut on the top level and the uncertainty
    bound ``det cov >= 1/4`` can falsely break.  Still warns when the
    mean photon number exceeds ``dim / 4``, since a truncated stand-in
    for a heavier intended state has lost its tail either way.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if number_mean(rho) > d / 4:
        warnings.warn(
            f"mean photon number {number_mean(rho):.3g} is large for "
            f"truncation {d}; moments may be unreliable",
            TruncationWarning,
            stacklevel=2,
        )
    padded = np.zeros((d + 2, d + 2), dtype=complex)
    padded[:d, :d] = rho
    rho = padded
    a = annihilation(d + 2)
    xop = (a + a.conj().T) / np.sqrt(2.0)
    pop = -1j * (a - a.conj().T) / np.sqrt(2.0)
    def ev(op):
        return float(np.real(np.einsum("ij,ji->", rho, op)))
    mx, mp = ev(xop), ev(pop)
    cxx = ev(xop @ xop) - mx * mx
    cpp = ev(pop @ pop) - mp * mp
    cxp = ev(0.5 * (xop @ pop + pop @ xop)) - mx * mp
    return np.array([mx, mp]), np.array([[cxx, cxp], [cxp, cpp]])


def squeezing_witness(rho: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> bool:
    """True when some quadrature variance dips below the vacuum's 1/2."""
    _, cov = covariance_matrix(rho)
    w = np.linalg.eigvalsh(cov)
    return bool(w[0] < 0.5 - tols.squeeze)


def gaussian_reference(mean: np.ndarray, cov: np.ndarray, dim: int):
    """Truncated displaced squeezed thermal state with the given moments.

    Decomposes the covariance into a rotation, a squeezing ratio and a
    symplectic (thermal) eigenvalue, then builds
    ``D(alpha) S(xi) rho_thermal S^dag D^dag`` in the number basis and
    renormalizes.  Returns ``(rho, tail)`` where ``tail`` bounds the weight
    lost to truncation; verdicts based on a reference with a fat tail are
    not trustworthy.
    """
    d = check_dim(dim)
    mean = np.asarray(mean, dtype=float)
    cov = np.asarray(cov, dtype=float)
    if mean.shape != (2,) or cov.shape != (2, 2):
        raise ValueError("mean must be length 2 and cov 2x2")
    w, rot = np.linalg.eigh(0.5 * (cov + cov.T))
    if w[0] <= 0.0:
        raise ValueError(f"covariance not positive definite: eigenvalues {w}")
    # symplectic eigenvalue; clamp to the vacuum floor against roundoff
    nu = max(float(np.sqrt(w[0] * w[1])), 0.5)
    nbar = nu - 0.5
    s = 0.25 * float(np.log(w[1] / w[0]))
    theta = float(np.arctan2(rot[1, 0], rot[0, 0]))
    xi = s * np.exp(2j * theta)
    a = annihilation(d)
    ad = a.conj().T
    squeeze = expm(0.5 * (np.conj(xi) * (a @ a) - xi * (ad @ ad)))
    alpha = (mean[0] + 1j * mean[1]) / np.sqrt(2.0)
    displace = expm(alpha * ad - np.conj(alpha) * a)
    if nbar == 0.0:
        therm = np.zeros(d)
        therm[0] = 1.0
    else:
        therm = (nbar / (nbar + 1.0)) ** np.arange(d) / (nbar + 1.0)
    u = displace @ squeeze
    rho = u @ np.diag(therm).astype(complex) @ u.conj().T
    tr = float(np.real(np.trace(rho)))
    tail = abs(1.0 - tr) + float(np.real(rho[-1, -1]))
    return hermitize(rho / tr), tail


class Gaussianity(str, Enum):
    GAUSSIAN = "Gaussian"
    NON_GAUSSIAN = "NonGaussian"
    UNDETERMINED = "Undetermined"


def gaussianity_check(rho: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> Gaussianity:
    """Compare a state against the Gaussian state with its first two moments.

    The verdict is Gaussian when the overlap ratio
    ``Tr(rho ref) / max(Tr(rho^2), Tr(ref^2))`` reaches ``1 - tols.gauss``.
    Undetermined is returned instead of a guess whenever truncation makes
    either the moments or the reconstructed reference unreliable.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    heavy = number_mean(rho) > d / 4
    mean, cov = covariance_matrix(rho)
    ref, tail = gaussian_reference(mean, cov, d)
    if heavy or tail > tols.gauss_tail:
        return Gaussianity.UNDETERMINED
    overlap = float(np.real(np.einsum("ij,ji->", rho, ref)))
    ratio = overlap / max(purity(rho), purity(ref))
    if ratio >= 1.0 - tols.gauss:
        return Gaussianity.GAUSSIAN
    return Gaussianity.NON_GAUSSIAN


@dataclass(frozen=True)
class NonClassicalityReport:
    """Phase-space witnesses for one retrodicted outcome.

    ``is_nonclassical`` is true when either witness fires: a negativity
    volume above the dead band, or sub-vacuum quadrature noise.
    ``hudson_inconsistent`` flags a breakdown of the expected implication
    "projective outcome with non-negative Wigner function implies Gaussian";
    it should never fire on trustworthy inputs and exists as a numerical
    alarm.
    """

    outcome_label: str
    min_wigner: float
    negativity_volume: float
    squeezing_witness: bool
    is_nonclassical: bool
    gaussianity: Gaussianity
    hudson_inconsistent: bool


def witness_report(
    state: np.ndarray,
    wgrid: WignerGrid,
    outcome_label: str,
    projectivity_value: float,
    tols: Tolerances = DEFAULT_TOLS,
    thresholds: CategoryThresholds = DEFAULT_THRESHOLDS,
) -> NonClassicalityReport:
    """Assemble every witness for a state whose Wigner grid is already known."""
    minw = wgrid.min_value()
    negv = negativity_volume(wgrid, tols)
    squeezed = squeezing_witness(state, tols)
    gauss = gaussianity_check(state, tols)
    hudson_bad = (
        projectivity_value >= thresholds.projectivity_min
        and minw >= -tols.neg
        and gauss is Gaussianity.NON_GAUSSIAN
    )
    return NonClassicalityReport(
        outcome_label=outcome_label,
        min_wigner=minw,
        negativity_volume=negv,
        squeezing_witness=squeezed,
        is_nonclassical=bool(negv > tols.neg or squeezed),
        gaussianity=gauss,
        hudson_inconsistent=hudson_bad,
    )


def nonclassicality_of_measurement(
    element,
    grid: PhaseSpaceGrid,
    tols: Tolerances = DEFAULT_TOLS,
    thresholds: CategoryThresholds = DEFAULT_THRESHOLDS,
) -> NonClassicalityReport:
    """Run every phase-space witness on the state retrodicted by an element."""
    retro = retrodicted_state(element, tols)
    wg = wigner(retro.state, grid, tols)
    return witness_report(
        retro.state, wg, retro.outcome_label, projectivity(retro), tols, thresholds
    )
