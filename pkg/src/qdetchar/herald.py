"""Heralded state preparation from two-mode squeezed vacuum.

Send one arm of a two-mode squeezed vacuum (TMSV) into the apparatus; when
outcome ``n`` fires on mode B, mode A collapses to::

    rho_A = Tr_B{ rho_AB (1_A  (x)  element_n) } / Pr(n)

For the TMSV ``sqrt(1 - lam^2) sum_n lam^n |n, n>`` this has the exact
closed form ``rho_A  ~  Lam conj(element) Lam`` with ``Lam = diag(lam^n)``
and success probability ``(1 - lam^2) Tr{Lam conj(element) Lam}``.  Both
routes are implemented independently and must agree; as ``lam -> 1`` the
conditional state converges to the complex conjugate of the retrodicted
state, which is what makes heralding a practical projector onto "what the
detector saw".
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import HeraldImpossibleError, TailToleranceError, TruncationWarning
from .fock import (
    assert_density_matrix,
    check_dim,
    conjugate_in_fock,
    hermitize,
    partial_trace_b,
    uhlmann_fidelity,
)
from .retrodiction import _as_element, retrodicted_state

__all__ = [
    "TmsvParams",
    "HeraldResult",
    "LimitScanPoint",
    "LimitScan",
    "tmsv",
    "heralded_state",
    "heralded_state_from_joint",
    "heralded_closed_form",
    "retrodictive_limit_scan",
]


@dataclass(frozen=True)
class TmsvParams:
    """Two-mode squeezed vacuum: squeezing parameter ``lam`` in [0, 1) per mode dim.

    Warns when the truncation tail ``lam ** (2 * dim)`` exceeds the tail
    budget; scans treat that as a hard error.
    """

    lam: float
    dim: int

    def __post_init__(self):
        lam = float(self.lam)
        d = check_dim(self.dim)
        if not 0.0 <= lam < 1.0:
            raise ValueError(f"squeezing parameter must lie in [0, 1), got {lam}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "dim", d)
        if self.tail > DEFAULT_TOLS.tail:
            warnings.warn(
                f"lam**(2*dim) = {self.tail:.3g} exceeds the truncation budget; "
                f"raise dim above {d} or lower lam below {lam}",
                TruncationWarning,
                stacklevel=2,
            )

    @property
    def tail(self) -> float:
        """Weight ratio of the first discarded Schmidt term, ``lam**(2*dim)``."""
        return self.lam ** (2 * self.dim)


def tmsv(params: TmsvParams) -> np.ndarray:
    """TMSV ket on the composite space, renormalized after truncation.

    Amplitude ``lam**n`` on ``|n, n>`` (mode A major ordering).
    """
    d = params.dim
    vec = np.zeros(d * d, dtype=complex)
    amps = params.lam ** np.arange(d)
    vec[np.arange(d) * d + np.arange(d)] = amps
    return vec / np.linalg.norm(vec)


@dataclass(frozen=True, eq=False)
class HeraldResult:
    """Conditional state of mode A after an outcome fired on mode B."""

    conditional_state: np.ndarray
    success_probability: float
    outcome_label: str


def heralded_state_from_joint(
    rho_ab: np.ndarray, element, tols: Tolerances = DEFAULT_TOLS
) -> HeraldResult:
    """Condition a joint density operator on an outcome measured on mode B."""
    el = _as_element(element)
    db = el.dim
    rho_ab = np.asarray(rho_ab, dtype=complex)
    n = rho_ab.shape[0]
    da, rem = divmod(n, db)
    if rho_ab.ndim != 2 or rho_ab.shape[1] != n or rem or da < 2:
        raise ValueError(
            f"joint state of shape {rho_ab.shape} does not factor as A x {db}"
        )
    kernel = np.kron(np.eye(da), el.matrix)
    unnorm = partial_trace_b(rho_ab @ kernel, da, db)
    prob = float(np.real(np.trace(unnorm)))
    if prob <= tols.trace_floor:
        raise HeraldImpossibleError(
            f"outcome {el.label!r} fires with probability {prob:.3g} on this state"
        )
    rho_a = hermitize(unnorm / prob)
    assert_density_matrix(rho_a, tols, what=f"state heralded by {el.label!r}")
    return HeraldResult(
        conditional_state=rho_a,
        success_probability=min(max(prob, 0.0), 1.0),
        outcome_label=el.label,
    )


def heralded_state(
    psi_ab: np.ndarray, element, tols: Tolerances = DEFAULT_TOLS
) -> HeraldResult:
    """Condition a pure joint ket on an outcome measured on mode B."""
    psi_ab = np.asarray(psi_ab, dtype=complex)
    if psi_ab.ndim != 1:
        raise ValueError("expected a joint ket; use heralded_state_from_joint for operators")
    norm = np.linalg.norm(psi_ab)
    if norm == 0.0:
        raise ValueError("zero joint state")
    psi_ab = psi_ab / norm
    return heralded_state_from_joint(np.outer(psi_ab, psi_ab.conj()), element, tols)


def heralded_closed_form(
    params: TmsvParams, element, tols: Tolerances = DEFAULT_TOLS
) -> HeraldResult:
    """Conditional state for a TMSV resource, without building the joint space.

    ``rho_A = Lam conj(element) Lam / Tr{...}`` with ``Lam = diag(lam^n)``.
    The success probability uses the untruncated TMSV normalization
    ``(1 - lam^2) Tr{Lam conj(element) Lam}``, so it can differ from the
    tensor-product route by a relative ``lam**(2*dim)``; the states agree to
    machine precision since both share the same truncation.
    """
    el = _as_element(element)
    if el.dim != params.dim:
        raise ValueError(f"element dim {el.dim} != TMSV dim {params.dim}")
    lam_diag = params.lam ** np.arange(params.dim)
    filtered = lam_diag[:, None] * conjugate_in_fock(el.matrix) * lam_diag[None, :]
    weight = float(np.real(np.trace(filtered)))
    prob = (1.0 - params.lam**2) * weight
    if prob <= tols.trace_floor:
        raise HeraldImpossibleError(
            f"outcome {el.label!r} fires with probability {prob:.3g} at lam={params.lam}"
        )
    rho_a = hermitize(filtered / weight)
    assert_density_matrix(rho_a, tols, what=f"state heralded by {el.label!r}")
    return HeraldResult(
        conditional_state=rho_a,
        success_probability=min(max(prob, 0.0), 1.0),
        outcome_label=el.label,
    )


@dataclass(frozen=True)
class LimitScanPoint:
    lam: float
    fidelity: float
    success_probability: float


@dataclass(frozen=True)
class LimitScan:
    """Convergence of heralded states toward the conjugated retrodicted state.

    ``fidelity_monotonic`` records whether fidelity was non-decreasing over
    the scanned squeezing values.
    """

    points: tuple
    fidelity_monotonic: bool


def retrodictive_limit_scan(
    element, lambdas, dim: int, tols: Tolerances = DEFAULT_TOLS
) -> LimitScan:
    """Scan squeezing values and measure convergence to the retrodictive limit.

    For each ``lam`` the heralded state is compared, via Uhlmann fidelity,
    with the complex conjugate of the element's retrodicted state (the exact
    ``lam -> 1`` limit).  Values whose truncation tail ``lam**(2*dim)``
    exceeds ``tols.tail`` are refused with :class:`TailToleranceError`
    rather than silently scanned on an inadequate basis.
    """
    d = check_dim(dim)
    el = _as_element(element)
    if el.dim != d:
        raise ValueError(f"element dim {el.dim} != scan dim {d}")
    lambdas = [float(l) for l in lambdas]
    for lam in lambdas:
        if not 0.0 <= lam < 1.0:
            raise ValueError(f"squeezing parameter must lie in [0, 1), got {lam}")
        if lam ** (2 * d) > tols.tail:
            raise TailToleranceError(
                f"lam={lam} leaves tail {lam ** (2 * d):.3g} > {tols.tail:.3g} "
                f"at dim {d}; increase dim"
            )
    target = conjugate_in_fock(retrodicted_state(el, tols).state)
    points = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for lam in lambdas:
            result = heralded_closed_form(TmsvParams(lam, d), el, tols)
            fid = uhlmann_fidelity(result.conditional_state, target)
            points.append(
                LimitScanPoint(
                    lam=lam,
                    fidelity=fid,
                    success_probability=result.success_probability,
                )
            )
    fids = [pt.fidelity for pt in points]
    monotonic = all(b - a >= -1e-12 for a, b in zip(fids, fids[1:]))
    return LimitScan(points=tuple(points), fidelity_monotonic=monotonic)
