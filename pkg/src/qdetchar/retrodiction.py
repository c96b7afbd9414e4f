"""Retrodicted states, estimator metrics and Bayesian outcome inference.

Reading a measurement backwards: once outcome ``n`` has fired, the state
that best summarizes what must have entered the apparatus is the element
itself, normalized::

    retro_n = element_n / Tr(element_n)

Every figure of merit here is a functional of that state and the element's
trace weight:

projectivity
    Purity of the retrodicted state.  1 exactly when the element is
    proportional to a rank-one projector.
ideality
    ``Tr(element**2) / Tr(element)``, equal to projectivity times trace
    weight.  1 exactly when the element *is* a projector, i.e. the outcome
    fires with unit probability on its target.
fidelity
    Overlap of the retrodicted state with a pure target.
detectivity
    Probability that the outcome fires on a target state, computed here
    through the retrodicted state as ``Tr(element) * <target|retro|target>``
    so that it stays an independent route from the Born rule.

The identities ``ideality = projectivity * trace_weight`` and
``detectivity * projectivity = ideality * fidelity`` tie the four together
and are enforced as postconditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .config import DEFAULT_THRESHOLDS, DEFAULT_TOLS, CategoryThresholds, Tolerances
from .detectors import Povm, PovmElement
from .errors import NullOutcomeError, UnreachableOutcomeError
from .fock import assert_density_matrix, check_dim, purity

__all__ = [
    "RetrodictedState",
    "OutcomeCategory",
    "EstimatorReport",
    "ProbeEntry",
    "ProbeEnsemble",
    "uniform_fock_ensemble",
    "born_probability",
    "retrodicted_state",
    "projectivity",
    "ideality",
    "fidelity",
    "detectivity",
    "proposition_operator",
    "retrodict_ensemble",
    "classify_outcome",
    "estimator_report",
]


@dataclass(frozen=True, eq=False)
class RetrodictedState:
    """Normalized element of a measurement, read as a preparation."""

    state: np.ndarray
    outcome_label: str
    trace_weight: float


class OutcomeCategory(str, Enum):
    """Three-way taxonomy of measurement outcomes."""

    PROJECTIVE_IDEAL = "ProjectiveIdeal"
    PROJECTIVE_NON_IDEAL = "ProjectiveNonIdeal"
    NON_PROJECTIVE = "NonProjective"


@dataclass(frozen=True)
class EstimatorReport:
    """All scalar estimates for one outcome, plus its category.

    ``fidelity`` and ``detectivity`` are present only when a target state
    was supplied; ``target`` carries its label.
    """

    outcome_label: str
    projectivity: float
    ideality: float
    trace_weight: float
    category: OutcomeCategory
    target: Optional[str] = None
    fidelity: Optional[float] = None
    detectivity: Optional[float] = None


def _as_element(element) -> PovmElement:
    if isinstance(element, PovmElement):
        return element
    return PovmElement("element", element)


def _as_density(state: np.ndarray) -> np.ndarray:
    """Accept a ket or a density matrix; return a density matrix."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        norm = np.linalg.norm(state)
        if norm == 0.0:
            raise ValueError("zero state vector")
        state = state / norm
        return np.outer(state, state.conj())
    return state


def born_probability(rho: np.ndarray, element) -> float:
    """Probability ``Tr(rho element)`` of the outcome firing on ``rho``.

    Accepts a ket or density matrix.  Values are clamped into [0, 1];
    anything outside ``[-1e-9, 1 + 1e-9]`` signals invalid inputs and
    raises.
    """
    el = _as_element(element)
    rho = _as_density(rho)
    if rho.shape[0] != el.dim:
        raise ValueError(f"state dim {rho.shape[0]} != element dim {el.dim}")
    val = float(np.real(np.einsum("ij,ji->", rho, el.matrix)))
    if not -1e-9 <= val <= 1.0 + 1e-9:
        raise ValueError(f"probability {val!r} outside [0, 1]; inputs are not physical")
    return min(max(val, 0.0), 1.0)


def retrodicted_state(
    element, tols: Tolerances = DEFAULT_TOLS
) -> RetrodictedState:
    """Normalize a measurement element into the state it retrodicts.

    Raises :class:`NullOutcomeError` for elements with trace at or below
    ``tols.trace_floor``: a null outcome carries no retrodictive content.
    """
    el = _as_element(element)
    weight = el.trace_weight
    if weight <= tols.trace_floor:
        raise NullOutcomeError(
            f"outcome {el.label!r} has trace {weight:.3g}; nothing to retrodict"
        )
    rho = np.asarray(el.matrix) / weight
    assert_density_matrix(rho, tols, what=f"retrodicted state of {el.label!r}")
    return RetrodictedState(state=rho, outcome_label=el.label, trace_weight=weight)


def projectivity(retro: RetrodictedState) -> float:
    """Purity of the retrodicted state, in ``(1/dim, 1]``."""
    return purity(retro.state)


def ideality(element, tols: Tolerances = DEFAULT_TOLS) -> float:
    """``Tr(element**2) / Tr(element)``, in ``(0, 1]`` for physical elements."""
    el = _as_element(element)
    weight = el.trace_weight
    if weight <= tols.trace_floor:
        raise NullOutcomeError(f"outcome {el.label!r} has trace {weight:.3g}")
    return purity(el.matrix) / weight


def fidelity(retro: RetrodictedState, target: np.ndarray) -> float:
    """Overlap ``<target| retro |target>`` with a pure target, in [0, 1]."""
    target = np.asarray(target, dtype=complex)
    if target.ndim != 1:
        raise ValueError("target must be a state vector")
    norm = np.linalg.norm(target)
    if norm == 0.0:
        raise ValueError("zero target vector")
    target = target / norm
    val = float(np.real(target.conj() @ retro.state @ target))
    return min(max(val, 0.0), 1.0)


def detectivity(element, target, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Probability that the outcome fires on the target state.

    Computed through the retrodicted state,
    ``Tr(element) * Tr(target retro)``, deliberately not through
    :func:`born_probability`; the two routes agreeing is a consistency
    check, not a tautology.
    """
    retro = retrodicted_state(element, tols)
    rho_t = _as_density(target)
    val = retro.trace_weight * float(np.real(np.einsum("ij,ji->", rho_t, retro.state)))
    return min(max(val, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class ProbeEntry:
    """One hypothesis in a probe ensemble: a prior and a preparation."""

    prior: float
    state: np.ndarray
    label: str

    def __post_init__(self):
        p = float(self.prior)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"prior must lie in [0, 1], got {p}")
        rho = _as_density(self.state)
        rho = np.array(rho, dtype=complex)
        rho.setflags(write=False)
        object.__setattr__(self, "prior", p)
        object.__setattr__(self, "state", rho)
        object.__setattr__(self, "label", str(self.label))

    @property
    def dim(self) -> int:
        return self.state.shape[0]


@dataclass(frozen=True, eq=False)
class ProbeEnsemble:
    """Prior-weighted family of candidate input states."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("ensemble needs at least one entry")
        dims = {e.dim for e in entries}
        if len(dims) != 1:
            raise ValueError(f"mixed entry dimensions: {sorted(dims)}")
        total = sum(e.prior for e in entries)
        if abs(total - 1.0) > DEFAULT_TOLS.norm:
            raise ValueError(f"priors sum to {total!r}, not 1")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries[0].dim

    @property
    def probe_state(self) -> np.ndarray:
        """Prior-averaged state ``sum_m prior_m rho_m``."""
        return sum(e.prior * e.state for e in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def uniform_fock_ensemble(dim: int, count: Optional[int] = None) -> ProbeEnsemble:
    """Uniform priors over the first ``count`` number states (default: all)."""
    d = check_dim(dim)
    n = d if count is None else int(count)
    if not 1 <= n <= d:
        raise ValueError(f"count {n} outside 1..{d}")
    entries = []
    for m in range(n):
        rho = np.zeros((d, d), dtype=complex)
        rho[m, m] = 1.0
        entries.append(ProbeEntry(prior=1.0 / n, state=rho, label=str(m)))
    return ProbeEnsemble(tuple(entries))


def proposition_operator(entry: ProbeEntry, dim: int) -> np.ndarray:
    """Operator ``dim * prior * rho`` answering "was the input this state?".

    Pairing it with a retrodicted state under the trace reproduces the
    Bayesian posterior exactly when the prior-averaged probe is maximally
    mixed; exposing both routes keeps that equivalence checkable instead of
    assumed.
    """
    return float(dim) * entry.prior * np.asarray(entry.state)


def retrodict_ensemble(
    povm: Povm,
    outcome_label: str,
    ensemble: ProbeEnsemble,
    tols: Tolerances = DEFAULT_TOLS,
):
    """Bayesian posterior over ensemble entries, given that one outcome fired.

    Returns ``[(label, posterior), ...]`` in ensemble order.  Raises
    :class:`UnreachableOutcomeError` when the outcome has (near-)zero
    probability under the prior-averaged probe state.
    """
    el = povm.outcome(outcome_label)
    if ensemble.dim != povm.dim:
        raise ValueError(f"ensemble dim {ensemble.dim} != measurement dim {povm.dim}")
    likelihoods = [born_probability(e.state, el) for e in ensemble]
    evidence = sum(l * e.prior for l, e in zip(likelihoods, ensemble))
    if evidence <= tols.trace_floor:
        raise UnreachableOutcomeError(
            f"outcome {outcome_label!r} has probability {evidence:.3g} "
            "under this ensemble"
        )
    return [
        (e.label, l * e.prior / evidence) for l, e in zip(likelihoods, ensemble)
    ]


def classify_outcome(
    projectivity_value: float,
    ideality_value: float,
    thresholds: CategoryThresholds = DEFAULT_THRESHOLDS,
) -> OutcomeCategory:
    """Sort an outcome into the three-category taxonomy.

    Projective and ideal when both estimates clear their thresholds;
    projective but non-ideal when only projectivity does; otherwise
    non-projective.
    """
    if projectivity_value >= thresholds.projectivity_min:
        if ideality_value >= thresholds.ideality_min:
            return OutcomeCategory.PROJECTIVE_IDEAL
        return OutcomeCategory.PROJECTIVE_NON_IDEAL
    return OutcomeCategory.NON_PROJECTIVE


def estimator_report(
    element,
    target: Optional[np.ndarray] = None,
    target_label: Optional[str] = None,
    thresholds: CategoryThresholds = DEFAULT_THRESHOLDS,
    tols: Tolerances = DEFAULT_TOLS,
) -> EstimatorReport:
    """Compute every estimator for one outcome and classify it.

    The two internal identities (ideality = projectivity * trace weight,
    and detectivity * projectivity = ideality * fidelity when a target is
    given) are verified to 1e-9 before the report is returned.
    """
    el = _as_element(element)
    retro = retrodicted_state(el, tols)
    proj = projectivity(retro)
    ideal = ideality(el, tols)
    if abs(ideal - proj * retro.trace_weight) > 1e-9:
        raise RuntimeError(
            f"estimator identity violated for {el.label!r}: "
            f"ideality {ideal!r} vs projectivity*weight {proj * retro.trace_weight!r}"
        )
    fid = det = None
    if target is not None:
        fid = fidelity(retro, target)
        det = detectivity(el, target, tols)
        if abs(det * proj - ideal * fid) > 1e-9:
            raise RuntimeError(
                f"detectivity identity violated for {el.label!r}"
            )
    return EstimatorReport(
        outcome_label=el.label,
        projectivity=proj,
        ideality=ideal,
        trace_weight=retro.trace_weight,
        category=classify_outcome(proj, ideal, thresholds),
        target=target_label if target is not None else None,
        fidelity=fid,
        detectivity=det,
    )
