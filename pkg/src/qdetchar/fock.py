"""Dense linear algebra on a truncated Fock space.

States are complex 1-D ``numpy`` arrays over the number basis ``|0..dim-1>``,
operators are complex 2-D arrays.  Composite two-mode objects use the
row-major index convention ``(i_a, i_b) -> i_a * dim_b + i_b``, which is what
``numpy.kron`` produces, so :func:`tensor` and :func:`partial_trace_b` are
exact inverses on product states.

All constructors renormalize after truncation and warn through
:class:`~qdetchar.errors.TruncationWarning` when the cutoff looks too tight
for the requested state.
"""

from __future__ import annotations

import operator
import warnings

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import TruncationWarning

__all__ = [
    "check_dim",
    "fock_state",
    "coherent_state",
    "squeezed_vacuum",
    "annihilation",
    "number_mean",
    "tensor",
    "partial_trace_b",
    "conjugate_in_fock",
    "dagger",
    "hermitize",
    "hermiticity_defect",
    "eig_hermitian",
    "purity",
    "trace_distance",
    "uhlmann_fidelity",
    "assert_density_matrix",
]


def check_dim(dim) -> int:
    """Validate a Fock-space truncation dimension (number levels 0..dim-1)."""
    d = operator.index(dim)
    if d < 2:
        raise ValueError(f"truncation dimension must be at least 2, got {d}")
    return d


def fock_state(n: int, dim: int) -> np.ndarray:
    """Number state ``|n>`` as a unit vector."""
    d = check_dim(dim)
    n = operator.index(n)
    if not 0 <= n < d:
        raise ValueError(f"level {n} outside truncation 0..{d - 1}")
    vec = np.zeros(d, dtype=complex)
    vec[n] = 1.0
    return vec


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Coherent state with amplitude ``alpha``, renormalized after truncation.

    Amplitudes follow ``alpha**n / sqrt(n!)``.  Warns when the expected
    photon number ``|alpha|**2`` exceeds ``dim / 4``, the point beyond which
    the discarded tail stops being negligible at double precision.
    """
    d = check_dim(dim)
    alpha = complex(alpha)
    if abs(alpha) ** 2 > d / 4:
        warnings.warn(
            f"coherent state with |alpha|^2 = {abs(alpha) ** 2:.3g} is poorly "
            f"represented at truncation {d}",
            TruncationWarning,
            stacklevel=2,
        )
    vec = np.empty(d, dtype=complex)
    vec[0] = 1.0
    for n in range(1, d):
        vec[n] = vec[n - 1] * alpha / np.sqrt(n)
    return vec / np.linalg.norm(vec)


def squeezed_vacuum(r: float, dim: int) -> np.ndarray:
    """Squeezed vacuum with real squeezing parameter ``r``.

    Populates even levels with amplitudes proportional to
    ``(-tanh r)**k * sqrt((2k)!) / (2**k k!)``; the ``x`` quadrature variance
    of the untruncated state is ``exp(-2 r) / 2``.
    """
    d = check_dim(dim)
    r = float(r)
    t = np.tanh(r)
    vec = np.zeros(d, dtype=complex)
    vec[0] = 1.0
    amp = 1.0
    for k in range(1, (d + 1) // 2):
        # ratio of successive even-level amplitudes
        amp *= -t * np.sqrt((2 * k - 1) / (2 * k))
        vec[2 * k] = amp
    return vec / np.linalg.norm(vec)


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator, ``a |n> = sqrt(n) |n-1>``."""
    d = check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)


def number_mean(rho: np.ndarray) -> float:
    """Mean photon number ``sum_n n rho_nn`` of a density matrix."""
    rho = np.asarray(rho)
    return float(np.real(np.sum(np.arange(rho.shape[0]) * np.diag(rho))))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two states or two operators (mode A major)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("tensor expects two vectors or two square matrices")
    return np.kron(a, b)


def partial_trace_b(m: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out mode B of an operator on the composite space A (x) B."""
    da, db = check_dim(dim_a), check_dim(dim_b)
    m = np.asarray(m, dtype=complex)
    if m.shape != (da * db, da * db):
        raise ValueError(f"operator shape {m.shape} does not match {da}*{db}")
    return np.einsum("ikjk->ij", m.reshape(da, db, da, db))


def conjugate_in_fock(m: np.ndarray) -> np.ndarray:
    """Entrywise complex conjugate in the number basis (transpose for Hermitian input)."""
    return np.conj(np.asarray(m, dtype=complex))


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    """Symmetrize to the nearest Hermitian matrix, ``(m + m^dag) / 2``."""
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + m.conj().T)


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry of ``|m - m^dag|``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def eig_hermitian(m: np.ndarray):
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    The input is symmetrized first so that roundoff-level asymmetry cannot
    leak imaginary parts into the spectrum.  Returns ``(w, v)`` with
    eigenvectors in the columns of ``v``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return np.linalg.eigh(hermitize(m))


def purity(rho: np.ndarray) -> float:
    """``Tr(rho @ rho)`` for a Hermitian matrix, as a real number."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of ``rho - sigma``."""
    w, _ = eig_hermitian(np.asarray(rho) - np.asarray(sigma))
    return 0.5 * float(np.sum(np.abs(w)))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = eig_hermitian(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2`` between two states.

    Uses the squared ("probability") convention, so for a pure ``sigma =
    |psi><psi|`` it reduces to ``<psi| rho |psi>``.  Clamped into [0, 1].
    """
    root = _psd_sqrt(rho)
    w, _ = eig_hermitian(root @ np.asarray(sigma, dtype=complex) @ root)
    val = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(val, 0.0), 1.0)


def assert_density_matrix(
    rho: np.ndarray, tols: Tolerances = DEFAULT_TOLS, what: str = "state"
) -> np.ndarray:
    """Check Hermiticity, positivity and unit trace; raise ``ValueError`` if violated."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{what}: expected a square matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError(f"{what}: non-finite entries")
    defect = hermiticity_defect(rho)
    if defect > tols.herm:
        raise ValueError(f"{what}: Hermiticity defect {defect:.3g} exceeds {tols.herm:.3g}")
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > tols.norm:
        raise ValueError(f"{what}: trace {tr!r} deviates from 1 beyond {tols.norm:.3g}")
    w = np.linalg.eigvalsh(hermitize(rho))
    if w[0] < -tols.psd:
        raise ValueError(f"{what}: negative eigenvalue {w[0]:.3g} beyond {tols.psd:.3g}")
    return rho
