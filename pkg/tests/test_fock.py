"""Foundation layer: state constructors, composites, eigensolver."""

import numpy as np
import pytest
from conftest import random_density, random_hermitian, random_pure

from qdetchar import TruncationWarning
from qdetchar.fock import (
    annihilation,
    assert_density_matrix,
    check_dim,
    coherent_state,
    conjugate_in_fock,
    eig_hermitian,
    fock_state,
    hermiticity_defect,
    number_mean,
    partial_trace_b,
    purity,
    squeezed_vacuum,
    tensor,
    trace_distance,
    uhlmann_fidelity,
)


class TestConstructors:
    def test_check_dim_rejects_small_and_non_integer(self):
        with pytest.raises(ValueError):
            check_dim(1)
        with pytest.raises(TypeError):
            check_dim(3.5)
        assert check_dim(2) == 2

    def test_fock_state_is_basis_vector(self):
        v = fock_state(3, 8)
        assert v[3] == 1.0 and np.linalg.norm(v) == 1.0
        with pytest.raises(ValueError):
            fock_state(8, 8)
        with pytest.raises(ValueError):
            fock_state(-1, 8)

    def test_coherent_vacuum_probability(self):
        # |<0|alpha>|^2 = exp(-|alpha|^2) for alpha = 0.5
        v = coherent_state(0.5, 30)
        np.testing.assert_allclose(abs(v[0]) ** 2, np.exp(-0.25), atol=1e-12)

    def test_coherent_mean_photon_number(self):
        v = coherent_state(1.0, 30)
        mean = float(np.sum(np.arange(30) * np.abs(v) ** 2))
        np.testing.assert_allclose(mean, 1.0, atol=1e-6)

    def test_coherent_complex_amplitude_phases(self):
        alpha = 0.4 + 0.3j
        v = coherent_state(alpha, 25)
        # ratio of successive amplitudes is alpha / sqrt(n)
        for n in range(1, 6):
            np.testing.assert_allclose(v[n] / v[n - 1], alpha / np.sqrt(n), atol=1e-12)

    def test_coherent_truncation_warning(self):
        with pytest.warns(TruncationWarning):
            coherent_state(3.0, 12)

    def test_constructors_unit_norm(self, rng):
        for _ in range(25):
            d = int(rng.integers(2, 40))
            alpha = rng.normal() + 1j * rng.normal()
            r = rng.normal()
            for v in (coherent_state(alpha / 2, d), squeezed_vacuum(r / 2, d)):
                np.testing.assert_allclose(np.linalg.norm(v), 1.0, atol=1e-12)

    def test_squeezed_vacuum_even_levels_only(self):
        v = squeezed_vacuum(0.7, 21)
        assert np.all(v[1::2] == 0)
        # amplitude signs alternate with (-tanh r)**k
        signs = np.sign(v[0:10:2].real)
        np.testing.assert_array_equal(signs, [1, -1, 1, -1, 1])

    def test_squeezed_vacuum_quadrature_variance(self):
        # Var x = exp(-2r)/2, computed with explicit operators as the oracle
        d = 40
        v = squeezed_vacuum(0.5, d)
        a = annihilation(d)
        x = (a + a.conj().T) / np.sqrt(2)
        var = float(np.real(v.conj() @ (x @ x) @ v))
        np.testing.assert_allclose(var, np.exp(-1.0) / 2, atol=1e-4)

    def test_squeezed_zero_is_vacuum(self):
        np.testing.assert_allclose(squeezed_vacuum(0.0, 10), fock_state(0, 10))


class TestComposites:
    def test_tensor_index_convention(self):
        # |1>_A |2>_B lands at index 1 * dim_b + 2
        v = tensor(fock_state(1, 3), fock_state(2, 4))
        assert v[1 * 4 + 2] == 1.0 and np.linalg.norm(v) == 1.0

    def test_tensor_trace_multiplies(self, rng):
        a = random_hermitian(rng, 3)
        b = random_hermitian(rng, 5)
        np.testing.assert_allclose(
            np.trace(tensor(a, b)), np.trace(a) * np.trace(b), atol=1e-12
        )

    def test_tensor_rejects_mixed_ranks(self):
        with pytest.raises(ValueError):
            tensor(fock_state(0, 3), np.eye(3))

    def test_partial_trace_inverts_tensor(self, rng):
        for _ in range(20):
            da = int(rng.integers(2, 7))
            db = int(rng.integers(2, 7))
            rho_a = random_density(rng, da)
            rho_b = random_density(rng, db)
            back = partial_trace_b(tensor(rho_a, rho_b), da, db)
            np.testing.assert_allclose(back, rho_a, atol=1e-12)

    def test_partial_trace_preserves_trace(self, rng):
        m = random_hermitian(rng, 12)
        np.testing.assert_allclose(
            np.trace(partial_trace_b(m, 3, 4)), np.trace(m), atol=1e-12
        )

    def test_partial_trace_shape_guard(self):
        with pytest.raises(ValueError):
            partial_trace_b(np.eye(10), 3, 4)


class TestConjugation:
    def test_preserves_trace_hermiticity_spectrum(self, rng):
        m = random_hermitian(rng, 9)
        c = conjugate_in_fock(m)
        assert hermiticity_defect(c) <= 1e-15
        np.testing.assert_allclose(np.trace(c), np.trace(m), atol=1e-14)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(c), np.linalg.eigvalsh(m), atol=1e-12
        )

    def test_is_entrywise_conjugate(self):
        m = np.array([[1.0, 2j], [-2j, 3.0]])
        np.testing.assert_array_equal(conjugate_in_fock(m), m.conj())


class TestEigHermitian:
    def test_projector_spectrum(self):
        plus = np.full(2, 1 / np.sqrt(2))
        w, _ = eig_hermitian(np.outer(plus, plus))
        np.testing.assert_allclose(w, [0.0, 1.0], atol=1e-15)

    def test_reconstruction_and_ordering(self, rng):
        for _ in range(120):
            d = int(rng.integers(2, 17))
            m = random_hermitian(rng, d)
            w, v = eig_hermitian(m)
            assert np.all(np.diff(w) >= 0)
            scale = max(np.max(np.abs(m)), 1e-30)
            err = np.max(np.abs((v * w) @ v.conj().T - m))
            assert err <= 1e-10 * scale

    def test_symmetrizes_roundoff_asymmetry(self, rng):
        m = random_hermitian(rng, 6)
        m = m + 1e-13 * (rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        w, _ = eig_hermitian(m)
        assert np.isrealobj(w)

    def test_rejects_non_square_and_non_finite(self):
        with pytest.raises(ValueError):
            eig_hermitian(np.ones((2, 3)))
        with pytest.raises(ValueError):
            eig_hermitian(np.array([[np.nan, 0], [0, 1.0]]))


class TestMetrics:
    def test_purity_of_pure_state(self, rng):
        v = random_pure(rng, 7)
        np.testing.assert_allclose(purity(np.outer(v, v.conj())), 1.0, atol=1e-12)

    def test_trace_distance_extremes(self):
        r0 = np.diag([1.0, 0.0]).astype(complex)
        r1 = np.diag([0.0, 1.0]).astype(complex)
        np.testing.assert_allclose(trace_distance(r0, r1), 1.0, atol=1e-14)
        np.testing.assert_allclose(trace_distance(r0, r0), 0.0, atol=1e-14)

    def test_uhlmann_pure_pure_is_overlap(self, rng):
        a = random_pure(rng, 6)
        b = random_pure(rng, 6)
        f = uhlmann_fidelity(np.outer(a, a.conj()), np.outer(b, b.conj()))
        np.testing.assert_allclose(f, abs(np.vdot(a, b)) ** 2, atol=1e-10)

    def test_uhlmann_self_is_one(self, rng):
        rho = random_density(rng, 8)
        np.testing.assert_allclose(uhlmann_fidelity(rho, rho), 1.0, atol=1e-10)

    def test_number_mean(self):
        assert number_mean(np.diag([0.5, 0.0, 0.5]).astype(complex)) == 1.0


class TestDensityMatrixGuard:
    def test_accepts_valid(self, rng):
        assert_density_matrix(random_density(rng, 6))

    def test_rejects_bad_trace_and_negativity(self):
        with pytest.raises(ValueError, match="trace"):
            assert_density_matrix(np.eye(3, dtype=complex))
        with pytest.raises(ValueError, match="negative eigenvalue"):
            assert_density_matrix(np.diag([1.5, -0.5]).astype(complex))
        with pytest.raises(ValueError, match="Hermiticity"):
            assert_density_matrix(np.array([[1.0, 1.0], [0.0, 0.0]], dtype=complex))
