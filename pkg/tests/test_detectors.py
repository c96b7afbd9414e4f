"""Detector models, POVM containers and physical validation."""

from fractions import Fraction
from math import comb

import numpy as np
import pytest
from conftest import random_element_matrix

from qdetchar import (
    Povm,
    PovmElement,
    Tolerances,
    complete_with_rest,
    default_guard_levels,
    fock_state,
    ideal_pnr,
    lossy_pnr,
    on_off_apd,
    scaled_projector,
    validate_povm,
)


class TestContainers:
    def test_element_basic_properties(self):
        el = PovmElement("x", 0.25 * np.eye(4))
        assert el.dim == 4
        np.testing.assert_allclose(el.trace_weight, 1.0)
        assert not el.is_null()
        assert PovmElement("z", np.zeros((3, 3))).is_null()

    def test_element_matrix_is_read_only(self):
        el = PovmElement("x", np.eye(3))
        with pytest.raises(ValueError):
            el.matrix[0, 0] = 2.0

    def test_element_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            PovmElement("x", np.ones((2, 3)))
        with pytest.raises(ValueError):
            PovmElement("x", np.array([[np.inf, 0], [0, 1.0]]))

    def test_povm_rejects_duplicates_and_mixed_dims(self):
        a = PovmElement("a", 0.5 * np.eye(3))
        with pytest.raises(ValueError, match="unique"):
            Povm((a, PovmElement("a", 0.5 * np.eye(3))))
        with pytest.raises(ValueError, match="dimensions"):
            Povm((a, PovmElement("b", 0.5 * np.eye(4))))

    def test_povm_lookup_and_guard_range(self):
        p = ideal_pnr(5)
        assert p.outcome("3").matrix[3, 3] == 1.0
        with pytest.raises(KeyError):
            p.outcome("nope")
        with pytest.raises(ValueError, match="guard_levels"):
            Povm(p.elements, guard_levels=5)

    def test_default_guard_is_top_fifth(self):
        assert default_guard_levels(10) == 2
        assert default_guard_levels(11) == 3
        assert default_guard_levels(4) == 1


class TestIdealPnr:
    def test_projectors_and_validation(self):
        p = ideal_pnr(6)
        assert p.labels == tuple(str(n) for n in range(6))
        total = sum(e.matrix for e in p)
        np.testing.assert_array_equal(total, np.eye(6))
        report = validate_povm(p)
        assert report.passed and report.completeness_residual <= 1e-12


class TestLossyPnr:
    def test_binomial_thinning_entries(self):
        p = lossy_pnr(0.6, 10)
        el1 = p.outcome("1")
        for m in range(10):
            expected = float(
                comb(m, 1) * Fraction(3, 5) * Fraction(2, 5) ** (m - 1)
            ) if m >= 1 else 0.0
            np.testing.assert_allclose(el1.matrix[m, m].real, expected, atol=1e-14)

    def test_completeness_exact_on_all_levels(self):
        for eta in (0.3, 0.6, 0.99):
            p = lossy_pnr(eta, 40)
            total = sum(e.matrix for e in p)
            assert np.max(np.abs(total - np.eye(40))) <= 1e-12

    def test_unit_efficiency_reduces_to_ideal(self):
        lossy = lossy_pnr(1.0, 12)
        ideal = ideal_pnr(12)
        for a, b in zip(lossy, ideal):
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-15)

    def test_zero_efficiency_all_null_but_first(self):
        p = lossy_pnr(0.0, 6)
        np.testing.assert_array_equal(p.outcome("0").matrix, np.eye(6))
        for e in list(p)[1:]:
            assert e.is_null()
        # null outcomes are kept in place, not deleted
        assert len(p) == 6
        assert validate_povm(p).passed

    def test_rejects_bad_efficiency(self):
        with pytest.raises(ValueError):
            lossy_pnr(1.5, 8)


class TestOnOffApd:
    def test_click_complement_sums_to_identity(self):
        p = on_off_apd(0.37, 0.05, 14)
        total = p.outcome("off").matrix + p.outcome("on").matrix
        np.testing.assert_array_equal(total, np.eye(14))
        assert validate_povm(p).passed

    def test_click_probability_on_two_photons(self):
        # 1 - (1-eta)^2 at eta = 0.5 and no dark counts
        p = on_off_apd(0.5, 0.0, 8)
        np.testing.assert_allclose(p.outcome("on").matrix[2, 2].real, 0.75, atol=1e-15)

    def test_dark_counts_lift_vacuum_click(self):
        p = on_off_apd(0.5, 0.1, 8)
        np.testing.assert_allclose(p.outcome("off").matrix[0, 0].real, 0.9, atol=1e-15)
        np.testing.assert_allclose(p.outcome("on").matrix[0, 0].real, 0.1, atol=1e-15)

    def test_rejects_bad_rates(self):
        with pytest.raises(ValueError):
            on_off_apd(0.5, -0.1, 8)


class TestScaledProjector:
    def test_rank_one_and_weight(self, rng):
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        el = scaled_projector(v, 0.3)
        w = np.linalg.eigvalsh(el.matrix)
        np.testing.assert_allclose(el.trace_weight, 0.3, atol=1e-12)
        assert abs(w[-2]) <= 1e-12  # second eigenvalue: rank one
        np.testing.assert_allclose(w[-1], 0.3, atol=1e-12)

    def test_normalizes_target(self):
        el = scaled_projector(2.0 * fock_state(1, 4), 1.0)
        np.testing.assert_allclose(el.matrix[1, 1].real, 1.0, atol=1e-15)

    def test_rejects_bad_weight_and_zero_vector(self):
        with pytest.raises(ValueError):
            scaled_projector(fock_state(0, 4), 0.0)
        with pytest.raises(ValueError):
            scaled_projector(np.zeros(4), 0.5)


class TestCompleteWithRest:
    def test_rest_spectrum(self):
        el = scaled_projector(fock_state(1, 3), 0.3)
        p = complete_with_rest([el])
        w = np.linalg.eigvalsh(p.outcome("rest").matrix)
        np.testing.assert_allclose(np.sort(w), [0.7, 1.0, 1.0], atol=1e-12)
        assert validate_povm(p).passed

    def test_rejects_overweight_elements(self):
        el = PovmElement("too-big", 1.2 * np.eye(3))
        with pytest.raises(ValueError, match="exceed"):
            complete_with_rest([el])

    def test_clips_roundoff_negative_complement(self):
        el = PovmElement("full", np.eye(3) * (1.0 + 5e-11))
        p = complete_with_rest([el])
        assert np.linalg.eigvalsh(p.outcome("rest").matrix)[0] >= 0.0


class TestValidation:
    def test_random_completed_measurements_pass(self, rng):
        for _ in range(10):
            d = int(rng.integers(2, 12))
            m = 0.5 * random_element_matrix(rng, d)
            p = complete_with_rest([PovmElement("a", m)])
            assert validate_povm(p).passed

    def test_non_hermitian_flagged(self):
        bad = np.array([[0.5, 0.2], [0.0, 0.5]], dtype=complex)
        p = Povm((PovmElement("h", bad), PovmElement("r", np.eye(2) - 0.5 * (bad + bad.conj().T))))
        report = validate_povm(p)
        assert not report.passed
        assert report.elements[0].hermiticity_defect > 1e-10

    def test_overcomplete_residual_reported(self):
        p = Povm((PovmElement("a", 0.5 * np.eye(3)), PovmElement("b", 0.6 * np.eye(3))))
        report = validate_povm(p)
        assert not report.passed
        np.testing.assert_allclose(report.completeness_residual, 0.1, atol=1e-12)

    def test_eigenvalue_above_one_flagged(self):
        p = Povm((PovmElement("a", 1.2 * np.eye(2)),))
        report = validate_povm(p)
        assert not report.passed and report.elements[0].max_eigenvalue > 1.0

    def test_guard_levels_forgive_truncation_leak(self):
        # complete on levels 0..6, leaking on the top three
        d = 10
        diag = np.ones(d)
        diag[-3:] = 0.7
        p_strict = Povm((PovmElement("a", np.diag(diag).astype(complex)),), guard_levels=0)
        p_guarded = Povm((PovmElement("a", np.diag(diag).astype(complex)),), guard_levels=3)
        assert not validate_povm(p_strict).passed
        report = validate_povm(p_guarded)
        assert report.passed and report.checked_levels == 7

    def test_tolerances_are_adjustable(self):
        p = Povm((PovmElement("a", (1.0 + 1e-7) * np.eye(2)),))
        assert not validate_povm(p).passed
        assert validate_povm(p, Tolerances(psd=1e-6, completeness=1e-6)).passed

    def test_summary_mentions_residual(self):
        p = Povm((PovmElement("a", 0.5 * np.eye(2)),))
        assert "completeness residual 0.5" in validate_povm(p).summary()
