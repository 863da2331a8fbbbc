import numpy as np
import pytest

from fpsearch import readout
from fpsearch.linalg import pure_density, basis_state
from fpsearch.readout import (
    NoSignalOracleError,
    ReadoutError,
    Spectrum,
    crush,
    direct_target_density,
    estimate_probability,
    format_trace,
    fractional_signal,
    invert_fractional_signal,
    is_signal_visible,
    lorentzian_trace,
    reference_spectrum,
    signal_weights,
    spectrum_from_populations,
)
from fpsearch.search import (
    OracleSpec,
    all_oracles,
    closed_form_success,
    recursive_operator,
)

PI3 = np.pi / 3


class TestCrush:
    def test_pure_zero_state_unchanged(self):
        rho = pure_density(basis_state(2, "00"))
        assert np.allclose(crush(rho), rho)

    def test_bell_state_loses_coherence(self):
        psi = (basis_state(2, "00") + basis_state(2, "11")) / np.sqrt(2)
        rho = crush(pure_density(psi))
        assert np.allclose(rho, np.diag([0.5, 0.0, 0.0, 0.5]))

    def test_idempotent_and_trace_preserving(self, rng):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = z @ z.conj().T
        rho /= np.trace(rho)
        crushed = crush(rho)
        assert np.allclose(crush(crushed), crushed)
        assert np.trace(crushed) == pytest.approx(np.trace(rho))


class TestSpectrumFromPopulations:
    def test_zero_state_positive_left_line(self, system):
        spec = spectrum_from_populations(np.diag([1.0, 0, 0, 0]).astype(complex), system)
        assert spec.left_amp == pytest.approx(1.0)
        assert spec.right_amp == pytest.approx(0.0)
        assert spec.line_freqs == (pytest.approx(97.4), pytest.approx(-97.4))

    def test_maximally_mixed_is_silent(self, system):
        spec = spectrum_from_populations(np.eye(4, dtype=complex) / 4.0, system)
        assert spec.left_amp == pytest.approx(0.0)
        assert spec.right_amp == pytest.approx(0.0)

    def test_antialigned_pair_pattern(self, system):
        rho = np.diag([0.0, 0.5, 0.5, 0.0]).astype(complex)
        spec = spectrum_from_populations(rho, system)
        assert spec.left_amp == pytest.approx(-0.5)
        assert spec.right_amp == pytest.approx(0.5)

    def test_rejects_coherences(self, system):
        psi = (basis_state(2, "00") + basis_state(2, "11")) / np.sqrt(2)
        with pytest.raises(ReadoutError, match="crush"):
            spectrum_from_populations(pure_density(psi), system)

    def test_linearity_and_traceless_sensitivity(self, system, rng):
        # mixing in any amount of the identity does not change the signal
        p = rng.random(4)
        p /= p.sum()
        rho = np.diag(p).astype(complex)
        mixed = 0.3 * rho + 0.7 * np.eye(4) / 4.0
        a = spectrum_from_populations(rho, system)
        b = spectrum_from_populations(mixed, system)
        assert b.left_amp == pytest.approx(0.3 * a.left_amp)
        assert b.right_amp == pytest.approx(0.3 * a.right_amp)


class TestFractionalSignal:
    def test_null_points(self):
        assert fractional_signal(0.25, 1) == pytest.approx(0.0)
        assert fractional_signal(0.5, 2) == pytest.approx(0.0)

    def test_reference_value(self):
        assert fractional_signal(0.9996, 1) == pytest.approx(0.99947, abs=5e-6)

    def test_inverse_roundtrip(self):
        for k in (1, 2):
            for p in (0.0, 0.3, 0.9996, 1.0):
                assert invert_fractional_signal(
                    fractional_signal(p, k), k
                ) == pytest.approx(p, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            fractional_signal(1.2, 1)
        with pytest.raises(ValueError):
            fractional_signal(0.5, 3)


class TestSignalPatterns:
    def test_k1_truth_table(self, system):
        expected = {
            "00": (1.0, 0.0),
            "01": (0.0, 1.0),
            "10": (-1.0, 0.0),
            "11": (0.0, -1.0),
        }
        for spec in all_oracles(2, 1):
            assert signal_weights(spec) == expected[spec.label()]
            ref = reference_spectrum(spec, system)
            wl, wr = expected[spec.label()]
            assert wl * ref.left_amp + wr * ref.right_amp == pytest.approx(1.0)

    def test_flagged_no_signal_sets(self):
        for matching in ({"00", "10"}, {"01", "11"}):
            spec = OracleSpec(2, frozenset(matching), PI3)
            assert not is_signal_visible(spec)
            with pytest.raises(NoSignalOracleError):
                signal_weights(spec)

    def test_visible_k2_patterns(self, system):
        both_pos = reference_spectrum(OracleSpec(2, {"00", "01"}, PI3), system)
        assert both_pos.left_amp > 0 and both_pos.right_amp > 0
        mixed = reference_spectrum(OracleSpec(2, {"01", "10"}, PI3), system)
        assert mixed.left_amp < 0 and mixed.right_amp > 0


class TestEstimateProbability:
    def test_reference_against_itself(self, system):
        for spec in all_oracles(2, 1):
            ref = reference_spectrum(spec, system)
            assert estimate_probability(ref, ref, spec) == pytest.approx(1.0)

    def test_zero_signal_inverts_to_quarter(self, system):
        spec = OracleSpec(2, {"11"}, PI3)
        ref = reference_spectrum(spec, system)
        silent = Spectrum(0.0, 0.0, ref.line_freqs)
        assert estimate_probability(silent, ref, spec) == pytest.approx(0.25)

    def test_clamped_to_unit_interval(self, system):
        spec = OracleSpec(2, {"00"}, PI3)
        ref = reference_spectrum(spec, system)
        overdriven = Spectrum(1.5, 0.0, ref.line_freqs)
        assert estimate_probability(overdriven, ref, spec) == 1.0

    def test_zero_reference_rejected(self, system):
        spec = OracleSpec(2, {"00"}, PI3)
        empty = Spectrum(0.0, 0.0, (97.4, -97.4))
        with pytest.raises(ReadoutError, match="reference"):
            estimate_probability(empty, empty, spec)

    def test_roundtrip_recovers_closed_form(self, system):
        visible = [
            o
            for o in all_oracles(2, 1) + all_oracles(2, 2)
            if is_signal_visible(o)
        ]
        assert len(visible) == 8
        for spec in visible:
            ref = reference_spectrum(spec, system)
            for r in range(4):
                v = recursive_operator(r, spec)
                rho = crush(pure_density(v[:, 0]))
                est = estimate_probability(
                    spectrum_from_populations(rho, system), ref, spec
                )
                assert est == pytest.approx(
                    closed_form_success(r, spec.k, 2), abs=1e-9
                )

    def test_residual_population_symmetry(self):
        # the ideal run leaves the three non-matching populations equal,
        # which is what the k=1 fractional-signal relation relies on
        for spec in all_oracles(2, 1):
            v = recursive_operator(2, spec)
            pops = np.abs(v[:, 0]) ** 2
            rest = [pops[i] for i in range(4) if i != spec.indices[0]]
            assert max(rest) - min(rest) < 1e-12


class TestLorentzianTrace:
    def test_silent_spectrum_is_flat(self, system):
        spec = Spectrum(0.0, 0.0, (97.4, -97.4))
        trace = lorentzian_trace(spec, system, np.linspace(-200.0, 200.0, 101))
        assert np.allclose(trace[:, 1], 0.0)

    def test_single_line_peaks_at_half_j(self, system):
        spec = Spectrum(1.0, 0.0, (system.J / 2, -system.J / 2))
        freqs = np.linspace(-200.0, 200.0, 8001)
        trace = lorentzian_trace(spec, system, freqs)
        peak_freq = trace[np.argmax(trace[:, 1]), 0]
        assert peak_freq == pytest.approx(97.4, abs=0.05)
        assert np.max(trace[:, 1]) == pytest.approx(1.0, abs=1e-3)

    def test_linewidth_from_t2(self, system):
        spec = Spectrum(1.0, 0.0, (0.0, -system.J / 2))
        hwhm = 1.0 / (2 * np.pi * system.T2_H)
        trace = lorentzian_trace(spec, system, np.array([0.0, hwhm]))
        assert trace[1, 1] == pytest.approx(0.5, abs=1e-6)

    def test_antisymmetric_pair(self, system):
        spec = Spectrum(1.0, -1.0, (system.J / 2, -system.J / 2))
        freqs = np.linspace(-200.0, 200.0, 401)
        trace = lorentzian_trace(spec, system, freqs)
        assert np.max(trace[:, 1]) == pytest.approx(-np.min(trace[:, 1]), abs=1e-9)

    def test_requires_monotone_grid(self, system):
        spec = Spectrum(1.0, 0.0, (97.4, -97.4))
        with pytest.raises(ValueError, match="increasing"):
            lorentzian_trace(spec, system, np.array([1.0, 0.5, 2.0]))

    def test_format_two_columns(self, system):
        spec = Spectrum(0.25, 0.0, (97.4, -97.4))
        text = format_trace(lorentzian_trace(spec, system, np.linspace(-1, 1, 3)))
        lines = text.strip().splitlines()
        assert len(lines) == 3 and all(len(ln.split()) == 2 for ln in lines)


def test_direct_target_density_k2():
    rho = direct_target_density(OracleSpec(2, {"01", "10"}, PI3))
    assert np.allclose(rho, np.diag([0.0, 0.5, 0.5, 0.0]))
