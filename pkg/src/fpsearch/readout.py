"""Crush-gradient readout: doublet amplitudes and probability estimates.

After a crush gradient removes coherences, the proton spectrum taken
through a 90-degree y observation pulse reduces to two signed line
amplitudes, one per doublet component. The population difference across
each proton transition sets the line height: the sign encodes the state of
qubit 1 (positive for 0) and the component encodes qubit 2 (left, the
higher-frequency line, for 0). Line amplitudes are handled analytically;
Lorentzian traces exist only for rendering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ATOL
from .pulses import SpinSystem
from .search import OracleSpec


class ReadoutError(ValueError):
    """Readout chain misuse (non-diagonal input, empty reference, ...)."""


class NoSignalOracleError(ReadoutError):
    """The oracle's matching set produces no net spectral signal."""


@dataclass(frozen=True)
class Spectrum:
    """Signed doublet amplitudes, normalized to the reference preparation.

    ``left_amp`` belongs to the higher-frequency component at +J/2, drawn
    leftmost under the convention that frequency increases right to left.
    """

    left_amp: float
    right_amp: float
    line_freqs: tuple[float, float] = (97.4, -97.4)


def crush(rho: np.ndarray) -> np.ndarray:
    """Project a density matrix onto its diagonal (dephase coherences)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ReadoutError(f"not a square matrix: shape {rho.shape}")
    return np.diag(np.diag(rho))


def spectrum_from_populations(rho: np.ndarray, system: SpinSystem) -> Spectrum:
    """Doublet amplitudes of a diagonal two-qubit density matrix.

    left = p(00) - p(10) and right = p(01) - p(11): the population
    difference across each proton transition, with the carbon state
    selecting the component. Raises on off-diagonal input; crush first.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ReadoutError(f"expected a 4x4 density matrix, got {rho.shape}")
    off = rho - np.diag(np.diag(rho))
    if np.max(np.abs(off)) > ATOL:
        raise ReadoutError(
            "density matrix has coherences; apply crush() before readout"
        )
    p = np.real(np.diag(rho))
    half_j = system.J / 2.0
    return Spectrum(
        left_amp=float(p[0] - p[2]),
        right_amp=float(p[1] - p[3]),
        line_freqs=(half_j, -half_j),
    )


def fractional_signal(p: float, k: int) -> float:
    """Fractional signal of a success probability.

    Only the traceless part of the density matrix is observable, so the
    signal is not proportional to p: it vanishes at p = 1/4 for one
    matching state and at p = 1/2 for two.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    if k == 1:
        return (4.0 * p - 1.0) / 3.0
    if k == 2:
        return 2.0 * p - 1.0
    raise ValueError(f"fractional signal defined for k in {{1, 2}}, got {k}")


def invert_fractional_signal(f: float, k: int) -> float:
    if k == 1:
        return (3.0 * f + 1.0) / 4.0
    if k == 2:
        return (f + 1.0) / 2.0
    raise ValueError(f"fractional signal defined for k in {{1, 2}}, got {k}")


def signal_weights(oracle: OracleSpec) -> tuple[float, float]:
    """Weights (wl, wr) so that wl*left + wr*right estimates the signal.

    For one matching state a single signed component carries the result;
    for two, the sum or difference of the components does. The two k=2
    sets whose members differ only in qubit 1 put the whole population
    difference on the unobserved carbon channel and are flagged instead.
    """
    sets = {
        frozenset({"00"}): (1.0, 0.0),
        frozenset({"01"}): (0.0, 1.0),
        frozenset({"10"}): (-1.0, 0.0),
        frozenset({"11"}): (0.0, -1.0),
        frozenset({"00", "01"}): (1.0, 1.0),
        frozenset({"10", "11"}): (-1.0, -1.0),
        frozenset({"00", "11"}): (1.0, -1.0),
        frozenset({"01", "10"}): (-1.0, 1.0),
    }
    if oracle.n != 2 or oracle.k not in (1, 2):
        raise ValueError("signal pattern defined for n=2 with k in {1, 2}")
    try:
        return sets[oracle.matching]
    except KeyError:
        raise NoSignalOracleError(
            f"matching set {oracle.label()} produces no net proton signal"
        ) from None


def is_signal_visible(oracle: OracleSpec) -> bool:
    try:
        signal_weights(oracle)
    except NoSignalOracleError:
        return False
    return True


def direct_target_density(oracle: OracleSpec) -> np.ndarray:
    """Crushed density of the directly prepared target superposition."""
    rho = np.zeros((oracle.dim, oracle.dim), dtype=complex)
    for i in oracle.indices:
        rho[i, i] = 1.0 / oracle.k
    return rho


def reference_spectrum(oracle: OracleSpec, system: SpinSystem) -> Spectrum:
    """Spectrum of the direct target preparation, used for normalization."""
    return spectrum_from_populations(direct_target_density(oracle), system)


def estimate_probability(
    spectrum: Spectrum, reference: Spectrum, oracle: OracleSpec
) -> float:
    """Success probability recovered from a spectrum and its reference.

    Forms the signed component combination dictated by the oracle, divides
    by the same combination of the reference, and inverts the fractional
    signal relation. The result is clamped to [0, 1].
    """
    wl, wr = signal_weights(oracle)
    ref = wl * reference.left_amp + wr * reference.right_amp
    if abs(ref) < 1e-15:
        raise ReadoutError("reference spectrum has no signal in the used combination")
    f = (wl * spectrum.left_amp + wr * spectrum.right_amp) / ref
    return float(min(1.0, max(0.0, invert_fractional_signal(f, oracle.k))))


def lorentzian_trace(
    spectrum: Spectrum, system: SpinSystem, freqs: np.ndarray
) -> np.ndarray:
    """Rendered lineshape: two Lorentzians with T2-limited width.

    Returns an (N, 2) array of (frequency, intensity). Peak heights equal
    the line amplitudes; the full width at half maximum is 1/(pi*T2) of
    the observed proton.
    """
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1 or freqs.size < 2:
        raise ValueError("frequency grid must be a 1-D array of at least 2 points")
    if not np.all(np.diff(freqs) > 0):
        raise ValueError("frequency grid must be strictly increasing")
    hwhm = 1.0 / (2.0 * np.pi * system.T2_H)
    y = np.zeros_like(freqs)
    for amp, f0 in ((spectrum.left_amp, spectrum.line_freqs[0]),
                    (spectrum.right_amp, spectrum.line_freqs[1])):
        y += amp * hwhm**2 / ((freqs - f0) ** 2 + hwhm**2)
    return np.column_stack([freqs, y])


def format_trace(trace: np.ndarray) -> str:
    """Two-column text form of a rendered trace (frequency Hz, intensity)."""
    lines = [f"{f:.12g} {y:.12g}" for f, y in np.asarray(trace)]
    return "\n".join(lines) + "\n"
