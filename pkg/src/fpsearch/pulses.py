"""Pulse-level model of a two-spin register: rf rotations and coupling delays.

The spin system is a heteronuclear pair (labelled ``H`` and ``C``) coupled
by an Ising interaction ``pi*J*2HzCz``, driven on resonance. Rf pulses are
hard rotations: coupling evolution during a pulse is neglected, which is a
good approximation when the 90-degree pulse time is much shorter than 1/J
(15 us against roughly 5.1 ms at the default coupling). Pulse durations
therefore never enter a unitary; they only scale through the error model.

Systematic errors are coherent: an rf amplitude miscalibration scales every
nominal rotation angle on a channel by ``1 + eps``, and a coupling
miscalibration makes delays programmed for J evolve under ``J*(1+delta_J)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPINS = ("H", "C")

# Ideal pulse sequences must reproduce their gate-level unitary this well.
SEQUENCE_ATOL = 1e-10

# Diagonal of the 2HzCz product operator in the |HC> basis.
_COUPLING_DIAG = np.array([0.5, -0.5, -0.5, 0.5])

RF_PULSE = "rf_pulse"
DELAY = "delay"
Z_VIRTUAL = "z_virtual"


class VirtualZError(ValueError):
    """A z_virtual event was simulated in physical mode."""


class UnitarityError(RuntimeError):
    """A simulated operator drifted off the unitary group."""


@dataclass(frozen=True)
class SpinSystem:
    """Static parameters of the two-spin system.

    ``t90`` is carried for completeness and serialization; under the hard
    pulse approximation it never enters a unitary. The T2 values only set
    spectral linewidths.
    """

    J: float = 194.8
    t90: float = 15e-6
    T2_H: float = 1.2
    T2_C: float = 0.6

    def __post_init__(self) -> None:
        for name in ("J", "t90", "T2_H", "T2_C"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ErrorModel:
    """Systematic error knobs, all dimensionless fractions."""

    eps_H: float = 0.0
    eps_C: float = 0.0
    delta_J: float = 0.0

    def __post_init__(self) -> None:
        for name in ("eps_H", "eps_C", "delta_J"):
            if not abs(getattr(self, name)) < 1.0:
                raise ValueError(f"|{name}| must be below 1")

    @classmethod
    def uniform_rf(cls, eps: float) -> "ErrorModel":
        """Same rf amplitude error on both channels, exact coupling."""
        return cls(eps_H=eps, eps_C=eps)

    def eps_for(self, spin: str) -> float:
        return self.eps_H if spin == "H" else self.eps_C


NO_ERROR = ErrorModel()


@dataclass(frozen=True)
class PulseEvent:
    """One timed event: an rf rotation, a free-evolution delay, or a
    bookkeeping z rotation (debug only, never part of a physical sequence)."""

    kind: str
    targets: frozenset[str] = frozenset()
    angle: float = 0.0
    phase: float = 0.0
    duration: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", frozenset(self.targets))
        if self.kind not in (RF_PULSE, DELAY, Z_VIRTUAL):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if any(t not in SPINS for t in self.targets):
            raise ValueError(f"unknown spin in targets {set(self.targets)}")
        if self.kind == RF_PULSE:
            if not self.targets:
                raise ValueError("rf pulse needs at least one target spin")
            if not np.isfinite(self.angle) or not np.isfinite(self.phase):
                raise ValueError("rf pulse angle and phase must be finite")
        elif self.kind == DELAY:
            if not self.duration > 0 or not np.isfinite(self.duration):
                raise ValueError("delay duration must be positive and finite")
        else:
            if len(self.targets) != 1:
                raise ValueError("z_virtual acts on exactly one spin")
            if not np.isfinite(self.angle):
                raise ValueError("z_virtual angle must be finite")

    def target_label(self) -> str:
        return "".join(s for s in SPINS if s in self.targets)


def rf_pulse(targets, angle: float, phase: float = 0.0) -> PulseEvent:
    """A hard rf rotation; negative angles are folded into the axis phase."""
    if isinstance(targets, str):
        targets = {targets}
    if angle < 0:
        angle, phase = -angle, phase + np.pi
    return PulseEvent(RF_PULSE, frozenset(targets), angle, phase % (2 * np.pi))


def coupling_delay(duration: float) -> PulseEvent:
    return PulseEvent(DELAY, frozenset(), duration=duration)


def virtual_z(spin: str, angle: float) -> PulseEvent:
    return PulseEvent(Z_VIRTUAL, frozenset({spin}), angle)


@dataclass(frozen=True)
class GateSpan:
    """Half-open event range [start, stop) compiled from one gate."""

    label: str
    start: int
    stop: int


@dataclass(frozen=True)
class PulseSequence:
    """Ordered events plus the gate descriptors they were compiled from."""

    events: tuple[PulseEvent, ...]
    gates: tuple[GateSpan, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.events)

    def rf_pulse_count(self) -> int:
        return sum(1 for e in self.events if e.kind == RF_PULSE)

    def delay_count(self) -> int:
        return sum(1 for e in self.events if e.kind == DELAY)

    def total_delay_time(self) -> float:
        return float(sum(e.duration for e in self.events if e.kind == DELAY))

    def is_physical(self) -> bool:
        return all(e.kind != Z_VIRTUAL for e in self.events)

    def serialize(self) -> str:
        """Line-oriented text form, one event per line.

        ``PULSE <targets> <angle_deg> <phase_deg>`` for rotations and
        ``DELAY <seconds>`` for free evolution, with ``# gate:`` comments at
        gate boundaries. Numbers carry 9 significant digits. Bookkeeping
        z rotations have no physical line format and are refused.
        """
        starts = {span.start: span.label for span in self.gates}
        lines: list[str] = []
        for i, ev in enumerate(self.events):
            if i in starts:
                lines.append(f"# gate: {starts[i]}")
            if ev.kind == RF_PULSE:
                lines.append(
                    f"PULSE {ev.target_label()} "
                    f"{np.degrees(ev.angle):.9g} {np.degrees(ev.phase):.9g}"
                )
            elif ev.kind == DELAY:
                lines.append(f"DELAY {ev.duration:.9g}")
            else:
                raise VirtualZError(
                    f"event {i} is z_virtual and has no physical serialization"
                )
        return "\n".join(lines) + "\n"


def _rot_xy(theta: float, phase: float) -> np.ndarray:
    # exp(-i*theta*(cos(phase)*sx + sin(phase)*sy)/2)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [
            [c, -1j * np.exp(-1j * phase) * s],
            [-1j * np.exp(1j * phase) * s, c],
        ],
        dtype=complex,
    )


def _rot_z(theta: float) -> np.ndarray:
    return np.diag([np.exp(-1j * theta / 2.0), np.exp(1j * theta / 2.0)])


def pulse_unitary(
    event: PulseEvent,
    system: SpinSystem,
    error: ErrorModel = NO_ERROR,
    allow_virtual: bool = False,
) -> np.ndarray:
    """4x4 unitary of a single event under the given error model."""
    if event.kind == RF_PULSE:
        factors = []
        for spin in SPINS:
            if spin in event.targets:
                theta = event.angle * (1.0 + error.eps_for(spin))
                factors.append(_rot_xy(theta, event.phase))
            else:
                factors.append(np.eye(2, dtype=complex))
        return np.kron(factors[0], factors[1])
    if event.kind == DELAY:
        angle = np.pi * system.J * (1.0 + error.delta_J) * event.duration
        return np.diag(np.exp(-1j * angle * _COUPLING_DIAG))
    if not allow_virtual:
        raise VirtualZError("z_virtual event simulated in physical mode")
    factors = [
        _rot_z(event.angle) if spin in event.targets else np.eye(2, dtype=complex)
        for spin in SPINS
    ]
    return np.kron(factors[0], factors[1])


def sequence_unitary(
    sequence: PulseSequence,
    system: SpinSystem,
    error: ErrorModel = NO_ERROR,
    allow_virtual: bool = False,
) -> np.ndarray:
    """Time-ordered product of the event unitaries (first event acts first)."""
    u = np.eye(4, dtype=complex)
    for i, event in enumerate(sequence.events):
        try:
            u = pulse_unitary(event, system, error, allow_virtual) @ u
        except VirtualZError:
            raise VirtualZError(
                f"z_virtual event at index {i} simulated in physical mode"
            ) from None
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(4))))
    if dev > SEQUENCE_ATOL:
        raise UnitarityError(
            f"sequence of {len(sequence)} events lost unitarity "
            f"(deviation {dev:.3e}); check event parameters"
        )
    return u


def composite_z(theta: float, spin: str) -> tuple[PulseEvent, ...]:
    """z rotation built from transverse pulses: 90(-x), theta(y), 90(x).

    The error-free product equals ``exp(-i*theta*sigma_z/2)`` up to global
    phase. Under an rf amplitude error every constituent pulse scales, so
    the realized rotation tilts off the z axis at first order.
    """
    if abs(theta) > 2 * np.pi:
        raise ValueError("|theta| must not exceed 2*pi")
    if spin not in SPINS:
        raise ValueError(f"unknown spin {spin!r}")
    return (
        rf_pulse(spin, np.pi / 2.0, np.pi),
        rf_pulse(spin, theta, np.pi / 2.0),
        rf_pulse(spin, np.pi / 2.0, 0.0),
    )


def bb1_expand(theta: float, axis_phase: float, targets) -> tuple[PulseEvent, ...]:
    """BB1 composite rotation: three correction pulses, then the rotation.

    The classic broadband sequence (Wimperis-style): pi and 2*pi rotations
    at phases ``phi1`` and ``3*phi1`` off the target axis, with
    ``phi1 = arccos(-theta/(4*pi))``, cancel pulse-length error to high
    order while leaving the error-free rotation untouched.
    """
    if not 0 < theta <= 2 * np.pi:
        raise ValueError("theta must lie in (0, 2*pi]")
    phi1 = np.arccos(-theta / (4 * np.pi))
    return (
        rf_pulse(targets, np.pi, axis_phase + phi1),
        rf_pulse(targets, 2 * np.pi, axis_phase + 3 * phi1),
        rf_pulse(targets, np.pi, axis_phase + phi1),
        rf_pulse(targets, theta, axis_phase),
    )


def rotation_infidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Average-phase-insensitive infidelity ``1 - |tr(u^dag v)/d|**2``.

    Computed from the traceless part of ``u^dag v`` so values far below
    machine epsilon relative to 1 (deep in a composite pulse's corrected
    regime) remain meaningful instead of cancelling to zero.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError("operator shapes differ")
    d = u.shape[0]
    m = u.conj().T @ v
    tr = np.trace(m) / d
    t = m - tr * np.eye(d)
    num = float(np.sum(np.abs(t) ** 2)) / d
    den = float(abs(tr) ** 2) + num
    return num / den
