"""SU(2) propagator algebra and waveform primitives for a driven two-state system.

Conventions used throughout the package: the time unit is the pulse width T,
Rabi frequencies and detunings are angular frequencies in rad/time, and a
propagator is stored as its Cayley-Klein pair (a, b) with

    U = [[a, b], [-conj(b), conj(a)]],    |a|^2 + |b|^2 = 1.

The transition probability between the two bare states is P = |b|^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import simpson

__all__ = [
    "InvalidParameter",
    "InvalidWaveform",
    "CKPropagator",
    "IDENTITY",
    "Waveform",
    "PulseSequence",
    "TimeGrid",
    "transition_probability",
    "compose",
    "phase_shifted",
    "inverse",
    "unitarity_defect",
    "renormalized",
    "pulse_area",
    "sequence_area",
]

DEFAULT_UNITARITY_TOL = 1e-10
DEFAULT_AREA_STEPS = 8192


class InvalidParameter(ValueError):
    """Raised when a physical parameter violates its documented constraint."""


class InvalidWaveform(ValueError):
    """Raised when control functions produce NaN/Inf inside their window."""


@dataclass(frozen=True)
class CKPropagator:
    """An SU(2) propagator as the Cayley-Klein pair (a, b)."""

    a: complex
    b: complex

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.a, self.b], [-np.conj(self.b), np.conj(self.a)]],
            dtype=complex,
        )


IDENTITY = CKPropagator(1.0 + 0.0j, 0.0 + 0.0j)


def transition_probability(u: CKPropagator) -> float:
    """Return P = |b|^2, the population transferred between the bare states."""
    return abs(u.b) ** 2


def unitarity_defect(u: CKPropagator) -> float:
    """Return | |a|^2 + |b|^2 - 1 |."""
    return abs(abs(u.a) ** 2 + abs(u.b) ** 2 - 1.0)


def renormalized(u: CKPropagator) -> CKPropagator:
    """Rescale the pair to unit norm."""
    n = np.sqrt(abs(u.a) ** 2 + abs(u.b) ** 2)
    if n == 0.0 or not np.isfinite(n):
        raise InvalidParameter("cannot renormalize a zero or non-finite CK pair")
    return CKPropagator(u.a / n, u.b / n)


def compose(second: CKPropagator, first: CKPropagator) -> CKPropagator:
    """Matrix product second @ first in CK form (first acts first in time)."""
    a = second.a * first.a - second.b * np.conj(first.b)
    b = second.a * first.b + second.b * np.conj(first.a)
    return CKPropagator(complex(a), complex(b))


def phase_shifted(u: CKPropagator, phi: float) -> CKPropagator:
    """Imprint a constant drive phase phi: (a, b) -> (a, b * exp(i*phi))."""
    return CKPropagator(u.a, u.b * np.exp(1j * phi))


def inverse(u: CKPropagator) -> CKPropagator:
    """Unitary inverse (conj(a), -b)."""
    return CKPropagator(np.conj(u.a), -u.b)


@dataclass(frozen=True)
class Waveform:
    """One pulse: complex Rabi envelope, real detuning, constant drive phase.

    ``rabi`` and ``detuning`` must accept a numpy array of times and return an
    array (a scalar return is broadcast).  Outside ``window`` both controls are
    treated as zero.  A complex ``rabi`` value W(t) enters the Hamiltonian as
    the upper off-diagonal element W(t) * exp(i*phase); real-envelope drives
    are the special case of zero imaginary part.
    """

    rabi: Callable[[np.ndarray], np.ndarray]
    detuning: Callable[[np.ndarray], np.ndarray]
    phase: float = 0.0
    window: Tuple[float, float] = (-6.0, 6.0)

    def __post_init__(self) -> None:
        t0, t1 = self.window
        if not (np.isfinite(t0) and np.isfinite(t1)):
            raise InvalidParameter("waveform window must be finite")
        if not t0 < t1:
            raise InvalidParameter(f"waveform window must satisfy t_start < t_end, got {self.window}")

    @property
    def duration(self) -> float:
        return self.window[1] - self.window[0]


@dataclass(frozen=True)
class PulseSequence:
    """Time-ordered, non-overlapping pulses making up one control sequence."""

    pulses: Tuple[Waveform, ...]

    def __post_init__(self) -> None:
        if not self.pulses:
            raise InvalidParameter("a pulse sequence needs at least one pulse")
        object.__setattr__(self, "pulses", tuple(self.pulses))
        for k in range(len(self.pulses) - 1):
            end = self.pulses[k].window[1]
            start = self.pulses[k + 1].window[0]
            if start < end - 1e-12 * max(1.0, abs(end)):
                raise InvalidParameter(
                    f"pulses {k} and {k + 1} overlap: window end {end} > next start {start}"
                )

    def __len__(self) -> int:
        return len(self.pulses)

    @property
    def span(self) -> Tuple[float, float]:
        return (self.pulses[0].window[0], self.pulses[-1].window[1])


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of sub-intervals on [t_start, t_end]."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise InvalidParameter(f"time grid needs steps >= 2, got {self.steps}")
        if not self.t_start < self.t_end:
            raise InvalidParameter("time grid needs t_start < t_end")

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    def midpoints(self) -> np.ndarray:
        h = self.spacing
        return self.t_start + (np.arange(self.steps) + 0.5) * h


def _sample(fn: Callable[[np.ndarray], np.ndarray], t: np.ndarray) -> np.ndarray:
    out = np.asarray(fn(t))
    if out.shape != t.shape:
        out = np.broadcast_to(out, t.shape)
    return out


def pulse_area(
    rabi: Callable[[np.ndarray], np.ndarray],
    window: Tuple[float, float],
    steps: int = DEFAULT_AREA_STEPS,
) -> float:
    """Integral of |rabi(t)| over the window by composite Simpson quadrature.

    Relative error is far below 1e-6 for the smooth envelopes used here.  For
    a complex envelope the integrand is the modulus, so the counterdiabatic
    term alone integrates to its own area.
    """
    t0, t1 = window
    if not t0 < t1:
        raise InvalidParameter(f"empty integration window {window}")
    if steps < 2:
        raise InvalidParameter("quadrature needs at least 2 steps")
    t = np.linspace(t0, t1, steps + 1)
    y = np.abs(_sample(rabi, t))
    if not np.all(np.isfinite(y)):
        raise InvalidWaveform("envelope is not finite over the window")
    return float(simpson(y, x=t))


def sequence_area(seq: PulseSequence, steps: int = DEFAULT_AREA_STEPS) -> float:
    """Total |envelope| area of a sequence (sum over constituent pulses)."""
    return sum(pulse_area(p.rabi, p.window, steps) for p in seq.pulses)
