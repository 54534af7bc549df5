"""Constructors for the six coherent-control techniques.

Techniques and their canonical parameters (in units of the pulse width T):

=====  =============================  ==========================================
kind   drive                          canonical parameters
=====  =============================  ==========================================
RE     resonant Gaussian              omega0 = sqrt(pi)/T
AF     Gaussian + linear chirp        omega0 = 5*sqrt(pi)/T, beta = 4/T
STA    AF drive + counterdiabatic     omega0 = sqrt(pi)/T, beta = 4/T
SP     shaped envelope and detuning   A7 coefficients (-3.46, -1.365, -0.5)
CAP    3 chirped pulses, phases       omega0 = sqrt(pi)/T, beta = 1/T
UCP    5 resonant pulses, phases      omega0 = sqrt(pi)/T
=====  =============================  ==========================================

Every pulse lives on a window of +-6T around its own center (the Gaussian
tail there is exp(-36), below double-precision resolution).  Composite
sequences use back-to-back windows with zero gap, each constituent chirp
re-centered on its own pulse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.special import erf

from .core import InvalidParameter, PulseSequence, Waveform

__all__ = [
    "SingularControl",
    "ProtocolSpec",
    "PROTOCOL_KINDS",
    "CAP_PHASES",
    "UCP_PHASES",
    "A7_COEFFS",
    "WINDOW_HALF_WIDTH",
    "nominal_spec",
    "build_sequence",
    "build_re",
    "build_af",
    "build_sta",
    "build_sp",
    "build_cap",
    "build_ucp",
    "mixing_angle_rate",
    "adiabaticity_margin",
]

SQRT_PI = float(np.sqrt(np.pi))

PROTOCOL_KINDS = ("RE", "AF", "STA", "SP", "CAP", "UCP")
CAP_PHASES: Tuple[float, ...] = (0.0, 2.0 * np.pi / 3.0, 0.0)
UCP_PHASES: Tuple[float, ...] = (0.0, 5.0 * np.pi / 6.0, np.pi / 3.0, 5.0 * np.pi / 6.0, 0.0)
A7_COEFFS: Tuple[float, ...] = (-3.46, -1.365, -0.5)

# Pulse support half-width in units of the (possibly rescaled) pulse width.
WINDOW_HALF_WIDTH = 6.0

_CHIRPED = {"AF", "STA", "CAP"}
_COMPOSITE = {"CAP": CAP_PHASES, "UCP": UCP_PHASES}


class SingularControl(ValueError):
    """Raised when shaped-pulse coefficients yield non-finite controls."""


@dataclass(frozen=True)
class ProtocolSpec:
    """One technique plus its physical parameters.

    ``sta_nominal`` is the frozen (omega0, beta, T) triple used to synthesize
    the counterdiabatic term; it defaults to the live values and is never
    touched by error channels.
    """

    kind: str
    omega0: float
    T: float
    beta: float = 0.0
    phases: Tuple[float, ...] = ()
    sp_coeffs: Tuple[float, ...] = A7_COEFFS
    sta_nominal: Tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        if self.kind not in PROTOCOL_KINDS:
            raise InvalidParameter(f"unknown protocol kind {self.kind!r}; expected one of {PROTOCOL_KINDS}")
        if not self.omega0 > 0:
            raise InvalidParameter(f"omega0 must be positive, got {self.omega0}")
        if not self.T > 0:
            raise InvalidParameter(f"T must be positive, got {self.T}")
        if not np.isfinite(self.beta):
            raise InvalidParameter("beta must be finite")
        if self.kind not in _CHIRPED and self.beta != 0.0:
            raise InvalidParameter(f"beta is not a parameter of the {self.kind} technique")
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        object.__setattr__(self, "sp_coeffs", tuple(float(c) for c in self.sp_coeffs))
        if self.kind != "SP" and self.sp_coeffs != A7_COEFFS:
            raise InvalidParameter(f"sp_coeffs is not a parameter of the {self.kind} technique")
        if self.kind in _COMPOSITE:
            if not self.phases:
                object.__setattr__(self, "phases", _COMPOSITE[self.kind])
        elif self.phases:
            raise InvalidParameter(f"{self.kind} is a single-pulse technique and takes no phase list")
        if self.kind == "STA":
            frozen = self.sta_nominal or (self.omega0, self.beta, self.T)
            frozen = tuple(float(x) for x in frozen)
            if len(frozen) != 3 or not all(np.isfinite(frozen)):
                raise InvalidParameter("sta_nominal must be a finite (omega0, beta, T) triple")
            object.__setattr__(self, "sta_nominal", frozen)
        elif self.sta_nominal is not None:
            raise InvalidParameter("sta_nominal applies to the STA technique only")
        if self.kind == "SP" and not all(np.isfinite(self.sp_coeffs)):
            raise InvalidParameter("sp_coeffs must be finite")

    @property
    def pulse_count(self) -> int:
        return len(self.phases) if self.phases else 1


def nominal_spec(kind: str, T: float = 1.0) -> ProtocolSpec:
    """Canonical error-free parameters of one technique."""
    if kind == "RE":
        return ProtocolSpec("RE", SQRT_PI / T, T)
    if kind == "AF":
        return ProtocolSpec("AF", 5.0 * SQRT_PI / T, T, beta=4.0 / T)
    if kind == "STA":
        return ProtocolSpec("STA", SQRT_PI / T, T, beta=4.0 / T)
    if kind == "SP":
        return ProtocolSpec("SP", SQRT_PI / T, T)
    if kind == "CAP":
        return ProtocolSpec("CAP", SQRT_PI / T, T, beta=1.0 / T)
    if kind == "UCP":
        return ProtocolSpec("UCP", SQRT_PI / T, T)
    raise InvalidParameter(f"unknown protocol kind {kind!r}")


def mixing_angle_rate(t: np.ndarray, omega0: float, beta: float, T: float) -> np.ndarray:
    """d(theta)/dt for the Gaussian + linear-chirp drive, in closed form.

    theta is half the polar angle atan2(Omega, Delta); its rate is the
    nonadiabatic coupling.  Integrated over all time this equals -pi/2, so
    the counterdiabatic term 2*theta_dot carries an area of exactly pi.

    Written with the exponential split between the two denominator terms so
    the tails underflow to -0.0 instead of overflowing to nan at very large
    |t|/T (wide windows over a frozen narrow shortcut).
    """
    t = np.asarray(t, dtype=float)
    x = (t / T) ** 2
    num = -omega0 * (beta / T) * (2.0 * t * t + T * T)
    with np.errstate(over="ignore"):  # exp overflow far in the tail is the 0 limit
        den = 2.0 * (beta * beta * t * t * np.exp(x) + omega0 * omega0 * T * T * np.exp(-x))
        return num / den


def _sp_shape_functions(
    T: float, coeffs: Sequence[float]
) -> Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """Shaped-pulse envelope and detuning with removable 0/0 forms evaluated.

    The construction schedules theta(t) = (pi/2)*(erf(t/T) + 1) and an
    auxiliary angle gamma with d(gamma)/d(theta) = g(theta)
    = 2 + sum_n 2 n C_n cos(2 n theta).  All published ratios containing
    theta_dot are reduced in theta (theta_dot > 0 cancels), which yields

        Omega(t) = theta_dot * sqrt(1 + sin(theta)^2 g^2)
        Delta(t) = -theta_dot * (cos g + sin g') / (1 + sin^2 g^2)
                   - theta_dot * g * cos(theta)

    with g' = dg/d(theta).  Both controls are finite and smooth on the closed
    window, including the edges theta -> 0, pi.
    """
    cs = np.asarray(coeffs, dtype=float)
    ns = np.arange(1, len(cs) + 1, dtype=float)

    def theta(t: np.ndarray) -> np.ndarray:
        return np.clip(0.5 * np.pi * (erf(t / T) + 1.0), 0.0, np.pi)

    def theta_dot(t: np.ndarray) -> np.ndarray:
        return (SQRT_PI / T) * np.exp(-((t / T) ** 2))

    def g(th: np.ndarray) -> np.ndarray:
        if cs.size == 0:
            return np.full_like(th, 2.0)
        return 2.0 + np.sum(
            2.0 * ns[:, None] * cs[:, None] * np.cos(2.0 * np.outer(ns, th)), axis=0
        )

    def g_prime(th: np.ndarray) -> np.ndarray:
        if cs.size == 0:
            return np.zeros_like(th)
        return np.sum(
            -4.0 * ns[:, None] ** 2 * cs[:, None] * np.sin(2.0 * np.outer(ns, th)), axis=0
        )

    def envelope(t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        th = theta(t)
        x = np.sin(th) * g(th)
        return theta_dot(t) * np.sqrt(1.0 + x * x)

    def detuning(t: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        th = theta(t)
        gg = g(th)
        x = np.sin(th) * gg
        td = theta_dot(t)
        phi_dot = -td * (np.cos(th) * gg + np.sin(th) * g_prime(th)) / (1.0 + x * x)
        return phi_dot - td * gg * np.cos(th)

    return envelope, detuning


def _validate_sp_controls(
    envelope: Callable, detuning: Callable, half_width: float, probes: int = 2001
) -> None:
    t = np.linspace(-half_width, half_width, probes)
    with np.errstate(all="ignore"):
        finite = np.all(np.isfinite(envelope(t))) and np.all(np.isfinite(detuning(t)))
    if not finite:
        raise SingularControl(
            "shaped-pulse controls are not finite on the window; check the coefficient list"
        )


def build_sequence(
    spec: ProtocolSpec,
    *,
    alpha: float = 1.0,
    duration_factor: float = 1.0,
    delta: float = 0.0,
    eta: float = 0.0,
    sigma: float = 0.0,
    phase_offsets: Tuple[float, ...] = (),
    centering: str = "per_pulse",
    sta_alpha_scales_shortcut: bool = True,
) -> PulseSequence:
    """Build the pulse sequence of a technique, optionally perturbed.

    The keyword arguments are the experimental error channels; the defaults
    reproduce the nominal sequence exactly (same code path, so nominal and
    zero-error builds agree bitwise at every sample).  See
    :func:`pulselab.channels.apply_errors` for the channel semantics.
    """
    n = spec.pulse_count
    T_live = duration_factor * spec.T
    offsets = tuple(phase_offsets) if phase_offsets else (0.0,) * n
    half = WINDOW_HALF_WIDTH * T_live

    if spec.kind == "SP":
        sp_env, sp_det = _sp_shape_functions(T_live, spec.sp_coeffs)
        _validate_sp_controls(sp_env, sp_det, half)

    pulses = []
    for k in range(n):
        center = half * (2 * k + 1 - n)
        c_err = 0.0 if centering == "global" else center
        phase = (spec.phases[k] if spec.phases else 0.0) + offsets[k]

        if spec.kind == "SP":
            def rabi(t, c=center, ce=c_err):
                base = sp_env(t - c)
                return alpha * base * (1.0 + sigma * np.tanh((t - ce) / T_live))

            def detuning(t, c=center, ce=c_err):
                return sp_det(t - c) + delta + eta * (t - ce)

        elif spec.kind == "STA":
            om_a, beta_a, T_a = spec.sta_nominal

            def rabi(t, c=center, ce=c_err):
                t = np.asarray(t, dtype=float)
                main = spec.omega0 * np.exp(-(((t - c) / T_live) ** 2))
                main = main * (1.0 + sigma * np.tanh((t - ce) / T_live))
                shortcut = 2.0 * mixing_angle_rate(t - c, om_a, beta_a, T_a)
                if sta_alpha_scales_shortcut:
                    return alpha * (main + 1j * shortcut)
                return alpha * main + 1j * shortcut

            def detuning(t, c=center, ce=c_err):
                t = np.asarray(t, dtype=float)
                return spec.beta * (t - c) / T_live + delta + eta * (t - ce)

        else:  # RE, AF, CAP, UCP: Gaussian envelope, optional linear chirp
            beta_live = spec.beta if spec.kind in _CHIRPED else 0.0

            def rabi(t, c=center, ce=c_err):
                t = np.asarray(t, dtype=float)
                base = alpha * spec.omega0 * np.exp(-(((t - c) / T_live) ** 2))
                return base * (1.0 + sigma * np.tanh((t - ce) / T_live))

            def detuning(t, c=center, ce=c_err, b=beta_live):
                t = np.asarray(t, dtype=float)
                return b * (t - c) / T_live + delta + eta * (t - ce)

        pulses.append(
            Waveform(rabi=rabi, detuning=detuning, phase=phase, window=(center - half, center + half))
        )
    return PulseSequence(tuple(pulses))


def build_re(omega0: float, T: float) -> PulseSequence:
    """Resonant Gaussian pulse; area omega0*T*sqrt(pi), P = sin^2(area/2)."""
    return build_sequence(ProtocolSpec("RE", omega0, T))


def build_af(omega0: float, T: float, beta: float) -> PulseSequence:
    """Gaussian pulse with linear chirp beta*t/T (adiabaticity not enforced)."""
    return build_sequence(ProtocolSpec("AF", omega0, T, beta=beta))


def build_sta(
    omega0: float,
    T: float,
    beta: float,
    sta_nominal: Tuple[float, float, float] | None = None,
) -> PulseSequence:
    """Chirped Gaussian plus counterdiabatic term 2i*theta_dot.

    The counterdiabatic shape is synthesized from the frozen ``sta_nominal``
    triple (defaults to the live parameters), never from perturbed values.
    """
    return build_sequence(ProtocolSpec("STA", omega0, T, beta=beta, sta_nominal=sta_nominal))


def build_sp(T: float, sp_coeffs: Sequence[float] = A7_COEFFS) -> PulseSequence:
    """Shaped pulse with engineered envelope and detuning (A7 by default)."""
    return build_sequence(ProtocolSpec("SP", SQRT_PI / T, T, sp_coeffs=tuple(sp_coeffs)))


def build_cap(omega0: float, T: float, beta: float) -> PulseSequence:
    """Composite adiabatic passage: three chirped pulses, phases (0, 2pi/3, 0)."""
    return build_sequence(ProtocolSpec("CAP", omega0, T, beta=beta))


def build_ucp(omega0: float, T: float) -> PulseSequence:
    """Universal composite sequence: five resonant pulses, phases (0, 5pi/6, pi/3, 5pi/6, 0)."""
    return build_sequence(ProtocolSpec("UCP", omega0, T))


def adiabaticity_margin(w: Waveform, samples: int = 8193) -> float:
    """Minimum over the window of eigenvalue gap minus nonadiabatic coupling.

    Positive and large means the drive stays adiabatic.  Defined for real
    envelopes; the counterdiabatic technique is diagnosed on its main field.
    """
    t = np.linspace(w.window[0], w.window[1], samples)
    om = np.asarray(w.rabi(t))
    if np.iscomplexobj(om) and np.max(np.abs(om.imag)) > 0.0:
        raise InvalidParameter("adiabaticity margin is defined for real envelopes")
    om = om.real.astype(float)
    de = np.asarray(w.detuning(t), dtype=float)
    theta = 0.5 * np.arctan2(om, de)
    theta_dot = np.gradient(theta, t)
    gap = np.sqrt(om * om + de * de)
    return float(np.min(gap - np.abs(theta_dot)))
