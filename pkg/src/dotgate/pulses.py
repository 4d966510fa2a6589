"""Rotating-frame pulse envelopes and the phase-locked two-component solver.

Conventions
-----------
A pulse with complex envelope Omega(t) drives a coupling structure C through

    H_laser(t) = (Omega(t) / 2) C + h.c.

so the rotation angle accumulated on a resonant two-level channel equals the
envelope area, integral Omega(t) dt.  Gaussian pulses are therefore built
from a target rotation angle:  Omega_0 = rotation / (s * sqrt(pi)).

Optical carrier frequencies never appear; each channel carries a diagonal
rotating-frame detuning instead (zero for the targeted trion transition).
The two-component pulse keeps its relative detuning Delta as an explicit
phase factor on the second component.

The two-component constraint equations are evaluated in their original
normalization, in which an envelope of amplitude Omega_0 = sqrt(pi)/s
performs a 2*pi rotation; amplitudes are rescaled by the single convention
factor 2 (and proportionally for other target rotations) when building a
spec under the H = (Omega/2) C + h.c. convention above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

# Envelopes are treated as zero beyond this many primary widths from center;
# the Gaussian factor there is below 1e-10 of the peak.
TRUNCATION_WIDTHS = 8.0


@dataclass(frozen=True)
class PulseSpec:
    """A Gaussian or phase-locked two-component pulse envelope.

    Times in ps, amplitudes and detunings in rad/ps.  ``rotation`` records
    the target rotation angle on the resonant channel (metadata; the
    amplitude already encodes it).
    """

    kind: str                      # "gaussian" | "two-component"
    amplitude: float               # Omega_0, rad/ps
    s: float                       # primary width, ps
    center: float = 0.0            # t_c, ps
    dot: int = 1                   # target dot, 1 or 2
    s1: float | None = None        # secondary width, ps (two-component)
    delta: float | None = None     # relative detuning, rad/ps (two-component)
    rotation: float | None = None  # target rotation angle, rad

    def __post_init__(self):
        if self.kind not in ("gaussian", "two-component"):
            raise ParameterError(f"unknown pulse kind {self.kind!r}")
        if self.s <= 0:
            raise ParameterError("pulse width s must be positive")
        if self.amplitude < 0:
            raise ParameterError("pulse amplitude must be non-negative")
        if self.dot not in (1, 2):
            raise ParameterError("target dot must be 1 or 2")
        if self.kind == "two-component":
            if self.s1 is None or self.delta is None:
                raise ParameterError("two-component pulse needs s1 and delta")
            if self.s1 <= 0:
                raise ParameterError("secondary width s1 must be positive")

    @property
    def window(self) -> tuple[float, float]:
        """Support interval outside which the envelope is treated as zero."""
        half = TRUNCATION_WIDTHS * self.s
        return (self.center - half, self.center + half)

    def envelope_at(self, t):
        """Rotating-frame complex envelope at time(s) ``t``, in rad/ps.

        Referenced to the carrier of the resonant (trion) channel; for the
        two-component kind the second component appears at relative phase
        exp(-i Delta (t - t_c)).
        """
        u = np.asarray(t, dtype=float) - self.center
        primary = np.exp(-((u / self.s) ** 2))
        if self.kind == "gaussian":
            out = self.amplitude * primary.astype(complex)
        else:
            secondary = np.exp(-((u / self.s1) ** 2) - 1j * self.delta * u)
            out = self.amplitude * (primary - secondary)
        return out if out.ndim else complex(out)

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind, "s_ps": self.s, "center_ps": self.center,
             "dot": self.dot, "rotation_rad": self.rotation,
             "amplitude_radps": self.amplitude}
        if self.kind == "two-component":
            d["s1_ps"] = self.s1
            d["delta_radps"] = self.delta
        return d

    @staticmethod
    def from_json_dict(d: dict) -> "PulseSpec":
        delta = d.get("delta_radps")
        if delta is None and "delta_meV" in d:
            from . import units
            delta = units.mev_to_angular(d["delta_meV"])
        return PulseSpec(
            kind=d["kind"], amplitude=d["amplitude_radps"], s=d["s_ps"],
            center=d.get("center_ps", 0.0), dot=d.get("dot", 1),
            s1=d.get("s1_ps"), delta=delta, rotation=d.get("rotation_rad"))


def gaussian_pulse(s: float, center: float = 0.0, rotation: float = math.pi,
                   dot: int = 1) -> PulseSpec:
    """Gaussian envelope performing ``rotation`` on a resonant channel."""
    if s <= 0:
        raise ParameterError("pulse width s must be positive")
    if rotation < 0:
        raise ParameterError("rotation angle must be non-negative")
    amplitude = rotation / (s * math.sqrt(math.pi))
    return PulseSpec("gaussian", amplitude, s, center=center, dot=dot,
                     rotation=rotation)


def solve_two_component(s: float, delta: float) -> tuple[float, float]:
    """Solve the phase-locked two-component constraints.

    Returns ``(s1, omega20_paper)`` where ``s1`` is the secondary width and
    ``omega20_paper`` the amplitude in the original normalization:

        s1 = s * exp[-(delta * s / 2)^2]
        omega20 * (s - s1 * exp[-(delta * s1 / 2)^2]) = sqrt(pi)

    The secondary component then exactly undoes the rotation the primary
    component induces on the channel detuned by ``delta``, while the primary
    performs the requested rotation on the resonant channel.
    """
    if s <= 0:
        raise ParameterError("pulse width s must be positive")
    if delta <= 0:
        raise ParameterError(
            "components unresolvable: relative detuning must be positive")
    s1 = s * math.exp(-((delta * s / 2.0) ** 2))
    omega20 = math.sqrt(math.pi) / (s - s1 * math.exp(-((delta * s1 / 2.0) ** 2)))
    return s1, omega20


def two_component_pulse(s: float, delta: float, center: float = 0.0,
                        rotation: float = 2.0 * math.pi, dot: int = 2) -> PulseSpec:
    """Two-component spec rescaled so the resonant channel gets ``rotation``.

    The constraint solution is normalized for a 2*pi rotation under the
    no-half convention; one factor of 2 converts to H = (Omega/2) C + h.c.
    and the amplitude then scales linearly with the requested rotation.
    """
    s1, omega20 = solve_two_component(s, delta)
    amplitude = 2.0 * omega20 * (rotation / (2.0 * math.pi))
    return PulseSpec("two-component", amplitude, s, center=center, dot=dot,
                     s1=s1, delta=delta, rotation=rotation)


def two_component_residuals(s: float, s1: float, omega20: float, delta: float
                            ) -> tuple[float, float]:
    """Residuals of the two constraint equations (original normalization)."""
    r1 = omega20 * (s - s1 * math.exp(-((delta * s1 / 2.0) ** 2))) - math.sqrt(math.pi)
    r2 = s1 - s * math.exp(-((delta * s / 2.0) ** 2))
    return r1, r2


def pulse_area(spec: PulseSpec, samples_per_width: int = 64) -> complex:
    """Envelope area over the truncation window, by trapezoidal quadrature.

    The integrand is analytic and Gaussian-small at the window edges, so the
    trapezoidal rule converges exponentially; the default sampling resolves
    the two-component phase factor comfortably.
    """
    lo, hi = spec.window
    n = int(2 * TRUNCATION_WIDTHS * samples_per_width) + 1
    t = np.linspace(lo, hi, n)
    vals = spec.envelope_at(t)
    return complex(np.trapezoid(vals, t))
