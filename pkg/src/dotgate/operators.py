"""Hamiltonian terms, collapse operators, hole mixing, and ideal gate matrices.

Selection rules are structural: the driven optical channel creates a
spin-up electron and a spin-down heavy hole on the target dot, so a matrix
element exists only where neither particle would duplicate an existing one
(Pauli blocking).  On dot 2 the same channel connects the empty dot to the
electron-hole-pair configuration; that transition sits a detuning Delta
above the trion line and carries the rotating-frame diagonal offset built
by :func:`build_detuning`.

Hole mixing (heavy-light confinement mixing with angles theta_m, phi_m)
enters the gate basis only through the effective Rabi scale: the corrected
laser polarization restores the ideal selection rules, reducing mixing to a
multiplicative factor on the drive.  The full two-channel structures are
built here for verification of that cancellation.

A static in-plane field precesses unpaired electron spins and hole
pseudospins about z; in the x-labeled basis each precession appears as an
off-diagonal flip coupling at half the Larmor frequency.  Singlet electron
pairs carry no net spin and therefore no Zeeman term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import units
from .errors import ParameterError
from .statespace import (
    Basis, BasisState, ConfigKind, DotConfig, ESpin, HSpin, LabelBasis,
    OperatorMatrix,
)


@dataclass(frozen=True)
class PhysicalParams:
    """Device and field constants, in internal units (ps, rad/ps, 1/ps, T)."""

    T_tunnel: float = 3.27         # hole tunneling half-period, ps
    delta: float = units.mev_to_angular(4.0)   # trion-exciton splitting, rad/ps
    gamma: float = 1e-3            # radiative rate 1/t_e, 1/ps
    B: float = 0.0                 # static field, T
    g_e: float = 0.48              # electron in-plane g factor
    g_h: float = 0.31              # hole in-plane g factor
    theta_m: float = 0.0           # hole mixing polar angle, rad
    phi_m: float = 0.0             # hole mixing phase, rad

    def __post_init__(self):
        if self.T_tunnel <= 0:
            raise ParameterError("tunneling half-period must be positive")
        if self.gamma < 0:
            raise ParameterError("radiative rate must be non-negative")
        if self.B < 0:
            raise ParameterError("field magnitude must be non-negative")
        if not 0.0 <= self.theta_m < math.pi / 2:
            raise ParameterError("mixing angle theta_m must lie in [0, pi/2)")

    @property
    def tau(self) -> float:
        """Tunneling rate (rad/ps) giving full transfer after T_tunnel."""
        return math.pi / (2.0 * self.T_tunnel)

    @property
    def omega_e(self) -> float:
        return units.larmor_angular(self.g_e, self.B)

    @property
    def omega_h(self) -> float:
        return units.larmor_angular(self.g_h, self.B)


# ---------------------------------------------------------------------------
# hole mixing

def effective_rabi_scale(theta_m: float) -> float:
    """Rabi reduction factor of the polarization-corrected drive, as printed.

    A companion diagnostic, :func:`recombined_rabi_scale`, recomputes the
    surviving-channel coefficient directly from the two-channel structures;
    the two disagree at second order in sin(theta_m) and both are reported.
    """
    if not 0.0 <= theta_m <= math.pi / 2:
        raise ParameterError("mixing angle theta_m must lie in [0, pi/2]")
    return math.sqrt(1.0 - (2.0 / 3.0) * math.sin(theta_m) ** 2)


def recombined_rabi_scale(theta_m: float) -> float:
    """Surviving e(up)h(-) coefficient of the corrected polarization.

    Obtained by combining the two circular-polarization structures with the
    corrected polarization weights:  (1 - 4/3 sin^2) / sqrt(1 - 2/3 sin^2).
    """
    num = 1.0 - (4.0 / 3.0) * math.sin(theta_m) ** 2
    return num / math.sqrt(1.0 - (2.0 / 3.0) * math.sin(theta_m) ** 2)


# Abstract per-dot channel space used by the mixing verification operations.
MIXING_CHANNELS = LabelBasis(("ground", "e_up:h_minus", "e_dn:h_plus"))


def build_hole_mixing_hamiltonians(theta_m: float, phi_m: float
                                   ) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Coupling structures of sigma- and sigma+ light with mixed holes.

    Both act on the abstract channel basis ``MIXING_CHANNELS``; the physical
    Hamiltonian is (Omega/2) (C + C^dagger).  The sqrt(1/3) weight on the
    cross channel comes from the in-plane light-hole admixture.
    """
    c, sn = math.cos(theta_m), math.sin(theta_m)
    lh = math.sqrt(1.0 / 3.0) * sn
    g = MIXING_CHANNELS.index_of("ground")
    up_minus = MIXING_CHANNELS.index_of("e_up:h_minus")
    dn_plus = MIXING_CHANNELS.index_of("e_dn:h_plus")

    h_minus = np.zeros((3, 3), dtype=complex)
    h_minus[up_minus, g] = c
    h_minus[dn_plus, g] = -lh * np.exp(-1j * phi_m)

    h_plus = np.zeros((3, 3), dtype=complex)
    h_plus[dn_plus, g] = c
    h_plus[up_minus, g] = -lh * np.exp(1j * phi_m)

    return (OperatorMatrix(MIXING_CHANNELS, h_minus, "coupling-structure", "H_minus"),
            OperatorMatrix(MIXING_CHANNELS, h_plus, "coupling-structure", "H_plus"))


def combined_polarization_coupling(theta_m: float, phi_m: float) -> OperatorMatrix:
    """Coupling structure of the corrected polarization.

    The corrected polarization mixes sigma- and sigma+ with weights
    cos(theta_m) and sqrt(1/3) sin(theta_m) e^{-i phi_m} (normalized); the
    e(dn)h(+) channel cancels identically for all mixing angles.
    """
    h_minus, h_plus = build_hole_mixing_hamiltonians(theta_m, phi_m)
    norm = 1.0 / math.sqrt(1.0 - (2.0 / 3.0) * math.sin(theta_m) ** 2)
    w_minus = norm * math.cos(theta_m)
    w_plus = norm * math.sqrt(1.0 / 3.0) * math.sin(theta_m) * np.exp(-1j * phi_m)
    mat = w_minus * h_minus.matrix + w_plus * h_plus.matrix
    return OperatorMatrix(MIXING_CHANNELS, mat, "coupling-structure", "H_sigma")


@dataclass(frozen=True)
class HoleMixingModel:
    """Mixing angles with the derived polarization and Rabi factors."""

    theta_m: float = 0.0
    phi_m: float = 0.0

    @property
    def heavy_coefficient(self) -> float:
        return math.cos(self.theta_m)

    @property
    def light_coefficient(self) -> complex:
        """Light-hole admixture of the sigma- channel, e(dn)h(+) weight."""
        return -math.sqrt(1.0 / 3.0) * math.sin(self.theta_m) * np.exp(-1j * self.phi_m)

    @property
    def polarization_weights(self) -> tuple[complex, complex]:
        """Corrected polarization in the (sigma-, sigma+) basis, unit norm."""
        norm = 1.0 / math.sqrt(1.0 - (2.0 / 3.0) * math.sin(self.theta_m) ** 2)
        w_minus = norm * math.cos(self.theta_m)
        w_plus = (norm * math.sqrt(1.0 / 3.0) * math.sin(self.theta_m)
                  * np.exp(-1j * self.phi_m))
        return (w_minus, w_plus)

    @property
    def rabi_scale(self) -> float:
        return effective_rabi_scale(self.theta_m)

    @property
    def recombined_scale(self) -> float:
        return recombined_rabi_scale(self.theta_m)


# ---------------------------------------------------------------------------
# Hamiltonian builders over the configuration basis

def build_tunneling(basis: Basis, tau: float) -> OperatorMatrix:
    """Hole tunneling between the dot-1 trion and the dot-2 hole level.

    Couples (trion h, electron m) to (singlet pair, electron m + hole h)
    with element ``tau``, preserving the hole spin and all electron spins.
    """
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for state in basis.states:
        d1, d2 = state.dot1, state.dot2
        if d1.kind is ConfigKind.TRION and d2.kind is ConfigKind.SINGLE_ELECTRON:
            partner = BasisState(
                DotConfig.singlet_pair(),
                DotConfig.electron_plus_hole(d2.espin, d1.hspin)).label()
            if partner in basis:
                j = basis.index_of(partner)
                mat[state.index, j] = tau
                mat[j, state.index] = tau
    return OperatorMatrix(basis, mat, "hamiltonian-term", "H_tunnel")


def build_optical_coupling(basis: Basis, dot: int,
                           mixing: HoleMixingModel | None = None,
                           include_exciton: bool = True) -> OperatorMatrix:
    """Coupling structure C of the drive on one dot (unit matrix elements).

    The drive enters the Hamiltonian as (Omega_eff(t)/2) C + h.c. where
    Omega_eff carries the mixing Rabi scale; C itself keeps unit entries.
    Excitations that would duplicate an existing spin-up electron or
    spin-down hole have no entry.

    ``include_exciton`` keeps or drops the detuned dot-2 vacuum-to-exciton
    entry; dropping it models a drive spectrally matched to the trion line
    whose net action on the detuned transition cancels by design.
    """
    if dot not in (1, 2):
        raise ParameterError("target dot must be 1 or 2")
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)

    def connect(src: BasisState, upper_label: str):
        if upper_label in basis:
            mat[basis.index_of(upper_label), src.index] = 1.0

    for state in basis.states:
        d1, d2 = state.dot1, state.dot2
        if dot == 1:
            # E(dn) -> T(dn); anything else on dot 1 is blocked
            if d1 == DotConfig.electron(ESpin.DOWN):
                connect(state, BasisState(DotConfig.trion(HSpin.DOWN), d2).label())
        else:
            # trion channel: E(dn) -> T(dn)
            if d2 == DotConfig.electron(ESpin.DOWN):
                connect(state, BasisState(d1, DotConfig.trion(HSpin.DOWN)).label())
            # exciton channel: V -> EH(up,dn), detuned by Delta
            if include_exciton and d2 == DotConfig.vacuum():
                connect(state, BasisState(
                    d1, DotConfig.electron_plus_hole(ESpin.UP, HSpin.DOWN)).label())
    return OperatorMatrix(basis, mat, "coupling-structure", f"C_dot{dot}")


def build_detuning(basis: Basis, delta: float) -> OperatorMatrix:
    """Rotating-frame diagonal energies.

    Qubit, trion, and tunneled-hole states sit at zero.  The empty-dot-2
    state sits at -delta, so a drive component carrying the extra
    exp(-i delta t) phase is exactly resonant with the vacuum-to-exciton
    transition while the primary component is detuned from it by delta.
    """
    diag = np.zeros(basis.dim, dtype=complex)
    for state in basis.states:
        if state.dot2.kind is ConfigKind.VACUUM:
            diag[state.index] = -delta
    return OperatorMatrix(basis, np.diag(diag), "hamiltonian-term", "H_detuning")


def build_zeeman(basis: Basis, B: float, g_e: float, g_h: float) -> OperatorMatrix:
    """Spin precession couplings for a static in-plane field along z.

    Each unpaired electron contributes (omega_e/2) times the coupling that
    flips its x-basis label; each hole contributes (omega_h/2) likewise.
    """
    if B < 0:
        raise ParameterError("field magnitude must be non-negative")
    w_e = units.larmor_angular(g_e, B) / 2.0
    w_h = units.larmor_angular(g_h, B) / 2.0
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)

    def couple(i: int, partner: BasisState, w: float):
        j = basis.index_of(partner.label())
        mat[i, j] += w
    for state in basis.states:
        d1, d2 = state.dot1, state.dot2
        if d1.espin is not None:
            couple(state.index,
                   BasisState(DotConfig(d1.kind, espin=d1.espin.flipped(),
                                        hspin=d1.hspin), d2), w_e)
        if d1.hspin is not None:
            couple(state.index,
                   BasisState(DotConfig(d1.kind, espin=d1.espin,
                                        hspin=d1.hspin.flipped()), d2), w_h)
        if d2.espin is not None:
            couple(state.index,
                   BasisState(d1, DotConfig(d2.kind, espin=d2.espin.flipped(),
                                            hspin=d2.hspin)), w_e)
        if d2.hspin is not None:
            couple(state.index,
                   BasisState(d1, DotConfig(d2.kind, espin=d2.espin,
                                            hspin=d2.hspin.flipped())), w_h)
    return OperatorMatrix(basis, mat, "hamiltonian-term", "H_zeeman")


def build_collapse_ops(basis: Basis, gamma: float) -> list[OperatorMatrix]:
    """Radiative recombination channels, one operator per bright pair.

    Bright channels: a trion with hole h loses its (e, h) bright pair and
    leaves the partner electron behind; the dot-2 electron-hole pair with
    opposite spins recombines to the empty dot.  Each operator carries
    amplitude sqrt(gamma) and sums over spectator configurations.
    """
    if gamma < 0:
        raise ParameterError("radiative rate must be non-negative")
    amp = math.sqrt(gamma)

    def op(name: str, pairs: list[tuple[int, int]]) -> OperatorMatrix:
        mat = np.zeros((basis.dim, basis.dim), dtype=complex)
        for tgt, src in pairs:
            mat[tgt, src] = amp
        return OperatorMatrix(basis, mat, "collapse", name)

    survivors = {HSpin.DOWN: ESpin.DOWN, HSpin.UP: ESpin.UP}
    channels: dict[str, list[tuple[int, int]]] = {}

    def record(name: str, target: BasisState, src: BasisState):
        if target.label() in basis:
            channels.setdefault(name, []).append(
                (basis.index_of(target.label()), src.index))

    for state in basis.states:
        d1, d2 = state.dot1, state.dot2
        if d1.kind is ConfigKind.TRION:
            record(f"L_trion1_{d1.hspin.value}",
                   BasisState(DotConfig.electron(survivors[d1.hspin]), d2), state)
        if d2.kind is ConfigKind.TRION:
            record(f"L_trion2_{d2.hspin.value}",
                   BasisState(d1, DotConfig.electron(survivors[d2.hspin])), state)
        if (d2.kind is ConfigKind.ELECTRON_PLUS_HOLE
                and d2.espin.value != d2.hspin.value):
            record(f"L_exciton2_{d2.hspin.value}",
                   BasisState(d1, DotConfig.vacuum()), state)

    return [op(name, pairs) for name, pairs in sorted(channels.items())]


# ---------------------------------------------------------------------------
# ideal gate matrices

def ideal_phase_gate(representation: str = "x-basis") -> np.ndarray:
    """The target conditional-phase transformation in three bases.

    ``x-basis``: diag(1, 1, -1, 1) over (dn dn, dn up, up dn, up up).
    ``zz-basis``: both qubits expressed along z.
    ``xz-basis``: qubit 2 only expressed along z (controlled-NOT form).
    """
    if representation == "x-basis":
        return np.diag([1.0, 1.0, -1.0, 1.0]).astype(complex)
    if representation == "zz-basis":
        return 0.5 * np.array([[1, 1, -1, 1],
                               [1, 1, 1, -1],
                               [-1, 1, 1, 1],
                               [1, -1, 1, 1]], dtype=complex)
    if representation == "xz-basis":
        return np.array([[1, 0, 0, 0],
                         [0, 1, 0, 0],
                         [0, 0, 0, 1],
                         [0, 0, 1, 0]], dtype=complex)
    raise ParameterError(f"unknown representation {representation!r}")
