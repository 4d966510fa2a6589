"""Configuration basis of the two-dot system and state containers.

Each dot is described by a closed, finite label set rather than a Fock space:

* dot 1: single electron (the qubit), a trion (two electrons in a singlet
  plus a heavy hole), or a bare singlet electron pair after its hole has
  tunneled away;
* dot 2: single electron, trion, the dot-2 electron together with a tunneled
  hole, or the empty dot left behind when an electron-hole pair recombines.

Spin labels are quantized along x (the growth and optical axis).  Electron
spins are written ``up``/``dn``, heavy-hole pseudospins likewise; a static
field along z enters elsewhere as an off-diagonal coupling between these
labels, never as a relabeling of the basis.

The full basis is generated mechanically as the reachability closure of the
four qubit states under the operator set (optical couplings on either dot,
hole tunneling, spin precession, radiative collapse), capped at a maximum
number of simultaneously present electron-hole pairs.  Canonical ordering:
sort by total hole count, then by the dot-1 label, then by the dot-2 label;
the four qubit states therefore always occupy indices 0..3.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, StructuralError


class ESpin(enum.Enum):
    DOWN = "dn"
    UP = "up"

    def flipped(self) -> "ESpin":
        return ESpin.UP if self is ESpin.DOWN else ESpin.DOWN


class HSpin(enum.Enum):
    DOWN = "dn"   # |3/2, -3/2> along x
    UP = "up"     # |3/2, +3/2> along x

    def flipped(self) -> "HSpin":
        return HSpin.UP if self is HSpin.DOWN else HSpin.DOWN


class ConfigKind(enum.Enum):
    SINGLE_ELECTRON = 0
    TRION = 1
    SINGLET_PAIR = 2
    ELECTRON_PLUS_HOLE = 3
    VACUUM = 4


# Which occupation labels each dot may carry.
_DOT1_KINDS = {ConfigKind.SINGLE_ELECTRON, ConfigKind.TRION, ConfigKind.SINGLET_PAIR}
_DOT2_KINDS = {ConfigKind.SINGLE_ELECTRON, ConfigKind.TRION,
               ConfigKind.ELECTRON_PLUS_HOLE, ConfigKind.VACUUM}

_ELECTRONS = {ConfigKind.SINGLE_ELECTRON: 1, ConfigKind.TRION: 2,
              ConfigKind.SINGLET_PAIR: 2, ConfigKind.ELECTRON_PLUS_HOLE: 1,
              ConfigKind.VACUUM: 0}
_HOLES = {ConfigKind.SINGLE_ELECTRON: 0, ConfigKind.TRION: 1,
          ConfigKind.SINGLET_PAIR: 0, ConfigKind.ELECTRON_PLUS_HOLE: 1,
          ConfigKind.VACUUM: 0}


@dataclass(frozen=True)
class DotConfig:
    """Occupation label of one dot."""

    kind: ConfigKind
    espin: ESpin | None = None
    hspin: HSpin | None = None

    def __post_init__(self):
        needs_e = self.kind in (ConfigKind.SINGLE_ELECTRON, ConfigKind.ELECTRON_PLUS_HOLE)
        needs_h = self.kind in (ConfigKind.TRION, ConfigKind.ELECTRON_PLUS_HOLE)
        if (self.espin is not None) != needs_e or (self.hspin is not None) != needs_h:
            raise StructuralError(f"inconsistent spin labels for {self.kind.name}")

    @staticmethod
    def electron(espin: ESpin) -> "DotConfig":
        return DotConfig(ConfigKind.SINGLE_ELECTRON, espin=espin)

    @staticmethod
    def trion(hspin: HSpin) -> "DotConfig":
        return DotConfig(ConfigKind.TRION, hspin=hspin)

    @staticmethod
    def singlet_pair() -> "DotConfig":
        return DotConfig(ConfigKind.SINGLET_PAIR)

    @staticmethod
    def electron_plus_hole(espin: ESpin, hspin: HSpin) -> "DotConfig":
        return DotConfig(ConfigKind.ELECTRON_PLUS_HOLE, espin=espin, hspin=hspin)

    @staticmethod
    def vacuum() -> "DotConfig":
        return DotConfig(ConfigKind.VACUUM)

    @property
    def n_electrons(self) -> int:
        return _ELECTRONS[self.kind]

    @property
    def n_holes(self) -> int:
        return _HOLES[self.kind]

    def label(self) -> str:
        if self.kind is ConfigKind.SINGLE_ELECTRON:
            return f"E({self.espin.value})"
        if self.kind is ConfigKind.TRION:
            return f"T({self.hspin.value})"
        if self.kind is ConfigKind.SINGLET_PAIR:
            return "S"
        if self.kind is ConfigKind.ELECTRON_PLUS_HOLE:
            return f"EH({self.espin.value},{self.hspin.value})"
        return "V"

    def sort_key(self) -> tuple:
        es = -1 if self.espin is None else list(ESpin).index(self.espin)
        hs = -1 if self.hspin is None else list(HSpin).index(self.hspin)
        return (self.kind.value, es, hs)


@dataclass(frozen=True)
class BasisState:
    """A labeled configuration of both dots plus its canonical index."""

    dot1: DotConfig
    dot2: DotConfig
    index: int = -1

    @property
    def n_electrons(self) -> int:
        return self.dot1.n_electrons + self.dot2.n_electrons

    @property
    def n_holes(self) -> int:
        return self.dot1.n_holes + self.dot2.n_holes

    @property
    def is_qubit(self) -> bool:
        return (self.dot1.kind is ConfigKind.SINGLE_ELECTRON
                and self.dot2.kind is ConfigKind.SINGLE_ELECTRON)

    def is_valid(self) -> bool:
        """Particle-count and placement rules for a physical configuration.

        Every reachable configuration holds the two qubit electrons plus any
        number of intact electron-hole pairs, so the total electron count
        always exceeds the total hole count by exactly two.
        """
        if self.dot1.kind not in _DOT1_KINDS or self.dot2.kind not in _DOT2_KINDS:
            return False
        return self.n_electrons == self.n_holes + 2

    def label(self) -> str:
        return f"{self.dot1.label()}|{self.dot2.label()}"

    def sort_key(self) -> tuple:
        return (self.n_holes, self.dot1.sort_key(), self.dot2.sort_key())


_QUBIT_STATES = tuple(
    BasisState(DotConfig.electron(e1), DotConfig.electron(e2))
    for e1 in ESpin for e2 in ESpin
)


def _neighbors(state: BasisState, field_on: bool) -> list[BasisState]:
    """Configurations connected to ``state`` by one operator application."""
    out: list[BasisState] = []
    d1, d2 = state.dot1, state.dot2

    def add(a: DotConfig, b: DotConfig):
        cand = BasisState(a, b)
        if cand.is_valid():
            out.append(cand)

    # optical channel on dot 1: E(dn) <-> T(dn)
    if d1 == DotConfig.electron(ESpin.DOWN):
        add(DotConfig.trion(HSpin.DOWN), d2)
    if d1 == DotConfig.trion(HSpin.DOWN):
        add(DotConfig.electron(ESpin.DOWN), d2)
    # optical channel on dot 2: E(dn) <-> T(dn) and V <-> EH(up,dn)
    if d2 == DotConfig.electron(ESpin.DOWN):
        add(d1, DotConfig.trion(HSpin.DOWN))
    if d2 == DotConfig.trion(HSpin.DOWN):
        add(d1, DotConfig.electron(ESpin.DOWN))
    if d2 == DotConfig.vacuum():
        add(d1, DotConfig.electron_plus_hole(ESpin.UP, HSpin.DOWN))
    if d2 == DotConfig.electron_plus_hole(ESpin.UP, HSpin.DOWN):
        add(d1, DotConfig.vacuum())

    # hole tunneling: (T(h), E(m)) <-> (S, EH(m, h))
    if d1.kind is ConfigKind.TRION and d2.kind is ConfigKind.SINGLE_ELECTRON:
        add(DotConfig.singlet_pair(), DotConfig.electron_plus_hole(d2.espin, d1.hspin))
    if d1.kind is ConfigKind.SINGLET_PAIR and d2.kind is ConfigKind.ELECTRON_PLUS_HOLE:
        add(DotConfig.trion(d2.hspin), DotConfig.electron(d2.espin))

    # spin precession flips individual labels (singlet pairs carry none)
    if field_on:
        if d1.espin is not None:
            add(DotConfig(d1.kind, espin=d1.espin.flipped(), hspin=d1.hspin), d2)
        if d1.hspin is not None:
            add(DotConfig(d1.kind, espin=d1.espin, hspin=d1.hspin.flipped()), d2)
        if d2.espin is not None:
            add(d1, DotConfig(d2.kind, espin=d2.espin.flipped(), hspin=d2.hspin))
        if d2.hspin is not None:
            add(d1, DotConfig(d2.kind, espin=d2.espin, hspin=d2.hspin.flipped()))

    # radiative collapse: bright-pair recombination
    if d1.kind is ConfigKind.TRION:
        survivor = ESpin.DOWN if d1.hspin is HSpin.DOWN else ESpin.UP
        add(DotConfig.electron(survivor), d2)
    if d2.kind is ConfigKind.TRION:
        survivor = ESpin.DOWN if d2.hspin is HSpin.DOWN else ESpin.UP
        add(d1, DotConfig.electron(survivor))
    if d2.kind is ConfigKind.ELECTRON_PLUS_HOLE and d2.espin.value != d2.hspin.value:
        add(d1, DotConfig.vacuum())  # bright excitons only: (up,dn) or (dn,up)

    return out


class Basis:
    """Immutable, canonically ordered list of basis states."""

    def __init__(self, states: list[BasisState], excitation_cap: int, field_on: bool):
        ordered = sorted(states, key=BasisState.sort_key)
        self.states = tuple(
            BasisState(s.dot1, s.dot2, index=i) for i, s in enumerate(ordered)
        )
        self.excitation_cap = excitation_cap
        self.field_on = field_on
        self._index = {s.label(): s.index for s in self.states}
        self.labels = tuple(s.label() for s in self.states)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"label {label!r} is not in this basis") from None

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Basis) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    @property
    def qubit_indices(self) -> tuple[int, int, int, int]:
        """Indices of (dn,dn), (dn,up), (up,dn), (up,up), in this order."""
        return tuple(self.index_of(q.label()) for q in _QUBIT_STATES)

    def to_json(self) -> str:
        """Serialized basis listing, stable across runs."""
        return json.dumps(list(self.labels), indent=0)


class LabelBasis:
    """Minimal basis over bare string labels, for few-level model systems."""

    def __init__(self, labels: list[str] | tuple[str, ...]):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"label {label!r} is not in this basis") from None

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelBasis) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)


def enumerate_basis(excitation_cap: int = 1, field_on: bool = True) -> Basis:
    """Reachability closure of the four qubit states under the operator set.

    ``excitation_cap`` bounds the number of simultaneously present
    electron-hole pairs (equivalently, the total hole count).  Doubly excited
    single-dot configurations are excluded structurally at any cap.
    """
    if excitation_cap < 0:
        raise ParameterError("excitation_cap must be >= 0")
    seen: dict[str, BasisState] = {s.label(): s for s in _QUBIT_STATES}
    frontier = list(_QUBIT_STATES)
    while frontier:
        nxt: list[BasisState] = []
        for state in frontier:
            for cand in _neighbors(state, field_on):
                if cand.n_holes > excitation_cap:
                    continue
                lab = cand.label()
                if lab not in seen:
                    seen[lab] = cand
                    nxt.append(cand)
        frontier = nxt
    return Basis(list(seen.values()), excitation_cap, field_on)


# ---------------------------------------------------------------------------
# state and operator containers


@dataclass
class StateVector:
    """Complex amplitudes over a basis."""

    basis: Basis | LabelBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dim,):
            raise StructuralError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"basis dimension is {self.basis.dim}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def validate_normalized(self, tol: float = 1e-9) -> None:
        if abs(self.norm - 1.0) > tol:
            raise StructuralError(f"state norm {self.norm} deviates from 1 by > {tol}")

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.basis, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass
class DensityMatrix:
    """Dense density matrix over a basis."""

    basis: Basis | LabelBasis
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        n = self.basis.dim
        if self.matrix.shape != (n, n):
            raise StructuralError(
                f"density matrix has shape {self.matrix.shape}, basis dimension is {n}")

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def validate(self, herm_tol: float = 1e-10, trace_tol: float = 1e-8,
                 eig_tol: float = 1e-8) -> None:
        dev = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if dev > herm_tol:
            raise StructuralError(f"density matrix hermiticity deviation {dev:.3e}")
        if abs(self.trace - 1.0) > trace_tol:
            raise StructuralError(f"density matrix trace {self.trace} deviates from 1")
        min_eig = float(np.linalg.eigvalsh(self.matrix)[0])
        if min_eig < -eig_tol:
            raise StructuralError(f"density matrix minimum eigenvalue {min_eig:.3e}")


@dataclass
class OperatorMatrix:
    """Dense complex square matrix tagged with its basis and role."""

    basis: Basis | LabelBasis
    matrix: np.ndarray
    role: str = "hamiltonian-term"   # or coupling-structure, collapse, projector, gate
    name: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        n = self.basis.dim
        if self.matrix.shape != (n, n):
            raise StructuralError(
                f"operator {self.name or self.role} has shape {self.matrix.shape}, "
                f"basis dimension is {n}")

    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    def to_json(self) -> str:
        """Nonzero entries as row-major (row, col, re, im) triplet records."""
        rows, cols = np.nonzero(self.matrix)
        entries = [[int(i), int(j), float(self.matrix[i, j].real), float(self.matrix[i, j].imag)]
                   for i, j in zip(rows, cols)]
        return json.dumps({"labels": list(self.basis.labels), "role": self.role,
                           "entries": entries})


def qubit_subspace_projector(basis: Basis) -> OperatorMatrix:
    """Rank-4 orthogonal projector onto the span of the four qubit states."""
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for q in basis.qubit_indices:   # raises StructuralError if one is missing
        mat[q, q] = 1.0
    return OperatorMatrix(basis, mat, role="projector", name="P_qubit")


def embed(state: StateVector, into: Basis) -> StateVector:
    """Copy amplitudes by label into a larger basis; all other entries zero."""
    amps = np.zeros(into.dim, dtype=complex)
    for lab, amp in zip(state.basis.labels, state.amplitudes):
        amps[into.index_of(lab)] = amp
    return StateVector(into, amps)


def restrict(state: StateVector, onto: Basis | LabelBasis) -> StateVector:
    """Project amplitudes back onto a smaller basis, matching by label."""
    amps = np.array([state.amplitudes[state.basis.index_of(lab)] for lab in onto.labels])
    return StateVector(onto, amps)


def qubit_state(basis: Basis, amplitudes) -> StateVector:
    """Build a state supported on the qubit subspace of ``basis``.

    ``amplitudes`` are ordered (dn,dn), (dn,up), (up,dn), (up,up).
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (4,):
        raise StructuralError("qubit amplitudes must be a 4-vector")
    vec = np.zeros(basis.dim, dtype=complex)
    for q, a in zip(basis.qubit_indices, amplitudes):
        vec[q] = a
    return StateVector(basis, vec)
