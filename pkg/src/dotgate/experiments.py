"""Batch experiment drivers: trace reports and fidelity sweeps.

These functions reproduce the protocol's headline data sets as CSV files:

* ``run_fig4``: time traces of the four monitored density-matrix entries
  over one gate execution (the dynamics report);
* ``sweep_fig5``: the gate fidelity map over magnetic field and inverse
  pulse width;
* ``sweep_eta``: fidelity versus the pulse-timing error factor.

Configuration is human-facing (meV, ns, T, THz) and converted once at this
boundary; everything below runs in rad/ps and ps.  Sweeps re-solve the
two-component pulse constraints for each grid point's pulse width, evaluate
points in deterministic row-major order, and record failed points as NaN
with an error message instead of aborting the grid.
"""

from __future__ import annotations

import dataclasses
import json
import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import units
from .errors import IntegrationError, ParameterError
from .operators import PhysicalParams
from .output import write_csv
from .protocol import QUBIT_LABELS, run_gate
from .statespace import enumerate_basis

#: Integration step for sweep grids.  Self-convergence error at this step
#: is below 1e-5 in fidelity, three orders under the map's resolution, and
#: it keeps the default 90-point grid within its runtime budget.
SWEEP_DT_PS = 2e-3


@dataclass
class RunConfig:
    """All run parameters with unit-annotated fields and paper defaults."""

    T_ps: float | None = 3.27        # hole transfer half-period
    tau_meV: float | None = None     # alternative: tunneling energy
    energy_convention: str = "ordinary"   # tau_meV -> rate: E/h or E/hbar
    delta_meV: float = 4.0
    te_ns: float = 1.0               # radiative lifetime; 0 disables decay
    B_T: float = 0.0
    g_e: float = 0.48
    g_h: float = 0.31
    theta_m: float = 0.0
    phi_m: float = 0.0
    s_ps: float = 0.2
    eta: float = 0.0
    dt_ps: float = 1e-3
    excitation_cap: int = 2
    drive_model: str = "designed"
    initial: str = "psi0"

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(d) - known
        if unknown:
            raise ParameterError(f"unknown config fields: {sorted(unknown)}")
        merged = {**{f.name: f.default for f in dataclasses.fields(RunConfig)}, **d}
        return RunConfig(**merged)

    @staticmethod
    def from_json(path) -> "RunConfig":
        return RunConfig.from_dict(json.loads(Path(path).read_text()))

    def tunnel_period(self) -> float:
        """Transfer time T in ps, from T_ps or from tau_meV."""
        if self.T_ps is not None:
            return self.T_ps
        if self.tau_meV is None:
            raise ParameterError("config needs T_ps or tau_meV")
        if self.energy_convention == "ordinary":
            rate = units.mev_to_ordinary(self.tau_meV)
        elif self.energy_convention == "angular":
            rate = units.mev_to_angular(self.tau_meV)
        else:
            raise ParameterError(
                f"unknown energy convention {self.energy_convention!r}")
        return math.pi / (2.0 * rate)

    def params(self) -> PhysicalParams:
        gamma = 0.0 if self.te_ns == 0 else 1.0 / (self.te_ns * 1000.0)
        return PhysicalParams(
            T_tunnel=self.tunnel_period(),
            delta=units.mev_to_angular(self.delta_meV),
            gamma=gamma, B=self.B_T, g_e=self.g_e, g_h=self.g_h,
            theta_m=self.theta_m, phi_m=self.phi_m)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class SweepSpec:
    """Axis definitions over a fixed base configuration."""

    config: RunConfig = field(default_factory=RunConfig)
    axes: list = field(default_factory=list)   # (name, unit, lo, hi, points)
    dt_ps: float = SWEEP_DT_PS

    def __post_init__(self):
        for name, unit, lo, hi, points in self.axes:
            if points < 2:
                raise ParameterError(f"axis {name}: need at least 2 points")
            if hi <= lo:
                raise ParameterError(f"axis {name}: max must exceed min")

    def axis_values(self, index: int) -> np.ndarray:
        name, unit, lo, hi, points = self.axes[index]
        return np.linspace(lo, hi, points)


def default_fig5_spec(config: RunConfig | None = None) -> SweepSpec:
    """Field and inverse-pulse-width grid bracketing the quoted operating point.

    The source text does not give readable axis extents; this grid is a
    reconstruction around B = 1.5 T, 1/s = 5 THz.
    """
    return SweepSpec(config=config or RunConfig(),
                     axes=[("B", "T", 0.0, 2.0, 10),
                           ("inv_s", "THz", 2.0, 10.0, 9)])


def default_eta_spec(config: RunConfig | None = None) -> SweepSpec:
    return SweepSpec(config=config or RunConfig(),
                     axes=[("eta", "", 0.0, 0.1, 11)])


# ---------------------------------------------------------------------------
# trace report

def fig4_observables(excitation_cap: int) -> dict:
    """The four monitored density-matrix entries, named by basis labels."""
    basis = enumerate_basis(excitation_cap)
    qi = basis.qubit_indices
    labels = [basis.labels[i] for i in qi]
    return {
        f"rho({labels[0]})": (qi[0], qi[0]),
        f"rho({labels[1]})": (qi[1], qi[1]),
        f"rho({labels[2]})": (qi[2], qi[2]),
        f"rho({labels[2]};{labels[3]})": (qi[2], qi[3]),
    }


def run_fig4(config: RunConfig, csv_path) -> dict:
    """One gate execution; emits the monitored traces as CSV.

    Columns: t_ps, then re/im per observable, then trace and min_eig.
    Returns a small summary dict (fidelity plus endpoint values).
    """
    obs = fig4_observables(config.excitation_cap)
    result = run_gate(config.initial, config.params(), s=config.s_ps,
                      eta=config.eta, excitation_cap=config.excitation_cap,
                      dt=config.dt_ps, drive_model=config.drive_model,
                      observables=obs)
    traj = result.trajectory
    traj.to_csv(csv_path)
    summary = {"fidelity": result.fidelity, "leakage": result.leakage,
               "gate_time_ps": result.gate_time_ps}
    for name in obs:
        summary[f"start {name}"] = float(traj.observables[name][0].real)
        summary[f"end {name}"] = float(traj.observables[name][-1].real)
    return summary


# ---------------------------------------------------------------------------
# sweeps

def _sanitize(exc: Exception) -> str:
    """One CSV-safe cell from an exception message."""
    msg = str(exc) or type(exc).__name__
    return msg.replace(",", ";").replace("\n", " ")


def _eval_fig5_point(args) -> tuple:
    b_field, inv_s_thz, config_dict, dt = args
    try:
        config = RunConfig.from_dict(config_dict)
        params = dataclasses.replace(config.params(), B=b_field)
        s = 1.0 / inv_s_thz
        result = run_gate(config.initial, params, s=s, eta=config.eta,
                          excitation_cap=config.excitation_cap, dt=dt,
                          drive_model=config.drive_model, record_stride=50)
        return (b_field, inv_s_thz, result.fidelity, "")
    except Exception as exc:   # NaN-and-continue: keep long grids usable
        return (b_field, inv_s_thz, math.nan, _sanitize(exc))


def _eval_eta_point(args) -> tuple:
    eta, config_dict, dt = args
    try:
        config = RunConfig.from_dict(config_dict)
        result = run_gate(config.initial, config.params(), s=config.s_ps,
                          eta=eta, excitation_cap=config.excitation_cap,
                          dt=dt, drive_model=config.drive_model,
                          record_stride=50)
        return (eta, result.fidelity, "")
    except Exception as exc:
        return (eta, math.nan, _sanitize(exc))


def _map_points(fn, points, workers: int):
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.map(fn, points)
    return [fn(p) for p in points]


def sweep_fig5(spec: SweepSpec, csv_path, workers: int = 1) -> list[tuple]:
    """Fidelity over (B, 1/s), row-major in B then 1/s.

    The two-component pulse constraints are re-solved for each pulse width.
    Failed points get NaN fidelity and an error message; the grid completes.
    """
    names = [a[0] for a in spec.axes]
    if names != ["B", "inv_s"]:
        raise ParameterError("fidelity map expects axes ('B', 'inv_s')")
    b_values = spec.axis_values(0)
    inv_s_values = spec.axis_values(1)
    cfg = spec.config.to_dict()
    points = [(float(b), float(v), cfg, spec.dt_ps)
              for b in b_values for v in inv_s_values]
    rows = _map_points(_eval_fig5_point, points, workers)
    write_csv(csv_path, ["B_T", "inv_s_THz", "fidelity", "error"], rows)
    return rows


def sweep_eta(spec: SweepSpec, csv_path, workers: int = 1) -> list[tuple]:
    """Fidelity versus the timing-error factor."""
    names = [a[0] for a in spec.axes]
    if names != ["eta"]:
        raise ParameterError("timing sweep expects a single 'eta' axis")
    cfg = spec.config.to_dict()
    points = [(float(e), cfg, spec.dt_ps) for e in spec.axis_values(0)]
    rows = _map_points(_eval_eta_point, points, workers)
    write_csv(csv_path, ["eta", "fidelity", "error"], rows)
    return rows
