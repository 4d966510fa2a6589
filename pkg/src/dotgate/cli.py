"""Batch command-line interface.

Subcommands
-----------
gate        one gate run, JSON summary to stdout (optional trajectory CSV)
fig4        gate-dynamics trace report (CSV + figure)
fig5        fidelity map over field and inverse pulse width (CSV + figure)
eta-sweep   fidelity versus pulse-timing error (CSV + figure)
oracle      closed-form versus integrator comparison report (JSON)
pulse-solve two-component pulse constraint solver (JSON)
table1      stepwise protocol state table (text)

Flags override fields of the JSON config given with --config.  Exit codes:
0 success, 1 parameter/usage error, 2 integration failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import units
from .errors import IntegrationError, ParameterError
from .evolve import (EvolutionProblem, evolve_schrodinger,
                     three_level_closed_form, three_level_hamiltonian,
                     THREE_LEVEL_BASIS)
from .experiments import (RunConfig, SweepSpec, default_eta_spec,
                          default_fig5_spec, run_fig4, sweep_eta, sweep_fig5)
from .output import fmt, json_dumps
from .protocol import run_gate, stepwise_state_table
from .pulses import solve_two_component, two_component_pulse, two_component_residuals
from .statespace import StateVector


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


_CONFIG_FLAGS = [
    ("--T-ps", "T_ps", float, "hole transfer half-period (ps)"),
    ("--tau-mev", "tau_meV", float, "tunneling energy (meV), alternative to --T-ps"),
    ("--energy-convention", "energy_convention", str,
     "tau conversion: 'ordinary' (E/h) or 'angular' (E/hbar)"),
    ("--delta-mev", "delta_meV", float, "trion-exciton splitting (meV)"),
    ("--te-ns", "te_ns", float, "radiative lifetime (ns); 0 disables decay"),
    ("--b-t", "B_T", float, "static field (T)"),
    ("--ge", "g_e", float, "electron in-plane g factor"),
    ("--gh", "g_h", float, "hole in-plane g factor"),
    ("--theta-m", "theta_m", float, "hole mixing angle (rad)"),
    ("--phi-m", "phi_m", float, "hole mixing phase (rad)"),
    ("--s-ps", "s_ps", float, "pulse width (ps)"),
    ("--eta", "eta", float, "pulse timing error factor"),
    ("--dt-ps", "dt_ps", float, "integration step (ps)"),
    ("--cap", "excitation_cap", int, "max simultaneous electron-hole pairs"),
    ("--drive-model", "drive_model", str, "'designed' or 'full'"),
    ("--initial", "initial", str, "dndn, dnup, updn, upup, or psi0"),
]


def _add_config_flags(sub):
    sub.add_argument("--config", type=str, help="JSON config file")
    for flag, dest, typ, help_text in _CONFIG_FLAGS:
        sub.add_argument(flag, dest=dest, type=typ, default=None, help=help_text)


def _load_config(args) -> RunConfig:
    base = RunConfig.from_json(args.config) if args.config else RunConfig()
    overrides = {dest: getattr(args, dest)
                 for _, dest, _, _ in _CONFIG_FLAGS
                 if getattr(args, dest, None) is not None}
    if "T_ps" not in overrides and overrides.get("tau_meV") is not None:
        overrides["T_ps"] = None   # let tau_meV take effect
    return dataclasses.replace(base, **overrides)


def build_parser() -> _Parser:
    parser = _Parser(prog="dotgate",
                     description="two-qubit phase gate simulator for "
                                 "tunnel-coupled quantum dots")
    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("gate", help="single gate run, JSON summary")
    _add_config_flags(g)
    g.add_argument("--trajectory-out", type=str, default=None,
                   help="write the qubit-population trajectory CSV here")
    g.add_argument("--out", type=str, default=None, help="write JSON here too")

    for name, help_text in [("fig4", "gate-dynamics trace report"),
                            ("fig5", "fidelity map over B and 1/s"),
                            ("eta-sweep", "fidelity versus timing error")]:
        p = subs.add_parser(name, help=help_text)
        _add_config_flags(p)
        p.add_argument("--out-dir", type=str, default=".")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering")
        p.add_argument("--workers", type=int, default=1,
                       help="parallel processes for sweep points")
        if name == "fig5":
            p.add_argument("--b-min", type=float, default=0.0)
            p.add_argument("--b-max", type=float, default=2.0)
            p.add_argument("--b-points", type=int, default=10)
            p.add_argument("--invs-min", type=float, default=2.0)
            p.add_argument("--invs-max", type=float, default=10.0)
            p.add_argument("--invs-points", type=int, default=9)
        if name == "eta-sweep":
            p.add_argument("--eta-min", type=float, default=0.0)
            p.add_argument("--eta-max", type=float, default=0.1)
            p.add_argument("--eta-points", type=int, default=11)
        p.add_argument("--sweep-dt-ps", type=float, default=None,
                       help="integration step for sweep points")

    o = subs.add_parser("oracle", help="closed-form vs integrator report")
    o.add_argument("--omega0", type=float, default=None,
                   help="single-point check at this drive amplitude (rad/ps)")
    o.add_argument("--tau", type=float, default=None,
                   help="single-point check at this tunneling rate (rad/ps)")
    o.add_argument("--time", type=float, default=1.0, help="evolution time (ps)")
    o.add_argument("--dt-ps", type=float, default=1e-4)

    ps = subs.add_parser("pulse-solve", help="two-component constraint solver")
    ps.add_argument("--s-ps", type=float, required=True)
    group = ps.add_mutually_exclusive_group(required=True)
    group.add_argument("--delta-mev", type=float)
    group.add_argument("--delta-radps", type=float)
    ps.add_argument("--rotation-rad", type=float, default=2.0 * math.pi)

    t = subs.add_parser("table1", help="stepwise protocol state table")
    _add_config_flags(t)
    return parser


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_gate(args) -> int:
    config = _load_config(args)
    result = run_gate(config.initial, config.params(), s=config.s_ps,
                      eta=config.eta, excitation_cap=config.excitation_cap,
                      dt=config.dt_ps, drive_model=config.drive_model)
    doc = result.to_json_dict()
    text = json_dumps(doc) + "\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    if args.trajectory_out:
        result.trajectory.to_csv(args.trajectory_out)
    return 0


def _cmd_fig4(args) -> int:
    config = _load_config(args)
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "fig4.csv"
    summary = run_fig4(config, csv_path)
    sys.stdout.write(json_dumps(summary) + "\n")
    if not args.no_plot:
        from .figures import render_fig4
        render_fig4(csv_path, out_dir / "fig4.png")
    return 0


def _sweep_spec(args, default_fn, axes) -> SweepSpec:
    config = _load_config(args)
    spec = default_fn(config)
    spec = dataclasses.replace(spec, axes=axes)
    if args.sweep_dt_ps is not None:
        spec = dataclasses.replace(spec, dt_ps=args.sweep_dt_ps)
    return spec


def _cmd_fig5(args) -> int:
    axes = [("B", "T", args.b_min, args.b_max, args.b_points),
            ("inv_s", "THz", args.invs_min, args.invs_max, args.invs_points)]
    spec = _sweep_spec(args, default_fig5_spec, axes)
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "fig5.csv"
    rows = sweep_fig5(spec, csv_path, workers=args.workers)
    ok = sum(1 for r in rows if r[3] == "")
    sys.stdout.write(json_dumps({"points": len(rows), "ok": ok,
                                 "csv": str(csv_path)}) + "\n")
    if not args.no_plot:
        from .figures import render_fig5
        render_fig5(csv_path, out_dir / "fig5.png")
    return 0


def _cmd_eta(args) -> int:
    axes = [("eta", "", args.eta_min, args.eta_max, args.eta_points)]
    spec = _sweep_spec(args, default_eta_spec, axes)
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "eta_sweep.csv"
    rows = sweep_eta(spec, csv_path, workers=args.workers)
    ok = sum(1 for r in rows if r[2] == "")
    sys.stdout.write(json_dumps({"points": len(rows), "ok": ok,
                                 "csv": str(csv_path)}) + "\n")
    if not args.no_plot:
        from .figures import render_eta
        render_eta(csv_path, out_dir / "eta_sweep.png")
    return 0


def _oracle_point(omega0: float, tau: float, t_end: float, dt: float) -> dict:
    problem = EvolutionProblem(
        basis=THREE_LEVEL_BASIS,
        static_terms=[three_level_hamiltonian(omega0, tau)],
        t_start=0.0, t_end=t_end, dt=dt)
    psi0 = StateVector(THREE_LEVEL_BASIS, np.array([1.0, 0.0, 0.0]))
    traj = evolve_schrodinger(problem, psi0)
    closed, t0 = three_level_closed_form(omega0, tau, t_end)
    dev = float(np.max(np.abs(traj.final_state.amplitudes - closed.amplitudes)))
    return {"omega0_radps": omega0, "tau_radps": tau, "t_ps": t_end,
            "transfer_time_ps": t0, "max_deviation": dev}


def _cmd_oracle(args) -> int:
    if (args.omega0 is None) != (args.tau is None):
        raise ParameterError("oracle needs both --omega0 and --tau, or neither")
    if args.omega0 is not None:
        report = _oracle_point(args.omega0, args.tau, args.time, args.dt_ps)
    else:
        points = []
        worst = 0.0
        for omega0 in (0.5, 2.0, 8.0, 20.0, 50.0):
            for tau in (0.1, 0.3, 0.48, 1.0, 2.0):
                entry = _oracle_point(omega0, tau, args.time, args.dt_ps)
                worst = max(worst, entry["max_deviation"])
                points.append(entry)
        report = {"grid_points": len(points), "worst_deviation": worst,
                  "points": points}
    sys.stdout.write(json_dumps(report) + "\n")
    return 0


def _cmd_pulse_solve(args) -> int:
    delta = (args.delta_radps if args.delta_radps is not None
             else units.mev_to_angular(args.delta_mev))
    s1, omega20 = solve_two_component(args.s_ps, delta)
    spec = two_component_pulse(args.s_ps, delta, rotation=args.rotation_rad)
    r1, r2 = two_component_residuals(args.s_ps, s1, omega20, delta)
    doc = {"s_ps": args.s_ps, "delta_radps": delta, "s1_ps": s1,
           "omega20_radps": omega20, "amplitude_radps": spec.amplitude,
           "rotation_rad": args.rotation_rad,
           "residual_rotation": r1, "residual_cancellation": r2}
    sys.stdout.write(json_dumps(doc) + "\n")
    return 0


def _cmd_table1(args) -> int:
    config = _load_config(args)
    initial = config.initial if config.initial != "psi0" else "dndn"
    snaps = stepwise_state_table(initial, config.params(), s=config.s_ps,
                                 dt=config.dt_ps)
    sys.stdout.write(f"initial state: {initial}\n")
    sys.stdout.write(f"{'step':30s} {'t_ps':>8s}  {'state':16s} "
                     f"{'population':>10s} {'phase_deg':>9s}\n")
    for snap in snaps:
        phase = math.degrees(snap.phase_rad) if not math.isnan(snap.phase_rad) \
            else math.nan
        sys.stdout.write(f"{snap.step:30s} {fmt(round(snap.time_ps, 4)):>8s}  "
                         f"{snap.label:16s} {snap.population:10.4f} "
                         f"{phase:9.2f}\n")
    return 0


_COMMANDS = {
    "gate": _cmd_gate,
    "fig4": _cmd_fig4,
    "fig5": _cmd_fig5,
    "eta-sweep": _cmd_eta,
    "oracle": _cmd_oracle,
    "pulse-solve": _cmd_pulse_solve,
    "table1": _cmd_table1,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return 1
    except IntegrationError as exc:
        sys.stderr.write(f"integration failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
