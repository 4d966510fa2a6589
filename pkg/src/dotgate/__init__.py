"""Simulator of an optically controlled two-qubit phase gate between
electron spins in tunnel-coupled quantum dots."""

from .errors import IntegrationError, ParameterError, StructuralError
from .evolve import (EvolutionProblem, Trajectory, convergence_check,
                     evolve_lindblad, evolve_schrodinger,
                     three_level_closed_form, three_level_hamiltonian)
from .experiments import (RunConfig, SweepSpec, default_eta_spec,
                          default_fig5_spec, run_fig4, sweep_eta, sweep_fig5)
from .operators import (HoleMixingModel, PhysicalParams, build_collapse_ops,
                        build_detuning, build_hole_mixing_hamiltonians,
                        build_optical_coupling, build_tunneling, build_zeeman,
                        combined_polarization_coupling, effective_rabi_scale,
                        ideal_phase_gate, recombined_rabi_scale)
from .protocol import (GateResult, GateSchedule, PSI0, build_schedule,
                       fidelity, ideal_target, run_gate, stepwise_state_table)
from .pulses import (PulseSpec, gaussian_pulse, pulse_area,
                     solve_two_component, two_component_pulse)
from .statespace import (Basis, BasisState, DensityMatrix, DotConfig,
                         OperatorMatrix, StateVector, embed, enumerate_basis,
                         qubit_subspace_projector, qubit_state, restrict)

__version__ = "0.1.0"
