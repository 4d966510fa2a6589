"""Config parsing, trace report, sweeps, and output determinism."""

import dataclasses
import json
import math

import numpy as np
import pytest

from dotgate.errors import ParameterError
from dotgate.experiments import (RunConfig, SweepSpec, default_eta_spec,
                                 default_fig5_spec, fig4_observables,
                                 run_fig4, sweep_eta, sweep_fig5)
from dotgate.protocol import run_gate


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestRunConfig:
    def test_defaults_are_paper_values(self):
        cfg = RunConfig()
        assert (cfg.T_ps, cfg.delta_meV, cfg.te_ns) == (3.27, 4.0, 1.0)
        assert (cfg.g_e, cfg.g_h) == (0.48, 0.31)
        assert (cfg.s_ps, cfg.eta, cfg.B_T) == (0.2, 0.0, 0.0)

    def test_unknown_field_rejected(self):
        with pytest.raises(ParameterError, match="unknown config fields"):
            RunConfig.from_dict({"detuning": 4.0})

    def test_tau_conversions(self):
        ordinary = RunConfig.from_dict({"T_ps": None, "tau_meV": 2.0})
        assert ordinary.tunnel_period() == pytest.approx(3.248145813334939,
                                                         rel=1e-12)
        angular = RunConfig.from_dict({"T_ps": None, "tau_meV": 2.0,
                                       "energy_convention": "angular"})
        assert angular.tunnel_period() == pytest.approx(0.5169584620755003,
                                                        rel=1e-12)

    def test_te_zero_disables_decay(self):
        cfg = RunConfig.from_dict({"te_ns": 0})
        assert cfg.params().gamma == 0.0

    def test_shipped_defaults_file_matches(self):
        from pathlib import Path
        path = Path(__file__).resolve().parents[1] / "configs" / "defaults.json"
        cfg = RunConfig.from_json(path)
        assert cfg == RunConfig()

    def test_missing_period_rejected(self):
        with pytest.raises(ParameterError):
            RunConfig.from_dict({"T_ps": None}).tunnel_period()


class TestFig4:
    @pytest.fixture(scope="class")
    def outputs(self, tmp_path_factory):
        out = tmp_path_factory.mktemp("fig4")
        cfg = RunConfig()
        summary = run_fig4(cfg, out / "fig4.csv")
        return cfg, out / "fig4.csv", summary

    def test_coherence_flips_sign(self, outputs):
        _, _, summary = outputs
        names = [k for k in summary if k.startswith("start rho(") and ";" in k]
        coh = names[0].split(" ", 1)[1]
        assert summary[f"start {coh}"] == pytest.approx(0.25, abs=1e-12)
        assert summary[f"end {coh}"] == pytest.approx(-0.25, abs=0.01)

    def test_populations_return(self, outputs):
        _, _, summary = outputs
        pops = [k.split(" ", 1)[1] for k in summary
                if k.startswith("start rho(") and ";" not in k]
        assert len(pops) == 3
        for name in pops:
            dev = abs(summary[f"end {name}"] - 0.25)
            assert dev < 0.02   # below 2% of probability
        # the spin-down rows carry the visible excitation-cycle errors; the
        # driven up-down row completes its rotation almost exactly
        down_rows = [n for n in pops if "E(dn)|" in n]
        assert len(down_rows) == 2
        for name in down_rows:
            assert abs(summary[f"end {name}"] - 0.25) > 1e-4

    def test_csv_structure(self, outputs):
        _, path, _ = outputs
        header, rows = read_rows(path)
        assert header[0] == "t_ps"
        assert header[-2:] == ["trace", "min_eig"]
        assert len(header) == 1 + 2 * 4 + 2
        assert float(rows[0][0]) == pytest.approx(-1.6)
        assert float(rows[-1][0]) == pytest.approx(8.14)

    def test_reruns_byte_identical(self, outputs, tmp_path):
        cfg, path, _ = outputs
        again = tmp_path / "fig4.csv"
        run_fig4(cfg, again)
        assert again.read_bytes() == path.read_bytes()

    def test_ideal_limit_traces(self, tmp_path):
        """Without decay all traces return to within 0.01 of +-0.25."""
        cfg = RunConfig.from_dict({"te_ns": 0})
        summary = run_fig4(cfg, tmp_path / "ideal.csv")
        for key, value in summary.items():
            if key.startswith("end rho("):
                assert abs(abs(value) - 0.25) < 0.01


class TestSweepSpecs:
    def test_axis_validation(self):
        with pytest.raises(ParameterError):
            SweepSpec(axes=[("B", "T", 0.0, 2.0, 1)])
        with pytest.raises(ParameterError):
            SweepSpec(axes=[("B", "T", 2.0, 1.0, 5)])

    def test_default_grids(self):
        fig5 = default_fig5_spec()
        assert [a[0] for a in fig5.axes] == ["B", "inv_s"]
        assert fig5.axis_values(0)[0] == 0.0
        assert fig5.axis_values(0)[-1] == 2.0
        eta = default_eta_spec()
        values = eta.axis_values(0)
        assert 0.0 in values and 0.1 in values
        assert len(values) == 11

    def test_axis_names_enforced(self, tmp_path):
        spec = SweepSpec(axes=[("B", "T", 0.0, 1.0, 2)])
        with pytest.raises(ParameterError):
            sweep_eta(spec, tmp_path / "x.csv")
        with pytest.raises(ParameterError):
            sweep_fig5(spec, tmp_path / "x.csv")


class TestEtaSweep:
    @pytest.fixture(scope="class")
    def result(self, tmp_path_factory):
        out = tmp_path_factory.mktemp("eta") / "eta.csv"
        spec = SweepSpec(axes=[("eta", "", 0.0, 0.1, 3)])
        rows = sweep_eta(spec, out)
        return spec, out, rows

    def test_endpoint_values_exact(self, result):
        _, _, rows = result
        etas = [r[0] for r in rows]
        assert etas[0] == 0.0 and etas[-1] == 0.1

    def test_fidelity_bands(self, result):
        _, _, rows = result
        by_eta = {r[0]: r[1] for r in rows}
        assert 0.97 <= by_eta[0.0] <= 0.995
        assert 0.94 <= by_eta[0.1] <= 0.975

    def test_symmetry_probe(self, tmp_path):
        """Both timing-error signs degrade the gate."""
        spec = SweepSpec(axes=[("eta", "", -0.06, 0.06, 3)],
                         config=RunConfig.from_dict({"te_ns": 0}))
        rows = sweep_eta(spec, tmp_path / "sym.csv")
        f = {r[0]: r[1] for r in rows}
        assert f[-0.06] <= f[0.0] and f[0.06] <= f[0.0]

    def test_csv_format(self, result):
        _, path, _ = result
        header, rows = read_rows(path)
        assert header == ["eta", "fidelity", "error"]
        assert len(rows) == 3


class TestFig5Sweep:
    def test_small_grid_complete_and_deterministic(self, tmp_path):
        spec = SweepSpec(axes=[("B", "T", 0.0, 1.5, 2),
                               ("inv_s", "THz", 5.0, 6.0, 2)])
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        rows = sweep_fig5(spec, p1)
        sweep_fig5(spec, p2)
        assert len(rows) == 4
        assert p1.read_bytes() == p2.read_bytes()
        # row-major order: B outer axis
        assert [(r[0], r[1]) for r in rows] == [
            (0.0, 5.0), (0.0, 6.0), (1.5, 5.0), (1.5, 6.0)]

    def test_parallel_matches_serial(self, tmp_path):
        spec = SweepSpec(axes=[("B", "T", 0.0, 1.0, 2),
                               ("inv_s", "THz", 5.0, 6.0, 2)])
        serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
        sweep_fig5(spec, serial, workers=1)
        sweep_fig5(spec, parallel, workers=2)
        assert serial.read_bytes() == parallel.read_bytes()

    def test_zero_field_column_consistent_with_gate(self, tmp_path):
        """The B = 0 sweep entry agrees with a direct gate run."""
        spec = SweepSpec(axes=[("B", "T", 0.0, 1.0, 2),
                               ("inv_s", "THz", 5.0, 6.0, 2)])
        rows = sweep_fig5(spec, tmp_path / "g.csv")
        f_sweep = dict(((r[0], r[1]), r[2]) for r in rows)[(0.0, 5.0)]
        direct = run_gate("psi0", RunConfig().params(), s=0.2)
        assert abs(f_sweep - direct.fidelity) < 0.005

    def test_failed_points_recorded_as_nan(self, tmp_path):
        spec = SweepSpec(axes=[("B", "T", -1.0, 1.0, 2),
                               ("inv_s", "THz", 5.0, 6.0, 2)])
        rows = sweep_fig5(spec, tmp_path / "nan.csv")
        assert len(rows) == 4
        failed = [r for r in rows if math.isnan(r[2])]
        assert len(failed) == 2
        assert all("non-negative" in r[3] for r in failed)
        header, text_rows = read_rows(tmp_path / "nan.csv")
        assert text_rows[0][2] == "nan"


class TestObservableNames:
    def test_fig4_observables_by_label(self):
        obs = fig4_observables(2)
        names = list(obs)
        assert names[0] == "rho(E(dn)|E(dn))"
        assert names[3] == "rho(E(up)|E(dn);E(up)|E(up))"
