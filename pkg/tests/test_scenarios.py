"""Config parsing, presets, runner determinism, and the CLI."""

import json

import numpy as np
import pytest

from chaospic.cli import main
from chaospic.errors import ConfigurationError
from chaospic.particles import AffineLaw
from chaospic.scenarios import (
    ScenarioConfig,
    convergence_study,
    load_config,
    preset_config,
    preset_names,
    run,
)

TINY = {"n_particles": 3000, "t_final": 1.0, "chaos_order": 2, "n_cells": 32, "v_cells": 24}


def tiny_config(name="landau-linear", **extra):
    over = dict(TINY)
    over.update(extra)
    return preset_config(name, overrides=over)


class TestPresets:
    def test_all_presets_build(self):
        for name in preset_names():
            for profile in ("desk", "paper"):
                cfg = preset_config(name, profile)
                assert cfg.n_particles >= 1

    def test_landau_preset_paper_values(self):
        cfg = preset_config("landau-linear")
        assert cfg.initial.wave_number == 0.5
        assert cfg.initial.amplitude == AffineLaw(1.0 / 20.0, 1.0 / 10.0)
        assert cfg.initial.temperature == AffineLaw(1.0, 0.0)
        assert cfg.domain == (0.0, 4.0 * np.pi)
        assert cfg.v_range == (-6.0, 6.0)
        assert cfg.dt == 0.1
        assert cfg.nu == 0.0
        assert cfg.bc == "periodic"

    def test_landau_preset_overrides(self):
        cfg = preset_config("landau-linear", overrides={"n_particles": 100_000, "chaos_order": 3})
        assert cfg.n_particles == 100_000
        assert cfg.chaos_order == 3
        assert cfg.node_count is None  # defaults to 2 (M+1) at build time

    def test_sod_interface_preset_paper_values(self):
        cfg = preset_config("sod-interface")
        assert cfg.initial.interface == AffineLaw(0.45, 0.1)
        assert cfg.domain == (0.0, 1.0)
        assert cfg.v_range == (-10.0, 10.0)
        assert cfg.bc == "reflecting"
        assert cfg.initial.temperature == AffineLaw(1.0, 0.0)
        assert cfg.initial.temperature_right == AffineLaw(0.8, 0.0)

    def test_sod_temperature_preset_paper_values(self):
        cfg = preset_config("sod-temperature")
        assert cfg.initial.temperature == AffineLaw(1.0, 0.25)
        assert cfg.initial.temperature_right == AffineLaw(0.8, 0.25)
        assert cfg.initial.interface == AffineLaw(0.5, 0.0)
        assert cfg.nu == 1000.0 and cfg.dt == 0.01

    def test_two_stream_preset_paper_values(self):
        cfg = preset_config("two-stream-linear")
        assert cfg.initial.wave_number == 0.2
        assert cfg.initial.drift == 2.4
        assert cfg.initial.amplitude == AffineLaw(3.0e-3, 4.0e-3)

    def test_nonlinear_variants_switch_amplitude(self):
        assert preset_config("landau-nonlinear").initial.amplitude == AffineLaw(0.4, 0.6)
        flat = preset_config("landau-nonlinear-nu1000")
        assert flat.initial.amplitude == AffineLaw(0.2, 0.4)
        assert flat.nu == 1000.0

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError):
            preset_config("landau-cubic")


class TestConfigValidation:
    def test_empty_custom_config_lists_missing(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{}")
        with pytest.raises(ConfigurationError, match="missing required"):
            load_config(path)

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"preset": "landau-linear", "n_particels": 10}))
        with pytest.raises(ConfigurationError, match="n_particels"):
            load_config(path)

    def test_bad_json_is_config_error(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        with pytest.raises(ConfigurationError):
            load_config(path)

    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"preset": "landau-linear",
                                    "n_particles": 5000, "t_final": 2.0, "seed": 3}))
        cfg = load_config(path)
        assert cfg.n_particles == 5000 and cfg.seed == 3
        assert cfg.preset == "landau-linear"

    def test_bc_mismatch_rejected(self):
        with pytest.raises(ConfigurationError, match="reflecting"):
            preset_config("sod-temperature", overrides={"bc": "periodic"})

    def test_bad_dt(self):
        with pytest.raises(ConfigurationError):
            tiny_config(dt=-0.1)
        with pytest.raises(ConfigurationError):
            tiny_config(t_final=0.01)  # below one step

    def test_convergence_needs_reference_above_orders(self):
        with pytest.raises(ConfigurationError, match="order_ref"):
            preset_config("convergence-study", overrides={"order_ref": 4})


class TestRunner:
    def test_pure_drift_with_field_hook(self, tmp_path):
        cfg = tiny_config(disable_field=True, t_final=0.1, nu=0.0)
        result = run(cfg, tmp_path / "out")
        assert (tmp_path / "out" / "energy.csv").exists()
        assert (tmp_path / "out" / "run.json").exists()
        assert result.energy.times[-1] == pytest.approx(0.1)

    def test_mass_ledger_machine_precision(self):
        result = run(tiny_config())
        assert max(err for _, err in result.mass_ledger) < 1e-12

    def test_bit_identical_reruns(self, tmp_path):
        cfg = tiny_config(dump_times=[1.0])
        a = tmp_path / "a"
        b = tmp_path / "b"
        run(cfg, a)
        run(tiny_config(dump_times=[1.0]), b)
        for name in ("energy.csv", "moments_t1.csv", "density_mean_t1.csv", "density_var_t1.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_seed_changes_output(self):
        r1 = run(tiny_config())
        r2 = run(tiny_config(seed=1))
        assert not np.array_equal(r1.energy.per_node, r2.energy.per_node)

    def test_workers_bit_identical(self):
        r1 = run(tiny_config(workers=1))
        r4 = run(tiny_config(workers=4))
        assert np.array_equal(r1.energy.per_node, r4.energy.per_node)

    def test_run_log_contents(self, tmp_path):
        out = tmp_path / "out"
        run(tiny_config(dump_times=[1.0], dump_fields=True, dump_ensemble=True), out)
        log = json.loads((out / "run.json").read_text())
        assert log["config"]["n_particles"] == TINY["n_particles"]
        assert log["config_hash"]
        assert log["basis"]["node_count"] == 6
        assert log["dumps"]["moments"][0]["file"] == "moments_t1.csv"
        assert (out / log["dumps"]["fields"][0]["file"]).exists()
        assert (out / "ensemble_final.csv").exists()
        assert log["total_mass"] == pytest.approx(4.0 * np.pi)

    def test_sod_runs_with_reflecting_bc(self):
        cfg = preset_config("sod-temperature",
                            overrides={"n_particles": 5000, "t_final": 0.05,
                                       "chaos_order": 2, "n_cells": 25, "v_cells": 20})
        result = run(cfg)
        assert max(err for _, err in result.mass_ledger) < 1e-12
        assert result.diagnostics["replacement_fraction_mean"] > 0.9

    def test_strang_vs_lie_differ(self):
        a = run(tiny_config(nu=1.0))
        b = run(tiny_config(nu=1.0, splitting="lie"))
        assert not np.array_equal(a.energy.per_node, b.energy.per_node)

    def test_pool_initial_mode(self):
        result = run(tiny_config(nu=1.0, pool_mode="initial"))
        assert result.diagnostics["replacement_fraction_mean"] > 0.0


class TestConvergenceStudy:
    def test_reference_must_exceed_tested_orders(self):
        with pytest.raises(ConfigurationError, match="order_ref"):
            preset_config("convergence-study",
                          overrides={"n_particles": 2000, "orders": [5], "order_ref": 5,
                                     "chaos_order": 5})

    def test_deterministic_temperature_gives_machine_precision(self):
        cfg = preset_config(
            "convergence-study",
            overrides={"n_particles": 3000, "orders": [1, 2, 3], "order_ref": 6,
                       "chaos_order": 6, "initial": {"temperature": [1.0, 0.0]}},
        )
        table = convergence_study(cfg)
        assert all(err < 1e-12 for _, err in table)

    def test_tiny_study_decays(self, tmp_path):
        cfg = preset_config("convergence-study",
                            overrides={"n_particles": 20_000, "orders": [1, 2, 3],
                                       "order_ref": 8, "chaos_order": 8})
        table = convergence_study(cfg, tmp_path / "conv")
        errs = [e for _, e in table]
        assert errs[2] < errs[0]
        assert (tmp_path / "conv" / "convergence.csv").exists()


class TestCli:
    def test_preset_run_and_fit(self, tmp_path, capsys):
        out = tmp_path / "run"
        code = main(["preset", "landau-linear",
                     "--override", "n_particles=3000", "--override", "t_final=1.0",
                     "--override", "chaos_order=2", "--override", "n_cells=32",
                     "--override", "fit_window=null",
                     "--out-dir", str(out), "--seed", "5"])
        assert code == 0
        assert (out / "energy.csv").exists()
        assert json.loads((out / "run.json").read_text())["seed"] == 5

    def test_run_subcommand(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "preset": "landau-linear", "n_particles": 2000, "t_final": 0.5,
            "chaos_order": 2, "n_cells": 16, "fit_window": None,
        }))
        assert main(["run", str(path), "--out-dir", str(tmp_path / "o")]) == 0

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"preset": "landau-linear", "bogus_key": 3}))
        assert main(["run", str(path)]) == 2
        assert "bogus_key" in capsys.readouterr().err

    def test_unknown_preset_exit_code(self):
        assert main(["preset", "landau-quartic"]) == 2

    def test_fit_rate_subcommand(self, tmp_path, capsys):
        t = np.arange(0.0, 20.0, 0.1)
        vals = np.exp(-0.25 * t) * np.abs(np.cos(1.4 * t)) + 1e-12
        rows = ["t,mean_E,var_E,node_0"]
        rows += [f"{tt},{v},0.0,{v}" for tt, v in zip(t, vals)]
        path = tmp_path / "energy.csv"
        path.write_text("\n".join(rows))
        assert main(["fit-rate", str(path), "--window", "0,20"]) == 0
        got = float(capsys.readouterr().out.strip())
        assert got == pytest.approx(-0.25, abs=2e-3)

    def test_fit_rate_bad_window(self, tmp_path):
        path = tmp_path / "energy.csv"
        path.write_text("t,mean_E,var_E,node_0\n0.0,1.0,0.0,1.0\n")
        assert main(["fit-rate", str(path), "--window", "zero-to-ten"]) == 2

    def test_converge_subcommand(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "preset": "convergence-study", "n_particles": 2000,
            "orders": [1, 2], "order_ref": 5, "chaos_order": 5,
        }))
        assert main(["converge", str(path), "--out-dir", str(tmp_path / "c")]) == 0
        assert "l2_error" in capsys.readouterr().out
        assert (tmp_path / "c" / "convergence.csv").exists()
