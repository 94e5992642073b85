import json

import numpy as np
import pytest

from fourier_circuits.cli import main


def run(argv):
    return main([str(a) for a in argv])


def write_config(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


EXTRACT_CONFIG = {
    "ansatz": {"kind": "parallel", "d": 2, "m": 2, "l": 1},
}


class TestAudit:
    def test_parallel_table(self, tmp_path):
        out = tmp_path / "audit.csv"
        code = run(
            ["audit", "--kind", "parallel", "--d", 2, "--m", 2, "--lmax", 4, "--output", out]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "L,D,N_p,N_c,nu,satisfied"
        assert lines[1] == "1,1,30,5,9,true"
        flags = [line.split(",")[-1] for line in lines[1:]]
        assert flags == ["true", "true", "true", "false"]

    def test_line_four_features_never_satisfied(self, tmp_path):
        out = tmp_path / "audit.csv"
        assert run(
            ["audit", "--kind", "line", "--d", 2, "--m", 4, "--lmax", 6, "--output", out]
        ) == 0
        flags = {line.split(",")[-1] for line in out.read_text().splitlines()[1:]}
        assert flags == {"false"}

    def test_mixed_requires_block_size(self, tmp_path):
        out = tmp_path / "audit.csv"
        assert run(
            ["audit", "--kind", "mixed", "--d", 3, "--m", 4, "--p", 2, "--lmax", 4,
             "--output", out]
        ) == 0
        assert len(out.read_text().splitlines()) == 5

    def test_invalid_arguments_exit_2(self, tmp_path):
        out = tmp_path / "audit.csv"
        assert run(
            ["audit", "--kind", "mixed", "--d", 2, "--m", 4, "--lmax", 3, "--output", out]
        ) == 2


class TestSpectrum:
    def test_qubit_two_layers_table(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        assert run(["spectrum", "--d", 2, "--l", 2, "--output", out]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "omega,degeneracy"
        rows = {line.split(",")[0]: int(line.split(",")[1]) for line in lines[1:]}
        assert rows["0"] == 6
        assert rows["1"] == 4 and rows["-1"] == 4
        assert rows["2"] == 1 and rows["-2"] == 1
        assert sum(rows.values()) == 16

    def test_degeneracy_column_sums_to_paths(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        for d, L in [(2, 1), (3, 2), (4, 1)]:
            assert run(["spectrum", "--d", d, "--l", L, "--output", out]) == 0
            total = sum(
                int(line.split(",")[1]) for line in out.read_text().splitlines()[1:]
            )
            assert total == d ** (2 * L)

    def test_eta_rescales_frequency_column(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        assert run(["spectrum", "--d", 2, "--l", 1, "--eta", 0.5, "--output", out]) == 0
        omegas = [line.split(",")[0] for line in out.read_text().splitlines()[1:]]
        assert omegas == ["-0.5", "0", "0.5"]


class TestExtract:
    def test_zero_params_single_constant_term(self, tmp_path):
        config = dict(EXTRACT_CONFIG, params={"thetas": [0.0] * 30})
        cfg = write_config(tmp_path / "cfg.json", config)
        out = tmp_path / "series.json"
        assert run(["extract", "--config", cfg, "--output", out]) == 0
        payload = json.loads(out.read_text())
        assert payload["M"] == 2
        assert len(payload["terms"]) == 1
        term = payload["terms"][0]
        assert term["freq"] == [0, 0]
        assert term["re"] == pytest.approx(1.0, abs=1e-12)

    def test_verify_prints_discrepancy(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.json", EXTRACT_CONFIG)
        out = tmp_path / "series.json"
        assert run(
            ["extract", "--config", cfg, "--verify", "--seed", 3, "--output", out]
        ) == 0
        message = capsys.readouterr().out
        assert "max coefficient discrepancy" in message
        assert float(message.split(":")[1]) <= 1e-9

    def test_methods_agree(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", EXTRACT_CONFIG)
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        assert run(["extract", "--config", cfg, "--seed", 5, "--method", "analytic",
                    "--output", out_a]) == 0
        assert run(["extract", "--config", cfg, "--seed", 5, "--method", "sampling",
                    "--output", out_b]) == 0
        terms_a = {tuple(t["freq"]): complex(t["re"], t["im"])
                   for t in json.loads(out_a.read_text())["terms"]}
        terms_b = {tuple(t["freq"]): complex(t["re"], t["im"])
                   for t in json.loads(out_b.read_text())["terms"]}
        for key in set(terms_a) | set(terms_b):
            assert abs(terms_a.get(key, 0) - terms_b.get(key, 0)) <= 1e-9

    def test_analytic_on_large_register_exits_3(self, tmp_path):
        config = {"ansatz": {"kind": "parallel", "d": 2, "m": 3, "l": 3}}
        cfg = write_config(tmp_path / "cfg.json", config)
        assert run(
            ["extract", "--config", cfg, "--output", tmp_path / "out.json"]
        ) == 3

    def test_noncommuting_extraction_exits_3(self, tmp_path):
        config = {"ansatz": {"kind": "noncommuting", "d": 2, "m": 2, "l": 1}}
        cfg = write_config(tmp_path / "cfg.json", config)
        assert run(
            ["extract", "--config", cfg, "--method", "sampling",
             "--output", tmp_path / "out.json"]
        ) == 3

    def test_unknown_config_key_exits_2(self, tmp_path):
        cfg = write_config(
            tmp_path / "cfg.json",
            {"ansatz": {"kind": "line", "d": 2, "m": 1, "l": 1, "depth": 2}},
        )
        assert run(["extract", "--config", cfg, "--output", tmp_path / "o.json"]) == 2

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", EXTRACT_CONFIG)
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        run(["extract", "--config", cfg, "--seed", 9, "--output", out_a])
        run(["extract", "--config", cfg, "--seed", 9, "--output", out_b])
        assert out_a.read_bytes() == out_b.read_bytes()


class TestFit:
    def fit_config(self):
        return {
            "ansatz": {"kind": "line", "d": 2, "m": 1, "l": 1},
            "target": {
                "trig": [
                    {"kind": "cos", "amplitude": 0.4, "frequency": [1]},
                    {"kind": "sin", "amplitude": 0.3, "frequency": [1]},
                ]
            },
            "data": {
                "n_train": 30,
                "n_test": 30,
                "ranges": [[-3.14159, 3.14159]],
                "seed": 2,
            },
            "optimizer": {"max_iterations": 500, "seed": 4},
        }

    def test_fit_writes_expected_files(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.json", self.fit_config())
        outdir = tmp_path / "run"
        assert run(["fit", "--config", cfg, "--output", outdir]) == 0
        result = json.loads((outdir / "result.json").read_text())
        assert set(result) >= {"thetas", "train_mse", "test_mse", "accuracy", "trace"}
        predictions = (outdir / "predictions.csv").read_text().splitlines()
        assert predictions[0] == "x_1,f_true,f_pred"
        assert len(predictions) == 41
        trace = (outdir / "trace.csv").read_text().splitlines()
        assert trace[0] == "iteration,best_cost"
        costs = [float(line.split(",")[1]) for line in trace[1:]]
        assert all(b <= a + 1e-15 for a, b in zip(costs, costs[1:]))
        assert "train_mse=" in capsys.readouterr().out

    def test_fit_reruns_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", self.fit_config())
        run(["fit", "--config", cfg, "--output", tmp_path / "a"])
        run(["fit", "--config", cfg, "--output", tmp_path / "b"])
        for name in ("result.json", "predictions.csv", "trace.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()

    def test_builtin_target_runs(self, tmp_path):
        config = self.fit_config()
        config["ansatz"] = {"kind": "parallel", "d": 2, "m": 2, "l": 1}
        config["target"] = {"builtin": "fig_a7"}
        config["data"]["ranges"] = [[-3.14159, 3.14159]] * 2
        cfg = write_config(tmp_path / "cfg.json", config)
        assert run(["fit", "--config", cfg, "--output", tmp_path / "run"]) == 0

    def test_unknown_root_key_exits_2(self, tmp_path):
        config = self.fit_config()
        config["extra"] = 1
        cfg = write_config(tmp_path / "cfg.json", config)
        assert run(["fit", "--config", cfg, "--output", tmp_path / "run"]) == 2

    def test_bad_target_section_exits_2(self, tmp_path):
        config = self.fit_config()
        config["target"] = {"builtin": "fig5", "trig": []}
        cfg = write_config(tmp_path / "cfg.json", config)
        assert run(["fit", "--config", cfg, "--output", tmp_path / "run"]) == 2


class TestDemos:
    def test_collapsed_demo_residuals_tiny(self, tmp_path):
        out = tmp_path / "demo.json"
        assert run(["demo", "--name", "collapsed", "--output", out]) == 0
        payload = json.loads(out.read_text())
        assert payload["n_triples"] == 100
        assert payload["max_shift_residual"] <= 1e-12
        assert payload["max_swap_residual"] <= 1e-12

    def test_product_demo_factorizes(self, tmp_path):
        out = tmp_path / "demo.json"
        assert run(["demo", "--name", "product", "--output", out]) == 0
        payload = json.loads(out.read_text())
        assert payload["max_factorization_residual"] <= 1e-9

    def test_noncommuting_demo_reports_entries(self, tmp_path):
        out = tmp_path / "demo.json"
        assert run(["demo", "--name", "noncommuting", "--seed", 1, "--output", out]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["entries"]) == 20
        assert 0.0 <= payload["fraction_out_of_model"] <= 1.0
        for entry in payload["entries"]:
            assert np.isfinite(entry["max_out_of_model_magnitude"])
