import json

import pytest

from mufield.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def crisp_path(tmp_path):
    p = tmp_path / "crisp.json"
    p.write_text('{"default": 1.0, "rules": []}')
    return str(p)


@pytest.fixture()
def mutant_path(tmp_path):
    p = tmp_path / "mutant.json"
    p.write_text(json.dumps({
        "default": 1.0,
        "rules": [{"match": {"kind": "point", "value": 0.0, "tol": 1e-9}, "mu": 0.9}],
    }))
    return str(p)


class TestAxioms:
    def test_crisp_grid_passes(self, capsys, crisp_path):
        code, out, _ = run(capsys, "axioms", crisp_path)
        assert code == 0
        assert "pass" in out

    def test_mutation_fails_with_axiom_id(self, capsys, mutant_path):
        code, out, _ = run(capsys, "axioms", mutant_path, "--grid", "2:3:0.5")
        assert code == 1
        assert "(v)" in out

    def test_samples_file(self, capsys, crisp_path, tmp_path):
        samples = tmp_path / "samples.json"
        samples.write_text("[1.0, 2.0, -3.0]")
        code, out, _ = run(capsys, "axioms", crisp_path, "--samples", str(samples))
        assert code == 0

    def test_bad_spec_is_usage_error(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"default": 2.0, "rules": []}')
        code, _, err = run(capsys, "axioms", str(p))
        assert code == 2


class TestEval:
    def test_mu_abs(self, capsys, tmp_path):
        p = tmp_path / "half.json"
        p.write_text(json.dumps({
            "default": 1.0,
            "rules": [{"match": {"kind": "point", "value": 2.0, "tol": 1e-9}, "mu": 0.5}],
        }))
        code, out, _ = run(capsys, "eval", "mu_abs", "--mu", str(p), "--a", "2")
        assert code == 0
        assert "1.0" in out

    def test_mu_arg_negative_real(self, capsys):
        code, out, _ = run(capsys, "eval", "mu_arg", "--z=-1,0")
        assert code == 0
        assert "3.14159" in out

    def test_log_zero_is_exit_1(self, capsys):
        code, out, _ = run(capsys, "eval", "mu_log", "--z", "0,0")
        assert code == 1
        assert "undefined" in out

    def test_unknown_op_is_exit_2(self, capsys):
        code, _, err = run(capsys, "eval", "definitely_not_an_op", "--a", "1")
        assert code == 2
        assert "unknown op" in err

    def test_missing_operand_is_exit_2(self, capsys):
        code, _, err = run(capsys, "eval", "mu_abs")
        assert code == 2

    def test_mu_sup(self, capsys):
        code, out, _ = run(capsys, "eval", "mu_sup", "--set", "1,3,2")
        assert code == 0
        assert "3" in out


class TestConverge:
    @pytest.fixture()
    def experiment_path(self, tmp_path):
        doc = {
            "label": "drift",
            "sequence": {"form": "log_plus", "params": {"c": 1.0}, "n_min": 1, "n_max": 2000},
            "mu": {"self": {"form": "rational_poly", "params": {"p": [0, 1], "q": [1, 3, 3, 1]}}},
            "candidates": [0.0],
            "eps": [1e-1, 1e-2, 1e-3],
            "horizon": 2000,
            "fallback_mu": {"default": 0.0, "rules": []},
        }
        p = tmp_path / "exp.json"
        p.write_text(json.dumps(doc))
        return str(p)

    def test_runs_and_reports_n_table(self, capsys, experiment_path):
        code, out, _ = run(capsys, "converge", experiment_path)
        assert code == 0
        assert "N=72" in out

    def test_trace_csv(self, capsys, experiment_path, tmp_path):
        trace = tmp_path / "trace.csv"
        code, _, _ = run(capsys, "converge", experiment_path, "--trace", str(trace))
        assert code == 0
        lines = trace.read_text().splitlines()
        assert lines[0] == "n,term,membership,scaled_deviation"
        assert len(lines) == 2001

    def test_horizon_over_family_cap_is_exit_2(self, capsys, tmp_path):
        doc = {
            "sequence": {"form": "exp_plus", "params": {"c": 0.0}, "n_min": 1, "n_max": 700},
            "horizon": 5000,
        }
        p = tmp_path / "over.json"
        p.write_text(json.dumps(doc))
        code, _, err = run(capsys, "converge", str(p))
        assert code == 2

    def test_missing_file_is_exit_2(self, capsys):
        code, _, _ = run(capsys, "converge", "/nonexistent/exp.json")
        assert code == 2


class TestDemo:
    def test_demo_runs_clean(self, capsys):
        code, out, _ = run(capsys, "demo", "unbounded_convergent")
        assert code == 0
        assert "probe" in out

    def test_unknown_demo_lists_catalog(self, capsys):
        code, _, err = run(capsys, "demo", "nope")
        assert code == 2
        for name in ("nonunique_limit", "unbounded_convergent", "sum_failure", "product_failure"):
            assert name in err


class TestIdentities:
    def test_sweep_passes(self, capsys):
        code, out, _ = run(capsys, "identities", "R3", "C6", "--trials", "40", "--seed", "1")
        assert code == 0
        assert "R3" in out and "C6" in out

    def test_literal_fails_with_exit_1(self, capsys):
        code, out, _ = run(capsys, "identities", "C7", "--literal", "--trials", "10", "--seed", "1")
        assert code == 1
        assert "C7_literal" in out

    def test_unknown_identity_is_exit_2(self, capsys):
        code, _, err = run(capsys, "identities", "QQ", "--trials", "5")
        assert code == 2

    def test_fixed_mu_guard_counts_unmet(self, capsys, tmp_path):
        p = tmp_path / "zero.json"
        p.write_text('{"default": 0.0, "rules": []}')
        code, out, _ = run(capsys, "identities", "R3", "--mu", str(p), "--trials", "20")
        assert code == 0
        assert " 20" in out  # all trials unmet, none failed


class TestEnvelope:
    def test_json_envelope_deterministic_modulo_timestamp(self, capsys):
        argv = ["identities", "R4", "--trials", "25", "--seed", "6", "--json"]
        code1, out1, _ = run(capsys, *argv)
        code2, out2, _ = run(capsys, *argv)
        assert code1 == code2 == 0
        a, b = json.loads(out1), json.loads(out2)
        a.pop("timestamp"), b.pop("timestamp")
        assert a == b
        assert a["tool"] == "mufield" and a["seed"] == 6
        assert a["command"] == "identities"

    def test_envelope_carries_input_digest(self, capsys, crisp_path):
        code, out, _ = run(capsys, "axioms", crisp_path, "--json")
        env = json.loads(out)
        assert crisp_path in env["inputs"]
        assert len(env["inputs"][crisp_path]) == 64
