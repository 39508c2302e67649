from __future__ import annotations

import io
import json

import pytest

from berrykit.cli import main
from berrykit.coding import encode
from berrykit.syntax import Eq, Not, Var, Zero, numeral, render

NAMER = encode(Eq(Var(0), Zero()))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParse:
    def test_canonicalizes(self, capsys):
        code, out, _ = run(capsys, "parse", "s(s 0)+0")
        assert code == 0
        assert "s s 0 + 0" in out

    def test_json_mode_carries_ast(self, capsys):
        code, out, _ = run(capsys, "--json", "parse", "v0 = 0")
        obj = json.loads(out)
        assert code == 0 and obj["v"] == 1
        assert obj["kind"] == "formula" and obj["length"] == 3

    def test_malformed_input(self, capsys):
        code, _, err = run(capsys, "parse", "( 0 +")
        assert code == 2 and "error" in err

    def test_stdin_fallback(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("s 0 = s 0"))
        code, out, _ = run(capsys, "parse")
        assert code == 0 and "s 0 = s 0" in out


class TestGn:
    def test_round_trip(self, capsys):
        code, out, _ = run(capsys, "gn", "encode", "v0 = 0")
        assert code == 0
        n = out.strip()
        code2, out2, _ = run(capsys, "gn", "decode", n)
        assert code2 == 0 and out2.strip() == "v0 = 0"

    def test_hex_round_trip(self, capsys):
        code, out, _ = run(capsys, "gn", "encode", "0 = 0", "--hex")
        assert code == 0
        code2, out2, _ = run(capsys, "--json", "gn", "decode", out.strip(), "--hex")
        obj = json.loads(out2)
        assert code2 == 0 and obj["text"] == "0 = 0"

    def test_decode_garbage_code(self, capsys):
        code, _, err = run(capsys, "gn", "decode", "17")
        assert code == 2 and "error" in err

    def test_decode_non_integer(self, capsys):
        code, _, _ = run(capsys, "gn", "decode", "xyz")
        assert code == 2

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("s 0"))
        code, out, _ = run(capsys, "gn", "encode")
        assert code == 0 and out.strip().isdigit()


class TestEval:
    def test_true_sentence(self, capsys):
        code, out, _ = run(capsys, "eval", "s 0 <= s s 0")
        assert code == 0 and "true" in out.lower()

    def test_false_sentence(self, capsys):
        code, out, _ = run(capsys, "eval", "s 0 = 0")
        assert code == 0 and "false" in out.lower()

    def test_unknown_exhausts_budget(self, capsys):
        code, out, _ = run(
            capsys, "--budget", "3", "eval", "( E v0 ) ( v0 = s s s s s 0 )"
        )
        assert code == 3

    def test_witness_reported_for_existential(self, capsys):
        code, out, _ = run(
            capsys, "--json", "eval", "( E v0 ) ( v0 * v0 = s s s s 0 )"
        )
        obj = json.loads(out)
        assert code == 0 and obj["verdict"] == "true"
        assert obj["witness"] == 2

    def test_open_formula_rejected(self, capsys):
        code, _, err = run(capsys, "eval", "v0 = 0")
        assert code == 2


class TestClassify:
    @pytest.mark.parametrize(
        "text,label",
        [
            ("0 = 0", "delta0"),
            ("( E v0 ) ( v0 = 0 )", "sigma1"),
            ("( A v0 ) ( v0 = 0 )", "other"),
        ],
    )
    def test_labels(self, capsys, text, label):
        code, out, _ = run(capsys, "classify", text)
        assert code == 0 and label in out


class TestRel:
    def test_fm_true(self, capsys):
        code, out, _ = run(capsys, "rel", "fm", str(NAMER))
        assert code == 0

    def test_fm_false_exits_one(self, capsys):
        code, _, _ = run(capsys, "rel", "fm", "17")
        assert code == 1

    def test_lh_needs_second_argument(self, capsys):
        code, _, err = run(capsys, "rel", "lh", str(NAMER))
        assert code == 2 and "two numbers" in err

    def test_nm_positive(self, capsys):
        code, out, _ = run(capsys, "--json", "rel", "nm", "0", str(NAMER))
        obj = json.loads(out)
        assert code == 0 and obj["holds"] is True

    def test_nm_negative(self, capsys):
        code, _, _ = run(capsys, "rel", "nm", "2", str(NAMER))
        assert code == 1

    def test_b_undecided_exits_three(self, capsys):
        code, _, _ = run(capsys, "--budget", "1", "rel", "b", "5", "6")
        assert code == 3

    def test_prc_trivial_positive(self, capsys):
        code, _, _ = run(capsys, "rel", "prc", "17")
        assert code == 0

    def test_prc_undecided(self, capsys):
        code, _, _ = run(capsys, "rel", "prc", str(encode(Eq(Zero(), Zero()))))
        assert code == 3

    def test_snt_takes_one_argument(self, capsys):
        code, _, err = run(capsys, "rel", "snt", str(NAMER), "4")
        assert code == 2 and "one argument" in err


class TestProofPipeline:
    def test_prove_then_check(self, capsys, tmp_path):
        out_file = tmp_path / "d.jsonl"
        code, _, _ = run(capsys, "prove-sigma", "s 0 + s 0 = s s 0", "-o", str(out_file))
        assert code == 0
        code2, out2, _ = run(capsys, "check-proof", str(out_file))
        assert code2 == 0 and "valid" in out2

    def test_tampered_file_fails(self, capsys, tmp_path):
        out_file = tmp_path / "d.jsonl"
        run(capsys, "prove-sigma", "s 0 <= s s 0", "-o", str(out_file))
        lines = out_file.read_text().splitlines()
        obj = json.loads(lines[-1])
        obj["f"] = "0 = s 0"
        lines[-1] = json.dumps(obj)
        out_file.write_text("\n".join(lines) + "\n")
        code, _, err = run(capsys, "check-proof", str(out_file))
        assert code == 1 and "error" in err

    def test_check_proof_stdin(self, capsys, tmp_path, monkeypatch):
        out_file = tmp_path / "d.jsonl"
        run(capsys, "prove-sigma", "0 = 0", "-o", str(out_file))
        monkeypatch.setattr("sys.stdin", io.StringIO(out_file.read_text()))
        code, _, _ = run(capsys, "check-proof", "-")
        assert code == 0

    def test_false_sentence_refused(self, capsys):
        code, _, err = run(capsys, "prove-sigma", "0 = s 0")
        assert code == 1

    def test_budget_exhaustion(self, capsys):
        code, _, _ = run(
            capsys, "--budget", "2", "prove-sigma", "( E v0 ) ( v0 = s s s s 0 )"
        )
        assert code == 3

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "check-proof", "/nonexistent/d.jsonl")
        assert code == 2


class TestBerry:
    def test_reports_least_unnamed(self, capsys):
        code, out, _ = run(capsys, "--json", "berry", "--max-len", "6")
        obj = json.loads(out)
        assert code == 0 and obj["n"] == 3

    def test_budget_starvation(self, capsys):
        code, _, _ = run(capsys, "--budget", "1", "berry", "--max-len", "6")
        assert code == 3

    def test_cap(self, capsys):
        code, _, err = run(capsys, "berry", "--max-len", "16")
        assert code == 2 and "cap" in err


class TestBoundsAndSentence:
    def test_mock_bounds_hold(self, capsys):
        code, out, _ = run(capsys, "--json", "bounds", "--phi-mock", "40:3")
        obj = json.loads(out)
        assert code == 0 and obj["holds"] is True

    def test_concrete_bounds(self, capsys, tmp_path):
        phi = tmp_path / "phi.txt"
        phi.write_text("v0 = v1\n")
        code, out, _ = run(capsys, "--json", "bounds", "--phi-file", str(phi))
        obj = json.loads(out)
        assert code == 0 and obj["k1"] == 29

    def test_bad_mock_spec(self, capsys):
        code, _, _ = run(capsys, "bounds", "--phi-mock", "nonsense")
        assert code == 2

    def test_requires_a_provider(self, capsys):
        code, _, _ = run(capsys, "bounds")
        assert code == 2

    def test_sentence_from_concrete_base(self, capsys, tmp_path):
        phi = tmp_path / "phi.txt"
        phi.write_text("v0 = v1\n")
        code, out, _ = run(capsys, "boolos", "--phi-file", str(phi), "--n", "0")
        assert code == 0 and "<=" in out

    def test_mock_gets_schematic_json(self, capsys):
        code, out, _ = run(capsys, "--json", "boolos", "--phi-mock", "40:3")
        obj = json.loads(out)
        assert code == 0 and obj["schematic"] is True


class TestDemo:
    def test_run_and_replay(self, capsys, tmp_path):
        report = tmp_path / "demo.json"
        code, _, _ = run(capsys, "demo", "2", "-o", str(report))
        assert code == 0
        code2, out2, _ = run(capsys, "demo", "--replay", str(report))
        assert code2 == 0 and "ok" in out2.lower()

    def test_replay_detects_tampering(self, capsys, tmp_path):
        report = tmp_path / "demo.json"
        run(capsys, "demo", "2", "-o", str(report))
        obj = json.loads(report.read_text())
        obj["summary"] = "rewritten"
        report.write_text(json.dumps(obj))
        code, _, err = run(capsys, "demo", "--replay", str(report))
        assert code == 1

    def test_demo_needs_a_corollary_or_replay(self, capsys):
        code, _, _ = run(capsys, "demo")
        assert code == 2


class TestConfig:
    def test_env_overrides_default(self, capsys, monkeypatch):
        monkeypatch.setenv("BERRYKIT_BUDGET", "2")
        code, _, _ = run(capsys, "prove-sigma", "( E v0 ) ( v0 = s s s s 0 )")
        assert code == 3

    def test_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("BERRYKIT_BUDGET", "2")
        code, _, _ = run(
            capsys, "--budget", "16", "prove-sigma", "( E v0 ) ( v0 = s s s s 0 )"
        )
        assert code == 0

    def test_config_file_between_defaults_and_env(self, capsys, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("# comment\nbudget=2\n")
        code, _, _ = run(
            capsys, "--config", str(cfg), "prove-sigma", "( E v0 ) ( v0 = s s s s 0 )"
        )
        assert code == 3

    def test_unknown_config_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("volume=11\n")
        code, _, _ = run(capsys, "--config", str(cfg), "parse", "0 = 0")
        assert code == 2

    def test_seed_flag_is_accepted(self, capsys):
        code, _, _ = run(capsys, "--seed", "7", "parse", "0 = 0")
        assert code == 0


class TestArgparseErrors:
    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["berry"])
        assert exc.value.code == 2
