import io
import json
import subprocess
import sys

import pytest

import sixtermk.cli as cli
from sixtermk import GroupHom
from sixtermk.cli import EXIT_CONTRADICTION, EXIT_FAIL, EXIT_INPUT, EXIT_OK, InputError, parse_moduli, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestDescribe:
    def test_identity_extension(self, capsys):
        code, out, _ = call(capsys, "describe", "F1:0")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert [ln.split()[2] for ln in lines[1:]] == ["Z", "Z", "0", "0", "0", "0"]
        assert lines[1].endswith("[1]")

    @pytest.mark.parametrize("desc", ["E:2:0", "F:6:3", "F1:4"])
    def test_six_cones_equal_describe(self, capsys, desc):
        _, plain, _ = call(capsys, "describe", desc)
        _, cone6, _ = call(capsys, "mc", desc, "--times", "6")
        assert cone6 == plain

    def test_json_round_trip(self, capsys, monkeypatch):
        _, first, _ = call(capsys, "describe", "E:4:2", "--format", "json")
        monkeypatch.setattr("sys.stdin", io.StringIO(first))
        _, second, _ = call(capsys, "describe", "file:-", "--format", "json")
        assert second == first

    def test_suspend(self, capsys):
        _, out, _ = call(capsys, "suspend", "E:3:0", "--format", "json")
        assert json.loads(out)["groups"] == ["Z", "Z/3", "0", "0", "0", "Z"]


class TestTable:
    def test_two_three(self, capsys):
        code, out, _ = call(capsys, "table", "--n", "2", "--k", "3", "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert len(doc["rows"]) == 18 and all(len(r) == 6 for r in doc["rows"].values())
        assert doc["rows"]["H3,2"][0] == "Z/6"
        assert doc["rows"]["H3,1"] == ["Z", "Z", "0", "0", "0", "Z/6"]

    def test_text_alignment(self, capsys):
        _, out, _ = call(capsys, "table", "--n", "4", "--k", "2")
        lines = out.splitlines()
        assert len(lines) == 19
        assert lines[0].split() == [f"e_4^{j}" for j in range(6)]

    def test_bad_parameters(self, capsys):
        code, _, err = call(capsys, "table", "--n", "1", "--k", "3")
        assert code == EXIT_INPUT and "error" in err


class TestInvariantAndSolve:
    def test_invariant(self, capsys):
        code, out, _ = call(capsys, "invariant", "E:2:0", "--mods", "2,3", "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["moduli"] == [2, 3]

    def test_solve_layers(self, capsys):
        code, out, _ = call(capsys, "solve", "E:2:0", "--mods", "2")
        assert code == EXIT_OK
        assert "Z + Z/2" in out and "provenance n = 2" in out

    def test_solve_constraint_file(self, capsys, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"nodes": ["0", "Z/2", "?", "Z/2", "0"], "edges": ["?"] * 4}))
        code, out, _ = call(capsys, "solve", "--constraint", str(p), "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["slots"]["p2"]["status"] == "CANDIDATES"

    def test_contradiction(self, capsys, tmp_path):
        p = tmp_path / "c.json"
        doc = {"nodes": ["0", "Z", "Z", "0"], "edges": ["zero", {"times": 2}, "zero"]}
        p.write_text(json.dumps(doc))
        code, _, err = call(capsys, "solve", "--constraint", str(p))
        assert code == EXIT_CONTRADICTION and "contradiction" in err

    def test_solve_needs_input(self, capsys):
        assert call(capsys, "solve")[0] == EXIT_INPUT


class TestVerify:
    def test_pass(self, capsys):
        code, out, _ = call(capsys, "verify", "E:3:0", "--diagrams", "D0,SEQ4", "--mods", "2,3", "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["status"] == {"D0": "pass", "SEQ4": "pass"}
        assert all(c["verdict"] == "pass" for c in doc["cells"])

    def test_missing_witness_is_not_failure(self, capsys, monkeypatch):
        # skipped cells are not failures, so verify still exits 0
        def no_witness(inv, bound=None):
            return inv, [(n, i) for n in inv.moduli for i in range(6)]

        monkeypatch.setattr(cli, "populate_h_maps", no_witness)
        code, out, _ = call(capsys, "verify", "E:2:0", "--diagrams", "SEQ2", "--mods", "2")
        assert code == EXIT_OK
        assert "SEQ2: incomplete" in out and "no h-map witness" in out

    def test_failure_exit(self, capsys, monkeypatch):
        real = cli.populate_h_maps

        def broken(inv, bound=None):
            inv, missing = real(inv, bound)
            lay = inv.layer(2)
            for kind, row in lay.h.items():
                for i, h in enumerate(row):
                    if h is not None and not h.is_zero():
                        return inv.with_layer(lay.with_h(kind, i, GroupHom.zero(h.source, h.target))), missing
            return inv, missing

        monkeypatch.setattr(cli, "populate_h_maps", broken)
        code, out, _ = call(capsys, "verify", "E:2:0", "--diagrams", "SEQ1,SEQ2,SEQ3,TRI1,TRI2,TRI3", "--mods", "2")
        assert code == EXIT_FAIL and ": fail" in out

    def test_unknown_diagram(self, capsys):
        assert call(capsys, "verify", "E:2:0", "--diagrams", "D9")[0] == EXIT_INPUT


class TestHom:
    def test_hom_six(self, capsys):
        code, out, _ = call(capsys, "hom-six", "F1:0", "F1:0", "--format", "json")
        assert code == EXIT_OK and json.loads(out)["group"] == "Z"

    def test_hom_lambda(self, capsys):
        code, out, _ = call(capsys, "hom", "E:2:0", "E:2:0", "--mods", "2", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["moduli"] == [2]


class TestInputErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["frobnicate"],
            ["describe"],
            ["describe", "E:1:0"],
            ["describe", "E:2:0", "--bogus"],
            ["describe", "file:/nonexistent/x.json"],
            ["mc", "E:2:0", "--times", "-1"],
            ["invariant", "E:2:0", "--mods", "1,2"],
        ],
    )
    def test_exit_two(self, capsys, argv):
        assert call(capsys, *argv)[0] == EXIT_INPUT

    def test_help_is_success(self, capsys):
        assert call(capsys, "--help")[0] == EXIT_OK


class TestModuli:
    def test_parse(self):
        assert parse_moduli("2,3,5-7") == [2, 3, 5, 6, 7]
        assert parse_moduli("4, 2,4") == [2, 4]

    @pytest.mark.parametrize("bad", ["", "1", "a", "2-x", "0-3"])
    def test_parse_errors(self, bad):
        with pytest.raises(InputError):
            parse_moduli(bad)

    def test_environment_default(self, capsys, monkeypatch):
        monkeypatch.setenv("SIXTERMK_MODULI", "3,5")
        _, out, _ = call(capsys, "invariant", "E:2:0", "--format", "json")
        assert json.loads(out)["moduli"] == [3, 5]


def test_deterministic_bytes(capsys):
    argv = ["solve", "E:4:1", "--mods", "2,4,6"]
    assert call(capsys, *argv)[1] == call(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sixtermk", "describe", "E:2:0"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "Z/2" in proc.stdout
