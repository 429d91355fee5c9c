import json
import subprocess
import sys

import pytest

from incicolor import graphs
from incicolor.cli import SCAN_COLUMNS, main, parse_scan_spec
from incicolor.incidence import greedy_coloring


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def write_spec(tmp_path, data, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


class TestAnalyze:
    def test_cycle5(self, capsys):
        out = run_json(capsys, "analyze", "--family", "cycle:5")
        assert out["schema"] == 1
        assert out["exact"]["chi_i"] == 4
        lower = {b["name"]: b["value"] for b in out["lower"]}
        assert lower["domination"] == 4 and max(lower.values()) == 4

    def test_petersen_nec(self, capsys):
        out = run_json(capsys, "analyze", "--family", "petersen")
        assert out["nec"]["conclusion"] == "chi_i >= 5"
        assert out["nec"]["chromatic_index"] == 4
        assert out["exact"]["chi_i"] == 5

    def test_wheel_planar(self, capsys):
        out = run_json(capsys, "analyze", "--family", "wheel:8", "--planar", "--no-exact")
        upper = {b["name"]: b["value"] for b in out["upper"]}
        assert out["graph"]["max_degree"] == 8
        assert upper["planar"] == 13
        assert "exact" not in out

    def test_input_file(self, capsys, tmp_path):
        p = tmp_path / "g.g6"
        p.write_text(graphs.cycle(6).to_graph6() + "\n")
        out = run_json(capsys, "analyze", "--input", str(p))
        assert out["exact"]["chi_i"] == 3

    def test_ordering_file(self, capsys, tmp_path):
        G, order = graphs.random_ktree(2, 6, 0)
        g = tmp_path / "g.txt"
        g.write_text(G.to_edge_list_text())
        o = tmp_path / "order.json"
        o.write_text(json.dumps(order))
        out = run_json(capsys, "analyze", "--input", str(g), "--ordering", str(o))
        upper = {b["name"]: b["value"] for b in out["upper"]}
        assert upper["restricted_k_degenerate"] == 8

    def test_guard_warning(self, capsys):
        code, out, err = run(capsys, "analyze", "--family", "complete:7", "--guard", "20")
        assert code == 0 and "warning" in err
        assert "exact" not in json.loads(out)

    def test_dot(self, capsys, tmp_path):
        dot = tmp_path / "g.dot"
        run_json(capsys, "analyze", "--family", "cycle:4", "--dot", str(dot))
        text = dot.read_text()
        assert text.startswith("graph") and text.count("--") == 4

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        code, stdout, _ = run(capsys, "analyze", "--family", "cycle:3", "--out", str(out))
        assert code == 0 and stdout == ""
        assert json.loads(out.read_text())["exact"]["chi_i"] == 3

    @pytest.mark.parametrize(
        "argv",
        [
            ["analyze", "--family", "nosuch:3"],
            ["analyze", "--family", "cycle:x"],
            ["analyze", "--input", "/nonexistent/file"],
        ],
    )
    def test_bad_input_exit_2(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2 and err.startswith("error:")

    def test_malformed_graph6(self, capsys, tmp_path):
        p = tmp_path / "bad.g6"
        p.write_text("C!\n")
        code, _, err = run(capsys, "analyze", "--input", str(p))
        assert code == 2 and "byte 1" in err


class TestCompose:
    def test_cartesian_c3(self, capsys):
        out = run_json(capsys, "compose", "cartesian", "cycle:3", "cycle:3")
        assert out["palette_size"] == 6 and out["valid"]
        assert graphs.parse_graph6(out["graph6"]).edge_count == 18

    def test_join_edgeless(self, capsys):
        out = run_json(capsys, "compose", "join", "null:3", "null:2")
        assert out["palette_size"] == 5 and out["join_branch"] == "shared"

    def test_union_matchings(self, capsys):
        out = run_json(capsys, "compose", "union", "matching:10a", "matching:10b")
        assert out["palette_size"] == 4 and out["budget"] == 4
        assert graphs.parse_graph6(out["graph6"]) == graphs.cycle(10)

    def test_greedy_operands(self, capsys, tmp_path):
        dot = tmp_path / "c.dot"
        out = run_json(capsys, "compose", "join", "cycle:4", "cycle:4", "--coloring", "greedy", "--dot", str(dot))
        assert out["valid"] and out["palette_size"] <= out["budget"]
        assert dot.exists()


class TestVerify:
    def test_valid(self, capsys, tmp_path):
        c = tmp_path / "c.json"
        c.write_text(greedy_coloring(graphs.petersen()).dumps())
        out = run_json(capsys, "verify", "--family", "petersen", "--coloring", str(c))
        assert out["valid"] and out["violations"] == []

    def test_invalid(self, capsys, tmp_path):
        G = graphs.cycle(4)
        data = json.loads(greedy_coloring(G).dumps())
        c = tmp_path / "c.json"
        c.write_text(json.dumps(data))
        code, out, _ = run(capsys, "verify", "--family", "cycle:5", "--coloring", str(c))
        assert code == 2

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "verify", "--family", "cycle:5", "--coloring", "/nonexistent.json")
        assert code == 2


class TestScan:
    SPEC = {
        "families": [
            {"family": "cycle", "args": [{"range": [3, 12]}]},
            {"family": "random_gnp", "args": [6, 0.5], "seeds": [0, 1, 2], "connected": True},
        ],
        "format": "csv",
    }

    def test_cycles(self, capsys, tmp_path):
        spec = write_spec(tmp_path, {"families": [{"family": "cycle", "args": [{"range": [3, 12]}]}]})
        out = run_json(capsys, "scan", spec)
        assert out["columns"] == list(SCAN_COLUMNS)
        assert [r["chi_i"] for r in out["rows"]] == [3, 4, 4, 3, 4, 4, 3, 4, 4, 3]
        assert not any(r["sandwich_violation"] for r in out["rows"])

    def test_csv_deterministic(self, capsys, tmp_path):
        spec = write_spec(tmp_path, self.SPEC)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["scan", spec, "--no-timing", "--out", str(a)]) == 0
        assert main(["scan", spec, "--no-timing", "--out", str(b), "--jobs", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert lines[0] == ",".join(SCAN_COLUMNS)
        assert len(lines) == 14

    def test_jobs_preserve_order(self, capsys, tmp_path):
        spec = write_spec(tmp_path, {"families": [{"family": "complete", "args": [[6, 2, 5, 3]]}]})
        out = run_json(capsys, "scan", spec, "--jobs", "3", "--no-timing")
        assert [r["n"] for r in out["rows"]] == [6, 2, 5, 3]

    def test_empty(self, capsys, tmp_path):
        spec = write_spec(tmp_path, {"families": [], "format": "csv"})
        code, out, _ = run(capsys, "scan", spec)
        assert code == 0 and out == ",".join(SCAN_COLUMNS) + "\n"

    def test_errors_recorded_in_row(self, capsys, tmp_path):
        spec = write_spec(tmp_path, {"families": [{"family": "complete", "args": [12]}], "guard": 30})
        out = run_json(capsys, "scan", spec, "--no-timing")
        row = out["rows"][0]
        assert row["error"].startswith("InstanceTooLarge") and row["chi_i"] is None

    def test_no_exact(self, capsys, tmp_path):
        spec = write_spec(tmp_path, {"families": [{"family": "petersen"}]})
        row = run_json(capsys, "scan", spec, "--no-exact")["rows"][0]
        assert row["chi_i"] is None and row["thm1_upper"] == row["st"] + row["chi_prime"]
        assert row["runtime_s"] is not None

    def test_unknown_family(self, capsys, tmp_path):
        spec = write_spec(tmp_path, {"families": [{"family": "blob"}]})
        code, _, err = run(capsys, "scan", spec)
        assert code == 2 and "blob" in err

    def test_spec_expansion(self):
        spec = parse_scan_spec(self.SPEC)
        assert len(spec.instances) == 13
        assert spec.instances[-1].seed == 2 and spec.instances[-1].connected


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "incicolor", "analyze", "--family", "cycle:3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["exact"]["chi_i"] == 3
