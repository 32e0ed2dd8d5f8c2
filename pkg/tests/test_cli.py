import json

import pytest

from cckit.cli import main
from cckit.complex import decode_json, encode_json, parse_edge_list
from cckit.covering import strip_covers
from cckit.generators import cylinder, moebius, torus


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def cyl_file(tmp_path):
    path = tmp_path / "cyl.json"
    path.write_bytes(encode_json(cylinder((3, 4))))
    return str(path)


@pytest.fixture()
def mob_file(tmp_path):
    path = tmp_path / "mob.json"
    path.write_bytes(encode_json(moebius((3, 4))))
    return str(path)


class TestGen:
    def test_torus(self, capsys):
        code, out, _ = run(capsys, "gen", "torus", "--periods", "3,3")
        assert code == 0
        assert decode_json(out) == torus((3, 3))

    def test_star_edge_list(self, capsys):
        code, out, _ = run(capsys, "gen", "star", "--n", "2", "--k", "6")
        assert code == 0
        assert parse_edge_list(out).num_nodes == 18

    def test_bad_params_exit_2(self, capsys):
        code, _, err = run(capsys, "gen", "torus", "--periods", "2,3")
        assert code == 2
        assert "error" in err

    def test_usage_error_exit_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "torus"])  # missing --periods
        assert exc.value.code == 1


class TestLiftPool(object):
    def test_lift_cyclic(self, capsys, tmp_path, monkeypatch):
        graph_file = tmp_path / "c6.txt"
        graph_file.write_text("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n")
        code, out, _ = run(capsys, "lift", "--method", "cyclic", "-i", str(graph_file))
        assert code == 0
        cc = decode_json(out)
        assert cc.skeleton_sizes() == (6, 6, 1)

    def test_pool_default_fine(self, capsys, tmp_path):
        graph_file = tmp_path / "g.txt"
        graph_file.write_text("2 1\n0 1\n")
        code, out, _ = run(capsys, "pool", "-i", str(graph_file))
        assert code == 0
        assert decode_json(out).cells(2) == ((0, 1),)


class TestInvariantsCmd:
    def test_json_report(self, capsys, cyl_file):
        code, out, _ = run(capsys, "invariants", cyl_file, "--cross-k", "2", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["betti_gf2"] == [1, 1, 0]
        assert doc["orientability"] == "orientable"
        assert doc["boundary_cycle_lengths"] == [4, 4]

    def test_text_report(self, capsys, mob_file):
        code, out, _ = run(capsys, "invariants", mob_file)
        assert code == 0
        assert "non-orientable" in out


class TestDistinguishCmd:
    def test_homp_engine(self, capsys, cyl_file, mob_file):
        code, out, _ = run(capsys, "distinguish", cyl_file, mob_file, "--engine", "homp")
        assert code == 0
        assert "indistinguishable" in out

    def test_scl_engine(self, capsys, cyl_file, mob_file):
        code, out, _ = run(
            capsys, "distinguish", cyl_file, mob_file, "--engine", "scl:0,1,dist"
        )
        assert code == 0
        assert "distinguished" in out

    def test_oracle_engine(self, capsys, cyl_file, mob_file):
        code, out, _ = run(capsys, "distinguish", cyl_file, mob_file, "--engine", "oracle")
        assert code == 0
        assert "distinguished" in out

    def test_emit_colors(self, capsys, cyl_file, mob_file):
        code, out, _ = run(
            capsys, "distinguish", cyl_file, mob_file, "--engine", "homp", "--emit-colors"
        )
        assert code == 0
        assert "rank_histograms" in out


class TestCoverCmds:
    def test_verify_cover_ok(self, capsys, tmp_path):
        cover, to_cyl, _ = strip_covers(3, 4)
        doc = {
            "source": json.loads(encode_json(cover)),
            "target": json.loads(encode_json(to_cyl.target)),
            "assignment": [list(row) for row in to_cyl.assignment],
        }
        path = tmp_path / "cover.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "verify-cover", str(path))
        assert code == 0
        assert out.strip() == "Ok"

    def test_check_iso_violation(self, capsys, tmp_path):
        _, to_cyl, _ = strip_covers(3, 4)
        doc = {
            "source": json.loads(encode_json(to_cyl.source)),
            "target": json.loads(encode_json(to_cyl.target)),
            "assignment": [list(row) for row in to_cyl.assignment],
        }
        path = tmp_path / "map.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "check-iso", str(path))
        assert code == 2
        assert "sizes differ" in out or "injective" in out


class TestDatasetCmds:
    def test_gen_dataset_positional(self, capsys, tmp_path):
        out_file = tmp_path / "pairs.jsonl"
        code, _, err = run(
            capsys, "gen-torus-dataset", "18", "18", "3", "-o", str(out_file)
        )
        assert code == 0
        assert "wrote 1 pairs" in err
        assert len(out_file.read_text().splitlines()) == 1

    def test_expectation_violation_dumps(self, capsys, tmp_path):
        out_file = tmp_path / "pairs.jsonl"
        code, _, err = run(
            capsys,
            "gen-torus-dataset", "18", "18", "3",
            "-o", str(out_file), "--expect-pairs", "5",
        )
        assert code == 3
        assert "enumeration dump" in err
        assert "18 nodes" in err

    def test_run_benchmark(self, capsys, tmp_path):
        out_file = tmp_path / "pairs.jsonl"
        run(capsys, "gen-torus-dataset", "18", "18", "3", "-o", str(out_file))
        code, out, _ = run(
            capsys,
            "run-benchmark", "--dataset", str(out_file),
            "--engines", "homp,smcn,oracle",
            "--expect", "homp=0", "--expect", "smcn:default=1", "--expect", "oracle=1",
        )
        assert code == 0
        assert "homp: separated 0/1" in out

    def test_run_benchmark_expectation_violation(self, capsys, tmp_path):
        out_file = tmp_path / "pairs.jsonl"
        run(capsys, "gen-torus-dataset", "18", "18", "3", "-o", str(out_file))
        code, _, err = run(
            capsys,
            "run-benchmark", "--dataset", str(out_file),
            "--engines", "homp", "--expect", "homp=1",
        )
        assert code == 3
        assert "expectation violated" in err

    def test_label_lifted(self, capsys, tmp_path):
        graphs_file = tmp_path / "graphs.txt"
        graphs_file.write_text(
            "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n"  # C6
            "4 3\n0 1\n1 2\n1 3\n"  # tree
        )
        out_file = tmp_path / "labels.jsonl"
        code, _, _ = run(
            capsys, "label-lifted", "-i", str(graphs_file), "-o", str(out_file)
        )
        assert code == 0
        lines = [json.loads(l) for l in out_file.read_text().splitlines()]
        assert lines[0]["cross_diameter_012"] == 0
        assert lines[0]["betti2"] == 0
        assert lines[1]["cross_diameter_012"] is None

    def test_run_benchmark_json_report(self, capsys, tmp_path):
        out_file = tmp_path / "pairs.jsonl"
        run(capsys, "gen-torus-dataset", "18", "18", "3", "-o", str(out_file))
        code, out, _ = run(
            capsys,
            "run-benchmark", "--dataset", str(out_file), "--engines", "homp", "--json",
        )
        assert code == 0
        payload = json.loads(out.splitlines()[-1])
        assert payload[0]["engine"] == "homp"
        assert payload[0]["rounds"] == [None]

    def test_gen_cycle_product(self, capsys):
        code, out, _ = run(capsys, "gen", "cycle-product", "--n", "3", "--m", "4")
        assert code == 0
        g = parse_edge_list(out)
        assert g.num_nodes == 12 and len(g.edges) == 24

    def test_label_lifted_continues_past_bad_record(self, capsys, tmp_path):
        graphs_file = tmp_path / "graphs.txt"
        graphs_file.write_text(
            "3 1\n0 9\n"  # node out of range
            "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n"
        )
        out_file = tmp_path / "labels.jsonl"
        code, _, err = run(
            capsys, "label-lifted", "-i", str(graphs_file), "-o", str(out_file)
        )
        assert code == 2
        lines = [json.loads(l) for l in out_file.read_text().splitlines()]
        assert "error" in lines[0]
        assert lines[1]["cross_diameter_012"] == 0
