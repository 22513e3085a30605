import pytest

from qturan import cli, cube
from qturan.bounds import format_coloring, monochromatic_certificate
from qturan.construction import LayerSubgraph, format_layer_graph
from qturan.cube import LayerId, layer_vertices


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def full_layer_text(n, r):
    layer = LayerId(n, r)
    g = LayerSubgraph(
        layer,
        frozenset(layer_vertices(layer, "lower")),
        frozenset(layer_vertices(layer, "upper")),
    )
    return format_layer_graph(g)


class TestConstruct:
    def test_reports_and_artifacts(self, tmp_path, capsys):
        code, out, err = run(
            ["construct", "--n", "6", "--r", "3", "--seed", "0", "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("n,r,scope")
        assert lines[1].split(",")[:3] == ["6", "3", "layer"]
        assert lines[1].endswith("true")
        assert (tmp_path / "assignment_n6_r3.txt").exists()
        assert (tmp_path / "layer_n6_r3.txt").exists()

    def test_byte_identical_across_runs(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        stdout = []
        for out in (out1, out2):
            code, text, _ = run(
                ["construct", "--n", "10", "--r", "3", "--seed", "0", "--out", str(out)],
                capsys,
            )
            assert code == 0
            stdout.append(text)
        assert stdout[0] == stdout[1]
        for name in ("assignment_n10_r3.txt", "layer_n10_r3.txt"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_capacity_exit_code(self, tmp_path, capsys):
        code, _, err = run(
            ["construct", "--n", "30", "--r", "3", "--out", str(tmp_path)], capsys
        )
        assert code == 3
        assert "cap" in err

    def test_exhaustion_exit_code(self, tmp_path, capsys):
        # seed 0, trial 0 draws equal vectors at n=2, r=2
        code, _, err = run(
            ["construct", "--n", "2", "--r", "2", "--seed", "0", "--trials", "1",
             "--out", str(tmp_path)],
            capsys,
        )
        assert code == 4
        assert "threshold" in err

    def test_text_format(self, tmp_path, capsys):
        code, out, _ = run(
            ["construct", "--n", "4", "--r", "2", "--out", str(tmp_path), "--format", "text"],
            capsys,
        )
        assert code == 0
        assert out.splitlines()[0].split()[:3] == ["n", "r", "scope"]

    def test_smallest_instance(self, tmp_path, capsys):
        code, out, _ = run(
            ["construct", "--n", "1", "--r", "1", "--out", str(tmp_path)], capsys
        )
        assert code == 0
        fields = out.splitlines()[1].split(",")
        assert fields[5] == "1/1"
        assert fields[8] == "true"


class TestVerify:
    def test_constructed_layer_is_free(self, tmp_path, capsys):
        code, _, _ = run(
            ["construct", "--n", "8", "--r", "3", "--seed", "1", "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        layer_file = str(tmp_path / "layer_n8_r3.txt")
        for target in ("c4", "c6", "c6minus"):
            code, out, _ = run(["verify", layer_file, "--target", target], capsys)
            assert code == 0
            assert out.strip() == f"{target}-free"

    def test_full_layer_has_c6(self, tmp_path, capsys):
        path = tmp_path / "full.txt"
        path.write_text(full_layer_text(4, 2))
        code, out, _ = run(["verify", str(path), "--target", "c6"], capsys)
        assert code == 1
        assert out.startswith("C6 ")
        assert len(out.split()) == 7

    def test_plain_edge_list_square(self, tmp_path, capsys):
        text = cube.format_edge_list(2, [(0, 1), (0, 2), (1, 3), (2, 3)])
        path = tmp_path / "square.txt"
        path.write_text(text)
        code, out, _ = run(["verify", str(path), "--target", "c4"], capsys)
        assert code == 1
        assert out.startswith("C4 ")
        code, out, _ = run(["verify", str(path), "--target", "c10"], capsys)
        assert code == 0

    def test_workers_flag(self, tmp_path, capsys):
        path = tmp_path / "full.txt"
        path.write_text(full_layer_text(4, 2))
        code1, out1, _ = run(["verify", str(path), "--target", "c6", "--workers", "2"], capsys)
        code2, out2, _ = run(["verify", str(path), "--target", "c6"], capsys)
        assert (code1, out1) == (code2, out2)

    def test_bad_file_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "junk.txt"
        path.write_text("not a graph\n")
        code, _, err = run(["verify", str(path), "--target", "c6"], capsys)
        assert code == 2
        assert "error" in err

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        code, _, _ = run(["verify", str(tmp_path / "nope.txt"), "--target", "c6"], capsys)
        assert code == 2


class TestPipeline:
    def test_layer_and_union_rows(self, capsys):
        code, out, _ = run(["pipeline", "--n", "6", "--seed", "1"], capsys)
        assert code == 0
        lines = out.splitlines()
        scopes = [line.split(",")[2] for line in lines[1:]]
        assert scopes == ["layer", "layer", "layer", "union"]
        assert all(line.endswith("true") for line in lines[1:])

    def test_certificate_gives_final_row(self, tmp_path, capsys):
        coloring = tmp_path / "mono.txt"
        coloring.write_text(format_coloring(monochromatic_certificate(4)))
        code, out, _ = run(
            ["pipeline", "--n", "4", "--seed", "0", "--coloring", str(coloring)], capsys
        )
        assert code == 0
        scopes = [line.split(",")[2] for line in out.splitlines()[1:]]
        assert scopes == ["layer", "layer", "union", "final"]

    def test_artifacts_written(self, tmp_path, capsys):
        out_dir = tmp_path / "artifacts"
        code, _, _ = run(
            ["pipeline", "--n", "4", "--seed", "0", "--out", str(out_dir)], capsys
        )
        assert code == 0
        assert (out_dir / "assignment_n4_r1.txt").exists()
        assert (out_dir / "layer_n4_r3.txt").exists()

    def test_exhaustion_prints_partial(self, capsys):
        code, out, err = run(["pipeline", "--n", "3", "--seed", "1", "--trials", "1"], capsys)
        assert code == 4
        lines = out.splitlines()
        assert lines[0].startswith("n,r,scope")
        assert len(lines) == 2  # only the r=1 layer row survived
        assert "error" in err

    def test_budget_searches_a_certificate(self, capsys):
        # Q_3 is too small for a C10, so the exhaustive search finds the
        # all-zero certificate immediately and a final row appears
        code, out, _ = run(["pipeline", "--n", "3", "--seed", "0", "--budget", "10"], capsys)
        assert code == 0
        scopes = [line.split(",")[2] for line in out.splitlines()[1:]]
        assert scopes == ["layer", "layer", "union", "final"]


class TestStats:
    def test_dim_one_is_exact(self, capsys):
        code, out, _ = run(["stats", "--r", "1", "--trials", "50"], capsys)
        assert code == 0
        fields = out.splitlines()[1].split(",")
        assert fields[0] == "1"
        assert fields[4] == "1.000000"
        assert fields[5] == "1/1"

    def test_small_r_within_four_sigma(self, capsys):
        code, out, _ = run(["stats", "--r", "2:3", "--trials", "4000", "--seed", "7"], capsys)
        assert code == 0
        rows = out.splitlines()[1:]
        assert len(rows) == 2
        assert all(row.endswith("true") for row in rows)
        assert rows[0].split(",")[5] == "4/9"
        assert rows[1].split(",")[5] == "96/343"

    def test_bad_spec(self, capsys):
        code, _, err = run(["stats", "--r", "0"], capsys)
        assert code == 2


class TestUsage:
    def test_unknown_target(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "x", "--target", "c8"])
        assert info.value.code == 2

    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main([])
        assert info.value.code == 2
