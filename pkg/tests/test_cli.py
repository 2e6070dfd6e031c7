"""CLI: exit codes, golden output shapes, round trips, manifests."""

import json

import pytest

from sumsets import gen_an, gen_bn, gen_cn, loads_points, read_points, write_points
from sumsets.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def strip_comments(text):
    return "\n".join(
        line for line in text.splitlines() if line and not line.startswith("#")
    )


class TestGenerate:
    def test_bn(self, capsys):
        code, out, _ = run_cli(capsys, "generate", "BN", "--N", "3")
        assert code == 0
        assert loads_points(out) == gen_bn(3)

    def test_an(self, capsys):
        code, out, _ = run_cli(capsys, "generate", "AN", "--d", "2", "--N", "3")
        assert code == 0
        got = loads_points(out)
        assert got == gen_an(2, 3)
        assert len(got) == 4

    def test_random_box_deterministic(self, capsys):
        args = ("generate", "random-box", "--d", "2", "--side", "5", "--n", "8", "--seed", "1")
        code1, out1, _ = run_cli(capsys, *args)
        code2, out2, _ = run_cli(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert "rng: splitmix64 seed=1" in out1

    def test_random_box_without_seed_is_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "generate", "random-box", "--d", "1", "--side", "4", "--n", "2"
        )
        assert code == 1
        assert "seed" in err

    def test_ap(self, capsys):
        code, out, _ = run_cli(
            capsys, "generate", "ap", "--start", "0,0", "--step", "2,3", "--n", "3"
        )
        assert code == 0
        assert set(loads_points(out)) == {(0, 0), (2, 3), (4, 6)}

    def test_progression(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "generate", "progression", "--v0", "0,0", "--gen", "1,0:3", "--gen", "0,1:2",
        )
        assert code == 0
        assert len(loads_points(out)) == 6

    def test_improper_progression_rejected(self, capsys):
        code, _, err = run_cli(
            capsys,
            "generate", "progression", "--v0", "0", "--gen", "1:3", "--gen", "2:2",
        )
        assert code == 1
        assert "collide" in err

    def test_bad_family_params(self, capsys):
        code, _, err = run_cli(capsys, "generate", "AN", "--d", "3", "--N", "2")
        assert code == 1


class TestSumsetCmd:
    def test_sum(self, capsys, tmp_path):
        fa, fb = tmp_path / "a.pts", tmp_path / "b.pts"
        write_points(loads_points("dim 1\n0\n1\n3\n"), fa)
        write_points(loads_points("dim 1\n0\n2\n6\n"), fb)
        code, out, _ = run_cli(capsys, "sumset", "sum", "--a", str(fa), "--b", str(fb))
        assert code == 0
        assert len(loads_points(out)) == 8

    def test_dilate_sum(self, capsys, tmp_path):
        f = tmp_path / "a.pts"
        write_points(loads_points("dim 1\n0\n1\n2\n"), f)
        code, out, _ = run_cli(
            capsys, "sumset", "dilate-sum", "--q", "2", "--s", "3", "--input", str(f)
        )
        assert code == 0
        assert {p[0] for p in loads_points(out)} == {0, 2, 3, 4, 5, 6, 7, 8, 10}

    def test_transform_sum(self, capsys, tmp_path):
        f = tmp_path / "b2.pts"
        write_points(gen_bn(2), f)
        code, out, _ = run_cli(
            capsys, "sumset", "transform-sum", "--map", "0,-1;1,0", "--input", str(f)
        )
        assert code == 0
        assert len(loads_points(out)) == 9


class TestVerifyCmd:
    def test_ruzsa_triangle_holds(self, capsys, tmp_path):
        f = tmp_path / "u.pts"
        write_points(loads_points("dim 1\n0\n1\n"), f)
        code, out, _ = run_cli(
            capsys, "verify", "ruzsa-triangle", "--u", str(f), "--v", str(f), "--w", str(f)
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["inequality"] == "ruzsa-triangle"
        assert rec["holds"] is True

    def test_lin_product_equality(self, capsys, tmp_path):
        f1, f2 = tmp_path / "a1.pts", tmp_path / "a2.pts"
        write_points(loads_points("dim 2\n0 0\n1 0\n"), f1)
        write_points(loads_points("dim 2\n0 1\n2 1\n"), f2)
        code, out, _ = run_cli(
            capsys,
            "verify", "lin-product", "--a1", str(f1), "--a2", str(f2), "--map", "0,-1;1,0",
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["lhs"] == 4 and rec["slack"] == "0"

    def test_dilate_main_slack(self, capsys, tmp_path):
        f = tmp_path / "a3.pts"
        write_points(gen_an(2, 3), f)
        code, out, _ = run_cli(
            capsys, "verify", "dilate-main", "--q", "1", "--s", "2", "--input", str(f)
        )
        assert code == 0
        rec = json.loads(out)
        assert (rec["lhs"], rec["rhs_main"], rec["slack"]) == (14, "20", "-6")

    def test_hypothesis_failure_is_exit_1(self, capsys, tmp_path):
        f = tmp_path / "a.pts"
        write_points(loads_points("dim 1\n0\n1\n"), f)
        code, _, err = run_cli(
            capsys, "verify", "dilate-main", "--q", "2", "--s", "4", "--input", str(f)
        )
        assert code == 1
        assert "coprime" in err

    def test_summary_over_directory(self, capsys, tmp_path):
        for n in (3, 4, 5):
            write_points(gen_an(2, n), tmp_path / f"a{n}.pts")
        code, out, _ = run_cli(
            capsys,
            "verify", "dilate-main", "--q", "1", "--s", "2",
            "--input", str(tmp_path), "--summary",
        )
        assert code == 0
        assert out.count('"inequality"') == 3
        assert "# summary inequality=dilate-main count=3" in out
        assert "# slack min=-6 max=-6" in out
        assert "\n-6 3\n" in out

    def test_grid_bound(self, capsys, tmp_path):
        f = tmp_path / "b3.pts"
        write_points(gen_bn(3), f)
        code, out, _ = run_cli(
            capsys, "verify", "grid-bound", "--map", "0,-1;1,0", "--input", str(f)
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["note"] == "r1=3 r2=3"

    def test_gs(self, capsys, tmp_path):
        fa, fb = tmp_path / "a.pts", tmp_path / "b.pts"
        write_points(gen_bn(3), fa)
        write_points(gen_cn(4), fb)
        code, out, _ = run_cli(
            capsys, "verify", "gs", "--a", str(fa), "--b", str(fb), "--direction", "1,0"
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["lhs"] == 20 and rec["rhs_main"] == "20"


class TestDecomposeCmd:
    def test_lines_golden(self, capsys, tmp_path):
        f = tmp_path / "a5.pts"
        write_points(gen_an(2, 5), f)
        code, out, _ = run_cli(capsys, "decompose", "--mode", "lines", "--input", str(f))
        assert code == 0
        assert strip_comments(out) == (
            "direction 1 0\n"
            "r_selected 1\n"
            "fibers 2\n"
            "fiber 0 0 | 5 | 1 0; 2 0; 3 0; 4 0; 5 0\n"
            "fiber 0 1 | 1 | 0 1\n"
            "leftover 1\n"
            "0 1"
        )

    def test_grid_golden(self, capsys, tmp_path):
        f = tmp_path / "b3.pts"
        write_points(gen_bn(3), f)
        code, out, _ = run_cli(
            capsys, "decompose", "--mode", "grid", "--map", "0,-1;1,0", "--input", str(f)
        )
        assert code == 0
        head = strip_comments(out).splitlines()[:4]
        assert head == ["dir1 1 0", "r1 3", "dir2 0 1", "r2 3"]

    def test_singleton_is_usage_error(self, capsys, tmp_path):
        f = tmp_path / "one.pts"
        f.write_text("dim 2\n1 1\n")
        code, _, err = run_cli(capsys, "decompose", "--mode", "lines", "--input", str(f))
        assert code == 1


class TestSearchCmd:
    def test_table_golden(self, capsys):
        code, out, _ = run_cli(
            capsys, "search", "--dim", "1", "--box", "10", "--n", "4", "--q", "1", "--s", "2"
        )
        assert code == 0
        assert out == (
            "# sumsets search dim=1 box=10 objective=dilate:1,2 constraint=none "
            "budget=1000000000\n"
            "# columns: n min_value main_term slack nodes classes witnesses\n"
            "4 10 12 -2 112 3 3\n"
        )

    def test_thread_count_does_not_change_table(self, capsys):
        base = (
            "search", "--dim", "2", "--box", "3", "--n-range", "1:5",
            "--map", "0,-1;1,0",
        )
        _, out1, _ = run_cli(capsys, *base, "--threads", "1")
        _, out8, _ = run_cli(capsys, *base, "--threads", "8")
        assert out1 == out8

    def test_budget_refusal(self, capsys):
        code, _, err = run_cli(
            capsys,
            "search", "--dim", "2", "--box", "7", "--n", "12",
            "--q", "1", "--s", "2", "--budget", "1000",
        )
        assert code == 1
        assert "subsets" in err

    def test_witness_files_roundtrip(self, capsys, tmp_path):
        wdir = tmp_path / "wit"
        code, _, _ = run_cli(
            capsys,
            "search", "--dim", "1", "--box", "10", "--n", "4",
            "--q", "1", "--s", "2", "--witness-dir", str(wdir),
        )
        assert code == 0
        files = sorted(wdir.glob("*.pts"))
        assert len(files) == 3
        assert {p[0] for p in read_points(files[0])} == {0, 1, 2, 3}


class TestManifest:
    def test_sidecar_written_and_output_reproducible(self, capsys, tmp_path):
        out = tmp_path / "b.pts"
        args = ("generate", "BN", "--N", "4", "-o", str(out))
        code, _, _ = run_cli(capsys, *args)
        assert code == 0
        manifest = json.loads((tmp_path / "b.pts.manifest.json").read_text())
        assert manifest["command"][:2] == ["sumsets", "generate"]
        assert manifest["outputs"][str(out)]
        first = out.read_bytes()
        run_cli(capsys, *args)
        assert out.read_bytes() == first

    def test_output_references_run(self, capsys, tmp_path):
        out = tmp_path / "c.pts"
        run_cli(capsys, "generate", "CN", "--N", "4", "-o", str(out))
        text = out.read_text()
        assert text.startswith("# run: sumsets generate CN --N 4")
        assert read_points(out) == gen_cn(4)


class TestViolationExitCode:
    def test_exit_2_when_unconditional_inequality_fails(self, capsys, tmp_path, monkeypatch):
        # no real input can violate a theorem, so fake the failure to pin
        # the exit-code contract
        from fractions import Fraction

        from sumsets import bounds as bmod
        from sumsets.bounds import BoundReport, InequalityViolation

        def broken(a, b):
            raise InequalityViolation(
                BoundReport("trivial-lower", 1, 5, -4, 0, False, "deadbeef")
            )

        monkeypatch.setattr(bmod, "check_trivial_lower", broken)
        f = tmp_path / "a.pts"
        f.write_text("dim 1\n0\n1\n")
        code, out, err = run_cli(
            capsys, "verify", "trivial-lower", "--a", str(f), "--b", str(f)
        )
        assert code == 2
        assert '"holds": false' in out
        assert "VIOLATION" in err


class TestUsageErrors:
    def test_unknown_flag(self, capsys):
        code, _, err = run_cli(capsys, "generate", "BN", "--nope", "3")
        assert code == 1

    def test_missing_required(self, capsys):
        code, _, _ = run_cli(capsys, "generate", "BN")
        assert code == 1

    def test_search_needs_objective(self, capsys):
        code, _, err = run_cli(capsys, "search", "--dim", "1", "--box", "5", "--n", "2")
        assert code == 1
        assert "--q/--s or --map" in err
