import json

import numpy as np
import pytest

from homprod import cli, chain, css, gf2, product, stab
from homprod.chain import ChainComplex

REP2 = gf2.as_bin([[1, 1]])
REP3 = gf2.as_bin([[1, 1, 0], [0, 1, 1]])
CYC3 = gf2.as_bin([[1, 1, 0], [0, 1, 1], [1, 0, 1]])


def run(*argv):
    return cli.main(list(argv))


@pytest.fixture()
def rep2_pcm(tmp_path):
    p = tmp_path / "rep2.pcm"
    gf2.write_pcm(p, REP2)
    return str(p)


@pytest.fixture()
def rep2_build(tmp_path, rep2_pcm):
    out = tmp_path / "rep2d"
    assert run("build", "--classical", rep2_pcm, "--stages", "2", "--out", str(out)) == 0
    return str(out)


class TestBuild:
    def test_artifacts_written(self, tmp_path, rep2_build):
        loaded = chain.load_complex(rep2_build)
        assert loaded.size(0) == 33
        stage1 = chain.load_complex(rep2_build + "/stage1")
        assert stage1.size(0) == 5
        h = gf2.read_pcm(rep2_build + "/classical.pcm")
        assert (h == REP2).all()
        params = json.loads(open(rep2_build + "/params.json").read())
        assert params["computed"]["level_sizes"]["0"] == 33
        assert params["predicted_stage2"]["level_sizes"]["0"] == 33

    def test_rejects_redundant_without_flag(self, tmp_path):
        p = tmp_path / "cyc3.pcm"
        gf2.write_pcm(p, CYC3)
        assert run("build", "--classical", str(p), "--out", str(tmp_path / "x")) == 2

    def test_allow_redundant(self, tmp_path):
        p = tmp_path / "cyc3.pcm"
        gf2.write_pcm(p, CYC3)
        out = tmp_path / "cyc3d"
        code = run(
            "build", "--classical", str(p), "--out", str(out), "--allow-redundant"
        )
        assert code == 0
        assert chain.load_complex(str(out)).size(0) == 486

    def test_missing_input(self, tmp_path):
        assert run("build", "--classical", str(tmp_path / "nope.pcm"), "--out", "x") == 2


class TestReport:
    def test_json_round_trip(self, tmp_path, rep2_build):
        out = tmp_path / "report.json"
        assert run(
            "report", "--complex", rep2_build, "--max-weight", "4",
            "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["n"] == 33 and payload["k"] == 1
        assert payload["d_q"] == {"value": 4, "status": "exact"}
        assert payload["d_ss"] == {"value": "inf", "status": "exact"}

    def test_byte_identical_reruns(self, tmp_path, rep2_build):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            run("report", "--complex", rep2_build, "--json", str(out), "--quiet")
        assert a.read_bytes() == b.read_bytes()


class TestDecode:
    def test_zero_syndrome(self, tmp_path, rep2_build):
        syn = tmp_path / "syn.pcm"
        gf2.write_pcm(syn, np.zeros((1, 40), dtype=np.uint8))
        out = tmp_path / "dec.json"
        assert run(
            "decode", "--complex", rep2_build, "--syndrome", str(syn),
            "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["metacheck_failure"] is False
        assert payload["e_rec_x_support"] == []

    def test_single_error_decoded(self, tmp_path, rep2_build):
        complex_ = chain.load_complex(rep2_build)
        code = css.from_complex(complex_)
        err = np.zeros(33, dtype=np.uint8)
        err[7] = 1
        s = code.syndrome(css.PauliError.x_only(err))
        syn = tmp_path / "syn.pcm"
        gf2.write_pcm(syn, np.concatenate([s.z_part, s.x_part]).reshape(1, -1))
        out = tmp_path / "dec.json"
        assert run(
            "decode", "--complex", rep2_build, "--syndrome", str(syn),
            "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["e_rec_x_support"] == [8]  # 1-based


class TestSweepAndRounds:
    def test_exhaustive_sweep(self, tmp_path, rep2_build):
        out = tmp_path / "sweep.json"
        assert run(
            "sweep", "--complex", rep2_build, "--umax", "1", "--emax", "1",
            "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["violations"] == []
        assert payload["pairs_tested"] == 100

    def test_sampled_sweep_records_seed(self, tmp_path, rep2_build):
        out = tmp_path / "sweep.json"
        assert run(
            "--seed", "11", "sweep", "--complex", rep2_build,
            "--umax", "1", "--emax", "1", "--samples", "25",
            "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["seed"] == 11 and payload["sampled"] is True

    def test_rounds(self, tmp_path, rep2_build):
        sched = tmp_path / "sched.json"
        sched.write_text(json.dumps([{"e_support": [3], "f_support": [], "u_support": []}]))
        out = tmp_path / "rounds.json"
        assert run(
            "rounds", "--complex", rep2_build, "--schedule", str(sched),
            "-n", "10", "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert len(payload["rounds"]) == 10
        assert payload["in_contract_violations"] == 0


class TestSoundnessCommands:
    def test_profile(self, tmp_path, rep2_build):
        out = tmp_path / "profile.json"
        assert run(
            "profile", "--complex", rep2_build, "--map", "z", "--xmax", "3",
            "--budget", "4", "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["worst_min_preimage_by_syndrome_weight"]["0"] == 0

    def test_certify_pass_and_fail(self, tmp_path, rep2_build):
        assert run(
            "certify", "--complex", rep2_build, "--map", "z", "--f", "x3", "--quiet"
        ) == 0
        # the surface-patch direction of the stage-1 complex is unsound
        stage1 = rep2_build + "/stage1"
        gf2.write_pcm(
            tmp_path / "unused.pcm", REP2
        )
        code = run(
            "certify", "--complex", stage1, "--map", "z", "--f", "x2",
            "--t", "5", "--quiet",
        )
        assert code == 4

    def test_witness_double(self, tmp_path, rep2_build):
        complex_ = chain.load_complex(rep2_build)
        r = np.zeros(33, dtype=np.uint8)
        r[4] = 1
        s = gf2.mat_vec(complex_.delta(0), r)
        syn = tmp_path / "syn.pcm"
        gf2.write_pcm(syn, s.reshape(1, -1))
        out = tmp_path / "witness.json"
        assert run(
            "witness", "--complex", rep2_build, "--syndrome", str(syn),
            "--json", str(out), "--quiet",
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["weight"] >= 1

    def test_witness_single(self, tmp_path, rep2_pcm):
        out_dir = tmp_path / "rep2s"
        assert run(
            "build", "--classical", rep2_pcm, "--stages", "1", "--out", str(out_dir)
        ) == 0
        complex_ = chain.load_complex(str(out_dir))
        r = np.zeros(2, dtype=np.uint8)
        r[0] = 1
        s = gf2.mat_vec(complex_.delta(0).T, r)
        syn = tmp_path / "syn.pcm"
        gf2.write_pcm(syn, s.reshape(1, -1))
        assert run(
            "witness", "--complex", str(out_dir), "--syndrome", str(syn),
            "--map", "zt", "--quiet",
        ) == 0


class TestStabCommands:
    def test_diag_and_barrier(self, tmp_path):
        h = np.zeros((2, 3), dtype=np.uint8)
        h[0, 0] = h[0, 1] = 1
        h[1, 1] = h[1, 2] = 1
        checks = stab.SymplecticChecks.from_css(h, gf2.zeros(0, 3))
        checks_pcm = tmp_path / "checks.pcm"
        gf2.write_pcm(checks_pcm, checks.matrix)
        out = tmp_path / "diag"
        assert run("diag", "--checks", str(checks_pcm), "--out", str(out)) == 0
        gens = gf2.read_pcm(out / "generators.pcm")
        assert gens.shape == (2, 6)
        frame = json.loads((out / "frame.json").read_text())
        assert len(frame["qubit_permutation"]) == 3
        bar = tmp_path / "bar.json"
        assert run(
            "barrier", "--checks", str(checks_pcm), "--sector", "x",
            "--json", str(bar), "--quiet",
        ) == 0
        assert json.loads(bar.read_text())["barrier"] == 1

    def test_barrier_rejects_oversize(self, tmp_path):
        h = np.zeros((8, 9), dtype=np.uint8)
        for i in range(8):
            h[i, i] = h[i, i + 1] = 1
        checks = stab.SymplecticChecks.from_css(h, gf2.zeros(0, 9))
        p = tmp_path / "big.pcm"
        gf2.write_pcm(p, checks.matrix)
        assert run("barrier", "--checks", str(p), "--sector", "x", "--quiet") == 2


class TestTable1:
    def test_all_rows(self, tmp_path):
        out = tmp_path / "table1.json"
        assert run("table1", "--json", str(out), "--quiet") == 0
        payload = json.loads(out.read_text())
        rows = {r["input"]: r for r in payload["rows"]}
        assert rows["row1"]["computed"]["n_q"] == 241
        assert rows["row2"]["computed"]["n_q"] == 913
        assert rows["row3"]["computed"]["n_q"] == 486
        assert rows["row4"]["computed"]["n_q"] == 3856
        assert all(rows[f"row{i}"]["matches"]["mean_check_weight"] for i in (1, 2, 3, 4))
        assert "note" in rows["row3"]

    def test_deterministic_json(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run("table1", "--json", str(out), "--quiet") == 0
        assert a.read_bytes() == b.read_bytes()


class TestPipeline:
    def test_rep2_full_pipeline(self, tmp_path, rep2_pcm):
        out = tmp_path / "pipe"
        summary = tmp_path / "summary.json"
        assert run(
            "pipeline", "--classical", rep2_pcm, "--out", str(out),
            "--json", str(summary), "--quiet",
        ) == 0
        payload = json.loads(summary.read_text())
        assert payload["code"]["n"] == 33
        assert payload["soundness_z"]["verdict"]["kind"] == "certified"
        assert payload["soundness_x"]["verdict"]["kind"] == "certified"
        assert payload["single_shot_budget"]["measurement_budget"] == 1.0
        assert payload["single_shot_budget"]["qubit_budget"] == 2.0
        assert payload["d_q_witness_upper"] == 4

    def test_rejects_redundant(self, tmp_path):
        p = tmp_path / "cyc3.pcm"
        gf2.write_pcm(p, CYC3)
        assert run("pipeline", "--classical", str(p), "--out", str(tmp_path / "x")) == 2
