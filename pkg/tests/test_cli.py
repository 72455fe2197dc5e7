"""Command line surface: exit codes, canonical output, file formats."""

import json

import finiteqm.cli as cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestVerify:
    def test_dim3_passes(self, capsys):
        code, out = run(capsys, "verify", "--dim", "3")
        assert code == 0
        data = json.loads(out)
        assert data["ok"] and all(data["checks"].values())

    def test_output_byte_stable(self, capsys):
        _, first = run(capsys, "verify", "--dim", "2")
        _, second = run(capsys, "verify", "--dim", "2")
        assert first == second


class TestGroup:
    def test_wh_dim2(self, capsys):
        code, out = run(capsys, "group", "--dim", "2", "--which", "wh")
        assert code == 0
        assert json.loads(out)["order"] == 16

    def test_clifford_dim3(self, capsys):
        code, out = run(capsys, "group", "--dim", "3", "--which", "clifford")
        assert code == 0
        assert json.loads(out)["order"] == 2592

    def test_projective_dim2(self, capsys):
        code, out = run(capsys, "group", "--dim", "2", "--which", "projective")
        assert json.loads(out)["order"] == 24

    def test_elements_export_roundtrip(self, capsys):
        code, out = run(
            capsys, "group", "--dim", "2", "--which", "wh", "--elements"
        )
        data = json.loads(out)
        assert len(data["elements"]) == 16
        from finiteqm.qgroups import UMatrix

        mats = [UMatrix.from_json(e) for e in data["elements"]]
        assert all(mat.is_unitary() for mat in mats)

    def test_threads_do_not_change_bytes(self, capsys):
        _, a = run(capsys, "group", "--dim", "3", "--which", "clifford",
                   "--threads", "1")
        _, b = run(capsys, "group", "--dim", "3", "--which", "clifford",
                   "--threads", "3")
        assert a == b

    def test_cache(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("FINITEQM_CACHE_DIR", str(tmp_path))
        _, first = run(capsys, "group", "--dim", "2", "--which", "wh", "--cache")
        assert list(tmp_path.glob("*.json"))
        _, second = run(capsys, "group", "--dim", "2", "--which", "wh", "--cache")
        assert first == second


class TestCqs:
    def test_dim2_step1_counts(self, capsys):
        code, out = run(capsys, "cqs", "--dim", "2", "--steps", "1")
        assert code == 0
        data = json.loads(out)
        step1 = next(r for r in data["reports"] if r["step"] == 1)
        assert step1["deduped_candidates"] == 48
        assert step1["kept"] == 24
        assert data["count"] == 30
        assert data["requirements"]["pairwise_rational"]

    def test_steps_zero(self, capsys):
        code, out = run(capsys, "cqs", "--dim", "2", "--steps", "0")
        assert code == 0
        assert json.loads(out)["count"] == 6

    def test_mismatch_exits_nonzero_with_counts(self, capsys, monkeypatch):
        # force a wrong target: the command must fail loudly, not silently
        monkeypatch.setitem(
            cli._EXPECTED_STEPS, (2, 1), {"deduped_candidates": 47}
        )
        code, out = run(capsys, "cqs", "--dim", "2", "--steps", "1")
        assert code == 1
        data = json.loads(out)
        assert not data["ok"]
        assert data["failures"][0]["expected"] == 47
        assert data["failures"][0]["actual"] == 48
        assert "counts" in data["failures"][0]

    def test_resume(self, capsys, tmp_path):
        out_file = tmp_path / "step1.json"
        code, _ = run(
            capsys, "cqs", "--dim", "2", "--steps", "1", "--out", str(out_file)
        )
        assert code == 0
        code, out = run(
            capsys, "cqs", "--dim", "2", "--steps", "1", "--resume", str(out_file)
        )
        assert code == 0
        assert json.loads(out)["count"] == 414


class TestMub:
    def test_dim3(self, capsys):
        code, out = run(capsys, "mub", "--dim", "3")
        assert code == 0
        data = json.loads(out)
        assert data["n_bases"] == 4 and data["verified"]

    def test_dim4_galois(self, capsys):
        code, out = run(capsys, "mub", "--dim", "4")
        assert code == 0
        assert json.loads(out)["n_bases"] == 5

    def test_from_orbit(self, capsys):
        code, out = run(capsys, "mub", "--dim", "2", "--from-orbit")
        assert code == 0
        assert json.loads(out)["n_bases"] == 3

    def test_non_prime_power_fails(self, capsys):
        code, out = run(capsys, "mub", "--dim", "6")
        assert code == 1
        assert not json.loads(out)["ok"]


class TestCrt:
    def test_dim6_projective(self, capsys):
        code, out = run(capsys, "crt", "--dim", "6")
        assert code == 0
        data = json.loads(out)
        assert data["factors"] == [2, 3]
        pc = data["product_check"]
        assert pc["projective_matches"] is True
        assert pc["shift_tensor_ok"] and pc["clock_tensor_ok"]
        energy5 = next(e for e in data["energy"] if e["k"] == 5)
        assert energy5["components"] == [[1, 2], [1, 3]]

    def test_single_factor_skipped(self, capsys):
        code, out = run(capsys, "crt", "--dim", "9")
        assert code == 0
        assert json.loads(out)["product_check"]["skipped"]


class TestBlochExport:
    def test_octahedron_vertices(self, capsys, tmp_path):
        state_file = tmp_path / "states.json"
        run(capsys, "cqs", "--dim", "2", "--steps", "0", "--out", str(state_file))
        code, out = run(capsys, "bloch-export", "--in", str(state_file))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,y,z,generation"
        points = {tuple(round(float(v), 9) for v in ln.split(",")[:3])
                  for ln in lines[1:]}
        assert points == {
            (1.0, 0.0, 0.0), (-1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0), (0.0, -1.0, 0.0),
            (0.0, 0.0, 1.0), (0.0, 0.0, -1.0),
        }

    def test_rejects_wrong_dimension(self, capsys, tmp_path):
        state_file = tmp_path / "s3.json"
        run(capsys, "cqs", "--dim", "3", "--steps", "0", "--out", str(state_file))
        code, out = run(capsys, "bloch-export", "--in", str(state_file))
        assert code == 1


class TestGalois:
    def test_field_table(self, capsys):
        code, out = run(capsys, "galois", "--p", "2", "--ell", "2")
        assert code == 0
        data = json.loads(out)
        assert data["field"]["modulus"] == [1, 1, 1]
        assert [e["trace"] for e in data["elements"]] == [0, 0, 1, 1]

    def test_bad_prime(self, capsys):
        code, out = run(capsys, "galois", "--p", "6")
        assert code == 2
        assert not json.loads(out)["ok"]
