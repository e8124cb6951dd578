import json
import math
import os

import pytest

import mouldcalc as mc
from mouldcalc import cache as cachemod
from mouldcalc.cli import main
from mouldcalc.errors import CacheError

from conftest import bivariate


@pytest.fixture
def euler_file(tmp_path):
    A = bivariate({(1, 0): 1, (0, 1): 1}, x_order=1, y_order=1)
    path = tmp_path / "euler.json"
    path.write_text(json.dumps(mc.field_to_json(A)))
    return str(path)


@pytest.fixture
def trivial_file(tmp_path):
    A = bivariate({(0, 1): 1}, x_order=1, y_order=1)
    path = tmp_path / "trivial.json"
    path.write_text(json.dumps(mc.field_to_json(A)))
    return str(path)


@pytest.fixture
def bad_field_file(tmp_path):
    # A(0, y) = y + y^2 violates the normalisation condition
    A = bivariate({(0, 1): 1, (0, 2): 1}, x_order=1, y_order=2)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(mc.field_to_json(A)))
    return str(path)


def run(args, tmp_path, sub="normalize", extra=()):
    out = tmp_path / "out"
    cache = tmp_path / "cache.json"
    argv = [sub, *args, "--output-dir", str(out),
            "--cache", str(cache), *extra]
    return main(argv), out


class TestNormalize:
    def test_euler_outputs(self, euler_file, tmp_path):
        code, out = run(["--field", euler_file, "--x-order", "10",
                         "--n-max", "3"], tmp_path)
        assert code == 0
        doc = json.loads((out / "phi_0.json").read_text())
        assert doc["n"] == 0 and doc["x_order"] == 10
        expected = ["0"] + [str(-math.factorial(k - 1))
                            for k in range(1, 11)]
        assert [c["re"] for c in doc["coeffs"]] == expected
        assert all(c["im"] == "0" for c in doc["coeffs"])
        assert doc["word_count"] == 1
        for n in range(1, 4):
            doc = json.loads((out / f"phi_{n}.json").read_text())
            assert all(c["re"] == "0" and c["im"] == "0"
                       for c in doc["coeffs"])
        psi = json.loads((out / "psi_0.json").read_text())
        assert [c["re"] for c in psi["coeffs"]] == \
            ["0"] + [str(math.factorial(k - 1)) for k in range(1, 11)]

    def test_trivial_all_zero(self, trivial_file, tmp_path):
        code, out = run(["--field", trivial_file, "--n-max", "2"], tmp_path)
        assert code == 0
        for kind in ("phi", "psi"):
            for n in range(3):
                doc = json.loads((out / f"{kind}_{n}.json").read_text())
                assert all(c["re"] == "0" and c["im"] == "0"
                           for c in doc["coeffs"])

    def test_validation_failure_exit_2(self, bad_field_file, tmp_path,
                                       capsys):
        code, _ = run(["--field", bad_field_file], tmp_path)
        assert code == 2
        assert "A(0, y) = y" in capsys.readouterr().err

    def test_malformed_input_exit_3(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ this is not json")
        code, _ = run(["--field", str(path)], tmp_path)
        assert code == 3

    def test_missing_file_exit_3(self, tmp_path):
        code, _ = run(["--field", str(tmp_path / "nope.json")], tmp_path)
        assert code == 3

    def test_csv_format(self, euler_file, tmp_path):
        code, out = run(["--field", euler_file, "--x-order", "4",
                         "--n-max", "0", "--format", "csv"], tmp_path)
        assert code == 0
        lines = (out / "phi_0.csv").read_text().splitlines()
        assert lines[0] == "n,k,re,im"
        assert lines[1] == "0,0,0,0"
        assert lines[2] == "0,1,-1,0"

    def test_word_warning(self, euler_file, tmp_path, capsys):
        code, _ = run(["--field", euler_file, "--n-max", "0",
                       "--word-warn", "0"], tmp_path)
        assert code == 0
        assert "warning" in capsys.readouterr().err

    def test_determinism_and_threads(self, euler_file, tmp_path):
        outputs = []
        for i, threads in enumerate(("1", "1", "2")):
            out = tmp_path / f"out{i}"
            code = main(["normalize", "--field", euler_file,
                         "--x-order", "8", "--n-max", "2",
                         "--output-dir", str(out),
                         "--cache", str(tmp_path / f"cache{i}.json"),
                         "--threads", threads])
            assert code == 0
            outputs.append({p.name: p.read_bytes()
                            for p in sorted(out.iterdir())})
        assert outputs[0] == outputs[1] == outputs[2]


class TestCheck:
    def test_euler_all_suites(self, euler_file, tmp_path):
        code, out = run(["--field", euler_file, "--x-order", "6",
                         "--n-max", "2"], tmp_path, sub="check")
        assert code == 0
        report = json.loads((out / "check_report.json").read_text())
        assert report["results"]
        assert all(r["status"] == "ok" for r in report["results"])

    def test_suite_selection(self, euler_file, tmp_path):
        code, out = run(["--field", euler_file, "--x-order", "6"],
                        tmp_path, sub="check",
                        extra=["--suite", "symmetral,valuation"])
        assert code == 0
        report = json.loads((out / "check_report.json").read_text())
        suites = {r["suite"] for r in report["results"]}
        assert suites == {"symmetral", "valuation"}

    def test_unknown_suite_rejected(self, euler_file, tmp_path):
        with pytest.raises(SystemExit):
            run(["--field", euler_file], tmp_path, sub="check",
                extra=["--suite", "bogus"])

    def test_poisoned_cache_exit_1(self, euler_file, tmp_path, capsys):
        # first run populates the cache
        code, _ = run(["--field", euler_file, "--x-order", "6"],
                      tmp_path, sub="check")
        assert code == 0
        # corrupt one cached value, keeping hash/version intact
        cache = tmp_path / "cache.json"
        doc = json.loads(cache.read_text())
        entry = next(e for e in doc["entries"] if e["word"] == [-1])
        entry["coeffs"][2] = [7, 1, 0, 1]
        cache.write_text(json.dumps(doc))
        code, _ = run(["--field", euler_file, "--x-order", "6"],
                      tmp_path, sub="check")
        assert code == 1
        assert "FAIL" in capsys.readouterr().err

    def test_corrupted_cache_exit_3_then_rebuild(self, euler_file,
                                                 tmp_path):
        cache = tmp_path / "cache.json"
        cache.write_text("garbage")
        code, _ = run(["--field", euler_file, "--x-order", "6"],
                      tmp_path, sub="check")
        assert code == 3
        code, _ = run(["--field", euler_file, "--x-order", "6"],
                      tmp_path, sub="check", extra=["--rebuild-cache"])
        assert code == 0
        # the rebuilt cache must now load cleanly
        code, _ = run(["--field", euler_file, "--x-order", "6"],
                      tmp_path, sub="check")
        assert code == 0

    def test_warm_cache_identical_outputs(self, euler_file, tmp_path):
        def normalize(out):
            return main(["normalize", "--field", euler_file,
                         "--x-order", "8", "--n-max", "2",
                         "--output-dir", str(out),
                         "--cache", str(tmp_path / "cache.json")])

        assert normalize(tmp_path / "cold") == 0
        assert (tmp_path / "cache.json").exists()
        assert normalize(tmp_path / "warm") == 0
        cold = {p.name: p.read_bytes()
                for p in sorted((tmp_path / "cold").iterdir())}
        warm = {p.name: p.read_bytes()
                for p in sorted((tmp_path / "warm").iterdir())}
        assert cold == warm


class TestBorelCommand:
    def test_euler_signature_and_eval(self, euler_file, tmp_path):
        code, out = run(["--field", euler_file, "--zeta-order", "12",
                         "--n-max", "0"], tmp_path, sub="borel",
                        extra=["--eval", "1/2"])
        assert code == 0
        doc = json.loads((out / "phihat_0.json").read_text())
        assert [c["re"] for c in doc["coeffs"]] == \
            [str((-1) ** n) for n in range(13)]
        ev = doc["evaluations"][0]
        assert ev["zeta"] == "1/2"
        assert ev["tail_bound"] is not None

    def test_eval_outside_disc_warns(self, euler_file, tmp_path, capsys):
        code, out = run(["--field", euler_file, "--zeta-order", "8",
                         "--n-max", "0"], tmp_path, sub="borel",
                        extra=["--eval", "3/2"])
        assert code == 0
        assert "tail bound omitted" in capsys.readouterr().err
        doc = json.loads((out / "phihat_0.json").read_text())
        assert doc["evaluations"][0]["tail_bound"] is None

    def test_trivial_zero_files(self, trivial_file, tmp_path):
        code, out = run(["--field", trivial_file, "--n-max", "1"],
                        tmp_path, sub="borel")
        assert code == 0
        for n in range(2):
            doc = json.loads((out / f"phihat_{n}.json").read_text())
            assert all(c["re"] == "0" and c["im"] == "0"
                       for c in doc["coeffs"])


class TestCacheCommand:
    def test_inspect_and_clear(self, euler_file, tmp_path, capsys):
        cache = tmp_path / "cache.json"
        code = main(["normalize", "--field", euler_file,
                     "--x-order", "5", "--n-max", "0",
                     "--output-dir", str(tmp_path / "out"),
                     "--cache", str(cache)])
        assert code == 0
        assert main(["cache", "inspect", "--cache", str(cache)]) == 0
        info = json.loads(capsys.readouterr().out)
        assert info["version"] == cachemod.CACHE_VERSION
        assert info["x_order"] == 5
        assert info["entries"] >= 1
        assert main(["cache", "clear", "--cache", str(cache)]) == 0
        assert not cache.exists()
        # clearing a missing cache is not an error
        assert main(["cache", "clear", "--cache", str(cache)]) == 0

    def test_inspect_missing_is_io_error(self, tmp_path):
        assert main(["cache", "inspect",
                     "--cache", str(tmp_path / "none.json")]) == 3


class TestCacheModule:
    def test_round_trip(self, euler_field, tmp_path):
        A = euler_field.to_bivariate(1, 1)
        fhash = cachemod.field_hash(A)
        mould = mc.solve_V(euler_field, 6)
        mould.value((-1,))
        mould.value((-1, -1))
        path = tmp_path / "c.json"
        cachemod.save_mould_cache(path, mould, fhash)
        entries = cachemod.load_mould_cache(path, fhash, 6)
        assert entries[(-1,)] == mould.value((-1,))
        assert entries[(-1, -1)] == mould.value((-1, -1))

    def test_mismatches_rejected(self, euler_field, tmp_path):
        A = euler_field.to_bivariate(1, 1)
        fhash = cachemod.field_hash(A)
        mould = mc.solve_V(euler_field, 4)
        mould.value((-1,))
        path = tmp_path / "c.json"
        cachemod.save_mould_cache(path, mould, fhash)
        with pytest.raises(CacheError):
            cachemod.load_mould_cache(path, "deadbeef", 4)
        with pytest.raises(CacheError):
            cachemod.load_mould_cache(path, fhash, 5)
        doc = json.loads(path.read_text())
        doc["version"] = 999
        path.write_text(json.dumps(doc))
        with pytest.raises(CacheError):
            cachemod.load_mould_cache(path, fhash, 4)

    def test_env_var_controls_default_dir(self, monkeypatch, tmp_path):
        monkeypatch.setenv(cachemod.CACHE_DIR_ENV, str(tmp_path / "cc"))
        A = bivariate({(0, 1): 1}, x_order=1, y_order=1)
        path = cachemod.cache_path(A, 4)
        assert path.startswith(str(tmp_path / "cc"))

    def test_field_hash_is_content_hash(self):
        A = bivariate({(0, 1): 1, (1, 2): 1}, x_order=1, y_order=2)
        B = bivariate({(1, 2): 1, (0, 1): 1}, x_order=1, y_order=2)
        C = bivariate({(0, 1): 1, (1, 2): 2}, x_order=1, y_order=2)
        assert cachemod.field_hash(A) == cachemod.field_hash(B)
        assert cachemod.field_hash(A) != cachemod.field_hash(C)
