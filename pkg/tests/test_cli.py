import json

import pytest

from s2ap.cli import run
from s2ap.digits import s2, tm


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_witness_k3(capsys):
    code, out, _ = call(capsys, "witness", "--k", "3")
    obj = json.loads(out)
    assert code == 0
    assert (obj["n"], obj["t"], obj["verified"]) == ("16", "7", True)
    assert list(obj) == ["m", "k", "n", "t", "bits_n", "bits_t", "verified"]


def test_witness_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "w.json"
    code, _, _ = call(capsys, "witness", "--k=-1,2,0,-3", "-o", str(path))
    assert code == 0
    code, out, _ = call(capsys, "verify", "--file", str(path))
    assert code == 0 and json.loads(out)["valid"] is True


def test_verify_tampered(capsys, tmp_path):
    path = tmp_path / "w.json"
    call(capsys, "witness", "--k", "2,1,3", "-o", str(path))
    obj = json.loads(path.read_text())
    obj["n"] = str(int(obj["n"]) + 1)
    path.write_text(json.dumps(obj))
    code, _, _ = call(capsys, "verify", "--file", str(path))
    assert code == 1


def test_verify_unreadable(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert call(capsys, "verify", "--file", str(path))[0] == 2


def test_tm_word(capsys, tmp_path):
    path = tmp_path / "w.json"
    code, _, _ = call(capsys, "tm-word", "--w", "01101", "-o", str(path))
    assert code == 0
    obj = json.loads(path.read_text())
    n, t = int(obj["n"]), int(obj["t"])
    assert [tm(n + l * t) for l in range(5)] == [0, 1, 1, 0, 1]
    assert call(capsys, "verify", "--file", str(path))[0] == 0
    obj["word"] = "01100"
    path.write_text(json.dumps(obj))
    assert call(capsys, "verify", "--file", str(path))[0] == 1


def test_cusick_csv(capsys):
    code, out, _ = call(capsys, "cusick", "--from", "1", "--to", "3", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert [l.split(",")[1:3] for l in lines[1:]] == [["3", "4"], ["3", "4"], ["11", "16"]]


def test_outputs_byte_identical(capsys):
    a = call(capsys, "cusick", "--from", "1", "--to", "200", "--jobs", "1")[1]
    b = call(capsys, "cusick", "--from", "1", "--to", "200", "--jobs", "2")[1]
    assert a == b
    a = call(capsys, "problem1", "--from", "1", "--to", "9", "--format", "json")[1]
    b = call(capsys, "problem1", "--from", "1", "--to", "9", "--format", "json", "--jobs", "2")[1]
    assert a == b


def test_density_tables(capsys):
    code, out, _ = call(capsys, "density", "--t", "13", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["values"][0]["k"] == -20 and obj["values"][-1]["k"] == s2(13)
    code, out, _ = call(capsys, "density", "--t", "3", "--k-min", "0")
    assert "0,5,16,0.3125" in out.splitlines()


def test_density_md(capsys):
    code, out, _ = call(capsys, "density-md", "--m", "2", "--t", "9", "--precision", "30",
                        "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["lost_mass_bound"]["exp2"] >= 30
    assert call(capsys, "density-md", "--m", "2", "--t", "9", "--eps", "1")[0] == 2


def test_gaussian(capsys):
    code, out, _ = call(capsys, "gaussian", "--m", "2", "--t", "21", "--precision", "30")
    assert code == 0 and len(json.loads(out)["covariance"]) == 2


def test_brute(capsys):
    code, out, _ = call(capsys, "brute", "--mode", "1d", "--t", "3", "--N", "16", "--k", "0")
    assert code == 0 and json.loads(out)["counts"][0]["count"] == 5
    code, out, _ = call(capsys, "brute", "--mode", "md", "--t", "3", "--eps", "0,0",
                        "--N", "65536", "--check", "0.01")
    assert code == 0 and json.loads(out)["consistent"]
    # a tiny sample cannot match the densities to zero tolerance
    assert call(capsys, "brute", "--mode", "1d", "--t", "3", "--N", "7", "--check", "0")[0] == 1


@pytest.mark.parametrize("argv", [
    ["witness"],
    ["witness", "--k", "a,b"],
    ["density", "--t", "0"],
    ["cusick", "--from", "5", "--to", "2"],
    ["density-md", "--m", "2", "--t", "3", "--precision", "99"],
    ["brute", "--mode", "md", "--t", "3"],
    ["tm-word", "--w", "012"],
    ["witness", "--k", "1,2,3", "--max-m", "2"],
    [],
])
def test_invalid_arguments(capsys, argv):
    assert call(capsys, *argv)[0] == 2
