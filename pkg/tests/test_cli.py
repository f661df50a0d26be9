import json
import subprocess
import sys

import numpy as np
import pytest

from blocksep.cli import main
from blocksep.formats import block_matrix_to_dict, encode_array
from blocksep.blocks import from_blocks

I2 = np.eye(2)


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _matrix_file(tmp_path, name, t):
    return _write(tmp_path / name, block_matrix_to_dict(t))


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_identity(tmp_path, capsys):
    path = _matrix_file(tmp_path, "id.json", from_blocks([[I2, 0 * I2], [0 * I2, I2]]))
    code, out, _ = _run(capsys, "check", path)
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "separable" and report["terms"] == 4


def test_check_not_psd(tmp_path, capsys):
    path = _matrix_file(tmp_path, "bad.json", from_blocks([[I2, 2 * I2], [2 * I2, I2]]))
    code, out, _ = _run(capsys, "check", path)
    assert code == 2
    report = json.loads(out)
    assert report["verdict"] == "not_psd"
    assert report["witness"]["value"] == pytest.approx(-1.0)


def test_check_hypotheses_fail(tmp_path, capsys):
    x = np.array([[0, 1], [1, 0]])
    path = _matrix_file(tmp_path, "nc.json", from_blocks([[I2, x], [np.diag([1, -1]), I2]]))
    code, out, _ = _run(capsys, "check", path)
    assert code == 3
    report = json.loads(out)
    assert report["verdict"] == "hypotheses_fail"
    assert report["report"]["offending_pairs"] == [[[0, 1], [1, 0]]]


def test_loose_commute_tolerance_flag(tmp_path, capsys):
    x = np.array([[0, 1], [1, 0]])
    path = _matrix_file(tmp_path, "noisy.json", from_blocks([[I2, 1e-9 * x], [1e-9 * x.T, I2]]))
    assert _run(capsys, "check", path)[0] == 0
    z = np.diag([1.0, -1.0])
    # [z, 1e-9 x] has norm 2.8e-9: rejected at 1e-10, accepted at 1e-6
    path = _matrix_file(tmp_path, "noisy2.json", from_blocks([[2 * I2 + z, 1e-9 * x], [1e-9 * x, 2 * I2]]))
    assert _run(capsys, "check", path)[0] == 3
    assert _run(capsys, "check", path, "--tol-commute", "1e-6")[0] == 0


def test_borderline_family_is_hypotheses_fail(tmp_path, capsys):
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1.0, -1.0])
    path = _matrix_file(tmp_path, "border.json", from_blocks([[z, 1e-6 * x], [1e-6 * x, z]]))
    code, out, _ = _run(capsys, "check", path, "--tol-commute", "1e-3")
    assert code == 3
    assert "off-diagonal" in json.loads(out)["reason"]


@pytest.mark.parametrize(
    "content, field",
    [
        ("{not json", "malformed JSON"),
        (json.dumps({"n": 2, "d": 2}), "'blocks'"),
        (json.dumps({"n": 1, "d": 2, "blocks": [[[[1, 0], [0, 0]]]]}), "'blocks'"),
        (json.dumps({"n": "2", "d": 2, "blocks": []}), "'n'"),
    ],
)
def test_parse_errors(tmp_path, capsys, content, field):
    path = tmp_path / "broken.json"
    path.write_text(content)
    code, _, err = _run(capsys, "check", str(path))
    assert code == 1
    assert field in err


def test_missing_file(tmp_path, capsys):
    code, _, err = _run(capsys, "check", str(tmp_path / "nope.json"))
    assert code == 1 and "cannot read" in err


def test_generate_circulant_identity(tmp_path, capsys):
    params = _write(tmp_path / "p.json", {"A": np.eye(3).tolist(), "d": 3})
    code, out, _ = _run(capsys, "generate", "circulant", params)
    assert code == 0
    data = json.loads(out)
    assert data["meta"]["kind"] == "circulant"
    blocks = np.array(data["blocks"])[..., 0]
    dense = blocks.transpose(0, 2, 1, 3).reshape(9, 9)
    np.testing.assert_array_equal(dense, np.eye(9))


def test_generate_power_toeplitz_pauli(tmp_path, capsys):
    params = _write(tmp_path / "p.json", {"B": [[0, 1], [1, 0]], "n": 2})
    code, out, _ = _run(capsys, "generate", "power-toeplitz", params)
    assert code == 0
    blocks = np.array(json.loads(out)["blocks"])
    x = encode_array(np.array([[0, 1], [1, 0]]))
    assert blocks[0, 1].tolist() == x and blocks[1, 0].tolist() == x


def test_generate_power_toeplitz_rejects_non_normal(tmp_path, capsys):
    params = _write(tmp_path / "p.json", {"B": [[0, 1], [0, 0]], "n": 2})
    code, _, err = _run(capsys, "generate", "power-toeplitz", params)
    assert code == 1 and "not normal" in err


def test_generate_random_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert _run(capsys, "generate", "random", "--seed", "7", "-o", str(a))[0] == 0
    assert _run(capsys, "generate", "random", "--seed", "7", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["meta"]["seed"] == 7


def test_generate_polynomial_bad_coefficient(tmp_path, capsys):
    params = _write(tmp_path / "p.json", {"B": [[1, 0], [0, 2]], "polynomials": [[[1, "x"]]]})
    code, _, err = _run(capsys, "generate", "polynomial", params)
    assert code == 1 and "polynomials[0][0]" in err


GENERATOR_PARAMS = {
    "circulant": {"A": [[2, 1], [1, 2]], "d": 3},
    "power-toeplitz": {"B": [[0, [0, 1]], [[0, 1], 0]], "n": 3},
    "polynomial": {
        "B": [[1, 0], [0, -1]],
        "polynomials": [[[3, 0, 1], [1, 1]], [[1, 1], [3, 0, 1]]],
    },
    "random": {"n": 3, "d": 3, "seed": 11},
}


@pytest.mark.parametrize("kind", sorted(GENERATOR_PARAMS))
def test_round_trip(tmp_path, capsys, kind):
    params = _write(tmp_path / "params.json", GENERATOR_PARAMS[kind])
    matrix = str(tmp_path / "t.json")
    artifact = str(tmp_path / "artifact.json")
    assert _run(capsys, "generate", kind, params, "-o", matrix)[0] == 0
    check_code = _run(capsys, "check", matrix)[0]
    decompose_code, out, _ = _run(capsys, "decompose", matrix, "-o", artifact)
    assert check_code == decompose_code
    summary = json.loads(out)
    if check_code == 0:
        assert summary["verification"]["passed"]
    code, out, _ = _run(capsys, "verify", matrix, artifact)
    assert code == 0 and json.loads(out)["passed"]


def test_decompose_to_stdout_and_tampered_verify(tmp_path, capsys):
    params = _write(tmp_path / "p.json", GENERATOR_PARAMS["circulant"])
    matrix = str(tmp_path / "t.json")
    _run(capsys, "generate", "circulant", params, "-o", matrix)
    code, out, err = _run(capsys, "decompose", matrix)
    assert code == 0
    decomposition = json.loads(out)
    assert json.loads(err)["groups"] == 3
    decomposition["terms"][0]["weight"] *= -1
    tampered = _write(tmp_path / "tampered.json", decomposition)
    code, out, _ = _run(capsys, "verify", matrix, tampered)
    assert code == 2
    assert "nonnegative_weights" in json.loads(out)["failed"]


def test_decompose_not_psd_emits_witness(tmp_path, capsys):
    matrix = _matrix_file(tmp_path, "bad.json", from_blocks([[I2, 2 * I2], [2 * I2, I2]]))
    artifact = tmp_path / "w.json"
    code, _, _ = _run(capsys, "decompose", matrix, "-o", str(artifact))
    assert code == 2
    witness = json.loads(artifact.read_text())
    assert set(witness) == {"vector", "value", "k"}
    assert _run(capsys, "verify", matrix, str(artifact))[0] == 0


def test_verify_rejects_unknown_payload(tmp_path, capsys):
    matrix = _matrix_file(tmp_path, "id.json", from_blocks([[I2]]))
    other = _write(tmp_path / "x.json", {"foo": 1})
    code, _, err = _run(capsys, "verify", matrix, other)
    assert code == 1 and "terms" in err


def test_module_entry_point(tmp_path):
    matrix = _matrix_file(tmp_path, "id.json", from_blocks([[I2]]))
    proc = subprocess.run([sys.executable, "-m", "blocksep", "check", matrix], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "separable"
