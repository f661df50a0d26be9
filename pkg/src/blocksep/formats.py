"""JSON encodings shared by the library and the command line.

Complex numbers are written as ``[re, im]`` pairs.  Floats go through
``json``'s default ``repr``, which is the shortest round-trip decimal.
"""

import json

import numpy as np

from .blocks import BlockMatrix
from .errors import BlockSepError, ParseError


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def encode_array(a):
    """Nested lists of ``[re, im]`` pairs with the same shape as ``a``."""
    a = np.asarray(a, dtype=np.complex128)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_array(data, ndim, field):
    """Inverse of :func:`encode_array`; ``field`` names the input in error messages."""
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field '{field}': not a rectangular array of [re, im] pairs ({exc})") from None
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise ParseError(
            f"field '{field}': expected {ndim}-D array of [re, im] pairs, got array of shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"field '{field}': non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def _require(obj, key, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected a JSON object")
    if key not in obj:
        raise ParseError(f"{where}: missing field '{key}'")
    return obj[key]


def _positive_int(obj, key, where):
    value = _require(obj, key, where)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError(f"field '{key}': expected a positive integer, got {value!r}")
    return value


def block_matrix_to_dict(t, meta=None):
    out = {"n": t.n, "d": t.d, "blocks": encode_array(t.blocks)}
    if meta is not None:
        out["meta"] = meta
    return out


def block_matrix_from_dict(obj):
    n = _positive_int(obj, "n", "block matrix")
    d = _positive_int(obj, "d", "block matrix")
    blocks = decode_array(_require(obj, "blocks", "block matrix"), 4, "blocks")
    if blocks.shape != (n, n, d, d):
        raise ParseError(f"field 'blocks': shape {blocks.shape[:4]} does not match n={n}, d={d}")
    return BlockMatrix(blocks)


def parse_scalar(entry, field):
    if isinstance(entry, bool):
        raise ParseError(f"field '{field}': booleans are not numbers")
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        return complex(entry[0], entry[1])
    raise ParseError(f"field '{field}': expected a number or [re, im], got {entry!r}")


def matrix_from_json(data, field="matrix"):
    """A single matrix: rows whose entries are real numbers or ``[re, im]`` pairs."""
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise ParseError(f"field '{field}': expected a non-empty list of rows")
    width = len(data[0])
    if width == 0 or any(len(row) != width for row in data):
        raise ParseError(f"field '{field}': rows must be non-empty and of equal length")
    m = np.array([[parse_scalar(x, field) for x in row] for row in data], dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise ParseError(f"field '{field}': non-finite entries")
    return m


def dumps(obj):
    return json.dumps(obj, indent=None, separators=(",", ":"))


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from None


def load_block_matrix(path):
    try:
        return block_matrix_from_dict(load_json(path))
    except BlockSepError:
        raise
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
