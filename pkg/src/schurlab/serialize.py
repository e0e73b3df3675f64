"""Flat binary and JSON debug serialization for grids and matrices.

Binary layout (little endian), documented here and in the README:

    magic    4 bytes   b"SGRD" for symbol grids, b"MOPR" for matrices
    version  u32       currently 1
    n        u32       lattice dimension
    N        u32       lattice half-width
    topology u8        0 = integer, 1 = sampled_box, 2 = cyclic
    h        f64       lattice spacing
    label    u32 + utf-8 bytes
    payload  P*P complex128, row major

The JSON form mirrors the same fields with values split into re/im parts.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .lattice import Lattice, make_lattice
from .schatten import MatrixOperator
from .symbols import SymbolGrid

MAGIC_SYMBOL = b"SGRD"
MAGIC_MATRIX = b"MOPR"
FORMAT_VERSION = 1
_TOPO_CODE = {"integer": 0, "sampled_box": 1, "cyclic": 2}
_TOPO_NAME = {v: k for k, v in _TOPO_CODE.items()}


def _pack_header(magic: bytes, lattice: Lattice, label: str) -> bytes:
    lab = label.encode("utf-8")
    return (
        magic
        + struct.pack("<III", FORMAT_VERSION, lattice.dimension, lattice.half_width)
        + struct.pack("<Bd", _TOPO_CODE[lattice.topology], lattice.spacing)
        + struct.pack("<I", len(lab))
        + lab
    )


def _unpack_header(buf: bytes, magic: bytes) -> tuple[Lattice, str, int]:
    if buf[:4] != magic:
        raise ValidationError(f"bad magic {buf[:4]!r}, expected {magic!r}")
    version, n, N = struct.unpack_from("<III", buf, 4)
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format version {version}")
    topo_code, h = struct.unpack_from("<Bd", buf, 16)
    (lab_len,) = struct.unpack_from("<I", buf, 25)
    label = buf[29 : 29 + lab_len].decode("utf-8")
    lattice = make_lattice(n, N, h, _TOPO_NAME[topo_code])
    return lattice, label, 29 + lab_len


def save_symbol(grid: SymbolGrid, path) -> None:
    payload = np.ascontiguousarray(grid.values, dtype="<c16").tobytes()
    Path(path).write_bytes(_pack_header(MAGIC_SYMBOL, grid.lattice, grid.label) + payload)


def load_symbol(path) -> SymbolGrid:
    buf = Path(path).read_bytes()
    lattice, label, offset = _unpack_header(buf, MAGIC_SYMBOL)
    p = lattice.point_count
    vals = np.frombuffer(buf, dtype="<c16", count=p * p, offset=offset).reshape(p, p)
    return SymbolGrid(lattice, vals, label=label)


def save_matrix(A: MatrixOperator, path) -> None:
    payload = np.ascontiguousarray(A.entries, dtype="<c16").tobytes()
    Path(path).write_bytes(_pack_header(MAGIC_MATRIX, A.lattice, A.label) + payload)


def load_matrix(path) -> MatrixOperator:
    buf = Path(path).read_bytes()
    lattice, label, offset = _unpack_header(buf, MAGIC_MATRIX)
    p = lattice.point_count
    ent = np.frombuffer(buf, dtype="<c16", count=p * p, offset=offset).reshape(p, p)
    return MatrixOperator(lattice, ent, label=label)


def _lattice_json(lattice: Lattice) -> dict:
    return {
        "dimension": lattice.dimension,
        "half_width": lattice.half_width,
        "spacing": lattice.spacing,
        "topology": lattice.topology,
    }


def _lattice_from_json(obj: dict) -> Lattice:
    return make_lattice(obj["dimension"], obj["half_width"], obj["spacing"], obj["topology"])


def _values_json(values: np.ndarray) -> dict:
    return {"re": values.real.tolist(), "im": values.imag.tolist()}


def _values_from_json(obj: dict) -> np.ndarray:
    return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)


def symbol_to_json(grid: SymbolGrid) -> dict:
    return {"kind": "symbol", "lattice": _lattice_json(grid.lattice),
            "label": grid.label, "values": _values_json(grid.values)}


def symbol_from_json(obj: dict) -> SymbolGrid:
    if obj.get("kind") != "symbol":
        raise ValidationError("JSON document is not a symbol grid")
    lat = _lattice_from_json(obj["lattice"])
    return SymbolGrid(lat, _values_from_json(obj["values"]), label=obj.get("label", ""))


def matrix_to_json(A: MatrixOperator) -> dict:
    return {"kind": "matrix", "lattice": _lattice_json(A.lattice),
            "label": A.label, "values": _values_json(A.entries)}


def matrix_from_json(obj: dict) -> MatrixOperator:
    if obj.get("kind") != "matrix":
        raise ValidationError("JSON document is not a matrix")
    lat = _lattice_from_json(obj["lattice"])
    return MatrixOperator(lat, _values_from_json(obj["values"]), label=obj.get("label", ""))


def save_symbol_json(grid: SymbolGrid, path) -> None:
    Path(path).write_text(json.dumps(symbol_to_json(grid), sort_keys=True))


def load_symbol_json(path) -> SymbolGrid:
    return symbol_from_json(json.loads(Path(path).read_text()))
