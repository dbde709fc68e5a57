"""
JSON encoding of complex matrices.

A matrix is a list of rows; each entry is an ``[re, im]`` pair of floats.
Python's float repr is the shortest string that round-trips, so decoding
an encoded matrix reproduces it bit for bit.
"""

from typing import Any

import numpy as np


def encode_matrix(matrix) -> list[list[list[float]]]:
    """
    Encode a complex matrix as nested [re, im] pairs.

    Args:
        matrix: Array-like 2-D complex matrix

    Returns:
        JSON-ready nested lists
    """
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {arr.shape}")
    return [[[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row] for row in arr]


def decode_matrix(data: Any) -> np.ndarray:
    """
    Decode nested [re, im] pairs into a complex matrix.

    Plain real numbers are accepted in place of pairs.

    Raises:
        ValueError: If the structure is not a rectangular matrix of pairs
    """
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ValueError("Matrix must be a non-empty list of rows")
    width = len(data[0])
    rows = []
    for row in data:
        if len(row) != width:
            raise ValueError("Matrix rows have different lengths")
        rows.append([_decode_entry(entry) for entry in row])
    return np.array(rows, dtype=np.complex128)


def _decode_entry(entry: Any) -> complex:
    if isinstance(entry, bool):
        raise ValueError("Boolean is not a matrix entry")
    if isinstance(entry, (int, float)):
        return complex(float(entry), 0.0)
    if isinstance(entry, list) and len(entry) == 2:
        re, im = entry
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in (re, im)):
            raise ValueError(f"Entry {entry!r} is not a pair of numbers")
        return complex(float(re), float(im))
    raise ValueError(f"Entry {entry!r} is not an [re, im] pair")


def encode_operator_list(matrices) -> list:
    """Encode a sequence of matrices."""
    return [encode_matrix(m) for m in matrices]
