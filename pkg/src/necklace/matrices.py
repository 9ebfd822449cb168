"""Dense complex matrix helpers: spectral exponentials and the CSV exchange format.

Matrices are plain ``numpy`` complex arrays.  The CSV format writes one
matrix row per line, entries as ``re,im`` separated by ``;``.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    h = np.asarray(h)
    if h.shape == (0, 0):
        return np.zeros((0, 0), dtype=complex)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def unitarity_defect(u: np.ndarray) -> float:
    u = np.asarray(u)
    return max_abs(u.conj().T @ u - np.eye(u.shape[0]))


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)  # +0.0 turns -0.0 into 0.0


def to_csv(m: np.ndarray) -> str:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValidationError("expected a 2-d matrix")
    lines = [";".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in row) for row in m]
    return "\n".join(lines) + "\n"


def from_csv(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for cell in line.split(";"):
            re_s, im_s = cell.split(",")
            row.append(complex(float(re_s), float(im_s)))
        rows.append(row)
    if len({len(r) for r in rows}) > 1:
        raise ValidationError("ragged matrix rows")
    return np.array(rows, dtype=complex)
