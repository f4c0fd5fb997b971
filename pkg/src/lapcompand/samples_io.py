"""Sample and index file formats used by the codec commands.

Text files hold one decimal value per line.  The binary sample format is
the 4-byte magic ``CQ01`` followed by packed little-endian float64 values.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DomainError

MAGIC = b"CQ01"


class SampleFormatError(DomainError):
    """Malformed sample or index file; the message names the offending position."""


def read_samples(path) -> np.ndarray:
    """Read amplitudes, detecting the binary format by its magic header."""
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        body = len(data) - 4
        if body % 8:
            raise SampleFormatError(
                f"{path}: byte offset {4 + body - body % 8}: truncated float64 record")
        return np.frombuffer(data, dtype="<f8", offset=4).astype(float)
    values = []
    for lineno, line in enumerate(data.decode("utf-8", errors="replace").splitlines(), 1):
        text = line.strip()
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise SampleFormatError(f"{path}: line {lineno}: cannot parse {text!r} as a number") from None
    return np.array(values, dtype=float)


def write_samples(path, x, binary: bool = False) -> None:
    x = np.asarray(x, dtype="<f8")
    if binary:
        Path(path).write_bytes(MAGIC + x.tobytes())
    else:
        Path(path).write_text("".join(f"{v!r}\n" for v in x.tolist()))


def read_indices(path) -> np.ndarray:
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.strip()
        if not text:
            continue
        try:
            out.append(int(text))
        except ValueError:
            raise SampleFormatError(f"{path}: line {lineno}: cannot parse {text!r} as an index") from None
    return np.array(out, dtype=np.int64)


def write_indices(path, idx) -> None:
    Path(path).write_text("".join(f"{int(i)}\n" for i in np.asarray(idx).tolist()))
