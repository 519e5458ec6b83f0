"""Text dataset loaders for the three search problems.

Binary vectors: one '0'/'1' string per line, or "0x"-prefixed hex with
the most significant bit as dimension 0.  Sets: whitespace-separated
opaque tokens, one record per line.  Strings: raw bytes per line.
"""

import numpy as np


class DataFormatError(ValueError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


def _vector_bits(token: str):
    if token.startswith("0x") or token.startswith("0X"):
        digits = token[2:]
        if not digits or any(c not in "0123456789abcdefABCDEF" for c in digits):
            return None
        d = 4 * len(digits)
        v = int(digits, 16)
        return [(v >> (d - 1 - i)) & 1 for i in range(d)]
    if any(c not in "01" for c in token) or not token:
        return None
    return [1 if c == "1" else 0 for c in token]


def read_vectors(path) -> np.ndarray:
    rows = []
    d = None
    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, start=1):
            token = line.strip()
            if not token:
                continue
            bits = _vector_bits(token)
            if bits is None:
                raise DataFormatError(path, line_no, "expected a 0/1 or 0x-hex vector")
            if d is None:
                d = len(bits)
            elif len(bits) != d:
                raise DataFormatError(path, line_no, f"dimension {len(bits)} != {d}")
            rows.append(bits)
    return np.array(rows, dtype=np.uint8).reshape(len(rows), d or 0)


def read_sets(path) -> list:
    records = []
    with open(path, "rb") as fh:
        for raw in fh:
            records.append(raw.rstrip(b"\r\n").split())
    return records


def read_strings(path) -> list:
    out = []
    with open(path, "rb") as fh:
        for raw in fh:
            out.append(raw.rstrip(b"\r\n"))
    return out
