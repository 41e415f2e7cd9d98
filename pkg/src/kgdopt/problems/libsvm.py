"""Reader/writer for the LIBSVM sparse text format (``label idx:val ...``)."""

from __future__ import annotations

import io
import os

import numpy as np
import scipy.sparse as sp

from ..errors import BadLabel, ParseError

_LABELS = {-1.0: 0.0, 0.0: 0.0, 1.0: 1.0}


def _lines(source):
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for raw in source:
        if isinstance(raw, (bytes, bytearray)):
            raw = raw.decode("utf-8")
        yield raw


def parse_libsvm(source, n_features: int | None = None):
    """Parse LIBSVM text into ``(A, y)``.

    ``source`` is bytes, text, or an iterable of lines (a binary or text file
    object). ``A`` is a CSR matrix whose column count is the largest index
    seen (or ``n_features`` if larger); labels -1/0 map to 0 and +1/1 to 1.
    """
    data, indices, indptr, labels = [], [], [0], []
    max_idx = 0
    for lineno, line in enumerate(_lines(source), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise ParseError(f"bad label token {tokens[0]!r}", lineno) from None
        if label not in _LABELS:
            raise BadLabel(f"line {lineno}: label {tokens[0]!r} not in {{-1, 0, +1, 1}}")
        labels.append(_LABELS[label])
        prev = 0
        for tok in tokens[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ParseError(f"expected idx:val, got {tok!r}", lineno)
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"malformed feature {tok!r}", lineno) from None
            if idx <= prev:
                raise ParseError(f"index {idx} not strictly increasing / 1-based", lineno)
            prev = idx
            indices.append(idx - 1)
            data.append(val)
        max_idx = max(max_idx, prev)
        indptr.append(len(indices))
    n = max(max_idx, n_features or 0)
    A = sp.csr_matrix((np.array(data, dtype=float), np.array(indices, dtype=np.int64),
                       np.array(indptr, dtype=np.int64)), shape=(len(labels), n))
    return A, np.array(labels)


def load_libsvm(path, n_features: int | None = None):
    with open(os.fspath(path), "rb") as fh:
        return parse_libsvm(fh, n_features)


def dump_libsvm(A, y) -> str:
    """Inverse of :func:`parse_libsvm` (labels written as 0/1, values via ``repr``)."""
    A = sp.csr_matrix(A)
    out = []
    for i in range(A.shape[0]):
        lo, hi = A.indptr[i], A.indptr[i + 1]
        feats = " ".join(f"{j + 1}:{float(v)!r}" for j, v in zip(A.indices[lo:hi], A.data[lo:hi]))
        out.append(f"{int(y[i])} {feats}".rstrip())
    return "\n".join(out) + "\n"
