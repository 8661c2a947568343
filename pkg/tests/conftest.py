import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from randcert.bitstream import BitSequence


def bits_from_string(s: str) -> BitSequence:
    return BitSequence.from_bits(int(ch) for ch in s)


@pytest.fixture
def tmp_bits_file(tmp_path):
    def _write(name, content, binary=False):
        p = tmp_path / name
        if binary:
            p.write_bytes(content)
        else:
            p.write_text(content)
        return p

    return _write


def make_counts(level, mapping, total=None):
    """BlockCounts from {index: count}."""
    from randcert.blockstats import BlockCounts

    arr = np.zeros(1 << level, dtype=np.int64)
    for j, c in mapping.items():
        arr[j] = c
    return BlockCounts(level, arr, total if total is not None else int(arr.sum()))
