"""CSV serialization of Monte Carlo sample batches.

Layout::

    # key=value            metadata, one per line
    run_index,seed,xi_hat
    0,<seed>,<xi>          one row per run; xi_hat is "nan" for a rejected run
    ...
    # invalid=<k> invalid_fraction=<f>
    # ks=<v> tolerance=<v> passed=<bool>

Run i was drawn from the substream (seed, i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

__all__ = ["SampleFile", "format_number", "read_samples", "write_samples"]

HEADER = "run_index,seed,xi_hat"


def format_number(x: float) -> str:
    """12 significant digits, '.' separator, 'nan' for undefined values."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


@dataclass
class SampleFile:
    metadata: dict
    seed: int
    values: list
    summary: dict


def write_samples(
    stream: TextIO,
    values: Iterable[float],
    seed: int,
    metadata: dict,
    ks: Optional[float],
    tolerance: float,
    passed: bool,
) -> None:
    values = list(values)
    for key, val in metadata.items():
        stream.write(f"# {key}={val}\n")
    stream.write(HEADER + "\n")
    for i, v in enumerate(values):
        stream.write(f"{i},{seed},{format_number(v)}\n")
    invalid = sum(1 for v in values if math.isnan(v))
    fraction = invalid / len(values) if values else 0.0
    stream.write(f"# invalid={invalid} invalid_fraction={format_number(fraction)}\n")
    ks_text = "nan" if ks is None else format_number(ks)
    stream.write(f"# ks={ks_text} tolerance={format_number(tolerance)} passed={'true' if passed else 'false'}\n")


def _parse_pairs(line: str) -> dict:
    out = {}
    for token in line.lstrip("#").split():
        if "=" in token:
            k, v = token.split("=", 1)
            out[k] = v
    return out


def read_samples(stream: TextIO) -> SampleFile:
    metadata, summary, values = {}, {}, []
    seed = None
    seen_header = False
    for raw in stream:
        line = raw.rstrip("\n")
        if line.startswith("#"):
            (summary if seen_header else metadata).update(_parse_pairs(line))
        elif line == HEADER:
            seen_header = True
        elif line:
            idx, s, xi = line.split(",")
            if int(idx) != len(values):
                raise ValueError(f"run index {idx} out of order")
            seed = int(s)
            values.append(float(xi))
    return SampleFile(metadata, seed, values, summary)
