"""Seed handling: every random draw flows from one run seed via named substreams."""

from __future__ import annotations

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, name: str) -> np.random.Generator:
    """Deterministic, independent generator for one subsystem of a run.

    Uses a stable CRC32 of the stream name (never the process-randomized
    built-in hash) so equal (seed, name) pairs always yield equal streams.
    """
    return np.random.default_rng(
        np.random.SeedSequence([seed & _MASK64, zlib.crc32(name.encode("utf-8"))])
    )
