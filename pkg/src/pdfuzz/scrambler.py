"""Seeded permutations of glyph stream order.

Coordinates never change here; only the order in which glyphs will be
written to the content stream does.  Determinism contract: draws come from
CPython's Mersenne Twister (`random.Random(seed)`) and each index draw is
`int(random() * k)`, so a (strategy, n) pair always yields the same
permutation on every platform.  Test vectors are frozen in the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Union

from .errors import ContractError
from .layout import GlyphPlacement, LayoutResult


@dataclass(frozen=True)
class CharLevel:
    """Uniform random permutation of every glyph position."""

    seed: int


@dataclass(frozen=True)
class ChunkLevel:
    """Shuffle consecutive chunks of 8-15 glyphs, keeping intra-chunk order."""

    seed: int
    min_chunk: int = 8
    max_chunk: int = 15

    def __post_init__(self):
        if not (1 <= self.min_chunk <= self.max_chunk):
            raise ValueError("need 1 <= min_chunk <= max_chunk")


ScrambleStrategy = Union[CharLevel, ChunkLevel]


@dataclass(frozen=True)
class Permutation:
    """mapping[stream_position] = reading_index; a bijection on 0..n-1."""

    mapping: tuple[int, ...]
    n: int
    strategy: ScrambleStrategy


def _rand_below(rng: random.Random, k: int) -> int:
    # documented draw: floor(random()*k), clamped against the float edge
    return min(int(rng.random() * k), k - 1)


def _fisher_yates(rng: random.Random, n: int) -> list[int]:
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = _rand_below(rng, i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def make_permutation(strategy: ScrambleStrategy, n: int) -> Permutation:
    """Build the seeded permutation for `n` glyphs under `strategy`."""
    if n < 0:
        raise ContractError("permutation length must be non-negative")
    rng = random.Random(strategy.seed)
    if isinstance(strategy, CharLevel):
        mapping = _fisher_yates(rng, n)
    else:
        chunks: list[range] = []
        pos = 0
        span = strategy.max_chunk - strategy.min_chunk + 1
        while pos < n:
            length = strategy.min_chunk + _rand_below(rng, span)
            chunks.append(range(pos, min(pos + length, n)))
            pos += length
        order = _fisher_yates(rng, len(chunks))
        mapping = [i for k in order for i in chunks[k]]
    return Permutation(tuple(mapping), n, strategy)


def apply(perm: Permutation, result: LayoutResult) -> list[GlyphPlacement]:
    """Reorder placements into stream order; every glyph keeps its position."""
    placements = result.placements
    if perm.n != len(placements):
        raise ContractError(
            f"permutation is over {perm.n} glyphs, layout has {len(placements)}"
        )
    return [placements[j] for j in perm.mapping]
