"""Proximity join over dynamic instances.

Two instances of different dynamic features relate when they are within d_d
of each other (Euclidean, inclusive) and their windows differ by at most the
larger of the two features' spans (inclusive by default, strict optionally).
Candidates come from a uniform grid with cell size d_d, so only the 3x3 block
of cells around an instance is ever scanned.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Iterator, Mapping

from .model import ConfigError, DynamicFeature, DynamicInstance, MiningConfig
from .snapshots import DynamicDatasetSeries

# Canonically ordered: pair[0].sort_key < pair[1].sort_key, which also means
# pair[0].feature sorts before pair[1].feature (same-feature pairs are dropped).
NeighborPair = tuple[DynamicInstance, DynamicInstance]


class GridIndex:
    """Uniform spatial grid; every cell buckets its instances by t_index."""

    def __init__(self, instances: Iterable[DynamicInstance], cell_size: float):
        if not (cell_size > 0):
            raise ConfigError(f"cell size must be positive, got {cell_size}")
        self.cell_size = cell_size
        self.cells: dict[tuple[int, int], dict[int, list[DynamicInstance]]] = {}
        for inst in instances:
            cell = self.cell_of(inst.x, inst.y)
            self.cells.setdefault(cell, {}).setdefault(inst.t_index, []).append(inst)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (math.floor(x / self.cell_size), math.floor(y / self.cell_size))

    def candidates(self, cell: tuple[int, int], t_lo: int, t_hi: int) -> Iterator[DynamicInstance]:
        """Instances in the 3x3 block around `cell` with t_index in [t_lo, t_hi]."""
        cx, cy = cell
        for nx in (cx - 1, cx, cx + 1):
            for ny in (cy - 1, cy, cy + 1):
                buckets = self.cells.get((nx, ny))
                if not buckets:
                    continue
                for t in range(t_lo, t_hi + 1):
                    bucket = buckets.get(t)
                    if bucket:
                        yield from bucket


def _temporal_ok(dt: int, limit: int, mode: str) -> bool:
    return dt <= limit if mode == "inclusive" else dt < limit


def _pairs_for_anchors(
    anchors: list[DynamicInstance],
    grid: GridIndex,
    spans: Mapping[DynamicFeature, int],
    config: MiningConfig,
    max_span: int,
) -> list[NeighborPair]:
    dd_sq = config.d_d * config.d_d
    mode = config.temporal_comparison
    out: list[NeighborPair] = []
    for a in anchors:
        a_key = a.sort_key
        a_span = spans[a.feature]
        # Superset of any admissible window range; the exact per-pair check follows.
        reach = max(a_span, max_span)
        cell = grid.cell_of(a.x, a.y)
        for b in grid.candidates(cell, a.t_index - reach, a.t_index + reach):
            if b.sort_key <= a_key or b.feature == a.feature:
                continue
            if not _temporal_ok(abs(a.t_index - b.t_index), max(a_span, spans[b.feature]), mode):
                continue
            if (a.x - b.x) ** 2 + (a.y - b.y) ** 2 <= dd_sq:
                out.append((a, b))
    return out


def neighbor_pairs(
    series: DynamicDatasetSeries,
    spans: Mapping[DynamicFeature, int],
    config: MiningConfig,
    workers: int = 1,
) -> tuple[NeighborPair, ...]:
    """All related instance pairs, canonically ordered and sorted.

    Every feature present in the series must have a span.  The result is
    independent of `workers`; partitioning only splits the anchor set.
    """
    instances = [inst for inst in series.all_instances()]
    missing = {inst.feature for inst in instances} - set(spans)
    if missing:
        names = ", ".join(sorted(f.label for f in missing))
        raise ConfigError(f"no span for feature(s): {names}")
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    if not instances:
        return ()

    grid = GridIndex(instances, config.d_d)
    max_span = max(spans[inst.feature] for inst in instances)
    if workers == 1 or len(instances) < 2 * workers:
        pairs = _pairs_for_anchors(instances, grid, spans, config, max_span)
    else:
        chunks = [instances[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                lambda chunk: _pairs_for_anchors(chunk, grid, spans, config, max_span), chunks
            )
            pairs = [pair for part in parts for pair in part]
    pairs.sort(key=lambda p: (p[0].sort_key, p[1].sort_key))
    return tuple(pairs)
