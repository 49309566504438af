"""Slow reference implementations used to cross-check the mining pipeline.

Each oracle recomputes its answer from first principles rather than through
the production code paths: the pair scan compares every instance pair
directly, the brute-force miner enumerates feature subsets and searches rows
exhaustively, and the clique oracle is the classical pivoted enumeration.
The join-based miner is the level-wise baseline algorithm; it shares the pair
and table layers deliberately, since it serves as a performance baseline and
a whole-result cross-check rather than a per-stage oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .model import ConfigError, DynamicFeature, MiningConfig, Pattern
from .neighborhood import NeighborPair, neighbor_pairs
from .size2 import (
    FeatureCounts,
    FeatureGraph,
    TableInstance,
    participation_ratio,
    passes_prevalence,
    size2_table_instances,
)
from .snapshots import DynamicDatasetSeries
from .verify import PatternResult


class CapExceededError(ConfigError):
    """The input is too large for an exhaustive oracle to finish sensibly."""


@dataclass(frozen=True)
class OracleConfig:
    """Size caps for the exhaustive oracles."""

    max_base_features: int = 8
    max_instances: int = 200
    max_windows: int = 6

    def check(self, series: DynamicDatasetSeries) -> None:
        bases = {f.base for f in series.features()}
        n_instances = sum(1 for _ in series.all_instances())
        if len(bases) > self.max_base_features:
            raise CapExceededError(
                f"{len(bases)} base features exceed the oracle cap of {self.max_base_features}"
            )
        if n_instances > self.max_instances:
            raise CapExceededError(
                f"{n_instances} instances exceed the oracle cap of {self.max_instances}"
            )
        if series.window_count > self.max_windows:
            raise CapExceededError(
                f"{series.window_count} windows exceed the oracle cap of {self.max_windows}"
            )


def all_pairs_scan(
    series: DynamicDatasetSeries,
    spans: Mapping[DynamicFeature, int],
    config: MiningConfig,
) -> tuple[NeighborPair, ...]:
    """Neighbor pairs by comparing every instance pair, no index involved.

    The distance test uses the same squared-distance expression as the grid
    join so both sides of the equivalence check agree bit for bit.
    """
    instances = sorted(series.all_instances(), key=lambda i: i.sort_key)
    for inst in instances:
        if inst.feature not in spans:
            raise ConfigError(f"no span for feature {inst.feature.label}")
    dd_sq = config.d_d * config.d_d
    inclusive = config.temporal_comparison == "inclusive"
    out = []
    for i, a in enumerate(instances):
        for b in instances[i + 1:]:
            if a.feature == b.feature:
                continue
            dt = abs(a.t_index - b.t_index)
            limit = max(spans[a.feature], spans[b.feature])
            if not (dt <= limit if inclusive else dt < limit):
                continue
            if (a.x - b.x) ** 2 + (a.y - b.y) ** 2 <= dd_sq:
                out.append((a, b))
    return tuple(out)


def bron_kerbosch(graph: FeatureGraph) -> tuple[Pattern, ...]:
    """Maximal cliques of size >= 2 via pivoted recursive enumeration."""
    adj = graph.adjacency
    found: list[frozenset[DynamicFeature]] = []

    def recurse(r: set, p: set, x: set) -> None:
        if not p and not x:
            if len(r) >= 2:
                found.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda v: (len(adj[v] & p), v.sort_key))
        for v in sorted(p - adj[pivot], key=lambda f: f.sort_key):
            recurse(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    recurse(set(), set(graph.vertices), set())
    return tuple(sorted((Pattern(c) for c in found), key=lambda p: p.sort_key))


def brute_force_maximal(
    series: DynamicDatasetSeries,
    spans: Mapping[DynamicFeature, int],
    counts: FeatureCounts,
    config: MiningConfig,
    caps: OracleConfig = OracleConfig(),
) -> list[PatternResult]:
    """Prevalent maximal patterns by exhaustive search, within the caps.

    Feature subsets whose members include a pair with no related instances at
    all are skipped: their tables are empty by construction, never prevalent.
    Everything else is enumerated outright.
    """
    caps.check(series)
    instances = sorted(series.all_instances(), key=lambda i: i.sort_key)
    dd_sq = config.d_d * config.d_d
    inclusive = config.temporal_comparison == "inclusive"

    related: set[tuple] = set()
    linked_features: dict[DynamicFeature, set[DynamicFeature]] = {}
    for i, a in enumerate(instances):
        for b in instances[i + 1:]:
            if a.feature == b.feature:
                continue
            dt = abs(a.t_index - b.t_index)
            limit = max(spans[a.feature], spans[b.feature])
            if not (dt <= limit if inclusive else dt < limit):
                continue
            if (a.x - b.x) ** 2 + (a.y - b.y) ** 2 <= dd_sq:
                related.add((a, b))
                related.add((b, a))
                linked_features.setdefault(a.feature, set()).add(b.feature)
                linked_features.setdefault(b.feature, set()).add(a.feature)

    by_feature: dict[DynamicFeature, list] = {}
    for inst in instances:
        by_feature.setdefault(inst.feature, []).append(inst)

    features = sorted(linked_features, key=lambda f: f.sort_key)
    prevalent: dict[Pattern, PatternResult] = {}

    def subsets_linked(chosen: list[DynamicFeature], rest: list[DynamicFeature]) -> None:
        if len(chosen) >= 2:
            evaluate(chosen)
        for i, f in enumerate(rest):
            if all(f in linked_features[c] for c in chosen):
                subsets_linked(chosen + [f], rest[i + 1:])

    def evaluate(feats: list[DynamicFeature]) -> None:
        row_count = 0
        participating: dict[DynamicFeature, set] = {f: set() for f in feats}
        chosen: list = []

        def search(level: int) -> None:
            nonlocal row_count
            if level == len(feats):
                row_count += 1
                for f, inst in zip(feats, chosen):
                    participating[f].add(inst)
                return
            for inst in by_feature[feats[level]]:
                if all((prev, inst) in related for prev in chosen):
                    chosen.append(inst)
                    search(level + 1)
                    chosen.pop()

        search(0)
        if row_count == 0:
            return
        ratios = [len(participating[f]) / counts[f] for f in feats]
        dpi = min(ratios)
        if passes_prevalence(dpi, row_count, config):
            pat = Pattern(feats)
            prevalent[pat] = PatternResult(pat, dpi, row_count, False)

    subsets_linked([], features)

    results = []
    for pat, res in prevalent.items():
        is_max = not any(
            pat.feature_set < other.feature_set for other in prevalent if other.size > pat.size
        )
        if is_max:
            results.append(PatternResult(pat, res.dpi, res.row_count, True))
    return sorted(results, key=lambda r: r.pattern.sort_key)


def join_based_mine(
    series: DynamicDatasetSeries,
    spans: Mapping[DynamicFeature, int],
    counts: FeatureCounts,
    config: MiningConfig,
) -> list[PatternResult]:
    """Level-wise miner: grow size-k patterns by joining prefix-sharing
    size-(k-1) prevalent patterns and their tables.

    Returns every prevalent pattern of size >= 2 with maximality flagged.
    """
    pairs = neighbor_pairs(series, spans, config)
    related = {(a, b) for a, b in pairs}
    tables = size2_table_instances(pairs)

    def dpi_of(table: TableInstance) -> float:
        return min(participation_ratio(table, f, counts) for f in table.pattern.features)

    level: dict[Pattern, TableInstance] = {}
    all_prevalent: dict[Pattern, tuple[float, int]] = {}
    for pat, table in tables.items():
        dpi = dpi_of(table)
        if passes_prevalence(dpi, len(table), config):
            level[pat] = table
            all_prevalent[pat] = (dpi, len(table))

    while level:
        next_level: dict[Pattern, TableInstance] = {}
        patterns = sorted(level, key=lambda p: p.sort_key)
        for a_pat, b_pat in combinations(patterns, 2):
            if a_pat.features[:-1] != b_pat.features[:-1]:
                continue
            candidate = Pattern(a_pat.features + (b_pat.features[-1],))
            by_prefix: dict[tuple, list] = {}
            for row in level[a_pat].rows:
                by_prefix.setdefault(row[:-1], []).append(row[-1])
            rows = []
            for row in level[b_pat].rows:
                for tail in by_prefix.get(row[:-1], ()):
                    if (tail, row[-1]) in related:
                        rows.append(row[:-1] + (tail, row[-1]))
            if not rows:
                continue
            table = TableInstance(candidate, rows)
            dpi = dpi_of(table)
            if passes_prevalence(dpi, len(table), config):
                next_level[candidate] = table
                all_prevalent[candidate] = (dpi, len(table))
        level = next_level

    results = []
    patterns = list(all_prevalent)
    for pat in patterns:
        is_max = not any(
            pat.feature_set < other.feature_set for other in patterns if other.size > pat.size
        )
        dpi, rows = all_prevalent[pat]
        results.append(PatternResult(pat, dpi, rows, is_max))
    return sorted(results, key=lambda r: r.pattern.sort_key)
