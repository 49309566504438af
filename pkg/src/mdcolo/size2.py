"""Pair tables, participation measures, and the prevalent-pair feature graph.

A pattern's table instance lists every instance combination realizing it.  A
feature's participation ratio in a table is the share of its instances (over
the whole series) that appear in at least one row; the participation index of
the table is the minimum ratio over the pattern's features.  Pairs whose index
passes the threshold become the edges of the feature graph that seeds the
clique search.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .model import DynamicFeature, DynamicInstance, MiningConfig, Pattern
from .neighborhood import NeighborPair
from .snapshots import DynamicDatasetSeries

Row = tuple[DynamicInstance, ...]
FeatureCounts = dict[DynamicFeature, int]


def feature_counts(series: DynamicDatasetSeries) -> FeatureCounts:
    """Total instances per dynamic feature across all windows."""
    counts: FeatureCounts = {}
    for inst in series.all_instances():
        counts[inst.feature] = counts.get(inst.feature, 0) + 1
    return counts


class TableInstance:
    """All rows realizing one pattern; each row has one instance per feature,
    in the pattern's canonical feature order."""

    __slots__ = ("pattern", "rows", "_projections", "_row_set", "_partners")

    def __init__(self, pattern: Pattern, rows: Iterable[Row]):
        self.pattern = pattern
        self.rows: tuple[Row, ...] = tuple(
            sorted(rows, key=lambda row: tuple(i.sort_key for i in row))
        )
        self._projections: dict[DynamicFeature, frozenset[DynamicInstance]] | None = None
        self._row_set: frozenset[Row] | None = None
        self._partners: dict[DynamicInstance, tuple[DynamicInstance, ...]] | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TableInstance):
            return NotImplemented
        return self.pattern == other.pattern and self.rows == other.rows

    def __repr__(self) -> str:
        return f"TableInstance({self.pattern.label}, {len(self.rows)} rows)"

    def projection(self, feature: DynamicFeature) -> frozenset[DynamicInstance]:
        """Distinct instances of `feature` participating in any row."""
        if self._projections is None:
            cols: dict[DynamicFeature, set[DynamicInstance]] = {
                f: set() for f in self.pattern.features
            }
            for row in self.rows:
                for f, inst in zip(self.pattern.features, row):
                    cols[f].add(inst)
            self._projections = {f: frozenset(s) for f, s in cols.items()}
        if feature not in self._projections:
            raise ValueError(f"{feature} is not part of pattern {self.pattern.label}")
        return self._projections[feature]

    @property
    def row_set(self) -> frozenset[Row]:
        if self._row_set is None:
            self._row_set = frozenset(self.rows)
        return self._row_set

    def _partner_map(self) -> dict[DynamicInstance, tuple[DynamicInstance, ...]]:
        if len(self.pattern.features) != 2:
            raise ValueError("anchor/partner views are defined for pair tables only")
        if self._partners is None:
            partners: dict[DynamicInstance, list[DynamicInstance]] = {}
            for a, b in self.rows:
                partners.setdefault(a, []).append(b)
            self._partners = {a: tuple(bs) for a, bs in partners.items()}
        return self._partners

    def partners_of(self, anchor: DynamicInstance) -> tuple[DynamicInstance, ...]:
        """Pair tables only: the second-column instances paired with `anchor`."""
        return self._partner_map().get(anchor, ())

    def anchors(self) -> tuple[DynamicInstance, ...]:
        """Pair tables only: distinct first-column instances, sorted."""
        return tuple(sorted(self._partner_map(), key=lambda i: i.sort_key))


def size2_table_instances(pairs: Iterable[NeighborPair]) -> dict[Pattern, TableInstance]:
    """Group neighbor pairs into one table instance per feature pair."""
    grouped: dict[Pattern, list[Row]] = {}
    for a, b in pairs:
        grouped.setdefault(Pattern((a.feature, b.feature)), []).append((a, b))
    return {pat: TableInstance(pat, rows) for pat, rows in sorted(
        grouped.items(), key=lambda kv: kv[0].sort_key
    )}


def participation_ratio(
    table: TableInstance, feature: DynamicFeature, counts: Mapping[DynamicFeature, int]
) -> float:
    """Share of the feature's instances that participate in the table.

    A feature with no instances at all gets ratio 0 rather than a division
    error; that only happens with externally supplied counts.
    """
    if feature not in table.pattern.feature_set:
        raise ValueError(f"{feature} is not part of pattern {table.pattern.label}")
    total = counts.get(feature, 0)
    if total == 0:
        return 0.0
    return len(table.projection(feature)) / total


def participation_index(table: TableInstance, counts: Mapping[DynamicFeature, int]) -> float:
    """Minimum participation ratio over the pattern's features."""
    return min(participation_ratio(table, f, counts) for f in table.pattern.features)


def passes_prevalence(index: float, row_count: int, config: MiningConfig) -> bool:
    """Whether a table with this index and row count counts as prevalent.

    An empty table is never prevalent, regardless of threshold; this keeps the
    degenerate min_prev=0 case consistent across every mining route, where
    patterns without any realization simply do not occur.
    """
    if row_count == 0:
        return False
    if config.prevalence_comparison == "inclusive":
        return index >= config.min_prev
    return index > config.min_prev


def prevalent_size2(
    tables: Mapping[Pattern, TableInstance],
    counts: Mapping[DynamicFeature, int],
    config: MiningConfig,
) -> dict[Pattern, TableInstance]:
    """Keep the pair tables whose participation index passes the threshold."""
    kept = {
        pat: table
        for pat, table in tables.items()
        if passes_prevalence(participation_index(table, counts), len(table), config)
    }
    return dict(sorted(kept.items(), key=lambda kv: kv[0].sort_key))


class FeatureGraph:
    """Undirected graph of dynamic features; edges carry their pair tables.

    Vertices are exactly the endpoints of edges unless extra isolated vertices
    are supplied (useful for synthetic graphs in tests).
    """

    def __init__(
        self,
        edges: Mapping[Pattern, TableInstance | None],
        vertices: Iterable[DynamicFeature] = (),
    ):
        adjacency: dict[DynamicFeature, set[DynamicFeature]] = {v: set() for v in vertices}
        for pat in edges:
            if pat.size != 2:
                raise ValueError(f"feature graph edges must be pairs, got {pat.label}")
            a, b = pat.features
            adjacency.setdefault(a, set()).add(b)
            adjacency.setdefault(b, set()).add(a)
        self.edges: dict[Pattern, TableInstance | None] = dict(
            sorted(edges.items(), key=lambda kv: kv[0].sort_key)
        )
        self.adjacency: dict[DynamicFeature, frozenset[DynamicFeature]] = {
            v: frozenset(neigh) for v, neigh in adjacency.items()
        }
        self.vertices: tuple[DynamicFeature, ...] = tuple(
            sorted(self.adjacency, key=lambda f: f.sort_key)
        )

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[DynamicFeature, DynamicFeature]],
        vertices: Iterable[DynamicFeature] = (),
    ) -> "FeatureGraph":
        return cls({Pattern(pair): None for pair in pairs}, vertices)

    def neighbors(self, feature: DynamicFeature) -> frozenset[DynamicFeature]:
        return self.adjacency[feature]

    def degree(self, feature: DynamicFeature) -> int:
        return len(self.adjacency[feature])


def build_feature_graph(prevalent: Mapping[Pattern, TableInstance]) -> FeatureGraph:
    """Feature graph whose edges are exactly the prevalent pairs."""
    return FeatureGraph(prevalent)
