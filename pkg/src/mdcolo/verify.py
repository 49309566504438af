"""Verification of candidate patterns against the instance data.

Candidates (feature cliques) are processed largest first.  A candidate's
table instance is assembled from its pair tables: the canonically first
feature acts as the anchor, its instances common to every anchor pair table
seed the rows, and a row survives only if every remaining feature pair is
itself a pair-table row.  Candidates whose participation index passes the
threshold are accepted unless an accepted pattern already contains them;
failed candidates of size three or more decompose into their one-smaller
sub-cliques, which join the queue.

Two optional shortcuts never change the outcome.  Participation ratios can be
bounded from above before the rows are assembled, aborting hopeless
candidates early.  And a sub-clique shared by several queued candidates can
be verified first: participation ratios only shrink as patterns grow, so a
failed sub-clique condemns every candidate containing it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .model import DynamicFeature, FeatureClique, MiningConfig, Pattern
from .size2 import TableInstance, FeatureCounts, participation_ratio, passes_prevalence


@dataclass(frozen=True)
class PatternResult:
    pattern: Pattern
    dpi: float
    row_count: int
    maximal: bool


@dataclass
class VerifyStats:
    """Counters and the per-candidate ratio log of one verification run."""

    verified: int = 0
    early_aborts: int = 0
    shared_checks: int = 0
    shared_skips: int = 0
    subsumed_skips: int = 0
    decomposed: int = 0
    # (pattern, feature -> participation ratio) for every fully verified table
    ratio_log: list[tuple[Pattern, dict[DynamicFeature, float]]] = field(default_factory=list)

    def as_manifest_entries(self) -> dict[str, int]:
        return {
            "verified_candidates": self.verified,
            "early_aborts": self.early_aborts,
            "shared_subclique_checks": self.shared_checks,
            "shared_subclique_skips": self.shared_skips,
            "subsumed_skips": self.subsumed_skips,
            "decompositions": self.decomposed,
        }


def candidate_table_instance(
    clique: FeatureClique,
    size2: Mapping[Pattern, TableInstance],
    anchor_index: int = 0,
) -> TableInstance:
    """Assemble a candidate's table instance from its pair tables.

    The anchor defaults to the canonically first feature; any other index
    yields the same rows because the surviving rows are exactly those whose
    feature pairs are all pair-table rows, a condition with no preferred
    feature.  Missing pair tables mean the clique never came from a feature
    graph over this data and are a caller bug.
    """
    feats = clique.features
    if len(feats) == 2:
        return _pair_table(clique, size2)
    anchor = feats[anchor_index]
    others = [f for f in feats if f != anchor]
    m = len(others)

    # Instances get small integer codes so the inner joins intersect plain
    # int sets instead of hashing instances per combination.
    codes: dict[DynamicInstance, int] = {}
    insts: list[DynamicInstance] = []

    anchor_partners: list[dict[DynamicInstance, set[int]]] = []
    for f in others:
        table = _pair_table(Pattern((anchor, f)), size2)
        flip = f.sort_key < anchor.sort_key
        partners: dict[DynamicInstance, set[int]] = {}
        for row in table.rows:
            a, b = (row[1], row[0]) if flip else row
            c = codes.get(b)
            if c is None:
                c = codes[b] = len(insts)
                insts.append(b)
            partners.setdefault(a, set()).add(c)
        anchor_partners.append(partners)

    common = set(anchor_partners[0])
    for partners in anchor_partners[1:]:
        common &= set(partners)

    # Adjacency between non-anchor features, restricted to instances that
    # partner the anchor at all; nothing else can appear in a row.
    adjacency: dict[tuple[int, int], dict[int, set[int]]] = {}
    for i in range(m):
        for j in range(i + 1, m):
            table = _pair_table(Pattern((others[i], others[j])), size2)
            flip = others[j].sort_key < others[i].sort_key
            related: dict[int, set[int]] = {}
            for row in table.rows:
                a, b = (row[1], row[0]) if flip else row
                ca = codes.get(a)
                cb = codes.get(b)
                if ca is not None and cb is not None:
                    related.setdefault(ca, set()).add(cb)
            adjacency[(i, j)] = related

    rows: list[tuple] = []
    chosen: list = [None] * m
    no_partners: set[int] = set()
    pos = feats.index(anchor)  # others keep canonical order with anchor cut out

    def extend(level: int, anchor_inst, allowed: list[set[int]]) -> None:
        if level == m:
            rows.append((*chosen[:pos], anchor_inst, *chosen[pos:]))
            return
        for c in allowed[level]:
            narrowed = [no_partners] * (level + 1)
            ok = True
            for j in range(level + 1, m):
                nxt = allowed[j] & adjacency[(level, j)].get(c, no_partners)
                if not nxt:
                    ok = False
                    break
                narrowed.append(nxt)
            if ok:
                chosen[level] = insts[c]
                extend(level + 1, anchor_inst, narrowed)

    for anchor_inst in sorted(common, key=lambda i: i.sort_key):
        extend(0, anchor_inst, [anchor_partners[i][anchor_inst] for i in range(m)])
    return TableInstance(clique, rows)


def _pair_table(pair: Pattern, size2: Mapping[Pattern, TableInstance]) -> TableInstance:
    try:
        return size2[pair]
    except KeyError:
        raise ValueError(f"no pair table for {pair.label}; candidate is not a clique over this data")


def early_abort_check(
    tallies: Mapping[DynamicFeature, int],
    counts: Mapping[DynamicFeature, int],
    remaining_possible: Mapping[DynamicFeature, int],
    config: MiningConfig,
) -> bool:
    """True when the candidate can no longer reach the threshold.

    For each feature, tally + remaining_possible bounds the number of its
    instances that could still participate, so the bounded ratio is an upper
    bound on the final one; aborting on it never loses a prevalent pattern.
    """
    for feature, tally in tallies.items():
        total = counts.get(feature, 0)
        if total == 0:
            return True
        bound = (tally + remaining_possible.get(feature, 0)) / total
        if not _passes_threshold(bound, config):
            return True
    return False


def _passes_threshold(value: float, config: MiningConfig) -> bool:
    if config.prevalence_comparison == "inclusive":
        return value >= config.min_prev
    return value > config.min_prev


def decompose(
    clique: FeatureClique,
    accepted: Iterable[Pattern],
    pending: Iterable[FeatureClique],
) -> list[FeatureClique]:
    """One-smaller sub-cliques of a failed candidate still worth queueing.

    Sub-cliques contained in an accepted pattern are prevalent but can never
    be maximal; ones already queued would only be duplicates.
    """
    accepted_sets = [p.feature_set for p in accepted]
    pending_set = set(pending)
    out = []
    for combo in combinations(clique.features, clique.size - 1):
        sub = Pattern(combo)
        if sub in pending_set:
            continue
        if any(sub.feature_set <= acc for acc in accepted_sets):
            continue
        out.append(sub)
    return out


class CandidateQueue:
    """Pending cliques grouped by size, processed largest level first.

    Decomposition while one level runs only ever pushes smaller cliques, so
    taking the largest pending size until the queue drains visits every
    candidate exactly once.
    """

    def __init__(self, cliques: Iterable[FeatureClique] = ()):
        self._by_size: dict[int, set[FeatureClique]] = {}
        for clique in cliques:
            self.push(clique)

    def push(self, clique: FeatureClique) -> None:
        self._by_size.setdefault(clique.size, set()).add(clique)

    def max_size(self) -> int | None:
        pending = [size for size, cliques in self._by_size.items() if cliques]
        return max(pending) if pending else None

    def pop_level(self, size: int) -> list[FeatureClique]:
        level = sorted(self._by_size.pop(size, ()), key=lambda c: c.sort_key)
        return level

    def pending_at(self, size: int) -> set[FeatureClique]:
        return self._by_size.setdefault(size, set())


@dataclass
class _Verification:
    dpi: float
    row_count: int
    ratios: dict[DynamicFeature, float]


def _verify(
    clique: FeatureClique,
    size2: Mapping[Pattern, TableInstance],
    counts: FeatureCounts,
    config: MiningConfig,
    early_abort: bool,
    stats: VerifyStats,
) -> _Verification | None:
    """Full verification; None when the early bound already rules it out."""
    if early_abort and clique.size > 2:
        anchor = clique.features[0]
        others = clique.features[1:]
        tables = [_pair_table(Pattern((anchor, f)), size2) for f in others]
        common = set(tables[0].anchors())
        for t in tables[1:]:
            common &= set(t.anchors())
        bounds = {anchor: len(common)}
        for f, t in zip(others, tables):
            bounds[f] = len({b for a in common for b in t.partners_of(a)})
        if early_abort_check({f: 0 for f in clique.features}, counts, bounds, config):
            stats.early_aborts += 1
            return None
    table = candidate_table_instance(clique, size2)
    stats.verified += 1
    ratios = {f: participation_ratio(table, f, counts) for f in clique.features}
    stats.ratio_log.append((clique, ratios))
    dpi = min(ratios.values())
    return _Verification(dpi, len(table), ratios)


def verify_all(
    cliques: Sequence[FeatureClique],
    size2: Mapping[Pattern, TableInstance],
    counts: FeatureCounts,
    config: MiningConfig,
    *,
    early_abort: bool = True,
    shared_subclique: bool = True,
    stats: VerifyStats | None = None,
) -> list[PatternResult]:
    """Largest-first verification of maximal-clique candidates.

    Returns the prevalent maximal patterns, canonically sorted.  The two
    pruning flags only skip work whose outcome is already decided, so the
    result is identical for every flag combination.
    """
    stats = stats if stats is not None else VerifyStats()
    queue = CandidateQueue(cliques)
    accepted: dict[Pattern, PatternResult] = {}
    known_failed: list[frozenset[DynamicFeature]] = []
    outcome_cache: dict[Pattern, _Verification | None] = {}

    def subsumed(pattern: Pattern) -> bool:
        return any(pattern.feature_set <= acc.feature_set for acc in accepted)

    def condemned(pattern: Pattern) -> bool:
        return any(failed <= pattern.feature_set for failed in known_failed)

    while (size := queue.max_size()) is not None:
        level = queue.pop_level(size)
        if shared_subclique and size >= 4 and len(level) >= 2:
            _check_shared_subcliques(
                level, size2, counts, config, early_abort, stats,
                known_failed, outcome_cache, subsumed,
            )
        for clique in level:
            if subsumed(clique):
                stats.subsumed_skips += 1
                continue
            verification: _Verification | None
            if shared_subclique and condemned(clique):
                stats.shared_skips += 1
                verification = None
            elif clique in outcome_cache:
                verification = outcome_cache[clique]
            else:
                verification = _verify(clique, size2, counts, config, early_abort, stats)
            if verification is not None and passes_prevalence(
                verification.dpi, verification.row_count, config
            ):
                accepted[clique] = PatternResult(
                    clique, verification.dpi, verification.row_count, True
                )
                continue
            if size > 2:
                subs = decompose(clique, accepted, queue.pending_at(size - 1))
                stats.decomposed += 1
                for sub in subs:
                    queue.push(sub)
    return sorted(accepted.values(), key=lambda r: r.pattern.sort_key)


def _check_shared_subcliques(
    level: Sequence[FeatureClique],
    size2: Mapping[Pattern, TableInstance],
    counts: FeatureCounts,
    config: MiningConfig,
    early_abort: bool,
    stats: VerifyStats,
    known_failed: list[frozenset[DynamicFeature]],
    outcome_cache: dict[Pattern, "_Verification | None"],
    subsumed,
) -> None:
    """Verify sub-cliques shared by several queued candidates, largest first.

    A failed shared sub-clique rules out every candidate containing it; a
    passing one is cached for when decomposition queues it for real.  Only
    ratios decide prevalence and those are fixed by the data, so doing or
    skipping this work cannot change any outcome.
    """
    shared: set[Pattern] = set()
    for a, b in combinations(level, 2):
        inter = a.feature_set & b.feature_set
        if len(inter) >= 3 and len(inter) < a.size and len(inter) < b.size:
            shared.add(Pattern(inter))
    for sub in sorted(shared, key=lambda p: (-p.size, p.sort_key)):
        if sub in outcome_cache or subsumed(sub):
            continue
        if any(failed <= sub.feature_set for failed in known_failed):
            continue
        stats.shared_checks += 1
        verification = _verify(sub, size2, counts, config, early_abort, stats)
        outcome_cache[sub] = verification
        if verification is None or not passes_prevalence(
            verification.dpi, verification.row_count, config
        ):
            known_failed.append(sub.feature_set)


def derive_all_prevalent(
    maximal: Iterable[Pattern],
    size2: Mapping[Pattern, TableInstance],
    counts: FeatureCounts,
    config: MiningConfig,
) -> list[PatternResult]:
    """Every prevalent pattern, derived from the maximal ones.

    Participation ratios never grow when a pattern does, so each subset of a
    prevalent maximal pattern is prevalent; enumerating subsets of size two or
    more and re-deriving each table yields the complete prevalent set.
    """
    maximal_set = set(maximal)
    results: dict[Pattern, PatternResult] = {}
    for pattern in sorted(maximal_set, key=lambda p: p.sort_key):
        for k in range(2, pattern.size + 1):
            for combo in combinations(pattern.features, k):
                sub = Pattern(combo)
                if sub in results:
                    continue
                table = candidate_table_instance(sub, size2)
                dpi = min(participation_ratio(table, f, counts) for f in sub.features)
                results[sub] = PatternResult(sub, dpi, len(table), sub in maximal_set)
    return sorted(results.values(), key=lambda r: r.pattern.sort_key)
