"""Anchor-based pruned evaluation.

Every result already in the pool (an "anchor") splits the document range
into areas that cannot exchange SLCA results: nodes before the anchor
subtree, strict descendants, and nodes after, while ancestors of an anchor
are discarded outright.  Areas missing any segment entirely are skipped
without inspection.  Each surviving area is solved independently; filtered
per-area results are exactly the nodes the baseline merge would insert.

Results equal to an anchor or covering one never materialize from areas,
yet they count toward relevance (they are full SLCAs).  They are recovered
by scanning the only possible candidates: prefixes of the anchors.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Sequence

from .dewey import DeweyId, _trusted, subtree_bound
from .diversify import (
    EvalStats,
    IntentEvaluation,
    TopK,
    diversify_baseline,
    intent_likelihood,
    run_topk,
)
from .features import build_matrix
from .indexing import IndexBundle
from .intents import IntentQuery, iter_intents
from .slca import DiversifiedSet, MergeOutcome, compute_slca

PRE = "pre"
DES = "des"
NEXT = "next"

NodeList = tuple[DeweyId, ...]


@dataclass(frozen=True)
class _Span:
    """A contiguous slice of one segment list, minus discarded positions."""

    source: NodeList
    lo: int
    hi: int
    excluded: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return (self.hi - self.lo) - len(self.excluded)

    def nodes(self) -> NodeList:
        if not self.excluded:
            return self.source[self.lo : self.hi]
        skip = set(self.excluded)
        return tuple(self.source[i] for i in range(self.lo, self.hi) if i not in skip)


@dataclass(frozen=True)
class Area:
    """One independent evaluation region with one span per segment."""

    kind: str
    anchor: DeweyId | None
    spans: tuple[_Span, ...]

    @property
    def total_nodes(self) -> int:
        return sum(span.size for span in self.spans)

    @property
    def dead(self) -> bool:
        return any(span.size == 0 for span in self.spans)

    def lists(self) -> list[NodeList]:
        return [span.nodes() for span in self.spans]


def _split_list(
    lst: NodeList, lo: int, anchor: DeweyId, bound: DeweyId
) -> tuple[int, int, tuple[int, ...], int]:
    """Locate anchor-relative regions of lst[lo:].

    Returns (a, b, ancestor positions, equal count) with lst[lo:a] before
    the anchor, lst[a+eq:b] strict descendants, lst[b:] after the subtree.
    Proper ancestors of the anchor hide among the "before" nodes at exact
    prefix values, so each is probed directly.
    """
    a = bisect_left(lst, anchor, lo)
    b = bisect_left(lst, bound, lo)
    ancestors: list[int] = []
    for plen in range(1, len(anchor)):
        p = _trusted(tuple(anchor[:plen]))
        j = bisect_left(lst, p, lo, a)
        if j < a and lst[j] == p:
            ancestors.append(j)
    eq = 1 if a < len(lst) and lst[a] == anchor else 0
    return a, b, tuple(ancestors), eq


def partition_areas(
    lists: Sequence[NodeList], anchors: Sequence[DeweyId]
) -> tuple[list[Area], int]:
    """Split all segment lists around every anchor in document order.

    Returns the ordered candidate areas (pre, des per anchor, then the
    final tail) plus the count of discarded nodes (ancestors of or equal to
    an anchor).  If any list's remainder empties, later anchors cannot
    yield full coverage; the loop stops and the tail absorbs the rest.
    """
    areas: list[Area] = []
    discarded = 0
    cursors = [0] * len(lists)
    for anchor in anchors:
        bound = subtree_bound(anchor)
        pre_spans: list[_Span] = []
        des_spans: list[_Span] = []
        exhausted = False
        for li, lst in enumerate(lists):
            lo = cursors[li]
            a, b, anc, eq = _split_list(lst, lo, anchor, bound)
            discarded += len(anc) + eq
            pre_spans.append(_Span(lst, lo, a, anc))
            des_spans.append(_Span(lst, a + eq, b))
            cursors[li] = b
            if b >= len(lst):
                exhausted = True
        areas.append(Area(PRE, anchor, tuple(pre_spans)))
        areas.append(Area(DES, anchor, tuple(des_spans)))
        if exhausted:
            break
    tail = tuple(_Span(lst, cursors[li], len(lst)) for li, lst in enumerate(lists))
    areas.append(Area(NEXT, None, tail))
    return areas, discarded


@dataclass(frozen=True)
class AreaPartition:
    """Four-way split of segment lists around a single anchor."""

    anchor: DeweyId
    pre: tuple[NodeList, ...]
    des: tuple[NodeList, ...]
    next: tuple[NodeList, ...]
    anc_count: int


def partition_by_anchor(lists: Sequence[NodeList], anchor: DeweyId) -> AreaPartition:
    bound = subtree_bound(anchor)
    pre: list[NodeList] = []
    des: list[NodeList] = []
    nxt: list[NodeList] = []
    anc_count = 0
    for lst in lists:
        a, b, anc, eq = _split_list(lst, 0, anchor, bound)
        anc_count += len(anc) + eq
        pre.append(_Span(lst, 0, a, anc).nodes())
        des.append(lst[a + eq : b])
        nxt.append(lst[b:])
    return AreaPartition(anchor, tuple(pre), tuple(des), tuple(nxt), anc_count)


def prune_empty_areas(areas: Iterable[Area]) -> tuple[list[Area], int, int]:
    """Drop areas where any segment is empty; no SLCA can cover them.

    Returns (surviving areas, nodes pruned, areas skipped).
    """
    kept: list[Area] = []
    pruned_nodes = 0
    skipped = 0
    for area in areas:
        if area.dead:
            pruned_nodes += area.total_nodes
            skipped += 1
        else:
            kept.append(area)
    return kept, pruned_nodes, skipped


def contains_anchor(node: DeweyId, anchors: Sequence[DeweyId]) -> bool:
    """True iff node is an ancestor of or equal to some anchor."""
    i = bisect_left(anchors, node)
    return i < len(anchors) and anchors[i] < subtree_bound(node)


def area_results(area: Area, anchors: Sequence[DeweyId]) -> NodeList:
    """Area-local SLCAs restricted to nodes the pool merge would insert.

    Descendant-area results can only refine or equal their anchor; the
    equal case is a duplicate and is dropped here (it still counts toward
    relevance via the prefix scan).  Results of other areas may escape the
    area toward the root; any that reach an anchor would be merged away,
    so they are dropped likewise.
    """
    results = compute_slca(area.lists())
    if area.kind == DES:
        return tuple(r for r in results if r != area.anchor)
    return tuple(r for r in results if not contains_anchor(r, anchors))


def covered_anchor_ancestors(
    lists: Sequence[NodeList], anchors: Sequence[DeweyId], new_nodes: Sequence[DeweyId]
) -> int:
    """Count full SLCAs that are ancestors of or equal to an anchor.

    Any such result is a prefix of some anchor, so only those candidates
    need testing: a candidate counts iff its subtree touches every segment
    list (it covers) and no covering candidate or fresh result lies
    strictly inside its subtree (it is minimal).
    """
    candidates: set[DeweyId] = set()
    for anchor in anchors:
        for plen in range(1, len(anchor) + 1):
            candidates.add(_trusted(tuple(anchor[:plen])))
    covered: list[DeweyId] = []
    for p in sorted(candidates):
        bound = subtree_bound(p)
        for lst in lists:
            i = bisect_left(lst, p)
            if i >= len(lst) or not lst[i] < bound:
                break
        else:
            covered.append(p)
    count = 0
    for idx, p in enumerate(covered):
        bound = subtree_bound(p)
        if idx + 1 < len(covered) and covered[idx + 1] < bound:
            continue
        j = bisect_left(new_nodes, p)
        if j < len(new_nodes) and new_nodes[j] < bound:
            continue
        count += 1
    return count


def finish_evaluation(
    intent: IntentQuery,
    anchors: Sequence[DeweyId],
    kept: Sequence[Area],
    outputs: Sequence[NodeList],
    visited: int,
    pruned: int,
    skipped: int,
) -> IntentEvaluation:
    """Assemble scores and the merge outcome from per-area results.

    Area order is document order, per-area outputs are sorted, and filtered
    results never cross area bounds, so plain concatenation is sorted.
    """
    inserted: list[DeweyId] = []
    removed: list[DeweyId] = []
    for area, results in zip(kept, outputs):
        if not results:
            continue
        if area.kind == DES:
            removed.append(area.anchor)
        inserted.extend(results)
    lists = [segment.node_list for segment in intent.segments]
    likelihood = intent_likelihood(intent)
    full_count = len(inserted) + covered_anchor_ancestors(lists, anchors, inserted)
    relevance = likelihood * full_count
    union_size = len(anchors) + len(inserted) - len(removed)
    outcome = MergeOutcome(
        inserted=tuple(inserted),
        removed=tuple(removed),
        distinct_count=len(inserted),
        union_size=union_size,
    )
    nov = outcome.novelty()
    return IntentEvaluation(
        likelihood=likelihood,
        relevance=relevance,
        dif=nov,
        score=relevance * nov,
        outcome=outcome,
        visited=visited,
        pruned=pruned,
        areas_skipped=skipped,
    )


def evaluate_anchored(intent: IntentQuery, pool: DiversifiedSet) -> IntentEvaluation:
    """Evaluate one intent against the pool using anchor partitioning."""
    lists = [segment.node_list for segment in intent.segments]
    anchors = pool.snapshot()
    areas, discarded = partition_areas(lists, anchors)
    kept, pruned_nodes, skipped = prune_empty_areas(areas)
    outputs = [area_results(area, anchors) for area in kept]
    visited = sum(area.total_nodes for area in kept)
    return finish_evaluation(
        intent, anchors, kept, outputs, visited, discarded + pruned_nodes, skipped
    )


def diversify_anchored(
    keywords: Sequence[str],
    k: int,
    m: int,
    index: IndexBundle,
    budget: int | None = None,
) -> tuple[TopK, EvalStats]:
    """Anchor-pruned engine; output equals :func:`diversify_baseline`."""
    if m < 1:
        raise ValueError("m must be >= 1")
    matrix = build_matrix(list(keywords), m, index)
    stream: Iterable[IntentQuery] = iter_intents(matrix, index)
    if budget is not None:
        stream = islice(stream, budget)
    return run_topk(stream, k, evaluate_anchored)


__all__ = [
    "Area",
    "AreaPartition",
    "area_results",
    "contains_anchor",
    "covered_anchor_ancestors",
    "diversify_anchored",
    "diversify_baseline",
    "evaluate_anchored",
    "finish_evaluation",
    "partition_areas",
    "partition_by_anchor",
    "prune_empty_areas",
]
