"""Intent generation: enumerate feature combinations in best-first order.

An intent pairs every query keyword with one of its matrix features; the
stream is ordered by aggregated MI descending, ties resolved by the chosen
feature names ascending column by column.  A keyword whose feature column is
empty degrades to a bare segment (its full posting list, likelihood factor
1) so that multi-keyword queries stay usable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator, Sequence

from .dewey import DeweyId
from .features import FeatureEntry, FeatureMatrix
from .indexing import IndexBundle


@dataclass(frozen=True)
class Segment:
    """One keyword with its chosen context; feature None = bare keyword."""

    keyword: str
    feature: str | None
    node_list: tuple[DeweyId, ...]
    feature_list_size: int


@dataclass(frozen=True)
class IntentQuery:
    segments: tuple[Segment, ...]
    agg_mi: float

    @property
    def lex_key(self) -> tuple[str, ...]:
        """Chosen feature names, for deterministic tie-breaking."""
        return tuple(s.feature or "" for s in self.segments)

    def segment_keys(self) -> tuple[tuple[str, str | None], ...]:
        return tuple((s.keyword, s.feature) for s in self.segments)

    def label(self) -> str:
        return " ".join(
            f"{s.keyword}:{s.feature}" if s.feature else s.keyword for s in self.segments
        )


def segment_node_list(
    keyword: str, feature: str, index: IndexBundle
) -> tuple[DeweyId, ...]:
    """Entities containing both terms: sorted postings intersection."""
    a = index.posting(keyword)
    b = index.posting(feature)
    if len(a) > len(b):
        a, b = b, a
    out: list[DeweyId] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return tuple(out)


def resolve_segment(
    keyword: str, entry: FeatureEntry | None, index: IndexBundle
) -> Segment:
    if entry is None:
        nodes = index.posting(keyword)
        return Segment(keyword, None, nodes, len(nodes))
    return Segment(
        keyword,
        entry.feature,
        segment_node_list(keyword, entry.feature, index),
        len(index.posting(entry.feature)),
    )


def iter_combinations(
    matrix: FeatureMatrix,
) -> Iterator[tuple[tuple[FeatureEntry | None, ...], float]]:
    """Yield every feature combination once, best aggregated MI first.

    Best-first frontier walk over the index lattice: each popped state
    pushes its per-column successors.  The heap key (-aggMi, names) also
    realizes the tie rule because an equal-MI successor step can only grow
    the name tuple.
    """
    active = [i for i, column in enumerate(matrix.columns) if column]
    if not active:
        return
    width = len(matrix.columns)

    def expand(state: tuple[int, ...]) -> tuple[tuple[FeatureEntry | None, ...], float]:
        chosen: list[FeatureEntry | None] = [None] * width
        agg = 0.0
        for pos, col in zip(state, active):
            entry = matrix.columns[col][pos]
            chosen[col] = entry
            agg += entry.mi
        return tuple(chosen), agg

    def key(state: tuple[int, ...]) -> tuple[float, tuple[str, ...]]:
        agg = 0.0
        names: list[str] = []
        for pos, col in zip(state, active):
            entry = matrix.columns[col][pos]
            agg += entry.mi
            names.append(entry.feature)
        return -agg, tuple(names)

    start = (0,) * len(active)
    heap = [(*key(start), start)]
    seen = {start}
    while heap:
        neg_agg, _, state = heapq.heappop(heap)
        chosen, agg = expand(state)
        yield chosen, agg
        for slot, col in enumerate(active):
            if state[slot] + 1 < len(matrix.columns[col]):
                succ = state[:slot] + (state[slot] + 1,) + state[slot + 1 :]
                if succ not in seen:
                    seen.add(succ)
                    heapq.heappush(heap, (*key(succ), succ))


def build_intent(
    keywords: Sequence[str],
    chosen: Sequence[FeatureEntry | None],
    agg: float,
    index: IndexBundle,
) -> IntentQuery:
    segments = tuple(
        resolve_segment(keyword, entry, index) for keyword, entry in zip(keywords, chosen)
    )
    return IntentQuery(segments=segments, agg_mi=agg)


def iter_intents(matrix: FeatureMatrix, index: IndexBundle) -> Iterator[IntentQuery]:
    """Resolved intents in generation order."""
    for chosen, agg in iter_combinations(matrix):
        yield build_intent(matrix.keywords, chosen, agg, index)
