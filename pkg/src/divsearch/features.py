"""Mutual-information scoring and per-keyword feature selection.

MI for a term pair is computed over the entity sample space:

    p(x, y) * ln(p(x, y) / (p(x) * p(y)))

with p(x) = |postings(x)| / entityCount and p(x, y) from the co-occurrence
store.  Pairs never stored co-occurring score exactly 0 and are never
selected as features; negative-MI pairs (anti-correlated) are excluded too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoIntentError
from .indexing import IndexBundle


@dataclass(frozen=True)
class FeatureEntry:
    keyword: str
    feature: str
    mi: float


@dataclass(frozen=True)
class FeatureMatrix:
    """One MI-ranked feature column per query keyword, in query order."""

    keywords: tuple[str, ...]
    columns: tuple[tuple[FeatureEntry, ...], ...]


def mutual_information(x: str, y: str, index: IndexBundle) -> float:
    """Pointwise MI weighted by joint probability; 0.0 for absent pairs."""
    if x == y:
        raise ValueError("mutual information requires two distinct terms")
    count = index.cooccur_count(x, y)
    if count == 0:
        return 0.0
    n = index.entity_count
    pxy = count / n
    px = len(index.posting(x)) / n
    py = len(index.posting(y)) / n
    return pxy * math.log(pxy / (px * py))


def top_features(keyword: str, m: int, index: IndexBundle) -> tuple[FeatureEntry, ...]:
    """The m highest-MI partners of ``keyword``, ties broken by name.

    Unknown keywords and keywords with no positive-MI partner yield an empty
    column rather than an error.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    entries: list[FeatureEntry] = []
    for a, b in index.cooccur:
        if a == keyword:
            partner = b
        elif b == keyword:
            partner = a
        else:
            continue
        mi = mutual_information(keyword, partner, index)
        if mi > 0.0:
            entries.append(FeatureEntry(keyword, partner, mi))
    entries.sort(key=lambda e: (-e.mi, e.feature))
    return tuple(entries[:m])


def build_matrix(keywords: list[str] | tuple[str, ...], m: int, index: IndexBundle) -> FeatureMatrix:
    """Assemble the n-column feature matrix for a keyword query."""
    if not keywords:
        raise ValueError("query must contain at least one keyword")
    columns = tuple(top_features(keyword, m, index) for keyword in keywords)
    if all(not column for column in columns):
        raise NoIntentError("no query keyword has any positive-MI feature")
    return FeatureMatrix(keywords=tuple(keywords), columns=columns)
