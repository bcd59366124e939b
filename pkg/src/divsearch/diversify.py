"""Intent scoring and the top-k diversification driver.

score(intent) = likelihood * |SLCA set| * novelty, where likelihood is the
product over segments of |nodeList| / |postings(feature)| and novelty is the
fresh-result fraction against the accumulated pool.  The driver evaluates
intents in generation order, admits positive scores into a bounded top-k,
and keeps the pool consistent with the currently admitted intents,
including removal of an evicted intent's attributed results.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Callable, Iterable, Sequence

from .features import build_matrix
from .indexing import IndexBundle
from .intents import IntentQuery, iter_intents
from .slca import DiversifiedSet, MergeOutcome, SlcaSet, compute_slca


@dataclass
class EvalStats:
    """Work counters; visited + pruned = total input nodes per intent."""

    nodes_visited: int = 0
    nodes_pruned: int = 0
    areas_skipped: int = 0

    def add(self, visited: int, pruned: int, skipped: int) -> None:
        self.nodes_visited += visited
        self.nodes_pruned += pruned
        self.areas_skipped += skipped


@dataclass(frozen=True)
class IntentEvaluation:
    """Everything one engine pass learns about one intent."""

    likelihood: float
    relevance: float
    dif: float
    score: float
    outcome: MergeOutcome
    visited: int
    pruned: int
    areas_skipped: int


@dataclass(frozen=True)
class ScoredIntent:
    intent: IntentQuery
    relevance: float
    dif: float
    score: float
    results: SlcaSet


@dataclass(frozen=True)
class TopK:
    k: int
    entries: tuple[ScoredIntent, ...]
    phi: DiversifiedSet


def dif(fresh: SlcaSet, phi: DiversifiedSet) -> float:
    """Novelty fraction distinctCount/unionSize of a dry-run merge."""
    return phi.preview(fresh).novelty()


def intent_likelihood(intent: IntentQuery) -> float:
    """Product of per-segment match ratios; bare segments contribute 1."""
    likelihood = 1.0
    for segment in intent.segments:
        if segment.feature is not None:
            likelihood *= len(segment.node_list) / segment.feature_list_size
    return likelihood


def relevance_prob(intent: IntentQuery) -> tuple[float, SlcaSet, float]:
    """(likelihood, SLCA set over segment node lists, likelihood * |SLCA|)."""
    likelihood = intent_likelihood(intent)
    slca = compute_slca([segment.node_list for segment in intent.segments])
    return likelihood, slca, likelihood * len(slca)


def evaluate_against_pool(intent: IntentQuery, pool: DiversifiedSet) -> IntentEvaluation:
    """Baseline evaluation: full SLCA over complete segment node lists."""
    likelihood, slca, relevance = relevance_prob(intent)
    outcome = pool.preview(slca)
    nov = outcome.novelty()
    return IntentEvaluation(
        likelihood=likelihood,
        relevance=relevance,
        dif=nov,
        score=relevance * nov,
        outcome=outcome,
        visited=sum(len(segment.node_list) for segment in intent.segments),
        pruned=0,
        areas_skipped=0,
    )


@dataclass(eq=False)
class _Entry:
    seq: int
    intent: IntentQuery
    evaluation: IntentEvaluation

    def rank_key(self) -> tuple[float, float, tuple[str, ...]]:
        return (-self.evaluation.score, -self.intent.agg_mi, self.intent.lex_key)


def run_topk(
    intents: Iterable[IntentQuery],
    k: int,
    evaluate: Callable[[IntentQuery, DiversifiedSet], IntentEvaluation],
) -> tuple[TopK, EvalStats]:
    """Shared admission loop for all three engines.

    Only intents with score > 0 are admitted.  Once full, a newcomer must
    strictly beat the worst admitted score; the evicted intent's remaining
    attributed nodes leave the pool.  The new outcome is applied before the
    eviction so its recorded replacements stay valid.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    pool = DiversifiedSet()
    entries: list[_Entry] = []
    stats = EvalStats()
    for seq, intent in enumerate(intents):
        evaluation = evaluate(intent, pool)
        stats.add(evaluation.visited, evaluation.pruned, evaluation.areas_skipped)
        if evaluation.score <= 0.0:
            continue
        if len(entries) < k:
            pool.apply(evaluation.outcome, seq)
            entries.append(_Entry(seq, intent, evaluation))
            continue
        worst = max(entries, key=_Entry.rank_key)
        if evaluation.score > worst.evaluation.score:
            entries.remove(worst)
            pool.apply(evaluation.outcome, seq)
            pool.remove_intent(worst.seq)
            entries.append(_Entry(seq, intent, evaluation))
    entries.sort(key=_Entry.rank_key)
    scored = tuple(
        ScoredIntent(
            intent=e.intent,
            relevance=e.evaluation.relevance,
            dif=e.evaluation.dif,
            score=e.evaluation.score,
            results=SlcaSet(e.evaluation.outcome.inserted),
        )
        for e in entries
    )
    return TopK(k=k, entries=scored, phi=pool), stats


def diversify_baseline(
    keywords: Sequence[str],
    k: int,
    m: int,
    index: IndexBundle,
    budget: int | None = None,
) -> tuple[TopK, EvalStats]:
    """Evaluate every generated intent against full node lists."""
    if m < 1:
        raise ValueError("m must be >= 1")
    matrix = build_matrix(list(keywords), m, index)
    stream: Iterable[IntentQuery] = iter_intents(matrix, index)
    if budget is not None:
        stream = islice(stream, budget)
    return run_topk(stream, k, evaluate_against_pool)
