"""End-to-end acceptance gate.

Each test prints one PASS/FAIL line (visible with or without -s) and then
asserts, so a red run still reports every criterion it reached.
"""

import math
import random
import subprocess
import sys
import time
from itertools import combinations, product

import pytest

from conftest import GOLDEN_INDEX_DIR
from divsearch.anchors import diversify_anchored
from divsearch.diversify import dif, diversify_baseline
from divsearch.errors import NoIntentError
from divsearch.features import FeatureEntry, FeatureMatrix, mutual_information
from divsearch.indexing import IndexConfig, build_index, parse_corpus
from divsearch.intents import iter_combinations
from divsearch.parallel import diversify_parallel
from divsearch.slca import DiversifiedSet, SlcaSet, compute_slca, merge_distinct
from divsearch.storage import load_index, save_index
from helpers import (
    brute_cooccur,
    ids,
    random_antichain,
    random_corpus_xml,
    random_lists,
    random_tree,
    slca_oracle,
)


def report(capsys, name: str, ok: bool, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    with capsys.disabled():
        print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"{name}{suffix}"


@pytest.fixture(scope="session")
def corpus_suite():
    """500 seeded corpora with parsed records, index, and a 2-3 term query."""
    rng = random.Random(20240817)
    config = IndexConfig(entity_labels=frozenset({"item"}))
    suite = []
    for _ in range(500):
        xml = random_corpus_xml(rng, max_entities=40, vocab_size=rng.randint(6, 30))
        records = parse_corpus(xml, config)
        index = build_index(records, config)
        terms = sorted(index.postings)
        query = rng.sample(terms, min(rng.choice((2, 3)), len(terms)))
        suite.append((records, index, query))
    return suite


def test_01_slca_oracle_equivalence(capsys):
    rng = random.Random(101)
    started = time.perf_counter()
    checked = 0
    for _ in range(1000):
        tree = random_tree(rng, 200)
        lists = random_lists(rng, tree)
        assert compute_slca(lists).nodes == slca_oracle(tree, lists)
        checked += 1
    elapsed = time.perf_counter() - started
    report(
        capsys,
        "slca-oracle-equivalence",
        checked == 1000 and elapsed < 30.0,
        f"{checked} trees in {elapsed:.1f}s",
    )


def entry_signature(topk):
    return [(e.intent.segment_keys(), e.results.nodes) for e in topk.entries]


def test_02_engine_equivalence(capsys, corpus_suite):
    mk_pairs = list(product((3, 5), (1, 3, 5)))
    worker_counts = (1, 2, 3, 6)
    started = time.perf_counter()
    compared = skipped = 0
    for i, (_, index, query) in enumerate(corpus_suite):
        m, k = mk_pairs[i % len(mk_pairs)]
        try:
            base, _ = diversify_baseline(query, k, m, index)
        except NoIntentError:
            for engine in (diversify_anchored, diversify_parallel):
                with pytest.raises(NoIntentError):
                    engine(query, k, m, index)
            skipped += 1
            continue
        runs = [diversify_anchored(query, k, m, index)[0]]
        runs += [
            diversify_parallel(query, k, m, index, workers=w)[0] for w in worker_counts
        ]
        for other in runs:
            assert entry_signature(other) == entry_signature(base)
            for got, want in zip(other.entries, base.entries):
                assert abs(got.score - want.score) <= 1e-12
            assert other.phi == base.phi
        compared += 1
    elapsed = time.perf_counter() - started
    report(
        capsys,
        "engine-equivalence",
        compared + skipped == 500 and elapsed < 120.0,
        f"{compared} corpora agree, {skipped} without intents, {elapsed:.1f}s",
    )


def test_03_mutual_information_oracle(capsys, corpus_suite):
    pairs_checked = 0
    worst = 0.0
    for records, index, _ in corpus_suite:
        n = len(records)
        present: dict[str, int] = {}
        for record in records:
            for term in {t for t, _ in record.tokens}:
                present[term] = present.get(term, 0) + 1
        joint = brute_cooccur(records, index.config.window)
        for (a, b), count in index.cooccur.items():
            assert joint.get((a, b)) == count
            pxy = count / n
            expected = pxy * math.log(pxy / ((present[a] / n) * (present[b] / n)))
            got = mutual_information(a, b, index)
            worst = max(worst, abs(got - expected))
            assert abs(got - expected) <= 1e-12
            assert mutual_information(b, a, index) == got
            pairs_checked += 1
    report(
        capsys,
        "mutual-information-oracle",
        pairs_checked > 0,
        f"{pairs_checked} pairs, max error {worst:.2e}",
    )


def test_04_dif_boundary_suite(capsys):
    phi = DiversifiedSet()
    phi.merge(ids("1.2"), 0)
    boundary = (
        dif(SlcaSet(ids("1.2")), phi) == 0.0
        and dif(SlcaSet(ids("1.3")), phi) == 0.5
        and dif(SlcaSet(ids("1.2.1")), phi) == 1.0
    )
    assert boundary
    rng = random.Random(104)
    for _ in range(1000):
        base = random_antichain(rng)
        fresh = SlcaSet(random_antichain(rng))
        probe = DiversifiedSet()
        probe.merge(base, 0)
        value = dif(fresh, probe)
        merged = DiversifiedSet()
        merged.merge(base, 0)
        _, distinct, union = merge_distinct(merged, fresh, 1)
        assert value == (distinct / union if union else 0.0)
    report(capsys, "dif-boundary-suite", True, "3 boundary cases + 1000 random pairs")


HUBS = [f"hub{i}" for i in range(8)]
CTX = [f"ctx{i:02d}" for i in range(40)]


def skewed_corpus_xml(rng: random.Random, sections: int = 120) -> bytes:
    """~10^4 entities; each hub term favors its own 5-word topic slice."""
    hub_weights = [1.0 / (i + 1) for i in range(len(HUBS))]
    parts = ["<doc>"]
    for _ in range(sections):
        parts.append("<sec>")
        for _ in range(rng.randint(70, 100)):
            hubs = rng.choices(HUBS, weights=hub_weights, k=rng.randint(1, 2))
            words = list(dict.fromkeys(hubs))
            for hub in words[:]:
                slice_lo = HUBS.index(hub) * 5
                words += rng.choices(CTX[slice_lo : slice_lo + 5], k=rng.randint(2, 3))
            if rng.random() < 0.3:
                words.append(rng.choice(CTX))
            rng.shuffle(words)
            parts.append(f"<item>{' '.join(words)}</item>")
        parts.append("</sec>")
    parts.append("</doc>")
    return "".join(parts).encode()


def test_05_pruning_effectiveness(capsys):
    rng = random.Random(20250804)
    config = IndexConfig(entity_labels=frozenset({"item"}))
    index = build_index(parse_corpus(skewed_corpus_xml(rng), config), config)
    assert index.entity_count >= 10_000
    queries = list(combinations(HUBS, 2))[:20]
    strict = 0
    total_base = total_anchor = 0
    for pair in queries:
        _, base = diversify_baseline(list(pair), 5, 5, index)
        _, anchor = diversify_anchored(list(pair), 5, 5, index)
        assert anchor.nodes_visited <= base.nodes_visited
        strict += anchor.nodes_visited < base.nodes_visited
        total_base += base.nodes_visited
        total_anchor += anchor.nodes_visited
    ratio = total_anchor / total_base
    report(
        capsys,
        "pruning-effectiveness",
        strict >= 16,
        f"strictly fewer on {strict}/20 queries, visited ratio {ratio:.3f}",
    )


def test_06_enumeration_contract(capsys):
    rng = random.Random(106)
    columns = []
    for kw in ("alpha", "beta"):
        scores = sorted((rng.random() for _ in range(20)), reverse=True)
        columns.append(
            tuple(FeatureEntry(kw, f"{kw}{i:02d}", mi) for i, mi in enumerate(scores))
        )
    matrix = FeatureMatrix(("alpha", "beta"), tuple(columns))
    emitted = list(iter_combinations(matrix))
    names = [tuple(e.feature for e in chosen) for chosen, _ in emitted]
    aggs = [agg for _, agg in emitted]
    ok = (
        len(emitted) == 400
        and len(set(names)) == 400
        and all(aggs[i] >= aggs[i + 1] for i in range(len(aggs) - 1))
    )
    report(capsys, "enumeration-contract", ok, f"{len(emitted)} combinations, sorted")


def test_07_index_round_trip(capsys, toy_index, tmp_path):
    rng = random.Random(107)
    config = IndexConfig(entity_labels=frozenset({"item"}))
    for i in range(50):
        index = build_index(parse_corpus(random_corpus_xml(rng), config), config)
        target = tmp_path / f"case{i}"
        save_index(index, target)
        loaded = load_index(target)
        assert loaded.entities == index.entities
        assert loaded.postings == index.postings
        assert loaded.cooccur == index.cooccur
    golden_dir = tmp_path / "golden"
    save_index(toy_index, golden_dir)
    golden_ok = all(
        (golden_dir / name).read_bytes() == (GOLDEN_INDEX_DIR / name).read_bytes()
        for name in ("manifest.json", "entities.jsonl", "postings.jsonl", "cooccur.jsonl")
    )
    report(
        capsys,
        "index-round-trip",
        golden_ok,
        "50 random round-trips + golden bytes",
    )


def test_08_report_determinism(capsys):
    outputs = set()
    runs = 0
    for workers in (1, 6):
        for _ in range(5):
            proc = subprocess.run(
                [
                    sys.executable, "-m", "divsearch", "search",
                    "--index", str(GOLDEN_INDEX_DIR),
                    "--query", "database query",
                    "--k", "4", "--m", "4",
                    "--algo", "parallel", "--workers", str(workers),
                ],
                capture_output=True,
            )
            assert proc.returncode == 0
            outputs.add(proc.stdout)
            runs += 1
    report(
        capsys,
        "report-determinism",
        len(outputs) == 1 and runs == 10,
        "identical bytes over 5 runs x workers {1,6}",
    )
