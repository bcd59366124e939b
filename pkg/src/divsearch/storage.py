"""Index persistence: a small directory of JSON/JSONL files.

Layout (UTF-8, LF endings, fixed key order per line):

* ``manifest.json``   {"version":1,"entityCount":N,"window":W,"entityLabels":[...],"logBase":"e"}
* ``entities.jsonl``  one {"dewey","label"} per entity, document order
* ``postings.jsonl``  one {"term","entities"} per term, terms sorted
* ``cooccur.jsonl``   one {"a","b","count"} per pair, count desc then (a,b) asc

``load_index(save_index(b)) == b`` holds field for field; every writer choice
below (sorting, separators) exists to keep the bytes canonical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

from .dewey import DeweyId
from .errors import IndexFormatError, IndexVersionError
from .indexing import EntityInfo, IndexBundle, IndexConfig

FORMAT_VERSION = 1

MANIFEST_FILE = "manifest.json"
ENTITIES_FILE = "entities.jsonl"
POSTINGS_FILE = "postings.jsonl"
COOCCUR_FILE = "cooccur.jsonl"


def _dump(obj: Any) -> str:
    # separators chosen for byte-stable, compact output
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _write_lines(path: Path, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def save_index(bundle: IndexBundle, directory: str | Path) -> None:
    """Write the four index files, creating the directory if needed."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    manifest = {
        "version": FORMAT_VERSION,
        "entityCount": bundle.entity_count,
        "window": bundle.config.window,
        "entityLabels": sorted(bundle.config.entity_labels),
        "logBase": bundle.config.log_base,
    }
    _write_lines(directory / MANIFEST_FILE, [_dump(manifest)])

    _write_lines(
        directory / ENTITIES_FILE,
        [_dump({"dewey": str(e.dewey), "label": e.label}) for e in bundle.entities],
    )

    _write_lines(
        directory / POSTINGS_FILE,
        [
            _dump({"term": term, "entities": [str(d) for d in bundle.postings[term]]})
            for term in sorted(bundle.postings)
        ],
    )

    triplets = sorted(bundle.cooccur.items(), key=lambda kv: (-kv[1], kv[0]))
    _write_lines(
        directory / COOCCUR_FILE,
        [_dump({"a": a, "b": b, "count": count}) for (a, b), count in triplets],
    )


def _iter_jsonl(path: Path) -> Iterator[tuple[int, Any]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                raw = raw.rstrip("\n")
                if not raw:
                    raise IndexFormatError("blank line", path=path.name, line=lineno)
                try:
                    yield lineno, json.loads(raw)
                except json.JSONDecodeError as exc:
                    raise IndexFormatError(
                        f"invalid JSON: {exc.msg}", path=path.name, line=lineno
                    ) from exc
    except OSError as exc:
        raise IndexFormatError(f"cannot read index file: {exc}", path=path.name) from exc


def _fail(path: Path, lineno: int, message: str) -> IndexFormatError:
    return IndexFormatError(message, path=path.name, line=lineno)


def _parse_dewey(text: Any, path: Path, lineno: int) -> DeweyId:
    if not isinstance(text, str):
        raise _fail(path, lineno, f"expected Dewey string, got {text!r}")
    try:
        return DeweyId.parse(text)
    except ValueError as exc:
        raise _fail(path, lineno, str(exc)) from exc


def _load_manifest(directory: Path) -> dict[str, Any]:
    path = directory / MANIFEST_FILE
    rows = list(_iter_jsonl(path))
    if len(rows) != 1 or not isinstance(rows[0][1], dict):
        raise _fail(path, len(rows), "manifest must be a single JSON object")
    manifest = rows[0][1]
    version = manifest.get("version")
    if version != FORMAT_VERSION:
        raise IndexVersionError(
            f"unsupported index version {version!r} (expected {FORMAT_VERSION})",
            path=path.name,
            line=1,
        )
    labels = manifest.get("entityLabels")
    if (
        not isinstance(manifest.get("entityCount"), int)
        or manifest["entityCount"] < 1
        or not isinstance(manifest.get("window"), int)
        or manifest["window"] < 1
        or not isinstance(labels, list)
        or not labels
        or not all(isinstance(l, str) for l in labels)
        or manifest.get("logBase") != "e"
    ):
        raise _fail(path, 1, "manifest fields missing or invalid")
    return manifest


def load_index(directory: str | Path) -> IndexBundle:
    """Read and validate an index directory written by :func:`save_index`."""
    directory = Path(directory)
    manifest = _load_manifest(directory)

    path = directory / ENTITIES_FILE
    entities: list[EntityInfo] = []
    known: set[DeweyId] = set()
    for lineno, row in _iter_jsonl(path):
        if not isinstance(row, dict) or not isinstance(row.get("label"), str):
            raise _fail(path, lineno, "expected {dewey,label} object")
        dewey = _parse_dewey(row.get("dewey"), path, lineno)
        if entities and dewey <= entities[-1].dewey:
            raise _fail(path, lineno, "entities not in document order")
        entities.append(EntityInfo(dewey, row["label"]))
        known.add(dewey)
    if len(entities) != manifest["entityCount"]:
        raise _fail(path, len(entities), "entity count does not match manifest")

    path = directory / POSTINGS_FILE
    postings: dict[str, tuple[DeweyId, ...]] = {}
    last_term: str | None = None
    for lineno, row in _iter_jsonl(path):
        if (
            not isinstance(row, dict)
            or not isinstance(row.get("term"), str)
            or not isinstance(row.get("entities"), list)
            or not row["entities"]
        ):
            raise _fail(path, lineno, "expected {term,entities} object")
        term = row["term"]
        if last_term is not None and term <= last_term:
            raise _fail(path, lineno, "terms not sorted")
        last_term = term
        ids = [_parse_dewey(text, path, lineno) for text in row["entities"]]
        for prev, cur in zip(ids, ids[1:]):
            if cur <= prev:
                raise _fail(path, lineno, f"posting list for {term!r} not sorted")
        for dewey in ids:
            if dewey not in known:
                raise _fail(path, lineno, f"posting references unknown entity {dewey}")
        postings[term] = tuple(ids)

    path = directory / COOCCUR_FILE
    cooccur: dict[tuple[str, str], int] = {}
    last_key: tuple[int, str, str] | None = None
    for lineno, row in _iter_jsonl(path):
        if (
            not isinstance(row, dict)
            or not isinstance(row.get("a"), str)
            or not isinstance(row.get("b"), str)
            or not isinstance(row.get("count"), int)
        ):
            raise _fail(path, lineno, "expected {a,b,count} object")
        a, b, count = row["a"], row["b"], row["count"]
        if a >= b:
            raise _fail(path, lineno, "pair not in canonical order (a < b)")
        if count < 1:
            raise _fail(path, lineno, "count must be >= 1")
        if a not in postings or b not in postings:
            raise _fail(path, lineno, "pair references unknown term")
        key = (-count, a, b)
        if last_key is not None and key <= last_key:
            raise _fail(path, lineno, "triplets not sorted by count desc, pair asc")
        last_key = key
        cooccur[(a, b)] = count

    config = IndexConfig(
        entity_labels=frozenset(manifest["entityLabels"]),
        window=manifest["window"],
        stopwords=frozenset(),
        log_base=manifest["logBase"],
    )
    return IndexBundle(
        entities=tuple(entities), postings=postings, cooccur=cooccur, config=config
    )
