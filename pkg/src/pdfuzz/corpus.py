"""Labeled document corpora: the JSONL record schema and bundled prose.

A corpus file holds one JSON object per line with fields id, label
("human" or "ai"), and text.  The packaged natural_text.txt is ~320 KB of
public-domain English prose (one paragraph per line) used to train models
and to cut held-out human documents; regenerate it with
scripts/build_natural_text.py.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import ConfigError

VALID_LABELS = ("human", "ai")


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    label: str
    text: str

    def __post_init__(self):
        if self.label not in VALID_LABELS:
            raise ConfigError(f"label must be one of {VALID_LABELS}: {self.label!r}")
        if not self.text:
            raise ConfigError(f"document {self.id!r} has empty text")


def read_corpus_jsonl(path: str | Path) -> list[CorpusRecord]:
    """Load and validate a corpus file; errors carry the offending line number."""
    records: list[CorpusRecord] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                record = CorpusRecord(str(obj["id"]), obj["label"], obj["text"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ConfigError(f"{path}:{line_no}: bad corpus record: {exc}") from None
            if record.id in seen_ids:
                raise ConfigError(f"{path}:{line_no}: duplicate id {record.id!r}")
            seen_ids.add(record.id)
            records.append(record)
    return records


def write_corpus_jsonl(records: Iterable[CorpusRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {"id": rec.id, "label": rec.label, "text": rec.text},
                    sort_keys=True,
                )
                + "\n"
            )


def load_natural_text() -> str:
    """The bundled natural-language prose, paragraphs separated by newlines."""
    return (
        resources.files("pdfuzz")
        .joinpath("data/natural_text.txt")
        .read_text(encoding="cp1252")
    )
