"""Acceptance suite: every criterion at its stated tolerance, one
pass/fail line each (run with `pytest tests/test_acceptance.py -v -s`).
"""

from __future__ import annotations

import random
import statistics
import time
from collections import Counter
from dataclasses import dataclass

import pytest

from pdfuzz import (
    CharLevel,
    ChunkLevel,
    DocumentBlueprint,
    FontSpec,
    GlyphPlacement,
    LayoutConfig,
    PageGeometry,
    attack_layout,
    audit_order,
    calibrate_threshold,
    evaluate_corpus,
    extract_text,
    interpret,
    layout_text,
    make_permutation,
    ops_from_placements,
    parse_content_stream,
    parse_document,
    reference_sequence,
    serialize,
    synthesize_corpus,
)
from pdfuzz.fidelity import normalized_kendall_tau, visual_equivalence
from pdfuzz.pipeline import blueprint_from_stream_order


def criterion(name: str, ok: bool, detail: str = "") -> None:
    line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


@dataclass
class NormalDoc:
    layout: object
    reference: str
    extracted_text: str
    glyphs: list
    char_counts: Counter


@pytest.fixture(scope="module")
def normal_docs(essays):
    config = LayoutConfig()
    docs = []
    t0 = time.monotonic()
    for text in essays:
        result = layout_text(text, config)
        pdf = serialize(blueprint_from_stream_order(result.placements, result))
        extraction = extract_text(pdf)
        docs.append(
            NormalDoc(
                layout=result,
                reference=reference_sequence(result),
                extracted_text=extraction.text,
                glyphs=extraction.glyphs,
                char_counts=Counter(extraction.text),
            )
        )
    elapsed = time.monotonic() - t0
    return docs, elapsed


@pytest.fixture(scope="module")
def fidelity_outcomes(normal_docs):
    docs, _ = normal_docs
    visual_ok = 0
    multiset_ok = 0
    total = 0
    t0 = time.monotonic()
    for strategy_cls in (CharLevel, ChunkLevel):
        for seed in range(10):
            for doc in docs:
                attacked_pdf, _ = attack_layout(doc.layout, strategy_cls(seed))
                extraction = extract_text(attacked_pdf)
                report = visual_equivalence(doc.glyphs, extraction.glyphs, eps=0.005)
                visual_ok += report.visually_equal
                multiset_ok += Counter(extraction.text) == doc.char_counts
                total += 1
    elapsed = time.monotonic() - t0
    return {"visual": visual_ok, "multiset": multiset_ok, "total": total,
            "elapsed": elapsed}


@pytest.fixture(scope="module")
def evasion_bundle(natural_text):
    t0 = time.monotonic()
    model, calibration, records = synthesize_corpus(natural_text, seed=0)
    config = calibrate_threshold(model, calibration)
    report = evaluate_corpus(model, config, records, CharLevel(seed=1000))
    return report, config, time.monotonic() - t0


def test_round_trip_extraction(normal_docs, essays):
    docs, elapsed = normal_docs
    lengths = sorted(len(e) for e in essays)
    assert len(docs) == 100 and lengths[0] == 200 and lengths[-1] == 5000
    exact = sum(doc.extracted_text == doc.reference for doc in docs)
    criterion(
        "round-trip extraction",
        exact == 100 and elapsed < 30.0,
        f"{exact}/100 exact, {elapsed:.1f}s < 30s",
    )


def test_visual_fidelity(fidelity_outcomes):
    r = fidelity_outcomes
    criterion(
        "visual fidelity",
        r["visual"] == r["total"] == 2000 and r["elapsed"] < 120.0,
        f"{r['visual']}/{r['total']} equal at eps=0.005, {r['elapsed']:.1f}s < 120s",
    )


def test_content_preservation(fidelity_outcomes):
    r = fidelity_outcomes
    criterion(
        "content preservation",
        r["multiset"] == r["total"] == 2000,
        f"{r['multiset']}/{r['total']} multisets equal",
    )


def brute_force_tau(mapping) -> float:
    n = len(mapping)
    discordant = sum(
        mapping[i] > mapping[j] for i in range(n) for j in range(i + 1, n)
    )
    return discordant / (n * (n - 1) // 2)


def replay_chunks(strategy: ChunkLevel, n: int) -> list[range]:
    rng = random.Random(strategy.seed)
    span = strategy.max_chunk - strategy.min_chunk + 1
    chunks, pos = [], 0
    while pos < n:
        length = strategy.min_chunk + min(int(rng.random() * span), span - 1)
        chunks.append(range(pos, min(pos + length, n)))
        pos += length
    return chunks


def test_scramble_strength():
    n = 1000
    taus = [
        normalized_kendall_tau(make_permutation(CharLevel(seed), n).mapping)
        for seed in range(100)
    ]
    mean_tau = statistics.mean(taus)
    # cross-check the pair counter against brute force on one seed
    assert normalized_kendall_tau(
        make_permutation(CharLevel(0), 200).mapping
    ) == pytest.approx(brute_force_tau(make_permutation(CharLevel(0), 200).mapping))

    chunk_ok = 0
    for seed in range(100):
        strategy = ChunkLevel(seed)
        mapping = make_permutation(strategy, n).mapping
        chunks = replay_chunks(strategy, n)
        lengths_ok = all(8 <= len(c) <= 15 for c in chunks[:-1]) and len(chunks[-1]) <= 15
        positions_ok = all(
            [mapping.index(i) for i in chunk]
            == list(range(mapping.index(chunk[0]), mapping.index(chunk[0]) + len(chunk)))
            for chunk in chunks
        )
        chunk_ok += lengths_ok and positions_ok
    criterion(
        "scramble strength",
        0.45 <= mean_tau <= 0.55 and chunk_ok == 100,
        f"char mean tau {mean_tau:.4f} in [0.45,0.55]; chunk order+lengths {chunk_ok}/100",
    )


def test_detector_evasion(evasion_bundle):
    report, config, elapsed = evasion_bundle
    ok = (
        config.calibration_accuracy >= 0.90
        and report.normal.accuracy >= 0.90
        and report.normal.f1_ai >= 0.90
        and report.attacked.f1_ai <= 0.05
        and report.attacked.tpr_at_1pct_fpr <= 0.05
        and elapsed < 300.0
    )
    criterion(
        "detector evasion",
        ok,
        f"calibration acc={config.calibration_accuracy:.3f}; "
        f"normal acc={report.normal.accuracy:.3f} f1={report.normal.f1_ai:.3f}; "
        f"attacked f1={report.attacked.f1_ai:.3f} "
        f"tpr@1%fpr={report.attacked.tpr_at_1pct_fpr:.3f}; {elapsed:.0f}s < 300s",
    )


def test_perplexity_divergence(evasion_bundle):
    report, _, _ = evasion_bundle
    ai_docs = [d for d in report.per_doc if d.label == "ai"]
    diverged = sum(d.ppl_attacked > d.ppl_normal for d in ai_docs)
    criterion(
        "perplexity divergence",
        len(ai_docs) == 200 and diverged >= 0.95 * len(ai_docs),
        f"{diverged}/{len(ai_docs)} AI docs score higher after attack",
    )


def test_audit_separation(normal_docs):
    docs, _ = normal_docs
    clean = sum(audit_order(doc.glyphs).verdict == "clean" for doc in docs)
    manipulated = 0
    for i, doc in enumerate(docs):
        assert len(doc.glyphs) >= 100
        attacked_pdf, _ = attack_layout(doc.layout, CharLevel(seed=10_000 + i))
        verdict = audit_order(extract_text(attacked_pdf).glyphs).verdict
        manipulated += verdict == "manipulated"
    criterion(
        "audit separation",
        clean == 100 and manipulated >= 99,
        f"clean {clean}/100 normal; manipulated {manipulated}/100 char-attacked",
    )


def test_serializer_parser_oracle():
    rng = random.Random(2718)
    font = FontSpec()
    geometry = PageGeometry()
    chars = "abcdefgh XYZ()\\%<>[]/#éü.,!?0123"
    checked = 0
    for _ in range(1000):
        n_pages = rng.randint(1, 2)
        font_size = rng.choice([8.0, 10.0, 12.0])
        pages = []
        all_placements = []
        for page in range(n_pages):
            placements = []
            for k in range(rng.randint(0, 40)):
                placements.append(
                    GlyphPlacement(
                        char=rng.choice(chars),
                        x=round(72 + rng.randint(0, 4600) / 10.0, 2),
                        y=round(72 + rng.randint(0, 6480) / 10.0, 2),
                        page=page,
                        reading_index=len(all_placements),
                    )
                )
                all_placements.append(placements[-1])
            pages.append(tuple(ops_from_placements(placements, font, font_size)))
        blueprint = DocumentBlueprint(geometry, font, font_size, tuple(pages))
        data = serialize(blueprint)
        streams = parse_document(data)
        assert len(streams) == n_pages
        glyphs = []
        for page, stream in enumerate(streams):
            ops = parse_content_stream(stream)
            assert ops == list(blueprint.ops_per_page[page])
            glyphs.extend(interpret(ops, page))
        assert [(g.char, g.x, g.y, g.page) for g in glyphs] == [
            (p.char, p.x, p.y, p.page) for p in all_placements
        ]
        checked += 1
    criterion(
        "serializer/parser oracle",
        checked == 1000,
        f"{checked}/1000 blueprints survived serialize->parse->interpret",
    )
