"""Desk-scale AI-text detector: a smoothed character n-gram scorer.

The classifier follows the low-perplexity heuristic: text a sequential
model finds highly predictable is flagged as machine-generated.  The "AI"
class is synthesized by sampling from the trained model itself, which
guarantees the low-perplexity property without shipping LLM output.  Any
sequential likelihood model breaks the same way once extraction order is
scrambled, which is exactly the effect the evaluation pipeline measures.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import CorpusRecord
from .errors import ConfigError, ContractError, PdfuzzError
from .extractor import extract_text
from .fidelity import normalized_kendall_tau
from .layout import LayoutConfig, layout_text, reference_sequence
from .pipeline import render_attacked, render_normal
from .scrambler import ScrambleStrategy

# Reserved symbols; never produced by the layout pipeline.
UNKNOWN_SYMBOL = "\x01"
BOUNDARY_SYMBOL = "\x02"

MODEL_MAGIC = "pdfuzz-ngram v1"

LABEL_AI = "ai"
LABEL_HUMAN = "human"


@dataclass
class NgramModel:
    """Character n-gram counts with Laplace smoothing.

    counts maps each (order-1)-character context to successor counts; the
    boundary symbol appears both in left-padding contexts and as the
    recorded end-of-text successor.  Scoring is over the character event
    space only: P(c | ctx) = (count(ctx, c) + alpha) / (N_char(ctx) +
    alpha * |vocab|), where N_char excludes end-of-text successors and
    |vocab| counts characters plus both reserved symbols.
    """

    order: int
    counts: dict[str, dict[str, int]]
    vocab: set[str]
    alpha: float = 1.0

    def map_char(self, ch: str) -> str:
        if ch == BOUNDARY_SYMBOL or ch not in self.vocab:
            return UNKNOWN_SYMBOL
        return ch


@dataclass(frozen=True)
class DetectorConfig:
    """Decision rule: perplexity below the threshold means "ai"."""

    threshold: float
    decision_rule: str = "perplexity < threshold => ai"
    calibration_accuracy: float | None = None
    low_accuracy_warning: bool = False

    def __post_init__(self):
        if not (self.threshold > 0):
            raise ConfigError("threshold must be positive")


def train(texts: Sequence[str], order: int = 3, alpha: float = 1.0) -> NgramModel:
    """Count boundary-padded n-grams over the corpus."""
    if not texts:
        raise ConfigError("training corpus is empty")
    if order < 2:
        raise ConfigError("model order must be at least 2")
    counts: dict[str, dict[str, int]] = {}
    vocab = {UNKNOWN_SYMBOL, BOUNDARY_SYMBOL}
    pad = BOUNDARY_SYMBOL * (order - 1)
    for text in texts:
        mapped = "".join(
            UNKNOWN_SYMBOL if c == BOUNDARY_SYMBOL else c for c in text
        )
        vocab.update(mapped)
        padded = pad + mapped + BOUNDARY_SYMBOL
        for i in range(len(mapped) + 1):
            ctx = padded[i:i + order - 1]
            nxt = padded[i + order - 1]
            bucket = counts.setdefault(ctx, {})
            bucket[nxt] = bucket.get(nxt, 0) + 1
    return NgramModel(order, counts, vocab, alpha)


def _char_total(bucket: dict[str, int]) -> int:
    return sum(bucket.values()) - bucket.get(BOUNDARY_SYMBOL, 0)


def perplexity(model: NgramModel, text: str) -> float:
    """exp of the average negative log-likelihood per character."""
    if not text:
        raise ContractError("cannot score empty text")
    order = model.order
    alpha = model.alpha
    vocab_size = len(model.vocab)
    counts = model.counts
    empty: dict[str, int] = {}

    mapped = "".join(model.map_char(c) for c in text)
    padded = BOUNDARY_SYMBOL * (order - 1) + mapped
    log_sum = 0.0
    for i, ch in enumerate(mapped):
        bucket = counts.get(padded[i:i + order - 1], empty)
        num = bucket.get(ch, 0) + alpha
        den = _char_total(bucket) + alpha * vocab_size
        log_sum += math.log(num / den)
    return math.exp(-log_sum / len(mapped))


def sample(model: NgramModel, length: int, seed: int) -> str:
    """Draw `length` characters, biased toward high-count transitions.

    Successor probability is proportional to the squared smoothed count,
    restricted to real characters (reserved symbols are never emitted).
    Deterministic for a fixed (model, length, seed).
    """
    support = sorted(model.vocab - {UNKNOWN_SYMBOL, BOUNDARY_SYMBOL})
    if not support or length <= 0:
        return ""
    rng = random.Random(seed)
    alpha = model.alpha
    order = model.order
    empty: dict[str, int] = {}
    cumulative_cache: dict[str, list[float]] = {}

    ctx = BOUNDARY_SYMBOL * (order - 1)
    out = []
    for _ in range(length):
        cumulative = cumulative_cache.get(ctx)
        if cumulative is None:
            bucket = model.counts.get(ctx, empty)
            total = 0.0
            cumulative = []
            for ch in support:
                total += (bucket.get(ch, 0) + alpha) ** 2
                cumulative.append(total)
            cumulative_cache[ctx] = cumulative
        draw = rng.random() * cumulative[-1]
        ch = support[min(bisect_right(cumulative, draw), len(support) - 1)]
        out.append(ch)
        ctx = (ctx + ch)[-(order - 1):]
    return "".join(out)


def classify(config: DetectorConfig, ppl: float) -> str:
    return LABEL_AI if ppl < config.threshold else LABEL_HUMAN


def calibrate_threshold(
    model: NgramModel, labeled: Sequence[tuple[str, str]]
) -> DetectorConfig:
    """Pick the accuracy-maximizing threshold over the calibration set.

    Candidates are midpoints between adjacent sorted perplexities plus the
    two boundary candidates (classify-none / classify-all); ties go to the
    lower threshold.  A warning flag is set when even the best candidate
    does no better than chance.
    """
    scored = [(perplexity(model, text), label) for text, label in labeled]
    labels = {label for _, label in scored}
    if not labels <= {LABEL_AI, LABEL_HUMAN}:
        raise ConfigError(f"unknown labels: {labels - {LABEL_AI, LABEL_HUMAN}}")
    if labels != {LABEL_AI, LABEL_HUMAN}:
        raise ConfigError("calibration needs both 'ai' and 'human' examples")

    values = sorted({p for p, _ in scored})
    candidates = [values[0]]
    candidates.extend((lo + hi) / 2 for lo, hi in zip(values, values[1:]))
    candidates.append(values[-1] + 1.0)

    best_threshold = candidates[0]
    best_accuracy = -1.0
    for threshold in candidates:
        hits = sum((p < threshold) == (label == LABEL_AI) for p, label in scored)
        accuracy = hits / len(scored)
        if accuracy > best_accuracy:
            best_accuracy = accuracy
            best_threshold = threshold
    return DetectorConfig(
        threshold=best_threshold,
        calibration_accuracy=best_accuracy,
        low_accuracy_warning=best_accuracy <= 0.5,
    )


# ---------------------------------------------------------------------------
# Corpus evaluation
# ---------------------------------------------------------------------------


@dataclass
class PipelineMetrics:
    accuracy: float
    f1_ai: float
    tpr_at_1pct_fpr: float


@dataclass
class DocOutcome:
    id: str
    label: str
    ppl_normal: float
    ppl_attacked: float
    pred_normal: str
    pred_attacked: str
    tau: float


@dataclass
class EvalReport:
    normal: PipelineMetrics
    attacked: PipelineMetrics
    per_doc: list[DocOutcome]


def _accuracy_f1(outcomes: Iterable[tuple[str, str]]) -> tuple[float, float]:
    """(accuracy, f1 with "ai" as the positive class) over (label, pred)."""
    tp = fp = fn = tn = 0
    for label, pred in outcomes:
        if label == LABEL_AI:
            if pred == LABEL_AI:
                tp += 1
            else:
                fn += 1
        else:
            if pred == LABEL_AI:
                fp += 1
            else:
                tn += 1
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total if total else 0.0
    denom = 2 * tp + fp + fn
    f1 = 2 * tp / denom if denom else 0.0
    return accuracy, f1


def tpr_at_fpr(
    ai_scores: Sequence[float],
    human_scores: Sequence[float],
    max_fpr: float = 0.01,
) -> float:
    """TPR at the largest threshold keeping FPR at or below `max_fpr`.

    Lower perplexity means "ai", so the threshold is the (k+1)-th smallest
    human perplexity where k is the allowed number of false positives.
    """
    if not ai_scores or not human_scores:
        raise ConfigError("need scores for both classes")
    allowed = int(math.floor(max_fpr * len(human_scores)))
    threshold = sorted(human_scores)[allowed]
    return sum(s < threshold for s in ai_scores) / len(ai_scores)


def evaluate_corpus(
    model: NgramModel,
    config: DetectorConfig,
    corpus: Sequence[CorpusRecord],
    attack: ScrambleStrategy,
    layout_config: LayoutConfig = LayoutConfig(),
) -> EvalReport:
    """Run both pipelines over the corpus and aggregate the metric suite.

    Normal pipeline: every document is rendered to a PDF and its extracted
    text scored.  Attacked pipeline: only "ai" documents are re-rendered
    with scrambled stream order (the attacker has nothing to hide in human
    text); their per-document permutation seed is the attack seed plus the
    document's corpus position.  TPR@1%FPR thresholds are always derived
    from normal extractions.
    """
    if not corpus:
        raise ConfigError("evaluation corpus is empty")
    labels = {rec.label for rec in corpus}
    if labels != {LABEL_AI, LABEL_HUMAN}:
        raise ConfigError("evaluation corpus needs both 'ai' and 'human' documents")

    per_doc: list[DocOutcome] = []
    for idx, rec in enumerate(corpus):
        try:
            if rec.label == LABEL_AI:
                art = render_attacked(
                    rec.text, layout_config, replace(attack, seed=attack.seed + idx)
                )
                ppl_normal = perplexity(model, extract_text(art.normal_pdf).text)
                ppl_attacked = perplexity(model, extract_text(art.attacked_pdf).text)
                tau = normalized_kendall_tau(art.permutation.mapping)
            else:
                normal_pdf, _ = render_normal(rec.text, layout_config)
                ppl_normal = perplexity(model, extract_text(normal_pdf).text)
                ppl_attacked = ppl_normal
                tau = 0.0
        except PdfuzzError as exc:
            raise PdfuzzError(f"document {rec.id!r}: {exc}") from exc
        per_doc.append(
            DocOutcome(
                id=rec.id,
                label=rec.label,
                ppl_normal=ppl_normal,
                ppl_attacked=ppl_attacked,
                pred_normal=classify(config, ppl_normal),
                pred_attacked=classify(config, ppl_attacked),
                tau=tau,
            )
        )

    ai_normal = [d.ppl_normal for d in per_doc if d.label == LABEL_AI]
    ai_attacked = [d.ppl_attacked for d in per_doc if d.label == LABEL_AI]
    human_normal = [d.ppl_normal for d in per_doc if d.label == LABEL_HUMAN]

    acc_n, f1_n = _accuracy_f1((d.label, d.pred_normal) for d in per_doc)
    acc_a, f1_a = _accuracy_f1((d.label, d.pred_attacked) for d in per_doc)
    return EvalReport(
        normal=PipelineMetrics(acc_n, f1_n, tpr_at_fpr(ai_normal, human_normal)),
        attacked=PipelineMetrics(acc_a, f1_a, tpr_at_fpr(ai_attacked, human_normal)),
        per_doc=per_doc,
    )


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def save_model(model: NgramModel, path: str | Path) -> None:
    """Write the model in the documented `pdfuzz-ngram v1` format."""
    payload = {
        "order": model.order,
        "alpha": model.alpha,
        "vocab": sorted(model.vocab),
        "counts": {
            ctx: dict(sorted(bucket.items()))
            for ctx, bucket in sorted(model.counts.items())
        },
    }
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    Path(path).write_text(MODEL_MAGIC + "\n" + body + "\n", encoding="ascii")


def load_model(path: str | Path) -> NgramModel:
    raw = Path(path).read_text(encoding="ascii")
    magic, _, body = raw.partition("\n")
    if magic != MODEL_MAGIC:
        raise ConfigError(f"not a {MODEL_MAGIC} file: {path}")
    payload = json.loads(body)
    return NgramModel(
        order=payload["order"],
        counts={ctx: dict(bucket) for ctx, bucket in payload["counts"].items()},
        vocab=set(payload["vocab"]),
        alpha=payload["alpha"],
    )


# ---------------------------------------------------------------------------
# Synthetic corpus construction
# ---------------------------------------------------------------------------


def synthesize_corpus(
    natural_text: str,
    *,
    n_eval_ai: int = 200,
    n_eval_human: int = 200,
    n_cal_ai: int = 60,
    n_cal_human: int = 60,
    doc_chars: tuple[int, int] = (500, 900),
    order: int = 3,
    alpha: float = 0.3,
    seed: int = 0,
    train_chars: int = 100_000,
    layout_config: LayoutConfig | None = LayoutConfig(),
) -> tuple[NgramModel, list[tuple[str, str]], list[CorpusRecord]]:
    """Build (model, calibration pairs, evaluation records) from raw prose.

    The model trains on the head of the natural text; human documents are
    disjoint held-out chunks of the tail; "ai" documents are sampled from
    the trained model.  Everything is deterministic for a fixed seed.

    When layout_config is set, calibration texts are passed through the
    layout's reference sequence so the threshold is fitted in the same
    text space the pipeline scores (extraction drops wrap-consumed
    spaces, which shifts perplexity slightly upward).
    """
    train_text = natural_text[:train_chars]
    pool = natural_text[train_chars:].replace("\n", " ")
    model = train([p for p in train_text.split("\n") if p], order=order, alpha=alpha)

    rng = random.Random(seed)
    lo, hi = doc_chars

    def take_human(count: int) -> list[str]:
        docs = []
        nonlocal pool
        for _ in range(count):
            size = rng.randint(lo, hi)
            if len(pool) < size:
                raise ConfigError("natural text pool exhausted; lower doc sizes")
            docs.append(pool[:size])
            pool = pool[size:]
        return docs

    cal_human = take_human(n_cal_human)
    eval_human = take_human(n_eval_human)
    cal_ai = [
        sample(model, rng.randint(lo, hi), seed=seed * 1_000_003 + i)
        for i in range(n_cal_ai)
    ]
    eval_ai = [
        sample(model, rng.randint(lo, hi), seed=seed * 1_000_003 + n_cal_ai + i)
        for i in range(n_eval_ai)
    ]

    if layout_config is not None:
        as_scored = lambda t: reference_sequence(layout_text(t, layout_config))
        cal_human = [as_scored(t) for t in cal_human]
        cal_ai = [as_scored(t) for t in cal_ai]

    calibration = [(t, LABEL_HUMAN) for t in cal_human] + [(t, LABEL_AI) for t in cal_ai]
    records = [
        CorpusRecord(f"human-{i:04d}", LABEL_HUMAN, text)
        for i, text in enumerate(eval_human)
    ] + [
        CorpusRecord(f"ai-{i:04d}", LABEL_AI, text) for i, text in enumerate(eval_ai)
    ]
    return model, calibration, records
