"""Visual-equivalence proofs, scramble metrics, and the defensive audit.

Visual equivalence is decided on quantized glyph multisets rather than
rendered rasters: two documents that paint the same characters at the same
coordinates (within half the 0.01 pt serialization quantum) are visually
identical under our writer.  The audit is the opposite perspective: given
only stream order, how often does it run against recovered reading order?
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Sequence

from .errors import ContractError
from .extractor import ExtractedGlyph, ExtractionResult
from .layout import DEFAULT_LINE_HEIGHT_PT
from .scrambler import Permutation

DEFAULT_EPS_PT = 0.005
LCS_CHAR_CAP = 20_000

# audit verdict thresholds on the anomaly score, documented as tunable
SUSPICIOUS_FROM = 0.05
MANIPULATED_FROM = 0.25


@dataclass
class FidelityReport:
    visually_equal: bool
    mismatches: list[tuple[str, float, float, int]]
    glyph_count_a: int
    glyph_count_b: int


@dataclass
class ScrambleMetrics:
    kendall_tau_norm: float
    lcs_ratio: float
    multiset_equal: bool


@dataclass
class AuditReport:
    anomaly_score: float
    verdict: str  # clean | suspicious | manipulated
    n_glyphs: int


def visual_equivalence(
    a: Sequence[ExtractedGlyph],
    b: Sequence[ExtractedGlyph],
    eps: float = DEFAULT_EPS_PT,
) -> FidelityReport:
    """Compare two glyph multisets, ignoring order entirely.

    Coordinates are bucketed at `eps` points before comparison.  The
    mismatch list holds one (char, x, y, page) entry per surplus glyph on
    either side.
    """
    if eps < 0:
        raise ContractError("eps must be non-negative")

    def keyed(glyphs):
        counts: Counter = Counter()
        sample = {}
        for g in glyphs:
            if eps > 0:
                key = (g.char, round(g.x / eps), round(g.y / eps), g.page)
            else:
                key = (g.char, g.x, g.y, g.page)
            counts[key] += 1
            sample.setdefault(key, (g.char, g.x, g.y, g.page))
        return counts, sample

    counts_a, sample_a = keyed(a)
    counts_b, sample_b = keyed(b)

    mismatches: list[tuple[str, float, float, int]] = []
    for key in counts_a.keys() | counts_b.keys():
        diff = counts_a.get(key, 0) - counts_b.get(key, 0)
        if diff > 0:
            mismatches.extend([sample_a[key]] * diff)
        elif diff < 0:
            mismatches.extend([sample_b[key]] * -diff)
    mismatches.sort(key=lambda m: (m[3], m[1], m[2], m[0]))

    return FidelityReport(
        visually_equal=not mismatches and len(a) == len(b),
        mismatches=mismatches,
        glyph_count_a=len(a),
        glyph_count_b=len(b),
    )


def count_inversions(seq: Sequence[int]) -> int:
    """Number of pairs i < j with seq[i] > seq[j] (merge-sort count)."""

    def sort(items: list[int]) -> tuple[list[int], int]:
        if len(items) <= 1:
            return items, 0
        mid = len(items) // 2
        left, inv_l = sort(items[:mid])
        right, inv_r = sort(items[mid:])
        merged = []
        inv = inv_l + inv_r
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
                inv += len(left) - i
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, inv

    return sort(list(seq))[1]


def normalized_kendall_tau(mapping: Sequence[int]) -> float:
    """Discordant pairs over C(n, 2); 0.0 for n < 2."""
    n = len(mapping)
    pairs = n * (n - 1) // 2
    if pairs == 0:
        return 0.0
    return count_inversions(mapping) / pairs


def lcs_length(a: str, b: str) -> int:
    """Longest common subsequence length, bit-parallel over rows of `a`."""
    if not a or not b:
        return 0
    masks: dict[str, int] = {}
    for i, ch in enumerate(a):
        masks[ch] = masks.get(ch, 0) | (1 << i)
    width = (1 << len(a)) - 1
    row = 0
    for ch in b:
        u = row | masks.get(ch, 0)
        row = u & ~(u - ((row << 1) | 1)) & width
    return bin(row).count("1")


def _induced_mapping(reference: str, extracted: str) -> list[int] | None:
    """Stable per-character alignment of two equal-length sequences.

    The k-th occurrence of a character in the extracted text is matched to
    the k-th occurrence in the reference.  None when no such alignment
    exists (length or multiset mismatch).
    """
    if len(reference) != len(extracted):
        return None
    positions: dict[str, deque[int]] = {}
    for i, ch in enumerate(reference):
        positions.setdefault(ch, deque()).append(i)
    mapping = []
    for ch in extracted:
        queue = positions.get(ch)
        if not queue:
            return None
        mapping.append(queue.popleft())
    return mapping


def scramble_metrics(
    reference: str,
    extracted: ExtractionResult,
    perm: Permutation | None = None,
) -> ScrambleMetrics:
    """Quantify how far stream order drifted from reading order."""
    if perm is not None:
        if perm.n != len(reference):
            raise ContractError(
                f"permutation is over {perm.n} glyphs, reference has {len(reference)}"
            )
        tau = normalized_kendall_tau(perm.mapping)
    else:
        mapping = _induced_mapping(reference, extracted.text)
        tau = normalized_kendall_tau(mapping) if mapping is not None else 0.0

    ref_capped = reference[:LCS_CHAR_CAP]
    ext_capped = extracted.text[:LCS_CHAR_CAP]
    if ref_capped:
        ratio = lcs_length(ref_capped, ext_capped) / len(ref_capped)
    else:
        ratio = 1.0
    return ScrambleMetrics(
        kendall_tau_norm=tau,
        lcs_ratio=ratio,
        multiset_equal=Counter(reference) == Counter(extracted.text),
    )


def audit_order(
    glyphs: Sequence[ExtractedGlyph],
    line_height_pt: float = DEFAULT_LINE_HEIGHT_PT,
) -> AuditReport:
    """Baseline structure analysis: flag stream order that fights reading order.

    Reading order is recovered by sorting glyphs by (page, line, x), where
    lines are y values quantized at half the line height.  The anomaly
    score is the fraction of consecutive stream pairs whose reading-order
    ranks fail to increase.
    """
    n = len(glyphs)
    if n == 0:
        return AuditReport(0.0, "clean", 0)
    quantum = line_height_pt / 2.0
    order = sorted(
        range(n),
        key=lambda i: (glyphs[i].page, -round(glyphs[i].y / quantum), glyphs[i].x),
    )
    ranks = [0] * n
    for pos, i in enumerate(order):
        ranks[i] = pos
    if n == 1:
        score = 0.0
    else:
        drops = sum(1 for i in range(n - 1) if ranks[i + 1] <= ranks[i])
        score = drops / (n - 1)
    if score < SUSPICIOUS_FROM:
        verdict = "clean"
    elif score < MANIPULATED_FROM:
        verdict = "suspicious"
    else:
        verdict = "manipulated"
    return AuditReport(score, verdict, n)
