"""End-to-end document construction: text -> layout -> (normal|attacked) PDF.

Stream scrambling is global over the whole document, but a PDF paints each
glyph from its own page's content stream, so the realized stream order is
the scrambled order stably partitioned by page.  The permutation reported
here is that realized one: extracting the attacked PDF yields exactly the
reference sequence permuted by it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .layout import GlyphPlacement, LayoutConfig, LayoutResult, layout_text
from .pdfmodel import ContentOp, DocumentBlueprint, ops_from_placements, serialize
from .scrambler import Permutation, ScrambleStrategy, apply, make_permutation


@dataclass
class AttackArtifacts:
    normal_pdf: bytes
    attacked_pdf: bytes
    layout: LayoutResult
    permutation: Permutation  # realized stream-order permutation (page-stable)


def _paginate(placements: list[GlyphPlacement], n_pages: int) -> list[list[GlyphPlacement]]:
    pages: list[list[GlyphPlacement]] = [[] for _ in range(n_pages)]
    for p in placements:
        pages[p.page].append(p)
    return pages


def blueprint_from_stream_order(
    placements: list[GlyphPlacement],
    layout_result: LayoutResult,
) -> DocumentBlueprint:
    """Bin placements by page (preserving the given order) into a blueprint."""
    config = layout_result.config
    ops: list[tuple[ContentOp, ...]] = []
    for page_glyphs in _paginate(placements, layout_result.n_pages):
        ops.append(tuple(ops_from_placements(page_glyphs, config.font, config.font_size_pt)))
    return DocumentBlueprint(
        geometry=config.geometry,
        font=config.font,
        font_size_pt=config.font_size_pt,
        ops_per_page=tuple(ops),
    )


def render_normal(text: str, config: LayoutConfig = LayoutConfig()) -> tuple[bytes, LayoutResult]:
    """Lay out and serialize the document with stream order = reading order."""
    result = layout_text(text, config)
    return serialize(blueprint_from_stream_order(result.placements, result)), result


def attack_layout(
    result: LayoutResult, strategy: ScrambleStrategy
) -> tuple[bytes, Permutation]:
    """Scramble an existing layout into an attacked PDF.

    Returns the document bytes and the realized permutation: the seeded
    global permutation stably partitioned by page, which is the order the
    page streams actually paint (and extraction follows).
    """
    raw = make_permutation(strategy, len(result.placements))
    scrambled = apply(raw, result)
    stream_order = [p for page in _paginate(scrambled, result.n_pages) for p in page]
    realized = Permutation(
        tuple(p.reading_index for p in stream_order), raw.n, strategy
    )
    return serialize(blueprint_from_stream_order(stream_order, result)), realized


def render_attacked(
    text: str,
    config: LayoutConfig,
    strategy: ScrambleStrategy,
) -> AttackArtifacts:
    """Render both variants of a document plus the realized permutation."""
    result = layout_text(text, config)
    normal_pdf = serialize(blueprint_from_stream_order(result.placements, result))
    attacked_pdf, realized = attack_layout(result, strategy)
    return AttackArtifacts(normal_pdf, attacked_pdf, result, realized)
