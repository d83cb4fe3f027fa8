from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdfuzz import (
    DocumentBlueprint,
    EncodingError,
    FontSpec,
    MoveRelative,
    PageGeometry,
    SetFont,
    SetTextMatrix,
    ShowArray,
    ShowString,
    interpret,
    layout_text,
    ops_from_placements,
    parse_content_stream,
    serialize,
)
from pdfuzz.layout import GlyphPlacement
from pdfuzz.pdfmodel import content_stream_bytes

FONT = FontSpec()
GEOM = PageGeometry()


def one_page(ops) -> DocumentBlueprint:
    return DocumentBlueprint(GEOM, FONT, 12.0, (tuple(ops),))


def test_empty_placements_emit_only_setfont():
    ops = ops_from_placements([], FONT, 12.0)
    assert ops == [SetFont("F1", 12.0)]


def test_single_glyph_ops():
    p = GlyphPlacement("A", 72.0, 700.0, 0, 0)
    ops = ops_from_placements([p], FONT, 12.0)
    assert ops == [
        SetFont("F1", 12.0),
        SetTextMatrix(1.0, 0.0, 0.0, 1.0, 72.0, 700.0),
        ShowString("A"),
    ]


def test_scrambled_order_survives_reinterpretation():
    result = layout_text("stream order is not reading order")
    shuffled = list(result.placements)
    random.Random(5).shuffle(shuffled)
    ops = ops_from_placements(shuffled, FONT, 12.0)
    glyphs = interpret(ops, page=0)
    assert [(g.char, g.x, g.y) for g in glyphs] == [
        (p.char, p.x, p.y) for p in shuffled
    ]


def test_unencodable_char_names_offender():
    p = GlyphPlacement("☃", 72.0, 700.0, 0, 0)
    with pytest.raises(EncodingError) as err:
        ops_from_placements([GlyphPlacement("a", 72.0, 700.0, 0, 0), p], FONT, 12.0)
    assert err.value.char == "☃"
    assert err.value.index == 1


def test_empty_blueprint_header_and_eof():
    data = serialize(one_page([SetFont("F1", 12.0)]))
    assert data.startswith(b"%PDF-1.7")
    assert data.endswith(b"%%EOF\n")


def test_serialize_is_deterministic():
    bp = one_page(ops_from_placements(layout_text("twice").placements, FONT, 12.0))
    assert serialize(bp) == serialize(bp)


def test_roundtrip_through_own_parser():
    ops = [
        SetFont("F1", 12.0),
        SetTextMatrix(1.0, 0.0, 0.0, 1.0, 72.0, 700.0),
        ShowString("with (parens) and \\ backslash"),
        MoveRelative(7.2, -14.4),
        ShowArray(("ab", -120, "c")),
    ]
    parsed = parse_content_stream(content_stream_bytes(ops))
    assert parsed == ops


def test_coordinates_written_with_two_decimals():
    ops = [SetFont("F1", 12.0), SetTextMatrix(1.0, 0.0, 0.0, 1.0, 79.2, 705.61)]
    stream = content_stream_bytes(ops)
    assert b"79.20 705.61 Tm" in stream
    reparsed = parse_content_stream(stream)
    assert reparsed[1].e == 79.2
    assert reparsed[1].f == 705.61


def test_show_before_setfont_rejected():
    with pytest.raises(ValueError, match="before any SetFont"):
        one_page([ShowString("x")])


def test_non_finite_operand_rejected():
    with pytest.raises(ValueError, match="non-finite"):
        SetTextMatrix(1.0, 0.0, 0.0, 1.0, float("nan"), 0.0)
    with pytest.raises(ValueError, match="non-finite"):
        MoveRelative(float("inf"), 0.0)


def test_font_and_geometry_validation():
    with pytest.raises(ValueError, match="standard base font"):
        FontSpec(base_font_name="Comic Sans")
    with pytest.raises(ValueError, match="encoding"):
        FontSpec(encoding="utf-8")
    with pytest.raises(ValueError, match="margin"):
        PageGeometry(100.0, 792.0, 50.0)


# strings that exercise escaping: parens, backslashes, controls, cp1252 accents
_texts = st.text(
    alphabet=st.sampled_from("ab ()\\\té’xyz"), min_size=0, max_size=12
)
_coords = st.integers(min_value=0, max_value=79200).map(lambda v: v / 100.0)


@st.composite
def _op_lists(draw):
    ops = [SetFont("F1", draw(st.sampled_from([8.0, 12.0, 24.0])))]
    for _ in range(draw(st.integers(0, 12))):
        kind = draw(st.integers(0, 3))
        if kind == 0:
            ops.append(SetTextMatrix(1.0, 0.0, 0.0, 1.0, draw(_coords), draw(_coords)))
        elif kind == 1:
            ops.append(MoveRelative(draw(_coords), -draw(_coords)))
        elif kind == 2:
            ops.append(ShowString(draw(_texts)))
        else:
            items = tuple(
                draw(_texts) if draw(st.booleans()) else draw(_coords)
                for _ in range(draw(st.integers(1, 4)))
            )
            ops.append(ShowArray(items))
    return ops


@settings(max_examples=60, deadline=None)
@given(_op_lists())
def test_property_parse_of_serialize_is_identity(ops):
    blueprint = one_page(ops)
    data = serialize(blueprint)
    from pdfuzz import parse_document

    streams = parse_document(data)
    assert len(streams) == 1
    assert parse_content_stream(streams[0]) == ops
