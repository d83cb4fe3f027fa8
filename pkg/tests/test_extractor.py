from __future__ import annotations

import random
import zlib

import pytest

from pdfuzz import (
    CharLevel,
    FontSpec,
    InterpretError,
    LayoutConfig,
    MoveRelative,
    ParseError,
    SetFont,
    SetTextMatrix,
    ShowArray,
    ShowString,
    apply,
    extract_text,
    interpret,
    layout_text,
    make_permutation,
    ops_from_placements,
    parse_content_stream,
    parse_document,
    reference_sequence,
    serialize,
)
from pdfuzz.pdfmodel import content_stream_bytes
from pdfuzz.pipeline import blueprint_from_stream_order, render_attacked, render_normal

FONT = FontSpec()


def build_raw_pdf(objects: list[bytes], root: int = 1) -> bytes:
    """Assemble arbitrary object bodies into a syntactically complete PDF."""
    out = bytearray(b"%PDF-1.7\n")
    offsets = []
    for num, body in enumerate(objects, start=1):
        offsets.append(len(out))
        out += b"%d 0 obj\n" % num + body + b"\nendobj\n"
    xref_at = len(out)
    out += b"xref\n0 %d\n" % (len(objects) + 1)
    out += b"0000000000 65535 f \n"
    for off in offsets:
        out += b"%010d 00000 n \n" % off
    out += b"trailer\n<< /Size %d /Root %d 0 R >>\n" % (len(objects) + 1, root)
    out += b"startxref\n%d\n%%%%EOF\n" % xref_at
    return bytes(out)


def stream_obj(data: bytes, extra: bytes = b"") -> bytes:
    return b"<< /Length %d %s>>\nstream\n" % (len(data), extra) + data + b"\nendstream"


# ---------------------------------------------------------------------------
# parse_document
# ---------------------------------------------------------------------------


def test_single_page_stream_matches_serializer():
    result = layout_text("exact stream bytes")
    blueprint = blueprint_from_stream_order(result.placements, result)
    streams = parse_document(serialize(blueprint))
    assert len(streams) == 1
    assert streams[0] == content_stream_bytes(blueprint.ops_per_page[0])


def test_two_pages_in_order(prose):
    config = LayoutConfig()
    text = prose[:4000]
    result = layout_text(text, config)
    assert result.n_pages == 2
    pdf, _ = render_normal(text, config)
    streams = parse_document(pdf)
    assert len(streams) == 2
    page0 = interpret(parse_content_stream(streams[0]), 0)
    assert page0[0].char == text[0]


def test_truncated_file_is_parse_error():
    pdf, _ = render_normal("truncate me")
    with pytest.raises(ParseError):
        parse_document(pdf[: len(pdf) // 2])


def test_header_required():
    with pytest.raises(ParseError) as err:
        parse_document(b"not a pdf at all")
    assert err.value.offset == 0


def test_missing_trailer_root():
    pdf = build_raw_pdf([b"<< /Type /Catalog >>"])
    broken = pdf.replace(b"/Root 1 0 R ", b"")
    with pytest.raises(ParseError, match="Root"):
        parse_document(broken)


def test_cyclic_page_tree_detected():
    objects = [
        b"<< /Type /Catalog /Pages 2 0 R >>",
        b"<< /Type /Pages /Kids [2 0 R] /Count 1 >>",
    ]
    with pytest.raises(ParseError, match="cyclic"):
        parse_document(build_raw_pdf(objects))


def test_flate_compressed_content_stream():
    body = b"BT /F1 12 Tf 1 0 0 1 72 700 Tm (Zip) Tj ET"
    packed = zlib.compress(body)
    objects = [
        b"<< /Type /Catalog /Pages 2 0 R >>",
        b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        b"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>",
        stream_obj(packed, b"/Filter /FlateDecode "),
    ]
    result = extract_text(build_raw_pdf(objects))
    assert result.text == "Zip"


def test_incremental_update_prev_chain():
    # an appended xref section replaces object 4; /Prev points at the original
    original = b"BT /F1 12 Tf 1 0 0 1 72 700 Tm (old) Tj ET"
    objects = [
        b"<< /Type /Catalog /Pages 2 0 R >>",
        b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        b"<< /Type /Page /Parent 2 0 R /Contents 4 0 R >>",
        stream_obj(original),
    ]
    base = build_raw_pdf(objects)
    assert extract_text(base).text == "old"

    first_xref = base.find(b"\nxref\n") + 1
    replacement = b"BT /F1 12 Tf 1 0 0 1 72 700 Tm (new) Tj ET"
    update = bytearray(base)
    new_obj_offset = len(update)
    update += b"4 0 obj\n" + stream_obj(replacement) + b"\nendobj\n"
    new_xref = len(update)
    update += b"xref\n0 1\n0000000000 65535 f \n4 1\n"
    update += b"%010d 00000 n \n" % new_obj_offset
    update += b"trailer\n<< /Size 5 /Root 1 0 R /Prev %d >>\n" % first_xref
    update += b"startxref\n%d\n%%%%EOF\n" % new_xref
    assert extract_text(bytes(update)).text == "new"


def test_indirect_length_and_contents_array():
    part1 = b"BT /F1 12 Tf 1 0 0 1 72 700 Tm (ab) Tj ET"
    part2 = b"BT /F1 12 Tf 1 0 0 1 72 680 Tm (cd) Tj ET"
    objects = [
        b"<< /Type /Catalog /Pages 2 0 R >>",
        b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        b"<< /Type /Page /Parent 2 0 R /Contents [4 0 R 5 0 R] >>",
        b"<< /Length 6 0 R >>\nstream\n" + part1 + b"\nendstream",
        stream_obj(part2),
        b"%d" % len(part1),
    ]
    assert extract_text(build_raw_pdf(objects)).text == "abcd"


# ---------------------------------------------------------------------------
# parse_content_stream
# ---------------------------------------------------------------------------


def test_basic_token_mapping():
    ops = parse_content_stream(b"BT /F1 12 Tf 1 0 0 1 72 700 Tm (A) Tj ET")
    assert ops == [
        SetFont("F1", 12.0),
        SetTextMatrix(1.0, 0.0, 0.0, 1.0, 72.0, 700.0),
        ShowString("A"),
    ]


def test_show_array_tokens():
    ops = parse_content_stream(b"BT /F1 9 Tf [(ab) -120 (c)] TJ ET")
    assert ops[1] == ShowArray(("ab", -120, "c"))


def test_unknown_operators_skipped_with_operands():
    noisy = (
        b"q 0.5 0 0 0.5 0 0 cm /GS1 gs BT /F1 12 Tf "
        b"0 Tr 1 0 0 1 72 700 Tm (A) Tj /Span << /ActualText (B) >> BDC EMC ET Q"
    )
    clean = b"BT /F1 12 Tf 1 0 0 1 72 700 Tm (A) Tj ET"
    assert parse_content_stream(noisy) == parse_content_stream(clean)


def test_string_escapes_and_hex():
    ops = parse_content_stream(rb"BT /F1 12 Tf (a\(b\)c\\d\011) Tj <4869> Tj ET")
    assert ops[1] == ShowString("a(b)c\\d\t")
    assert ops[2] == ShowString("Hi")


def test_unbalanced_parens_is_parse_error():
    with pytest.raises(ParseError):
        parse_content_stream(b"BT (never closed Tj ET")
    with pytest.raises(ParseError):
        parse_content_stream(b"BT stray) Tj ET")
    with pytest.raises(ParseError):
        parse_content_stream(b"BT [(a) (b) TJ ET")


def test_roundtrip_random_placements():
    rng = random.Random(0)
    chars = "abc XYZ()\\ä"
    for _ in range(25):
        placements = layout_text(
            "".join(rng.choice(chars) for _ in range(rng.randrange(0, 60)))
        ).placements
        ops = ops_from_placements(placements, FONT, 12.0)
        assert parse_content_stream(content_stream_bytes(ops)) == ops


# ---------------------------------------------------------------------------
# interpret
# ---------------------------------------------------------------------------


def test_single_glyph_position():
    ops = [SetFont("F1", 12.0), SetTextMatrix(1, 0, 0, 1, 72.0, 700.0), ShowString("A")]
    glyphs = interpret(ops, page=0)
    assert [(g.char, g.x, g.y, g.page, g.stream_index) for g in glyphs] == [
        ("A", 72.0, 700.0, 0, 0)
    ]


def test_pen_advance_within_show():
    ops = [SetFont("F1", 12.0), SetTextMatrix(1, 0, 0, 1, 72.0, 700.0), ShowString("ab")]
    a, b = interpret(ops, page=0)
    assert a.x == pytest.approx(72.0)
    assert b.x == pytest.approx(79.2)


def test_td_is_relative_to_line_start():
    ops = [
        SetFont("F1", 10.0),
        SetTextMatrix(1, 0, 0, 1, 100.0, 500.0),
        ShowString("xx"),  # pen moves, line start must not
        MoveRelative(0.0, -12.0),
        ShowString("y"),
    ]
    glyphs = interpret(ops, page=0)
    assert glyphs[2].x == pytest.approx(100.0)
    assert glyphs[2].y == pytest.approx(488.0)


def test_tj_numeric_adjustments_shift_pen():
    ops = [
        SetFont("F1", 12.0),
        SetTextMatrix(1, 0, 0, 1, 72.0, 700.0),
        ShowArray(("a", -1000, "b")),
    ]
    a, b = interpret(ops, page=0)
    # advance 7.2 then shift +12 (=-(-1000)/1000*12)
    assert b.x == pytest.approx(72.0 + 7.2 + 12.0)


def test_show_before_font_is_interpret_error():
    with pytest.raises(InterpretError):
        interpret([SetTextMatrix(1, 0, 0, 1, 0, 0), ShowString("x")], page=0)
    with pytest.raises(InterpretError):
        interpret([ShowArray((12,))], page=0)


def test_interpret_matches_scrambled_placements():
    result = layout_text("glyphs keep their coordinates when scrambled")
    perm = make_permutation(CharLevel(3), len(result.placements))
    scrambled = apply(perm, result)
    glyphs = interpret(ops_from_placements(scrambled, FONT, 12.0), page=0)
    assert [(g.char, g.x, g.y) for g in glyphs] == [
        (p.char, p.x, p.y) for p in scrambled
    ]


# ---------------------------------------------------------------------------
# extract_text
# ---------------------------------------------------------------------------


def test_extract_normal_equals_reference(prose):
    text = prose[:1200]
    pdf, result = render_normal(text)
    extraction = extract_text(pdf)
    assert extraction.text == reference_sequence(result)
    assert [g.stream_index for g in extraction.glyphs] == list(
        range(len(extraction.glyphs))
    )


def test_extract_attacked_equals_permuted_reference(prose):
    text = prose[:900]
    art = render_attacked(text, LayoutConfig(), CharLevel(seed=11))
    ref = reference_sequence(art.layout)
    assert extract_text(art.attacked_pdf).text == "".join(
        ref[i] for i in art.permutation.mapping
    )


def test_multipage_attacked_extraction_matches_realized_permutation(prose):
    text = prose[:7000]
    art = render_attacked(text, LayoutConfig(), CharLevel(seed=2))
    assert art.layout.n_pages > 1
    ref = reference_sequence(art.layout)
    assert extract_text(art.attacked_pdf).text == "".join(
        ref[i] for i in art.permutation.mapping
    )


def test_empty_document():
    pdf, _ = render_normal("")
    extraction = extract_text(pdf)
    assert extraction.text == ""
    assert extraction.glyphs == []


def test_tolerant_noop_insertion_preserves_glyphs():
    pdf, _ = render_normal("tolerant")
    baseline = extract_text(pdf)
    streams = parse_document(pdf)
    noisy = streams[0].replace(b"BT\n", b"BT\n0.1 w\n1 0 0 RG\n")
    glyphs = interpret(parse_content_stream(noisy), 0)
    assert [(g.char, g.x, g.y) for g in glyphs] == [
        (g.char, g.x, g.y) for g in baseline.glyphs
    ]


def test_third_party_extractor_agrees_on_stream_order(prose):
    pypdf = pytest.importorskip("pypdf")
    import io

    text = prose[:600]
    art = render_attacked(text, LayoutConfig(), CharLevel(seed=5))
    ours = extract_text(art.attacked_pdf).text
    theirs = pypdf.PdfReader(io.BytesIO(art.attacked_pdf)).pages[0].extract_text()
    # third-party tools inject whitespace heuristically; compare the rest
    assert [c for c in theirs if not c.isspace()] == [
        c for c in ours if not c.isspace()
    ]
