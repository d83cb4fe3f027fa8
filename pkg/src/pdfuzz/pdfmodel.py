"""Minimal PDF 1.7 document model and serializer.

Only the features the glyph-positioning pipeline needs: one page tree, one
standard Type1 base font, uncompressed content streams built from a small
set of text operators, and a classic cross-reference table.  Output is
deterministic so byte-level diffing of documents is meaningful.
"""

from __future__ import annotations

import codecs
import math
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Union

from .errors import EncodingError

if TYPE_CHECKING:
    from .layout import GlyphPlacement

# The 14 base fonts every conforming reader must provide.
STANDARD_BASE_FONTS = frozenset({
    "Courier", "Courier-Bold", "Courier-Oblique", "Courier-BoldOblique",
    "Helvetica", "Helvetica-Bold", "Helvetica-Oblique", "Helvetica-BoldOblique",
    "Times-Roman", "Times-Bold", "Times-Italic", "Times-BoldItalic",
    "Symbol", "ZapfDingbats",
})

# Only single-byte Latin text is supported; WinAnsi is its PDF-side name.
SUPPORTED_ENCODING = "cp1252"
PDF_ENCODING_NAME = "WinAnsiEncoding"

FONT_RESOURCE_NAME = "F1"


@dataclass(frozen=True)
class FontSpec:
    """A standard base font with a single fixed advance per glyph."""

    base_font_name: str = "Courier"
    glyph_width_em: float = 0.6
    encoding: str = SUPPORTED_ENCODING

    def __post_init__(self):
        if self.base_font_name not in STANDARD_BASE_FONTS:
            raise ValueError(f"not a standard base font: {self.base_font_name!r}")
        if not (self.glyph_width_em > 0):
            raise ValueError("glyph_width_em must be positive")
        if codecs.lookup(self.encoding).name != SUPPORTED_ENCODING:
            raise ValueError(f"unsupported byte encoding: {self.encoding!r}")


@dataclass(frozen=True)
class PageGeometry:
    """Page size and uniform margin, in points."""

    width_pt: float = 612.0
    height_pt: float = 792.0
    margin_pt: float = 72.0

    def __post_init__(self):
        if self.margin_pt < 0:
            raise ValueError("margin_pt must be non-negative")
        if not (self.width_pt > 2 * self.margin_pt):
            raise ValueError("page width must exceed twice the margin")
        if not (self.height_pt > 2 * self.margin_pt):
            raise ValueError("page height must exceed twice the margin")


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite operand: {v!r}")


@dataclass(frozen=True)
class SetFont:
    """Tf: select a font resource at a size in points."""

    name: str
    size_pt: float

    def __post_init__(self):
        _check_finite(self.size_pt)


@dataclass(frozen=True)
class SetTextMatrix:
    """Tm: set the text matrix (absolute position and scale)."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __post_init__(self):
        _check_finite(self.a, self.b, self.c, self.d, self.e, self.f)


@dataclass(frozen=True)
class MoveRelative:
    """Td: translate the line origin by (tx, ty)."""

    tx: float
    ty: float

    def __post_init__(self):
        _check_finite(self.tx, self.ty)


@dataclass(frozen=True)
class ShowString:
    """Tj: paint a string at the current text position."""

    text: str


@dataclass(frozen=True)
class ShowArray:
    """TJ: paint strings interleaved with numeric pen adjustments."""

    items: tuple[Union[str, float, int], ...]

    def __post_init__(self):
        for item in self.items:
            if isinstance(item, str):
                continue
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise ValueError(f"TJ items must be strings or numbers: {item!r}")
            _check_finite(item)


ContentOp = Union[SetFont, SetTextMatrix, MoveRelative, ShowString, ShowArray]

_SHOW_OPS = (ShowString, ShowArray)


@dataclass(frozen=True)
class DocumentBlueprint:
    """Everything needed to emit a document: geometry, font, per-page ops."""

    geometry: PageGeometry
    font: FontSpec
    font_size_pt: float
    ops_per_page: tuple[tuple[ContentOp, ...], ...]

    def __post_init__(self):
        for page_no, ops in enumerate(self.ops_per_page):
            font_seen = False
            for op in ops:
                if isinstance(op, SetFont):
                    font_seen = True
                elif isinstance(op, _SHOW_OPS) and not font_seen:
                    raise ValueError(
                        f"page {page_no}: show operator before any SetFont"
                    )


def ops_from_placements(
    placements: Sequence["GlyphPlacement"],
    font: FontSpec,
    font_size: float,
) -> list[ContentOp]:
    """Emit one SetTextMatrix + ShowString pair per glyph, in list order.

    The input order is preserved verbatim: feeding a scrambled placement
    list here is exactly how stream order is decoupled from reading order.
    Raises EncodingError for characters outside the font's byte encoding.
    """
    ops: list[ContentOp] = [SetFont(FONT_RESOURCE_NAME, font_size)]
    for i, p in enumerate(placements):
        try:
            p.char.encode(font.encoding)
        except UnicodeEncodeError:
            raise EncodingError(p.char, i, font.encoding) from None
        ops.append(SetTextMatrix(1.0, 0.0, 0.0, 1.0, p.x, p.y))
        ops.append(ShowString(p.char))
    return ops


def _fmt_num(v: float) -> bytes:
    out = f"{v:.2f}"
    if out == "-0.00":
        out = "0.00"
    return out.encode("ascii")


def _escape_string_bytes(raw: bytes) -> bytes:
    out = bytearray()
    for byte in raw:
        if byte in (0x28, 0x29, 0x5C):  # ( ) \
            out.append(0x5C)
            out.append(byte)
        elif byte < 0x20 or byte == 0x7F:
            out.extend(b"\\%03o" % byte)
        else:
            out.append(byte)
    return bytes(out)


def _encode_text(text: str, encoding: str) -> bytes:
    try:
        return text.encode(encoding)
    except UnicodeEncodeError as exc:
        raise EncodingError(text[exc.start], exc.start, encoding) from None


def _op_bytes(op: ContentOp, encoding: str) -> bytes:
    if isinstance(op, SetFont):
        return b"/%s %s Tf" % (op.name.encode("ascii"), _fmt_num(op.size_pt))
    if isinstance(op, SetTextMatrix):
        nums = (op.a, op.b, op.c, op.d, op.e, op.f)
        return b" ".join(_fmt_num(v) for v in nums) + b" Tm"
    if isinstance(op, MoveRelative):
        return b"%s %s Td" % (_fmt_num(op.tx), _fmt_num(op.ty))
    if isinstance(op, ShowString):
        return b"(" + _escape_string_bytes(_encode_text(op.text, encoding)) + b") Tj"
    if isinstance(op, ShowArray):
        parts = []
        for item in op.items:
            if isinstance(item, str):
                parts.append(b"(" + _escape_string_bytes(_encode_text(item, encoding)) + b")")
            else:
                parts.append(_fmt_num(item))
        return b"[" + b" ".join(parts) + b"] TJ"
    raise TypeError(f"unknown content op: {op!r}")


_NEEDS_ESCAPE = re.compile(rb"[()\\\x00-\x1f\x7f]")


def content_stream_bytes(ops: Sequence[ContentOp], encoding: str = SUPPORTED_ENCODING) -> bytes:
    """Render ops as one BT/ET text object, newline-separated."""
    lines = [b"BT"]
    append = lines.append
    for op in ops:
        # fast paths for the two ops emitted once per glyph
        if type(op) is SetTextMatrix:
            append(b"%.2f %.2f %.2f %.2f %.2f %.2f Tm"
                   % (op.a, op.b, op.c, op.d, op.e, op.f))
        elif type(op) is ShowString:
            raw = _encode_text(op.text, encoding)
            if _NEEDS_ESCAPE.search(raw) is None:
                append(b"(" + raw + b") Tj")
            else:
                append(b"(" + _escape_string_bytes(raw) + b") Tj")
        else:
            append(_op_bytes(op, encoding))
    append(b"ET")
    return b"\n".join(lines)


def _font_names_used(ops: Sequence[ContentOp]) -> set[str]:
    return {op.name for op in ops if isinstance(op, SetFont)}


def serialize(blueprint: DocumentBlueprint) -> bytes:
    """Serialize the blueprint to PDF 1.7 bytes.

    Object layout is fixed (catalog, pages, font, then page/stream pairs),
    content streams are uncompressed, and the xref table is classic, so the
    output is a pure function of the blueprint.
    """
    geometry = blueprint.geometry
    n_pages = len(blueprint.ops_per_page)

    bodies: list[bytes] = []  # bodies[i] belongs to object i+1
    page_obj_ids = [4 + 2 * i for i in range(n_pages)]
    kids = b" ".join(b"%d 0 R" % oid for oid in page_obj_ids)
    bodies.append(b"<< /Type /Catalog /Pages 2 0 R >>")
    bodies.append(b"<< /Type /Pages /Kids [" + kids + b"] /Count %d >>" % n_pages)
    bodies.append(
        b"<< /Type /Font /Subtype /Type1 /BaseFont /%s /Encoding /%s >>"
        % (blueprint.font.base_font_name.encode("ascii"), PDF_ENCODING_NAME.encode("ascii"))
    )

    media_box = b"[0.00 0.00 %s %s]" % (_fmt_num(geometry.width_pt), _fmt_num(geometry.height_pt))
    for i, ops in enumerate(blueprint.ops_per_page):
        names = sorted(_font_names_used(ops)) or [FONT_RESOURCE_NAME]
        font_dict = b" ".join(b"/%s 3 0 R" % n.encode("ascii") for n in names)
        stream_id = page_obj_ids[i] + 1
        bodies.append(
            b"<< /Type /Page /Parent 2 0 R /MediaBox " + media_box
            + b" /Resources << /Font << " + font_dict + b" >> >>"
            + b" /Contents %d 0 R >>" % stream_id
        )
        data = content_stream_bytes(ops, blueprint.font.encoding)
        bodies.append(
            b"<< /Length %d >>\nstream\n" % len(data) + data + b"\nendstream"
        )

    out = bytearray()
    out += b"%PDF-1.7\n"
    out += b"%\xe2\xe3\xcf\xd3\n"  # binary marker comment

    offsets = []
    for obj_num, body in enumerate(bodies, start=1):
        offsets.append(len(out))
        out += b"%d 0 obj\n" % obj_num
        out += body
        out += b"\nendobj\n"

    xref_offset = len(out)
    out += b"xref\n0 %d\n" % (len(bodies) + 1)
    out += b"0000000000 65535 f \n"
    for offset in offsets:
        out += b"%010d 00000 n \n" % offset
    out += b"trailer\n<< /Size %d /Root 1 0 R >>\n" % (len(bodies) + 1)
    out += b"startxref\n%d\n%%%%EOF\n" % xref_offset
    return bytes(out)
