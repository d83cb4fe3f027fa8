"""PDF parsing and stream-order text extraction.

This models the extractor class the attack targets: glyphs are reported in
the exact order their show operators appear in each page's content stream.
There is deliberately no spatial re-sorting here; recovering reading order
is the auditor's job, not the extractor's.

Parsing is tolerant at the operator level (unknown operators and their
operands are skipped) but strict about structure: broken xref tables,
missing trailers, unbalanced strings and the like raise ParseError with a
byte offset.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass

from .errors import InterpretError, ParseError
from .pdfmodel import (
    ContentOp,
    MoveRelative,
    SetFont,
    SetTextMatrix,
    ShowArray,
    ShowString,
)

DEFAULT_GLYPH_WIDTH_EM = 0.6  # Courier metrics; all supported fonts are fixed-pitch


@dataclass(frozen=True)
class ExtractedGlyph:
    char: str
    x: float
    y: float
    page: int
    stream_index: int


@dataclass
class ExtractionResult:
    glyphs: list[ExtractedGlyph]
    text: str


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    rb"[\x00\t\n\f\r ]+"
    rb"|%[^\r\n]*"
    rb"|(?P<num>[+-]?(?:\d+\.\d*|\.\d+|\d+))"
    rb"|(?P<name>/[^\x00\t\n\f\r ()<>\[\]{}/%]*)"
    rb"|(?P<dopen><<)"
    rb"|(?P<dclose>>>)"
    rb"|(?P<aopen>\[)"
    rb"|(?P<aclose>\])"
    rb"|(?P<hex><[0-9A-Fa-f\x00\t\n\f\r ]*>)"
    rb"|(?P<sopen>\()"
    rb"|(?P<sclose>\))"
    rb"|(?P<kw>[^\x00\t\n\f\r ()<>\[\]{}/%]+)"
)

_STR_SPECIAL = re.compile(rb"[()\\]")
_OCTAL = re.compile(rb"[0-7]{1,3}")

_ESCAPES = {
    ord("n"): b"\n", ord("r"): b"\r", ord("t"): b"\t",
    ord("b"): b"\b", ord("f"): b"\f",
    ord("("): b"(", ord(")"): b")", ord("\\"): b"\\",
}


def _scan_string(data: bytes, pos: int) -> tuple[bytes, int]:
    """Scan a literal string body; `pos` sits just after the opening paren."""
    out = bytearray()
    depth = 1
    while True:
        m = _STR_SPECIAL.search(data, pos)
        if m is None:
            raise ParseError("unterminated string", pos)
        out += data[pos:m.start()]
        byte = data[m.start()]
        pos = m.end()
        if byte == 0x28:  # (
            depth += 1
            out += b"("
        elif byte == 0x29:  # )
            depth -= 1
            if depth == 0:
                return bytes(out), pos
            out += b")"
        else:  # backslash
            if pos >= len(data):
                raise ParseError("escape at end of data", pos)
            nxt = data[pos]
            if nxt in _ESCAPES:
                out += _ESCAPES[nxt]
                pos += 1
            elif 0x30 <= nxt <= 0x37:
                m2 = _OCTAL.match(data, pos)
                out.append(int(m2.group(), 8) & 0xFF)
                pos = m2.end()
            elif nxt in (0x0A, 0x0D):  # line continuation
                pos += 1
                if nxt == 0x0D and pos < len(data) and data[pos] == 0x0A:
                    pos += 1
            else:
                out.append(nxt)
                pos += 1


class _Lexer:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def next_token(self) -> tuple[str, object] | None:
        """Return (kind, value) or None at end of data."""
        data = self.data
        while self.pos < len(data):
            m = _TOKEN_RE.match(data, self.pos)
            if m is None:
                raise ParseError(f"unexpected byte {data[self.pos:self.pos+1]!r}", self.pos)
            start = self.pos
            self.pos = m.end()
            kind = m.lastgroup
            if kind is None:  # whitespace or comment
                continue
            if kind == "num":
                tok = m.group()
                return ("num", float(tok) if b"." in tok else int(tok))
            if kind == "name":
                return ("name", m.group()[1:].decode("latin-1"))
            if kind == "hex":
                digits = re.sub(rb"[^0-9A-Fa-f]", b"", m.group()[1:-1])
                if len(digits) % 2:
                    digits += b"0"
                return ("str", bytes.fromhex(digits.decode("ascii")))
            if kind == "sopen":
                body, self.pos = _scan_string(data, self.pos)
                return ("str", body)
            if kind == "sclose":
                raise ParseError("unbalanced closing parenthesis", start)
            if kind == "kw":
                return ("kw", m.group())
            return (kind, m.group())
        return None


@dataclass(frozen=True)
class _Ref:
    num: int
    gen: int


def _parse_value(lexer: _Lexer, token, allow_refs: bool):
    """Build a composite value (array/dict/ref) starting from `token`."""
    kind, value = token
    if kind == "num":
        if allow_refs and isinstance(value, int):
            save = lexer.pos
            t2 = lexer.next_token()
            if t2 is not None and t2[0] == "num" and isinstance(t2[1], int):
                t3 = lexer.next_token()
                if t3 is not None and t3 == ("kw", b"R"):
                    return _Ref(value, t2[1])
            lexer.pos = save
        return value
    if kind in ("name", "str"):
        return value
    if kind == "aopen":
        items = []
        while True:
            tok = lexer.next_token()
            if tok is None:
                raise ParseError("unterminated array", lexer.pos)
            if tok[0] == "aclose":
                return items
            items.append(_parse_value(lexer, tok, allow_refs))
    if kind == "dopen":
        out = {}
        while True:
            tok = lexer.next_token()
            if tok is None:
                raise ParseError("unterminated dictionary", lexer.pos)
            if tok[0] == "dclose":
                return out
            if tok[0] != "name":
                raise ParseError(f"dictionary key must be a name, got {tok!r}", lexer.pos)
            val_tok = lexer.next_token()
            if val_tok is None:
                raise ParseError("dictionary ended before value", lexer.pos)
            out[tok[1]] = _parse_value(lexer, val_tok, allow_refs)
        return out
    if kind == "kw" and value in (b"true", b"false", b"null"):
        return {b"true": True, b"false": False, b"null": None}[value]
    raise ParseError(f"unexpected token {token!r}", lexer.pos)


def _decode_text_bytes(raw: bytes) -> str:
    try:
        return raw.decode("cp1252")
    except UnicodeDecodeError:
        # cp1252 leaves five bytes undefined; fall back per byte
        return "".join(
            bytes([b]).decode("cp1252", errors="strict") if b not in (0x81, 0x8D, 0x8F, 0x90, 0x9D)
            else chr(b)
            for b in raw
        )


# ---------------------------------------------------------------------------
# Document structure
# ---------------------------------------------------------------------------


class _Document:
    def __init__(self, data: bytes):
        self.data = data
        self.offsets: dict[int, int] = {}
        self.trailer: dict = {}
        self._cache: dict[int, object] = {}
        self._load_xref_chain()

    def _load_xref_chain(self) -> None:
        data = self.data
        idx = data.rfind(b"startxref")
        if idx < 0:
            raise ParseError("missing startxref", len(data))
        m = re.match(rb"startxref[\x00\t\n\f\r ]+(\d+)", data[idx:])
        if m is None:
            raise ParseError("malformed startxref", idx)
        offset = int(m.group(1))
        seen_objs: set[int] = set()
        seen_offsets: set[int] = set()
        while offset is not None:
            if offset in seen_offsets:
                raise ParseError("cyclic xref chain", offset)
            seen_offsets.add(offset)
            trailer = self._load_xref_table(offset, seen_objs)
            for key, value in trailer.items():
                self.trailer.setdefault(key, value)
            prev = trailer.get("Prev")
            offset = int(prev) if isinstance(prev, (int, float)) else None
        if "Root" not in self.trailer:
            raise ParseError("trailer has no /Root")

    def _load_xref_table(self, offset: int, seen_objs: set[int]) -> dict:
        if offset >= len(self.data):
            raise ParseError("xref offset beyond end of file", offset)
        lexer = _Lexer(self.data, offset)
        tok = lexer.next_token()
        if tok != ("kw", b"xref"):
            raise ParseError("no xref table at startxref offset", offset)
        while True:
            tok = lexer.next_token()
            if tok is None:
                raise ParseError("xref table ended without trailer", lexer.pos)
            if tok == ("kw", b"trailer"):
                break
            if tok[0] != "num":
                raise ParseError(f"malformed xref subsection header: {tok!r}", lexer.pos)
            start = int(tok[1])
            count_tok = lexer.next_token()
            if count_tok is None or count_tok[0] != "num":
                raise ParseError("xref subsection missing entry count", lexer.pos)
            for i in range(int(count_tok[1])):
                ent_off = lexer.next_token()
                ent_gen = lexer.next_token()
                ent_type = lexer.next_token()
                if (
                    ent_off is None or ent_off[0] != "num"
                    or ent_gen is None or ent_gen[0] != "num"
                    or ent_type is None or ent_type[0] != "kw"
                    or ent_type[1] not in (b"n", b"f")
                ):
                    raise ParseError("malformed xref entry", lexer.pos)
                obj_num = start + i
                if obj_num in seen_objs:
                    continue
                seen_objs.add(obj_num)
                if ent_type[1] == b"n":
                    self.offsets[obj_num] = int(ent_off[1])
        tok = lexer.next_token()
        if tok is None or tok[0] != "dopen":
            raise ParseError("missing trailer dictionary", lexer.pos)
        return _parse_value(lexer, tok, allow_refs=True)

    def deref(self, value):
        seen = set()
        while isinstance(value, _Ref):
            if value.num in seen:
                raise ParseError(f"circular reference to object {value.num}")
            seen.add(value.num)
            value = self.get_object(value.num)
        return value

    def get_object(self, num: int):
        if num in self._cache:
            return self._cache[num]
        if num not in self.offsets:
            raise ParseError(f"object {num} not in xref table")
        offset = self.offsets[num]
        lexer = _Lexer(self.data, offset)
        t_num = lexer.next_token()
        t_gen = lexer.next_token()
        t_obj = lexer.next_token()
        if (
            t_num is None or t_num[0] != "num" or int(t_num[1]) != num
            or t_gen is None or t_gen[0] != "num"
            or t_obj != ("kw", b"obj")
        ):
            raise ParseError(f"object {num} not found at xref offset", offset)
        tok = lexer.next_token()
        if tok is None:
            raise ParseError(f"object {num} has no body", lexer.pos)
        value = _parse_value(lexer, tok, allow_refs=True)
        if isinstance(value, dict):
            save = lexer.pos
            nxt = lexer.next_token()
            if nxt == ("kw", b"stream"):
                value = (value, self._read_stream_data(value, lexer.pos))
            else:
                lexer.pos = save
        self._cache[num] = value
        return value

    def _read_stream_data(self, sdict: dict, pos: int) -> bytes:
        data = self.data
        if pos < len(data) and data[pos] == 0x0D:
            pos += 1
        if pos < len(data) and data[pos] == 0x0A:
            pos += 1
        length = self.deref(sdict.get("Length"))
        if not isinstance(length, int):
            raise ParseError("stream without integer /Length", pos)
        if pos + length > len(data):
            raise ParseError("stream data truncated", pos)
        return data[pos:pos + length]


def _decode_stream(doc: _Document, sdict: dict, raw: bytes) -> bytes:
    filt = doc.deref(sdict.get("Filter"))
    if filt is None:
        return raw
    if isinstance(filt, list):
        if len(filt) != 1:
            raise ParseError(f"unsupported filter chain: {filt!r}")
        filt = doc.deref(filt[0])
    if filt == "FlateDecode":
        try:
            return zlib.decompress(raw)
        except zlib.error as exc:
            raise ParseError(f"FlateDecode failed: {exc}") from None
    raise ParseError(f"unsupported stream filter: {filt!r}")


def parse_document(data: bytes) -> list[bytes]:
    """Return each page's decoded content stream bytes, in page order."""
    if not data.startswith(b"%PDF"):
        raise ParseError("missing %PDF header", 0)
    doc = _Document(data)
    catalog = doc.deref(doc.trailer["Root"])
    if not isinstance(catalog, dict) or "Pages" not in catalog:
        raise ParseError("document catalog has no /Pages")

    pages: list[dict] = []
    visited: set[int] = set()

    def walk(node_value) -> None:
        if isinstance(node_value, _Ref):
            if node_value.num in visited:
                raise ParseError(f"cyclic page tree at object {node_value.num}")
            visited.add(node_value.num)
            node_value = doc.deref(node_value)
        if not isinstance(node_value, dict):
            raise ParseError("page tree node is not a dictionary")
        node_type = doc.deref(node_value.get("Type"))
        if node_type == "Pages" or ("Kids" in node_value and node_type != "Page"):
            for kid in doc.deref(node_value.get("Kids", [])):
                walk(kid)
        else:
            pages.append(node_value)

    walk(catalog["Pages"])

    streams: list[bytes] = []
    for page in pages:
        contents = doc.deref(page.get("Contents"))
        if contents is None:
            streams.append(b"")
            continue
        parts = contents if isinstance(contents, list) else [contents]
        chunks = []
        for part in parts:
            obj = doc.deref(part)
            if not (isinstance(obj, tuple) and len(obj) == 2):
                raise ParseError("page /Contents does not point at a stream")
            sdict, raw = obj
            chunks.append(_decode_stream(doc, sdict, raw))
        streams.append(b"\n".join(chunks))
    return streams


# ---------------------------------------------------------------------------
# Content streams
# ---------------------------------------------------------------------------


# Fast paths for the line shapes our own writer emits; anything else falls
# back to the generic tokenizer.
_WS_B = rb"[\x00\t\n\f\r ]"
_NUM_B = rb"[+-]?(?:\d+\.\d*|\.\d+|\d+)"
_FAST_TM = re.compile(
    (_WS_B + rb"*(" + _NUM_B + rb")") * 6
    + _WS_B + rb"+Tm(?=" + _WS_B + rb"|[()<>\[\]{}/%]|\Z)"
)
_FAST_TJ = re.compile(
    _WS_B + rb"*\(([^()\\]*)\)" + _WS_B + rb"+Tj(?=" + _WS_B + rb"|[()<>\[\]{}/%]|\Z)"
)


def parse_content_stream(data: bytes) -> list[ContentOp]:
    """Tokenize a content stream into the recognized text operators.

    Unrecognized operators are dropped together with their operands, so
    third-party streams with graphics state, color, or marked-content
    operators still parse.  BT/ET delimit text objects and emit nothing.
    """
    lexer = _Lexer(data)
    ops: list[ContentOp] = []
    operands: list = []
    while True:
        if not operands:
            m = _FAST_TM.match(data, lexer.pos)
            if m is not None:
                ops.append(SetTextMatrix(*(float(g) for g in m.groups())))
                lexer.pos = m.end()
                continue
            m = _FAST_TJ.match(data, lexer.pos)
            if m is not None:
                ops.append(ShowString(_decode_text_bytes(m.group(1))))
                lexer.pos = m.end()
                continue
        tok = lexer.next_token()
        if tok is None:
            return ops
        kind = tok[0]
        if kind == "kw":
            op = _build_op(tok[1], operands)
            if op is not None:
                ops.append(op)
            operands.clear()
        elif kind == "dclose":
            raise ParseError("unbalanced dictionary close", lexer.pos)
        elif kind == "aclose":
            raise ParseError("unbalanced array close", lexer.pos)
        else:
            operands.append(_parse_value(lexer, tok, allow_refs=False))


def _is_num(v) -> bool:
    return isinstance(v, (int, float))


def _build_op(operator: bytes, operands: list) -> ContentOp | None:
    if operator == b"Tf":
        if len(operands) >= 2 and isinstance(operands[-2], str) and _is_num(operands[-1]):
            return SetFont(operands[-2], float(operands[-1]))
    elif operator == b"Tm":
        if len(operands) >= 6 and all(_is_num(v) for v in operands[-6:]):
            return SetTextMatrix(*(float(v) for v in operands[-6:]))
    elif operator == b"Td":
        if len(operands) >= 2 and _is_num(operands[-2]) and _is_num(operands[-1]):
            return MoveRelative(float(operands[-2]), float(operands[-1]))
    elif operator == b"Tj":
        if operands and isinstance(operands[-1], bytes):
            return ShowString(_decode_text_bytes(operands[-1]))
    elif operator == b"TJ":
        if operands and isinstance(operands[-1], list):
            items = []
            for item in operands[-1]:
                if isinstance(item, bytes):
                    items.append(_decode_text_bytes(item))
                elif _is_num(item):
                    items.append(item)
                else:
                    return None
            return ShowArray(tuple(items))
    return None


_IDENTITY = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def interpret(
    ops: list[ContentOp],
    page: int,
    glyph_width_em: float = DEFAULT_GLYPH_WIDTH_EM,
    *,
    start_index: int = 0,
) -> list[ExtractedGlyph]:
    """Run the text state machine over one page's ops, emitting glyphs in
    stream order.

    State: the text matrix (Tm), the line matrix (Td translates it), and
    the current font size.  Each shown character is emitted at the current
    pen position; the pen then advances by glyph_width_em * font_size along
    the baseline.  TJ numbers shift the pen by -value/1000 * font_size.
    stream_index counts from `start_index` (callers concatenating pages).
    """
    tm = _IDENTITY
    lm = _IDENTITY
    font_size: float | None = None
    glyphs: list[ExtractedGlyph] = []

    def show_text(text: str) -> None:
        nonlocal tm
        a, b, c, d, e, f = tm
        advance = glyph_width_em * font_size
        for ch in text:
            glyphs.append(ExtractedGlyph(ch, e, f, page, start_index + len(glyphs)))
            e += advance * a
            f += advance * b
        tm = (a, b, c, d, e, f)

    for op in ops:
        if isinstance(op, SetFont):
            font_size = op.size_pt
        elif isinstance(op, SetTextMatrix):
            tm = lm = (op.a, op.b, op.c, op.d, op.e, op.f)
        elif isinstance(op, MoveRelative):
            a, b, c, d, e, f = lm
            lm = (a, b, c, d, op.tx * a + op.ty * c + e, op.tx * b + op.ty * d + f)
            tm = lm
        elif isinstance(op, ShowString):
            if font_size is None:
                raise InterpretError("show operator before any font selection")
            show_text(op.text)
        elif isinstance(op, ShowArray):
            if font_size is None:
                raise InterpretError("show operator before any font selection")
            for item in op.items:
                if isinstance(item, str):
                    show_text(item)
                else:
                    a, b, c, d, e, f = tm
                    shift = -float(item) / 1000.0 * font_size
                    tm = (a, b, c, d, e + shift * a, f + shift * b)
    return glyphs


def extract_text(data: bytes, glyph_width_em: float = DEFAULT_GLYPH_WIDTH_EM) -> ExtractionResult:
    """parse_document -> parse_content_stream -> interpret, page by page."""
    glyphs: list[ExtractedGlyph] = []
    for page, stream in enumerate(parse_document(data)):
        glyphs.extend(
            interpret(
                parse_content_stream(stream), page, glyph_width_em,
                start_index=len(glyphs),
            )
        )
    return ExtractionResult(glyphs, "".join(g.char for g in glyphs))
