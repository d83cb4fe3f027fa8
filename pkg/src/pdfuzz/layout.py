"""Monospace text layout: map input text to absolutely positioned glyphs.

The placement list in reading order is the ground truth every other module
compares against.  Spaces become real (blank) glyphs so that a scrambled
document still carries the exact character multiset of the original; only
newlines (pure layout directives) and spaces consumed at wrap boundaries
produce no glyph.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ConfigError, EncodingError
from .pdfmodel import FontSpec, PageGeometry

DEFAULT_FONT_SIZE_PT = 12.0
DEFAULT_LINE_HEIGHT_PT = 14.4


@dataclass(frozen=True)
class GlyphPlacement:
    """One character at an absolute page position (origin bottom-left)."""

    char: str
    x: float
    y: float
    page: int
    reading_index: int


@dataclass(frozen=True)
class LayoutConfig:
    geometry: PageGeometry = PageGeometry()
    font: FontSpec = FontSpec()
    font_size_pt: float = DEFAULT_FONT_SIZE_PT
    line_height_pt: float = DEFAULT_LINE_HEIGHT_PT

    def __post_init__(self):
        if not (self.font_size_pt > 0):
            raise ConfigError("font size must be positive")
        if self.line_height_pt < self.font_size_pt:
            raise ConfigError("line height must be at least the font size")

    @property
    def advance_pt(self) -> float:
        return self.font.glyph_width_em * self.font_size_pt

    @property
    def max_cols(self) -> int:
        usable = self.geometry.width_pt - 2 * self.geometry.margin_pt
        return int(math.floor(usable / self.advance_pt + 1e-9))

    @property
    def rows_per_page(self) -> int:
        usable = self.geometry.height_pt - 2 * self.geometry.margin_pt
        return int(math.floor(usable / self.line_height_pt + 1e-9)) + 1


@dataclass
class LayoutResult:
    placements: list[GlyphPlacement]
    config: LayoutConfig

    @property
    def n_pages(self) -> int:
        if not self.placements:
            return 1
        return self.placements[-1].page + 1


_TOKENS = re.compile(r" +|[^ ]+")


def wrap_paragraph(par: str, max_cols: int) -> list[str]:
    """Greedy word-wrap of a newline-free paragraph into line strings.

    Words longer than a line are hard-split.  Spaces that would sit at a
    wrap boundary (trailing spaces before a wrapped word, or spaces past
    the right edge) are consumed; all other spaces stay, including leading
    indentation and trailing spaces on the final line.
    """
    lines: list[str] = []
    cur = ""
    for token in _TOKENS.findall(par):
        if token[0] == " ":
            room = max_cols - len(cur)
            if room > 0:
                cur += token[:room]
        elif len(cur) + len(token) <= max_cols:
            cur += token
        elif len(token) <= max_cols:
            lines.append(cur.rstrip(" "))
            cur = token
        else:
            word = token
            while True:
                room = max_cols - len(cur)
                if len(word) <= room:
                    cur += word
                    break
                if room > 0:
                    cur += word[:room]
                    word = word[room:]
                lines.append(cur.rstrip(" "))
                cur = ""
    lines.append(cur)
    return lines


def layout_text(text: str, config: LayoutConfig = LayoutConfig()) -> LayoutResult:
    """Place every non-newline character of `text` on the page grid.

    Newlines force a line break and produce no glyph.  Raises EncodingError
    for characters outside the font encoding and ConfigError when the text
    area is too narrow for even one glyph column.
    """
    encoding = config.font.encoding
    try:
        text.encode(encoding)
    except UnicodeEncodeError as exc:
        raise EncodingError(text[exc.start], exc.start, encoding) from None

    max_cols = config.max_cols
    if max_cols < 1:
        raise ConfigError("usable page width is narrower than one glyph")
    advance = config.advance_pt
    if round(advance, 2) < 0.01 or round(config.line_height_pt, 2) < 0.01:
        raise ConfigError("glyph advance and line height must survive 0.01 pt quantization")

    lines: list[str] = []
    for par in text.split("\n"):
        lines.extend(wrap_paragraph(par, max_cols))

    geometry = config.geometry
    margin = geometry.margin_pt
    top = geometry.height_pt - margin
    rows_per_page = config.rows_per_page

    placements: list[GlyphPlacement] = []
    index = 0
    for line_no, line in enumerate(lines):
        page, row = divmod(line_no, rows_per_page)
        y = round(top - row * config.line_height_pt, 2)
        for col, char in enumerate(line):
            x = round(margin + col * advance, 2)
            placements.append(GlyphPlacement(char, x, y, page, index))
            index += 1
    return LayoutResult(placements, config)


def reference_sequence(result: LayoutResult) -> str:
    """Characters in reading order; the extraction ground truth."""
    return "".join(p.char for p in result.placements)
