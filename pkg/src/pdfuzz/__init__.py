"""pdfuzz: PDFs whose visual layout and extraction order tell different stories.

The toolkit writes documents whose glyphs sit exactly where a normal
rendering would put them while the content-stream order is scrambled,
extracts text the way stream-order-compliant tools do, proves visual
equivalence, audits documents for manipulation, and measures how the
scramble collapses a perplexity-based AI-text detector.
"""

from .corpus import CorpusRecord, load_natural_text, read_corpus_jsonl, write_corpus_jsonl
from .detector import (
    DetectorConfig,
    EvalReport,
    NgramModel,
    calibrate_threshold,
    evaluate_corpus,
    load_model,
    perplexity,
    sample,
    save_model,
    synthesize_corpus,
    train,
)
from .errors import (
    ConfigError,
    ContractError,
    EncodingError,
    InterpretError,
    ParseError,
    PdfuzzError,
)
from .extractor import (
    ExtractedGlyph,
    ExtractionResult,
    extract_text,
    interpret,
    parse_content_stream,
    parse_document,
)
from .fidelity import (
    AuditReport,
    FidelityReport,
    ScrambleMetrics,
    audit_order,
    scramble_metrics,
    visual_equivalence,
)
from .layout import (
    GlyphPlacement,
    LayoutConfig,
    LayoutResult,
    layout_text,
    reference_sequence,
)
from .pdfmodel import (
    ContentOp,
    DocumentBlueprint,
    FontSpec,
    MoveRelative,
    PageGeometry,
    SetFont,
    SetTextMatrix,
    ShowArray,
    ShowString,
    ops_from_placements,
    serialize,
)
from .pipeline import AttackArtifacts, attack_layout, render_attacked, render_normal
from .scrambler import (
    CharLevel,
    ChunkLevel,
    Permutation,
    ScrambleStrategy,
    apply,
    make_permutation,
)

__version__ = "0.1.0"
