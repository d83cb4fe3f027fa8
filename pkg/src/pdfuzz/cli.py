"""Command-line surface for the whole pipeline.

Exit codes: 0 success (or clean verdict), 1 negative verdict, 2 usage or
data errors.  `audit` grades its finding instead: 0 clean, 1 suspicious,
2 manipulated.  All machine-readable output is JSON carrying a
schema_version field, except the documented plain-text glyph dump.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import detector, figures
from .corpus import read_corpus_jsonl
from .errors import PdfuzzError
from .extractor import extract_text
from .fidelity import audit_order, visual_equivalence
from .layout import (
    DEFAULT_FONT_SIZE_PT,
    DEFAULT_LINE_HEIGHT_PT,
    LayoutConfig,
    layout_text,
    reference_sequence,
)
from .pdfmodel import FontSpec, PageGeometry
from .pipeline import render_attacked, render_normal
from .scrambler import CharLevel, ChunkLevel, ScrambleStrategy

SCHEMA_VERSION = 1
SEED_ENV_VAR = "PDFUZZ_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _add_layout_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("layout")
    group.add_argument("--page-width", type=float, default=612.0, help="points")
    group.add_argument("--page-height", type=float, default=792.0, help="points")
    group.add_argument("--margin", type=float, default=72.0, help="points")
    group.add_argument("--font", default="Courier", help="standard base font name")
    group.add_argument("--font-size", type=float, default=DEFAULT_FONT_SIZE_PT)
    group.add_argument("--line-height", type=float, default=DEFAULT_LINE_HEIGHT_PT)


def _layout_config(args: argparse.Namespace) -> LayoutConfig:
    return LayoutConfig(
        geometry=PageGeometry(args.page_width, args.page_height, args.margin),
        font=FontSpec(base_font_name=args.font),
        font_size_pt=args.font_size,
        line_height_pt=args.line_height,
    )


def _strategy(name: str, seed: int) -> ScrambleStrategy:
    if name == "char":
        return CharLevel(seed)
    return ChunkLevel(seed)


def _dump_json(obj: dict, path: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    text = Path(args.in_path).read_text(encoding="utf-8")
    pdf, _ = render_normal(text, _layout_config(args))
    Path(args.out_path).write_bytes(pdf)
    return 0


def cmd_attack(args: argparse.Namespace) -> int:
    text = Path(args.in_path).read_text(encoding="utf-8")
    strategy = _strategy(args.strategy, args.seed)
    art = render_attacked(text, _layout_config(args), strategy)
    Path(args.out_path).write_bytes(art.attacked_pdf)

    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "strategy": args.strategy,
        "seed": args.seed,
        "n": art.permutation.n,
        "mapping": list(art.permutation.mapping),
    }
    if isinstance(strategy, ChunkLevel):
        sidecar["min_chunk"] = strategy.min_chunk
        sidecar["max_chunk"] = strategy.max_chunk
    sidecar_path = args.sidecar or args.out_path + ".perm.json"
    _dump_json(sidecar, sidecar_path)
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    result = extract_text(Path(args.in_path).read_bytes())
    if args.text_out is None and args.glyphs_out is None:
        sys.stdout.write(result.text)
        return 0
    if args.text_out is not None:
        Path(args.text_out).write_text(result.text, encoding="utf-8")
    if args.glyphs_out is not None:
        lines = [
            f"{g.page} {g.x:.2f} {g.y:.2f} {g.char}" for g in result.glyphs
        ]
        Path(args.glyphs_out).write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
        )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    glyphs_a = extract_text(Path(args.a).read_bytes()).glyphs
    glyphs_b = extract_text(Path(args.b).read_bytes()).glyphs
    report = visual_equivalence(glyphs_a, glyphs_b, eps=args.eps)
    _dump_json(
        {
            "schema_version": SCHEMA_VERSION,
            "visually_equal": report.visually_equal,
            "glyph_count_a": report.glyph_count_a,
            "glyph_count_b": report.glyph_count_b,
            "mismatches": [
                {"char": c, "x": x, "y": y, "page": p}
                for c, x, y, p in report.mismatches
            ],
        }
    )
    return 0 if report.visually_equal else 1


def cmd_audit(args: argparse.Namespace) -> int:
    glyphs = extract_text(Path(args.in_path).read_bytes()).glyphs
    report = audit_order(glyphs, line_height_pt=args.line_height)
    _dump_json(
        {
            "schema_version": SCHEMA_VERSION,
            "anomaly_score": report.anomaly_score,
            "verdict": report.verdict,
            "n_glyphs": report.n_glyphs,
        }
    )
    return {"clean": 0, "suspicious": 1, "manipulated": 2}[report.verdict]


def _stratified_split(records, fraction: float, seed: int):
    if not (0.0 < fraction < 1.0):
        raise PdfuzzError(f"--train-split must be in (0, 1): {fraction}")
    rng = random.Random(seed + 0x9E3779B9)
    train, evaluation = [], []
    for label in ("human", "ai"):
        group = [r for r in records if r.label == label]
        rng.shuffle(group)
        n_train = int(round(fraction * len(group)))
        if not (0 < n_train < len(group)):
            raise PdfuzzError(
                f"train split leaves no {label!r} documents on one side"
            )
        train.extend(group[:n_train])
        evaluation.extend(group[n_train:])
    order = {r.id: i for i, r in enumerate(records)}
    train.sort(key=lambda r: order[r.id])
    evaluation.sort(key=lambda r: order[r.id])
    return train, evaluation


def cmd_evaluate(args: argparse.Namespace) -> int:
    records = read_corpus_jsonl(args.corpus)
    labels = {r.label for r in records}
    if labels != {"human", "ai"}:
        raise PdfuzzError("corpus must contain both 'human' and 'ai' documents")

    train_recs, eval_recs = _stratified_split(records, args.train_split, args.seed)
    layout_config = _layout_config(args)
    model = detector.train([r.text for r in train_recs], order=args.order)
    # calibrate in the text space the pipeline scores: post-layout sequences
    config = detector.calibrate_threshold(
        model,
        [
            (reference_sequence(layout_text(r.text, layout_config)), r.label)
            for r in train_recs
        ],
    )
    report = detector.evaluate_corpus(
        model, config, eval_recs, _strategy(args.strategy, args.seed), layout_config
    )

    payload = {
        "schema_version": SCHEMA_VERSION,
        "strategy": args.strategy,
        "seed": args.seed,
        "train_split": args.train_split,
        "model": {"order": model.order, "alpha": model.alpha},
        "threshold": config.threshold,
        "calibration_accuracy": config.calibration_accuracy,
        "low_accuracy_warning": config.low_accuracy_warning,
        "n_train": len(train_recs),
        "n_eval": len(eval_recs),
        "normal": vars(report.normal),
        "attacked": vars(report.attacked),
        "per_doc": [vars(d) for d in report.per_doc],
    }
    _dump_json(payload, args.out)

    print(f"evaluated {len(eval_recs)} documents "
          f"({args.strategy} attack, seed {args.seed})")
    for name, metrics in (("normal", report.normal), ("attacked", report.attacked)):
        print(f"  {name:9s} accuracy={metrics.accuracy:.3f} "
              f"f1_ai={metrics.f1_ai:.3f} tpr@1%fpr={metrics.tpr_at_1pct_fpr:.3f}")

    if not args.no_figures:
        fig_dir = args.figures or str(Path(args.out).with_suffix("")) + "-figures"
        written = figures.render_report_figures(report, config, fig_dir)
        print(f"  figures: {', '.join(str(p) for p in written)}")
    return 0


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdfuzz",
        description="Generate, attack, extract, verify, audit, and evaluate "
                    "PDFs whose stream order diverges from reading order.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a normal PDF of a text file")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    _add_layout_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("attack", help="write a scrambled-stream PDF plus permutation sidecar")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--strategy", choices=("char", "chunk"), default="char")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--sidecar", help="permutation file (default: OUT.perm.json)")
    _add_layout_flags(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("extract", help="extract stream-order text and glyph positions")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--text", dest="text_out")
    p.add_argument("--glyphs", dest="glyphs_out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="compare the visual glyph multisets of two PDFs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--eps", type=float, default=0.005)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="flag stream order that fights reading order")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--line-height", type=float, default=DEFAULT_LINE_HEIGHT_PT)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("evaluate", help="train, calibrate, and run both detector pipelines")
    p.add_argument("--corpus", required=True, help="JSONL with id/label/text records")
    p.add_argument("--strategy", choices=("char", "chunk"), default="char")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--train-split", type=float, default=0.5)
    p.add_argument("--order", type=int, default=3, help="n-gram order")
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--figures", help="figure directory (default: OUT-figures)")
    p.add_argument("--no-figures", action="store_true")
    _add_layout_flags(p)
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PdfuzzError, OSError) as exc:
        print(f"pdfuzz {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
