#!/usr/bin/env python3
"""Regenerate src/pdfuzz/data/natural_text.txt from Python stdlib docstrings.

The packaged corpus is a frozen snapshot; rerun this only to refresh it.
Output is plain English prose, one paragraph per line, restricted to the
cp1252 repertoire so every character survives the PDF pipeline.
"""

from __future__ import annotations

import importlib
import inspect
import re
from pathlib import Path

MODULES = [
    "abc", "argparse", "ast", "asyncio", "bisect", "calendar", "cmath",
    "codecs", "collections", "configparser", "contextlib", "copy", "csv",
    "dataclasses", "datetime", "decimal", "difflib", "dis", "doctest",
    "email", "enum", "fractions", "functools", "getpass", "gettext",
    "graphlib", "gzip", "hashlib", "heapq", "hmac", "io", "itertools",
    "json", "keyword", "locale", "logging", "math", "mmap", "numbers",
    "os", "pathlib", "pdb", "pickle", "platform", "profile", "queue",
    "random", "re", "sched", "secrets", "shutil", "socket", "sqlite3",
    "statistics", "string", "struct", "subprocess", "tarfile", "textwrap",
    "threading", "time", "timeit", "tokenize", "traceback", "typing",
    "unicodedata", "unittest", "warnings", "zipfile",
]

OUT = Path(__file__).resolve().parent.parent / "src" / "pdfuzz" / "data" / "natural_text.txt"

_WS = re.compile(r"\s+")


def paragraphs(doc: str) -> list[str]:
    out = []
    for block in re.split(r"\n\s*\n", doc):
        text = _WS.sub(" ", block).strip()
        if len(text) < 60:
            continue
        letters = sum(ch.isalpha() or ch == " " for ch in text)
        if letters / len(text) < 0.82:
            continue
        try:
            text.encode("cp1252")
        except UnicodeEncodeError:
            continue
        out.append(text)
    return out


def harvest(module_name: str) -> list[str]:
    try:
        mod = importlib.import_module(module_name)
    except Exception:
        return []
    docs = [inspect.getdoc(mod) or ""]
    for name in sorted(dir(mod)):
        if name.startswith("_"):
            continue
        try:
            obj = getattr(mod, name)
        except Exception:
            continue
        if inspect.isclass(obj) or inspect.isfunction(obj):
            docs.append(inspect.getdoc(obj) or "")
            if inspect.isclass(obj):
                for mname in sorted(vars(obj)):
                    if mname.startswith("_"):
                        continue
                    try:
                        member = getattr(obj, mname)
                    except Exception:
                        continue
                    if inspect.isfunction(member) or inspect.ismethod(member):
                        docs.append(inspect.getdoc(member) or "")
    paras = []
    for doc in docs:
        paras.extend(paragraphs(doc))
    return paras


def main() -> None:
    seen = set()
    lines = []
    for module_name in MODULES:
        for para in harvest(module_name):
            if para in seen:
                continue
            seen.add(para)
            lines.append(para)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="cp1252")
    total = sum(len(line) for line in lines)
    print(f"wrote {len(lines)} paragraphs, {total} chars -> {OUT}")


if __name__ == "__main__":
    main()
