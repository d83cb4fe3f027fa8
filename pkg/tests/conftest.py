from __future__ import annotations

import random

import pytest

from pdfuzz import LayoutConfig, load_natural_text

# 100 essay lengths spanning 200..5000 chars, biased toward short documents
ESSAY_LENGTHS = [round(200 * 25 ** ((i / 99) ** 2)) for i in range(100)]


@pytest.fixture(scope="session")
def natural_text() -> str:
    return load_natural_text()


@pytest.fixture(scope="session")
def prose(natural_text) -> str:
    """Natural prose flattened to a single newline-free stream."""
    return natural_text.replace("\n", " ")


@pytest.fixture(scope="session")
def essays(prose) -> list[str]:
    """100 essays, mixed lengths 200-5000 chars, cut deterministically."""
    rng = random.Random(1234)
    out = []
    for length in ESSAY_LENGTHS:
        start = rng.randrange(0, len(prose) - length)
        out.append(prose[start:start + length])
    return out


@pytest.fixture(scope="session")
def default_config() -> LayoutConfig:
    return LayoutConfig()
