"""Shipped example documents: the three worked categories and diagrams."""

from __future__ import annotations

import json
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent


def path(name: str) -> Path:
    p = DATA_DIR / name
    if not p.exists():
        raise FileNotFoundError(name)
    return p


def load_json(name: str) -> dict:
    return json.loads(path(name).read_text(encoding="utf-8"))


def load_category(name: str):
    from ..ainfcat import AInfCategory
    return AInfCategory.from_json(load_json("%s.category.json" % name))


def load_diagram(name: str):
    from ..diagram import diagram_from_json
    return diagram_from_json(load_json("%s.diagram.json" % name))
