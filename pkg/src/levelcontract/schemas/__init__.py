"""JSON Schemas for the ``--json`` outputs of the command-line tool."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

NAMES = ("graph", "validation", "modification", "contraction", "residue-report", "residue-system", "error")


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"no schema named {name!r}; known: {', '.join(NAMES)}")
    return json.loads(resources.files(__name__).joinpath(f"{name}.json").read_text(encoding="utf-8"))
