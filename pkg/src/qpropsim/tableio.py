"""Deterministic CSV/JSON serialization for experiment outputs.

Numbers are written with 12 significant digits and a '.' decimal separator;
divergent or inapplicable values appear as the literals `inf` / `invalid`.
Every CSV ends with a metadata comment line carrying the config hash, seed,
and package version, so outputs are diffable experiment records.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Iterable, Sequence

from . import __version__

INVALID = "invalid"


def format_value(value) -> str:
    if value is None:
        return INVALID
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    v = float(value)
    if math.isnan(v):
        return INVALID
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".12g")


def config_hash(config_document: dict) -> str:
    canonical = json.dumps(config_document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def metadata_comment(cfg_hash: str, seed: int) -> str:
    return f"# config-hash={cfg_hash}, seed={seed}, version={__version__}"


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence],
    cfg_hash: str,
    seed: int,
) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    lines.append(metadata_comment(cfg_hash, seed))
    return "\n".join(lines) + "\n"


def render_json(document: dict) -> str:
    """JSON with floats pre-rendered to 12 significant digits."""

    def convert(obj):
        if isinstance(obj, dict):
            return {k: convert(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [convert(v) for v in obj]
        if obj is None or isinstance(obj, (str, bool, int)):
            return obj
        v = float(obj)
        if math.isinf(v) or math.isnan(v):
            return "inf" if v > 0 else (INVALID if math.isnan(v) else "-inf")
        return float(format(v, ".12g"))

    return json.dumps(convert(document), indent=2, sort_keys=True) + "\n"
