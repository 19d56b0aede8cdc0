import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import ValidationError

from src.data_processing.schemas import CategoryFile, GroupFile
from src.fusion.data import (
    FusionCategoryData,
    build_ring,
    default_f_blocks,
    default_r_blocks,
    unit_constraint_errors,
)
from src.utils.errors import ParseError, SchemaError

logger = logging.getLogger(__name__)


def _read_json(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise ParseError(f"file not found: {path}") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"malformed JSON in {path}: {e}") from e


def locate(path: Union[str, Path], data_dir: Optional[Path] = None, folder: str = "categories") -> Path:
    """``path`` itself if it exists, else a bundled input ``data_dir/folder/<path>[.json]``."""
    path = Path(path)
    if path.exists() or data_dir is None:
        return path
    for candidate in (Path(data_dir) / folder / path, Path(data_dir) / folder / f"{path}.json"):
        if candidate.exists():
            logger.debug(f"Resolved '{path}' to {candidate}")
            return candidate
    return path


def category_from_document(document: dict) -> FusionCategoryData:
    """Builds un-validated category data from an already parsed JSON document."""
    try:
        spec = CategoryFile.model_validate(document)
    except ValidationError as e:
        raise SchemaError(f"category file violates the schema: {e}") from e

    labels = spec.labels
    index = {label: i for i, label in enumerate(labels)}
    dual = [index[spec.dual[label]] for label in labels]

    entries = {}
    for a, b, c, n in spec.fusion:
        key = (index[a], index[b], index[c])
        if key in entries:
            raise SchemaError(f"duplicate fusion entry {a} x {b} -> {c}")
        if n < 0:
            raise SchemaError(f"negative multiplicity for {a} x {b} -> {c}")
        entries[key] = n
    ring = build_ring(labels, dual, entries)
    problems = unit_constraint_errors(ring)
    if problems:
        raise SchemaError("unit constraints violated: " + "; ".join(problems))

    blocks = default_f_blocks(ring)
    seen = set()
    for entry in spec.F:
        a, b, c = (index[x] for x in entry.abc)
        d, e, f = index[entry.d], index[entry.e], index[entry.f]
        left = (e, entry.alpha, entry.beta)
        right = (f, entry.gamma, entry.delta)
        rows = ring.tree_index((a, b, c), d)
        cols = ring.right_index(a, b, c, d)
        if left not in rows or right not in cols:
            raise SchemaError(f"F entry {entry.abc}->{entry.d} ({entry.e},{entry.f}) outside the fusion rules")
        key = (a, b, c, d, left, right)
        if key in seen:
            raise SchemaError(f"duplicate F entry {entry.abc}->{entry.d} ({entry.e},{entry.f})")
        seen.add(key)
        blocks[(a, b, c, d)][rows[left], cols[right]] = complex(*entry.v)

    braid = None
    if spec.R is not None:
        braid = default_r_blocks(ring)
        seen_r = set()
        for entry in spec.R:
            a, b = (index[x] for x in entry.ab)
            c = index[entry.c]
            if (a, b, c) not in braid or entry.alpha >= ring.N[b, a, c] or entry.beta >= ring.N[a, b, c]:
                raise SchemaError(f"R entry {entry.ab}->{entry.c} outside the fusion rules")
            key = (a, b, c, entry.alpha, entry.beta)
            if key in seen_r:
                raise SchemaError(f"duplicate R entry {entry.ab}->{entry.c}")
            seen_r.add(key)
            braid[(a, b, c)][entry.alpha, entry.beta] = complex(*entry.v)

    dims = np.array([complex(*spec.dims[label]) for label in labels])
    pivotal = np.ones(len(labels), dtype=complex)
    for label, value in (spec.pivotal or {}).items():
        pivotal[index[label]] = complex(*value)

    return FusionCategoryData(
        name=spec.name, ring=ring, F=blocks, dims=dims, pivotal=pivotal, R=braid, unitary=spec.unitary,
    )


def load_category(path: Union[str, Path], data_dir: Optional[Path] = None) -> FusionCategoryData:
    """Parses a category file, falling back to the bundled ones in ``data_dir``; validation is a separate step."""
    path = locate(path, data_dir, "categories")
    logger.info(f"Loading category from {path}")
    cat = category_from_document(_read_json(path))
    logger.info(f"Loaded '{cat.name}' of rank {cat.rank} (braided: {cat.braided}).")
    return cat


def load_group_file(path: Union[str, Path], data_dir: Optional[Path] = None) -> GroupFile:
    path = locate(path, data_dir, "groups")
    try:
        return GroupFile.model_validate(_read_json(path))
    except ValidationError as e:
        raise SchemaError(f"group file violates the schema: {e}") from e
