"""Readers and writers for set systems, constraint matrices and colorings.

Set-system text format (UTF-8, LF endings)::

    n m
    <indices of set 0>
    <indices of set 1>
    ...

Each set line holds space-separated, strictly increasing 0-based indices; an
empty line is an empty set. Matrices are headerless CSV, one row per
constraint vector.
"""
import json
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..config.logging_config import logger
from ..core.errors import ParseError
from ..models.set_systems import Coloring, ConstraintSet, FractionalColoring, SetSystem

PathLike = Union[str, Path]


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ParseError("file not found", path=str(path)) from e
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8 text: {e}", path=str(path)) from e


def _parse_ints(text: str, path: str, line: int):
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as e:
        raise ParseError(f"expected integers, got {text!r}", path=path, line=line) from e


def parse_set_system(content: str, path: str = "<string>") -> SetSystem:
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines:
        raise ParseError("empty file", path=path, line=1)
    header = _parse_ints(lines[0].rstrip("\r"), path, 1)
    if len(header) != 2:
        raise ParseError("header must be 'n m'", path=path, line=1)
    n, m = header
    if n < 1 or m < 0:
        raise ParseError(f"invalid header n={n}, m={m}", path=path, line=1)
    if len(lines) - 1 != m:
        raise ParseError(f"header declares {m} sets, found {len(lines) - 1}", path=path, line=len(lines))

    sets = []
    for j, raw in enumerate(lines[1:]):
        line_no = j + 2
        indices = _parse_ints(raw.rstrip("\r"), path, line_no)
        for a, b in zip(indices, indices[1:]):
            if a >= b:
                raise ParseError(f"indices must be strictly increasing, got {a} then {b}", path=path, line=line_no)
        for i in indices:
            if not 0 <= i < n:
                raise ParseError(f"index {i} outside [0, {n})", path=path, line=line_no)
        sets.append(tuple(indices))
    return SetSystem(n=n, sets=tuple(sets))


def format_set_system(sys: SetSystem) -> str:
    lines = [f"{sys.n} {sys.m}"] + [" ".join(str(i) for i in s) for s in sys.sets]
    return "\n".join(lines) + "\n"


def load_set_system(path: PathLike) -> SetSystem:
    sys = parse_set_system(_read_text(path), path=str(path))
    logger.debug(f"Loaded set system from {path}: n={sys.n}, m={sys.m}")
    return sys


def save_set_system(sys: SetSystem, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_set_system(sys))
    logger.debug(f"Saved set system to {path}")


def save_matrix(constraints: ConstraintSet, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(constraints.rows).to_csv(path, header=False, index=False, float_format="%.17g",
                                          lineterminator="\n")


def load_matrix(path: PathLike, thresholds=None) -> ConstraintSet:
    """Headerless CSV of m rows by n columns."""
    path = str(path)
    text = _read_text(path)
    lines = text.split("\n")
    # physical line number of each non-blank row
    line_nos = [k + 1 for k, line in enumerate(lines) if line.strip()]
    if not line_nos:
        raise ParseError("empty matrix", path=path, line=1)
    widths = [len(lines[k - 1].split(",")) for k in line_nos]
    for line_no, width in zip(line_nos, widths):
        if width != widths[0]:
            raise ParseError(f"row has {width} columns, expected {widths[0]}", path=path, line=line_no)
    frame = pd.read_csv(path, header=None, skip_blank_lines=True, float_precision="round_trip")
    numeric = frame.apply(pd.to_numeric, errors="coerce")
    bad = numeric.isna().any(axis=1)
    if bad.any():
        raise ParseError("non-numeric or missing entry", path=path, line=line_nos[int(np.argmax(bad.to_numpy()))])
    try:
        return ConstraintSet.from_rows(numeric.to_numpy(dtype=np.float64), thresholds)
    except ValidationError as e:
        raise ParseError(str(e), path=path) from e


def load_instance(path: PathLike) -> Union[SetSystem, ConstraintSet]:
    """Set system for the text format, ConstraintSet for .csv files."""
    if Path(path).suffix.lower() == ".csv":
        return load_matrix(path)
    return load_set_system(path)


def _load_json(path: str, text: str) -> Optional[dict]:
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", path=path, line=e.lineno) from e


def load_coloring(path: PathLike) -> Coloring:
    """One line of +-1 values, or a JSON report with a "chi" entry."""
    path = str(path)
    text = _read_text(path)
    report = _load_json(path, text)
    if report is not None:
        if "chi" not in report:
            raise ParseError('JSON report has no "chi" entry', path=path)
        values = report["chi"]
    else:
        values = _parse_ints(text, path, 1)
    try:
        return Coloring(chi=values)
    except ValidationError as e:
        raise ParseError("coloring entries must be +1 or -1", path=path) from e


def load_fractional(path: PathLike) -> Tuple[FractionalColoring, Optional[FractionalColoring]]:
    """(x, x0) from a JSON report with "x" and optionally "x0"."""
    path = str(path)
    report = _load_json(path, _read_text(path))
    if report is None or "x" not in report:
        raise ParseError('expected a JSON object with an "x" entry', path=path)
    try:
        # the box check is the verifier's job
        x = FractionalColoring(x=report["x"], eps_box=np.inf)
        x0 = FractionalColoring(x=report["x0"], eps_box=np.inf) if "x0" in report else None
    except ValidationError as e:
        raise ParseError(f"invalid fractional coloring: {e}", path=path) from e
    return x, x0
