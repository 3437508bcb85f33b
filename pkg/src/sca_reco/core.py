"""Shared domain types and the canonical orderings every stage relies on.

A "warning" exists in two forms: the raw record exactly as an analyzer
reported it, and the canonical form in which the analyzer-native type has
been replaced by a general defect category so warnings from different
analyzers become comparable.  Both are immutable value objects.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .exceptions import InvalidBeta, IoError, ParseError, SchemaError

# An analyzer identity is a short lowercase token such as "spotbugs".
ScaId = str

TAXONOMY_HEADER = ("gdc_id", "name", "group")


class WarningLabel(Enum):
    ACTIONABLE = "actionable"
    UNACTIONABLE = "unactionable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GdcCategory:
    gdc_id: str
    name: str
    group: str


@dataclass(frozen=True)
class GdcTaxonomy:
    """Two-level defect categorization: coarse groups over fine categories."""

    categories: tuple[GdcCategory, ...]
    groups: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.groups)) != len(self.groups):
            raise SchemaError("taxonomy declares a duplicate group")
        ids = [c.gdc_id for c in self.categories]
        if len(set(ids)) != len(ids):
            raise SchemaError("taxonomy declares a duplicate gdc_id")
        known = set(self.groups)
        for category in self.categories:
            if category.group not in known:
                raise SchemaError(
                    f"category {category.gdc_id!r} references missing group {category.group!r}"
                )

    @property
    def category_ids(self) -> frozenset[str]:
        return frozenset(c.gdc_id for c in self.categories)


def load_taxonomy(path: str | Path, strict_shape: bool = True) -> GdcTaxonomy:
    """Load a taxonomy TSV (header ``gdc_id<TAB>name<TAB>group``).

    With ``strict_shape`` the file must describe exactly two groups and
    sixteen categories, the only shape this artifact was calibrated for;
    pass ``strict_shape=False`` to accept any well-formed taxonomy.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        raise ParseError(f"taxonomy file {path} is empty")
    if tuple(lines[0].rstrip("\r").split("\t")) != TAXONOMY_HEADER:
        raise ParseError(f"taxonomy file {path} has a bad header line")
    categories = []
    groups: list[str] = []
    for line in lines[1:]:
        cells = line.rstrip("\r").split("\t")
        if len(cells) != 3:
            raise ParseError(f"taxonomy row {line!r} does not have 3 cells")
        gdc_id, name, group = (c.strip() for c in cells)
        if not gdc_id or not name or not group:
            raise SchemaError(f"taxonomy row {line!r} has an empty cell")
        categories.append(GdcCategory(gdc_id, name, group))
        if group not in groups:
            groups.append(group)
    if strict_shape and (len(groups) != 2 or len(categories) != 16):
        raise SchemaError(
            f"taxonomy shape is {len(groups)} groups / {len(categories)} categories, "
            "expected 2 / 16 (pass strict_shape=False to accept)"
        )
    return GdcTaxonomy(tuple(categories), tuple(groups))


@dataclass(frozen=True)
class RawWarning:
    """One warning exactly as an analyzer reported it."""

    sca: ScaId
    original_type: str
    class_path: str
    method_path: str | None
    start_line: int
    end_line: int
    message: str | None = None
    severity: str | None = None

    def __post_init__(self):
        if not self.sca:
            raise SchemaError("warning has an empty analyzer id")
        if not self.original_type:
            raise SchemaError("warning has an empty type")
        if not self.class_path:
            raise SchemaError("warning has an empty class path")
        if self.start_line < 1:
            raise SchemaError(f"warning start line {self.start_line} < 1")
        if self.end_line < self.start_line:
            raise SchemaError(
                f"warning line span {self.start_line}..{self.end_line} is inverted"
            )


@dataclass(frozen=True)
class AlignedWarning:
    """A warning in canonical form: general category plus location and label.

    ``origin`` is (analyzer id, index of the warning in its source report),
    which keeps canonical warnings traceable back to the raw record.
    """

    new_type: str
    class_info: str
    start_line: int
    end_line: int
    label: WarningLabel
    origin: tuple[ScaId, int]

    def __post_init__(self):
        if self.start_line < 1 or self.end_line < self.start_line:
            raise SchemaError(
                f"warning line span {self.start_line}..{self.end_line} is invalid"
            )


def warning_sort_key(warning: AlignedWarning):
    """Key of the canonical total order used for every deterministic tie-break."""
    return (
        warning.class_info,
        warning.start_line,
        warning.end_line,
        warning.new_type,
        warning.origin[0],
        warning.origin[1],
    )


def canonical_warning_order(a: AlignedWarning, b: AlignedWarning) -> int:
    """Three-way comparison consistent with :func:`warning_sort_key`."""
    ka, kb = warning_sort_key(a), warning_sort_key(b)
    return (ka > kb) - (ka < kb)


def sort_warnings(warnings) -> list[AlignedWarning]:
    return sorted(warnings, key=warning_sort_key)


@dataclass(frozen=True)
class Release:
    """A source snapshot: release id, date, and text files as line tuples."""

    release_id: str
    timestamp: dt.date
    files: dict[str, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(
            self, "files", {path: tuple(lines) for path, lines in self.files.items()}
        )


@dataclass(frozen=True)
class ProjectSnapshot:
    """Two releases of one project plus the per-analyzer reports for each."""

    project_id: str
    release_old: Release
    release_new: Release
    reports_old: dict[ScaId, tuple[RawWarning, ...]]
    reports_new: dict[ScaId, tuple[RawWarning, ...]]

    def __post_init__(self):
        if self.release_old.timestamp >= self.release_new.timestamp:
            raise SchemaError(
                f"project {self.project_id}: old release must predate the new one"
            )
        missing = set(self.reports_old) - set(self.reports_new)
        if missing:
            raise SchemaError(
                f"project {self.project_id}: analyzers {sorted(missing)} have no "
                "report for the newer release"
            )
        object.__setattr__(
            self, "reports_old", {k: tuple(v) for k, v in self.reports_old.items()}
        )
        object.__setattr__(
            self, "reports_new", {k: tuple(v) for k, v in self.reports_new.items()}
        )


def validate_beta(beta: float) -> float:
    """Check that ``beta`` is a non-negative real or infinity."""
    value = float(beta)
    if math.isnan(value) or value < 0:
        raise InvalidBeta(f"beta must be a non-negative real or inf, got {beta!r}")
    return value


def parse_beta(text: str) -> float:
    """Parse a beta from text: decimals, or 'inf'/'infinity' (any case)."""
    token = text.strip().lower()
    if token in ("inf", "infinity"):
        return math.inf
    try:
        value = float(token)
    except ValueError:
        raise InvalidBeta(f"cannot parse beta from {text!r}")
    return validate_beta(value)


def format_beta(beta: float) -> str:
    """Canonical text form of a beta, stable across runs ('1', '0.5', 'inf')."""
    if math.isinf(beta):
        return "inf"
    if beta == int(beta):
        return str(int(beta))
    return repr(beta)
