"""Loading of reports, category mappings, source trees, and corpus layouts.

Corpus layout on disk::

    <corpus>/<project>/releases.json            {"old": {"id", "date"}, "new": {...}}
    <corpus>/<project>/<release>/src/...        source tree
    <corpus>/<project>/<release>/reports/<sca>.json
    <corpus>/scas.txt                           analyzer order, one id per line

``scas.txt`` fixes the corpus analyzer order used for iteration and
tie-breaking; without it the order falls back to the sorted union of report
names found in the corpus.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .core import AlignedWarning, ProjectSnapshot, RawWarning, Release, ScaId, WarningLabel
from .exceptions import (
    DuplicateConflict,
    IoError,
    MismatchError,
    ParseError,
    SchemaError,
    UnknownCategory,
    UnmappedType,
)

log = logging.getLogger(__name__)

GDC_MAP_HEADER = ("sca", "original_type", "gdc_id")


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _read_json(path: Path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _require(obj: dict, key: str, kinds, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise SchemaError(f"{where}: field {key!r} has the wrong type")
    return value


def _optional_str(obj: dict, key: str, where: str) -> str | None:
    value = obj.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise SchemaError(f"{where}: field {key!r} must be a string or null")
    return value


def load_report(path: str | Path, project_id: str, release_id: str) -> tuple[ScaId, list[RawWarning]]:
    """Load one analyzer report, checking it belongs to (project, release)."""
    path = Path(path)
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: report must be a JSON object")
    sca = _require(doc, "sca", str, str(path))
    project = _require(doc, "project", str, str(path))
    release = _require(doc, "release", str, str(path))
    if project != project_id or release != release_id:
        raise MismatchError(
            f"{path}: report is for {project}/{release}, expected {project_id}/{release_id}"
        )
    raw = _require(doc, "warnings", list, str(path))
    warnings = []
    for i, entry in enumerate(raw):
        where = f"{path}: warning {i}"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where} must be a JSON object")
        warnings.append(
            RawWarning(
                sca=sca,
                original_type=_require(entry, "type", str, where),
                class_path=_require(entry, "class", str, where),
                method_path=_optional_str(entry, "method", where),
                start_line=_require(entry, "start_line", int, where),
                end_line=_require(entry, "end_line", int, where),
                message=_optional_str(entry, "message", where),
                severity=_optional_str(entry, "severity", where),
            )
        )
    return sca, warnings


@dataclass(frozen=True)
class GdcMapping:
    """Mapping from (analyzer id, analyzer-native type) to a category id."""

    entries: dict[tuple[ScaId, str], str]

    def lookup(self, sca: ScaId, original_type: str) -> str:
        try:
            return self.entries[(sca, original_type)]
        except KeyError:
            raise UnmappedType(f"no category mapping for ({sca!r}, {original_type!r})")


def load_gdc_mapping(path: str | Path, taxonomy) -> GdcMapping:
    """Load a mapping TSV (``sca<TAB>original_type<TAB>gdc_id`` with header).

    A file with no rows is a valid empty mapping.  Repeated identical rows
    are tolerated; the same key mapped to two categories is an error.
    """
    path = Path(path)
    text = _read_text(path)
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        return GdcMapping({})
    if tuple(lines[0].rstrip("\r").split("\t")) != GDC_MAP_HEADER:
        raise ParseError(f"mapping file {path} has a bad header line")
    known = taxonomy.category_ids
    entries: dict[tuple[str, str], str] = {}
    for line in lines[1:]:
        cells = line.rstrip("\r").split("\t")
        if len(cells) != 3:
            raise ParseError(f"mapping row {line!r} does not have 3 cells")
        sca, original_type, gdc_id = (c.strip() for c in cells)
        if not sca or not original_type or not gdc_id:
            raise SchemaError(f"mapping row {line!r} has an empty cell")
        if gdc_id not in known:
            raise UnknownCategory(f"mapping row {line!r} references unknown category")
        key = (sca, original_type)
        if key in entries and entries[key] != gdc_id:
            raise DuplicateConflict(
                f"({sca!r}, {original_type!r}) mapped to both "
                f"{entries[key]!r} and {gdc_id!r}"
            )
        entries[key] = gdc_id
    return GdcMapping(entries)


def canonicalize(raw: RawWarning, mapping: GdcMapping, origin_index: int) -> AlignedWarning:
    """Convert a raw warning into canonical form (label is a placeholder)."""
    return AlignedWarning(
        new_type=mapping.lookup(raw.sca, raw.original_type),
        class_info=raw.class_path,
        start_line=raw.start_line,
        end_line=raw.end_line,
        label=WarningLabel.UNKNOWN,
        origin=(raw.sca, origin_index),
    )


def _split_lines(text: str) -> tuple[str, ...]:
    # \n and \r\n are equivalent; content is otherwise kept verbatim.
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return tuple(line.removesuffix("\r") for line in lines)


def load_source_tree(
    directory: str | Path, release_id: str, timestamp: dt.date | None = None
) -> Release:
    """Read every text file under ``directory`` into a Release.

    Binary files (NUL byte or undecodable as UTF-8) are skipped with a logged
    notice.  Paths are stored relative to ``directory`` in POSIX form.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise IoError(f"source directory {directory} does not exist")
    files: dict[str, tuple[str, ...]] = {}
    for path in sorted(directory.rglob("*")):
        if not path.is_file():
            continue
        rel = path.relative_to(directory).as_posix()
        try:
            blob = path.read_bytes()
        except OSError as exc:
            raise IoError(str(exc)) from exc
        if b"\x00" in blob:
            log.info("skipping binary file %s", rel)
            continue
        try:
            text = blob.decode("utf-8")
        except UnicodeDecodeError:
            log.info("skipping undecodable file %s", rel)
            continue
        files[rel] = _split_lines(text)
    return Release(release_id, timestamp or dt.date(1970, 1, 1), files)


def _parse_release_meta(doc: dict, role: str, where: str) -> tuple[str, dt.date]:
    meta = _require(doc, role, dict, where)
    release_id = _require(meta, "id", str, where)
    date_text = _require(meta, "date", str, where)
    try:
        timestamp = dt.date.fromisoformat(date_text)
    except ValueError as exc:
        raise SchemaError(f"{where}: bad date {date_text!r}") from exc
    return release_id, timestamp


def _load_release(project_dir: Path, release_id: str, timestamp: dt.date, project_id: str):
    release_dir = project_dir / release_id
    release = load_source_tree(release_dir / "src", release_id, timestamp)
    reports: dict[str, tuple[RawWarning, ...]] = {}
    reports_dir = release_dir / "reports"
    if reports_dir.is_dir():
        for report_path in sorted(reports_dir.glob("*.json")):
            sca, warnings = load_report(report_path, project_id, release_id)
            if sca != report_path.stem:
                raise MismatchError(
                    f"{report_path}: file is named {report_path.stem!r} but "
                    f"declares analyzer {sca!r}"
                )
            reports[sca] = tuple(warnings)
    return release, reports


def load_snapshot(corpus_root: str | Path, project_id: str) -> ProjectSnapshot:
    """Load one project (both releases and all reports) from a corpus."""
    project_dir = Path(corpus_root) / project_id
    meta_path = project_dir / "releases.json"
    doc = _read_json(meta_path)
    if not isinstance(doc, dict):
        raise SchemaError(f"{meta_path}: must be a JSON object")
    old_id, old_date = _parse_release_meta(doc, "old", str(meta_path))
    new_id, new_date = _parse_release_meta(doc, "new", str(meta_path))
    release_old, reports_old = _load_release(project_dir, old_id, old_date, project_id)
    release_new, reports_new = _load_release(project_dir, new_id, new_date, project_id)
    return ProjectSnapshot(project_id, release_old, release_new, reports_old, reports_new)


def list_projects(corpus_root: str | Path) -> list[str]:
    """Project ids in a corpus: the sorted subdirectory names."""
    root = Path(corpus_root)
    if not root.is_dir():
        raise IoError(f"corpus directory {root} does not exist")
    return sorted(p.name for p in root.iterdir() if p.is_dir())


def load_sca_order(corpus_root: str | Path) -> list[ScaId]:
    """Corpus analyzer order: scas.txt if present, else sorted report names."""
    root = Path(corpus_root)
    listing = root / "scas.txt"
    if listing.is_file():
        order = [line.strip() for line in _read_text(listing).splitlines() if line.strip()]
        if len(set(order)) != len(order):
            raise SchemaError(f"{listing} lists a duplicate analyzer id")
        if not order:
            raise SchemaError(f"{listing} lists no analyzer ids")
        return order
    found: set[str] = set()
    for project in list_projects(root):
        for reports_dir in (Path(root) / project).glob("*/reports"):
            found.update(p.stem for p in reports_dir.glob("*.json"))
    return sorted(found)
