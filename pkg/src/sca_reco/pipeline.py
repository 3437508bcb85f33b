"""Corpus-level orchestration: label, align, and score every project.

A corpus is processed project by project.  Data problems in one project
(malformed report, missing release, unmapped type) are recorded as failures
and do not stop the others.  All aggregation is sorted by project id, so the
outcome is independent of worker count.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .alignment import align_project
from .core import (
    AlignedWarning,
    GdcTaxonomy,
    ProjectSnapshot,
    ScaId,
    WarningLabel,
    load_taxonomy,
    validate_beta,
)
from .effectiveness import ProjectEvaluation, evaluate_project, optimal_set
from .exceptions import DataError, IoError, ParseError, SchemaError
from .features import FeatureVector, load_features
from .ingestion import (
    GdcMapping,
    list_projects,
    load_gdc_mapping,
    load_sca_order,
    load_snapshot,
)
from .matching import AuditRecord, MatchStage, compute_line_mapping, label_release_detailed

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusContext:
    """A corpus root plus the shared artifacts every project needs."""

    root: Path
    taxonomy: GdcTaxonomy
    mapping: GdcMapping
    sca_order: tuple[ScaId, ...]


def default_taxonomy_path() -> Path:
    from importlib import resources

    return Path(str(resources.files("sca_reco.data").joinpath("default_taxonomy.tsv")))


def load_corpus_context(
    corpus_root: str | Path,
    taxonomy_path: str | Path | None = None,
    mapping_path: str | Path | None = None,
    strict_taxonomy: bool = True,
) -> CorpusContext:
    """Resolve taxonomy, type mapping, and analyzer order for a corpus.

    Explicit paths win; otherwise ``taxonomy.tsv``/``gdc_map.tsv`` in the
    corpus root are used.  A missing taxonomy falls back to the packaged
    default; a missing mapping is an error since warnings cannot be compared
    without it.
    """
    root = Path(corpus_root)
    if not root.is_dir():
        raise IoError(f"corpus directory {root} does not exist")
    if taxonomy_path is None:
        candidate = root / "taxonomy.tsv"
        taxonomy_path = candidate if candidate.is_file() else default_taxonomy_path()
    taxonomy = load_taxonomy(taxonomy_path, strict_shape=strict_taxonomy)
    if mapping_path is None:
        candidate = root / "gdc_map.tsv"
        if not candidate.is_file():
            raise IoError(f"no type mapping: {candidate} not found and none given")
        mapping_path = candidate
    mapping = load_gdc_mapping(mapping_path, taxonomy)
    return CorpusContext(
        root=root,
        taxonomy=taxonomy,
        mapping=mapping,
        sca_order=tuple(load_sca_order(root)),
    )


@dataclass(frozen=True)
class ProjectLabels:
    """Labeled old-release warnings of one project, per analyzer."""

    project_id: str
    by_sca: dict[ScaId, tuple[AlignedWarning, ...]]
    audits: dict[ScaId, tuple[AuditRecord, ...]]


@dataclass(frozen=True)
class ProjectFailure:
    project_id: str
    message: str


def label_project(context: CorpusContext, snapshot: ProjectSnapshot) -> ProjectLabels:
    """Run the closed-warning heuristic for every analyzer of one project."""
    unknown = set(snapshot.reports_old) - set(context.sca_order)
    if unknown:
        raise SchemaError(
            f"project {snapshot.project_id}: reports from unlisted analyzers "
            f"{sorted(unknown)}"
        )
    line_mapping = compute_line_mapping(snapshot.release_old, snapshot.release_new)
    by_sca: dict[ScaId, tuple[AlignedWarning, ...]] = {}
    audits: dict[ScaId, tuple[AuditRecord, ...]] = {}
    for sca in context.sca_order:
        if sca not in snapshot.reports_old:
            continue
        labeled, audit = label_release_detailed(
            snapshot, sca, context.mapping, line_mapping
        )
        by_sca[sca] = tuple(labeled)
        audits[sca] = tuple(audit)
    return ProjectLabels(snapshot.project_id, by_sca, audits)


def evaluate_labels(
    labels: ProjectLabels, sca_order: Sequence[ScaId], beta: float
) -> ProjectEvaluation:
    """Align labeled warnings across analyzers and score each analyzer.

    Warnings labeled unknown are outside the heuristic's competence and are
    dropped before alignment.
    """
    judged = {
        sca: [w for w in warnings if w.label is not WarningLabel.UNKNOWN]
        for sca, warnings in labels.by_sca.items()
    }
    result = align_project(judged, sca_order)
    scores = tuple(evaluate_project(labels.project_id, result, sca_order, beta))
    return ProjectEvaluation(
        labels.project_id, validate_beta(beta), scores, optimal_set(scores)
    )


def run_project(context: CorpusContext, project_id: str, beta: float) -> ProjectEvaluation:
    snapshot = load_snapshot(context.root, project_id)
    labels = label_project(context, snapshot)
    return evaluate_labels(labels, context.sca_order, beta)


def _run_isolated(worker: Callable[[str], object], project_ids: Sequence[str], jobs: int):
    """Apply ``worker`` per project, catching per-project data errors."""

    def guarded(project_id: str):
        try:
            return project_id, worker(project_id), None
        except DataError as exc:
            log.warning("project %s failed: %s", project_id, exc)
            return project_id, None, ProjectFailure(project_id, str(exc))

    if jobs <= 1:
        rows = [guarded(p) for p in project_ids]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(guarded, project_ids))
    rows.sort(key=lambda row: row[0])
    results = [r for _, r, f in rows if f is None]
    failures = [f for _, _, f in rows if f is not None]
    return results, failures


def label_corpus(
    context: CorpusContext, jobs: int = 1
) -> tuple[list[ProjectLabels], list[ProjectFailure]]:
    projects = list_projects(context.root)

    def worker(project_id: str) -> ProjectLabels:
        return label_project(context, load_snapshot(context.root, project_id))

    return _run_isolated(worker, projects, jobs)


def evaluate_corpus(
    context: CorpusContext, beta: float, jobs: int = 1
) -> tuple[list[ProjectEvaluation], list[ProjectFailure]]:
    validate_beta(beta)
    projects = list_projects(context.root)
    return _run_isolated(lambda p: run_project(context, p, beta), projects, jobs)


def evaluate_label_records(
    all_labels: Sequence[ProjectLabels],
    sca_order: Sequence[ScaId],
    beta: float,
) -> tuple[list[ProjectEvaluation], list[ProjectFailure]]:
    """Score already-labeled projects (the re-entry path for stored labels)."""
    validate_beta(beta)
    evaluations = []
    failures = []
    for labels in sorted(all_labels, key=lambda l: l.project_id):
        try:
            evaluations.append(evaluate_labels(labels, sca_order, beta))
        except DataError as exc:
            failures.append(ProjectFailure(labels.project_id, str(exc)))
    return evaluations, failures


def labels_to_record(labels: ProjectLabels) -> dict:
    """JSON form of one project's labels, audit details included."""
    rows = []
    for sca, warnings in labels.by_sca.items():
        audit = labels.audits.get(sca, ())
        for warning, record in zip(warnings, audit):
            rows.append(
                {
                    "sca": sca,
                    "index": warning.origin[1],
                    "category": warning.new_type,
                    "class": warning.class_info,
                    "start_line": warning.start_line,
                    "end_line": warning.end_line,
                    "label": warning.label.value,
                    "stage": record.stage.value if record.stage else None,
                    "matched_line": record.matched_line,
                    "matched_index": record.matched_origin,
                }
            )
    return {"project": labels.project_id, "warnings": rows}


def record_to_labels(record: dict) -> ProjectLabels:
    try:
        project_id = record["project"]
        by_sca: dict[ScaId, list[AlignedWarning]] = {}
        audits: dict[ScaId, list[AuditRecord]] = {}
        for row in record["warnings"]:
            sca = row["sca"]
            warning = AlignedWarning(
                new_type=row["category"],
                class_info=row["class"],
                start_line=row["start_line"],
                end_line=row["end_line"],
                label=WarningLabel(row["label"]),
                origin=(sca, row["index"]),
            )
            audit = AuditRecord(
                class_info=warning.class_info,
                start_line=warning.start_line,
                new_type=warning.new_type,
                outcome=warning.label,
                stage=MatchStage(row["stage"]) if row.get("stage") else None,
                matched_line=row.get("matched_line"),
                matched_origin=row.get("matched_index"),
            )
            by_sca.setdefault(sca, []).append(warning)
            audits.setdefault(sca, []).append(audit)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed label record: {exc}") from exc
    return ProjectLabels(
        project_id,
        {sca: tuple(rows) for sca, rows in by_sca.items()},
        {sca: tuple(rows) for sca, rows in audits.items()},
    )


def _write_jsonl(path: str | Path, records) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _read_jsonl(path: str | Path) -> list[dict]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    records = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{number}: {exc}") from exc
    return records


def write_labels(path: str | Path, all_labels: Sequence[ProjectLabels]) -> None:
    _write_jsonl(path, (labels_to_record(l) for l in all_labels))


def read_labels(path: str | Path) -> list[ProjectLabels]:
    return [record_to_labels(r) for r in _read_jsonl(path)]


def write_evaluations(path: str | Path, evaluations: Sequence[ProjectEvaluation]) -> None:
    _write_jsonl(path, (e.to_record() for e in evaluations))


def read_evaluations(path: str | Path) -> list[ProjectEvaluation]:
    return [ProjectEvaluation.from_record(r) for r in _read_jsonl(path)]


def write_optimal_sets(path: str | Path, evaluations: Sequence[ProjectEvaluation]) -> None:
    """TSV of each project's optimal analyzer set (first entry is primary)."""
    lines = ["project\tprimary\toptimal"]
    for evaluation in evaluations:
        optimal = evaluation.optimal.optimal
        lines.append(f"{evaluation.project_id}\t{optimal[0]}\t{','.join(optimal)}")
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def corpus_features(context: CorpusContext) -> list[FeatureVector]:
    path = context.root / "features.csv"
    if not path.is_file():
        raise IoError(f"no feature table: {path} not found")
    return load_features(path)
