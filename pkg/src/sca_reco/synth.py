"""Synthetic corpus generator with a known ground truth.

Every generated project has two releases of Java-like source, one report per
analyzer per release, and a manifest recording what the pipeline is expected
to compute: per-warning labels, the matching stage each surviving warning
should be resolved by, group counts, and per-analyzer confusion counts.

Analyzer behavior is controlled by role profiles.  The configured profiles
double as the corpus analyzer order; per project, roles rotate so that the
analyzer at corpus position ``project_index mod m`` plays role 0.  With the
default roles (balanced, precise-but-blind, noisy-but-thorough) each project
archetype therefore has a different best analyzer, and structural features
(methods per class differ by archetype) make the archetype learnable.

Each method carries exactly one warning site, either a defect (fixed in the
new release with probability ``edit_intensity``) or a decoy that is never
fixed.  Per-file mutations exercise the matching cascade: line insertions
keep the location stage honest, a method rename forces the snippet stage,
and a class rename (applied only when no site's token window reaches the
class declaration line) forces the hash stage.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .core import ScaId
from .exceptions import ConfigError, IoError, ParseError, SchemaError
from .matching import HASH_WINDOW_TOKENS, _token_stream
from .rng import SplitMix64, derive_seed

SITE_CATEGORIES = ("null_dereference", "resource_leak", "api_misuse", "dead_code")

OLD_RELEASE = ("r1", "2024-01-15")
NEW_RELEASE = ("r2", "2024-07-15")

# Stream tags, one per independent family of random decisions.
_T_MUTATION = 1
_T_METHODS = 2
_T_KIND = 3
_T_FIX = 4
_T_PAD = 5
_T_DETECT = 6
_T_JITTER = 7
_T_NOISE = 8
_T_INSERT = 9


class Mutation(Enum):
    PLAIN = "plain"
    INSERT = "insert"
    METHOD_RENAME = "method_rename"
    CLASS_RENAME = "class_rename"


@dataclass(frozen=True)
class AnalyzerProfile:
    """One analyzer id plus the detection behavior of one role.

    ``detection`` is the chance of reporting a defect site, ``fp_rate`` the
    chance of reporting a decoy site.
    """

    sca: ScaId
    detection: float
    fp_rate: float

    def __post_init__(self):
        if not self.sca:
            raise ConfigError("analyzer profile has an empty id")
        for name in ("detection", "fp_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"profile {self.sca}: {name} must be in [0, 1]")


DEFAULT_PROFILES = (
    AnalyzerProfile("hawkeye", detection=0.92, fp_rate=0.1),
    AnalyzerProfile("lintmax", detection=0.35, fp_rate=0.0),
    AnalyzerProfile("bugnet", detection=0.95, fp_rate=0.9),
)


@dataclass(frozen=True)
class SynthConfig:
    n_projects: int = 60
    profiles: tuple[AnalyzerProfile, ...] = DEFAULT_PROFILES
    edit_intensity: float = 0.7
    decoy_fraction: float = 0.4
    files_per_project: int = 8
    # methods per class, one inclusive (low, high) band per archetype
    method_bands: tuple[tuple[int, int], ...] = ((4, 6), (8, 10), (12, 14))
    field_lines: int = 14
    noise_features: int = 2
    mutation_weights: tuple[float, float, float, float] = (0.4, 0.3, 0.15, 0.15)
    seed: int = 0

    def __post_init__(self):
        if self.n_projects < 1:
            raise ConfigError("n_projects must be at least 1")
        if not self.profiles:
            raise ConfigError("at least one analyzer profile is required")
        ids = [p.sca for p in self.profiles]
        if len(set(ids)) != len(ids):
            raise ConfigError("analyzer profiles repeat an id")
        if len(self.method_bands) != len(self.profiles):
            raise ConfigError(
                "one method band per archetype is required "
                f"({len(self.profiles)} archetypes, {len(self.method_bands)} bands)"
            )
        for low, high in self.method_bands:
            if not 1 <= low <= high:
                raise ConfigError(f"bad method band ({low}, {high})")
        for name in ("edit_intensity", "decoy_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.files_per_project < 1:
            raise ConfigError("files_per_project must be at least 1")
        if self.field_lines < 0 or self.noise_features < 0:
            raise ConfigError("field_lines and noise_features must be non-negative")
        if len(self.mutation_weights) != 4 or min(self.mutation_weights) < 0:
            raise ConfigError("mutation_weights must be 4 non-negative numbers")
        if sum(self.mutation_weights) <= 0:
            raise ConfigError("mutation_weights must not all be zero")

    @property
    def scas(self) -> tuple[ScaId, ...]:
        return tuple(p.sca for p in self.profiles)


@dataclass(frozen=True)
class SiteTruth:
    """Ground truth for one warning site."""

    class_old: str
    class_new: str
    method_old: str
    method_new: str
    category: str
    old_start: int
    new_start: int
    kind: str  # "defect" or "decoy"
    fixed: bool
    mutation: str
    detected_by: tuple[ScaId, ...]
    expected_stage: str | None  # match stage for surviving sites, else None

    @property
    def label(self) -> str:
        return "actionable" if self.fixed else "unactionable"


@dataclass(frozen=True)
class ProjectTruth:
    project_id: str
    archetype: int
    champion: ScaId
    sites: tuple[SiteTruth, ...]

    def counts(self, sca: ScaId) -> tuple[int, int, int]:
        """(tp, fp, union_actionable) this analyzer should end up with."""
        tp = sum(1 for s in self.sites if s.fixed and sca in s.detected_by)
        fp = sum(1 for s in self.sites if not s.fixed and sca in s.detected_by)
        union = sum(1 for s in self.sites if s.fixed and s.detected_by)
        return tp, fp, union

    @property
    def n_groups(self) -> int:
        return sum(1 for s in self.sites if s.detected_by)


@dataclass(frozen=True)
class CorpusTruth:
    seed: int
    scas: tuple[ScaId, ...]
    projects: tuple[ProjectTruth, ...]

    def project(self, project_id: str) -> ProjectTruth:
        for p in self.projects:
            if p.project_id == project_id:
                return p
        raise KeyError(project_id)


@dataclass
class _MethodPlan:
    name: str
    sid: str
    extra_pad: int
    is_decoy: bool
    category: str
    fixed: bool = False
    old_start: int = 0
    new_start: int = 0


def _stream(seed: int, *parts: int) -> SplitMix64:
    return SplitMix64(derive_seed(seed, *parts))


def _build_class_lines(
    package: str, class_name: str, methods: list[_MethodPlan], field_lines: int
) -> tuple[list[str], int]:
    """Emit one class; fills in each plan's old_start.  Returns (lines,
    1-based class declaration line number)."""
    lines = [f"package {package};", ""]
    lines.append(f"public class {class_name} {{")
    decl_line = len(lines)
    stem = class_name.lower()
    for k in range(field_lines):
        lines.append(f"    private int field_{stem}_{k} = {k};")
    for m, plan in enumerate(methods):
        lines.append("")
        lines.append(f"    public void {plan.name}() {{")
        plan.old_start = len(lines) + 1
        lines.append(f"        int v_{plan.sid}_a = source_{plan.sid}();")
        lines.append(f"        int v_{plan.sid}_b = v_{plan.sid}_a + {m};")
        lines.append(f"        consume_{plan.sid}(v_{plan.sid}_b);")
        for x in range(plan.extra_pad):
            lines.append(f"        int pad_{plan.sid}_{x} = {x};")
        lines.append("    }")
    lines.append("}")
    return lines, decl_line


def _class_rename_eligible(lines: list[str], decl_line: int, starts: list[int]) -> bool:
    """True when no site's hash window can reach the class declaration line.

    Checked for both start-line jitters an analyzer may report.  Only then is
    the window hash invariant under the rename and the site guaranteed to be
    matched by the hash stage.
    """
    tokens, token_lines = _token_stream(tuple(lines))
    for start in starts:
        for jitter in (0, 1):
            anchor = bisect_left(token_lines, start + jitter)
            low = max(0, anchor - HASH_WINDOW_TOKENS)
            high = min(len(tokens), anchor + HASH_WINDOW_TOKENS)
            if any(token_lines[i] == decl_line for i in range(low, high)):
                return False
    return True


def _pick_mutation(weights: tuple[float, ...], stream: SplitMix64) -> Mutation:
    total = sum(weights)
    draw = stream.uniform() * total
    cumulative = 0.0
    order = (Mutation.PLAIN, Mutation.INSERT, Mutation.METHOD_RENAME, Mutation.CLASS_RENAME)
    for kind, weight in zip(order, weights):
        cumulative += weight
        if draw < cumulative:
            return kind
    return order[-1]


@dataclass
class _FilePlan:
    class_name: str
    mutation: Mutation
    methods: list[_MethodPlan]
    old_lines: list[str]
    new_lines: list[str]
    old_path: str
    new_path: str
    renamed_method: int | None


def _plan_file(config: SynthConfig, p: int, f: int, archetype: int) -> _FilePlan:
    package = f"com.synth.p{p:03d}"
    class_name = f"Widget{f}"
    low, high = config.method_bands[archetype]
    n_methods = low + _stream(config.seed, _T_METHODS, p, f).randrange(high - low + 1)
    methods = []
    for m in range(n_methods):
        sid = f"p{p:03d}f{f}m{m}"
        methods.append(
            _MethodPlan(
                name=f"handle{m}",
                sid=sid,
                extra_pad=_stream(config.seed, _T_PAD, p, f, m).randrange(3),
                is_decoy=_stream(config.seed, _T_KIND, p, f, m).uniform()
                < config.decoy_fraction,
                category=SITE_CATEGORIES[(f + m) % len(SITE_CATEGORIES)],
            )
        )
    old_lines, decl_line = _build_class_lines(
        package, class_name, methods, config.field_lines
    )
    mutation = _pick_mutation(config.mutation_weights, _stream(config.seed, _T_MUTATION, p, f))
    if mutation is Mutation.CLASS_RENAME and not _class_rename_eligible(
        old_lines, decl_line, [plan.old_start for plan in methods]
    ):
        mutation = Mutation.PLAIN
    renamed_method = 0 if mutation is Mutation.METHOD_RENAME else None

    # Fix decisions.  Sites that must keep matching across a rename are
    # forced to survive, otherwise they would not exercise the later stages
    # (and a fixed site in a renamed file would be unjudgeable).
    for m, plan in enumerate(methods):
        if plan.is_decoy:
            continue
        if mutation is Mutation.CLASS_RENAME or m == renamed_method:
            continue
        plan.fixed = (
            _stream(config.seed, _T_FIX, p, f, m).uniform() < config.edit_intensity
        )

    shift = 0
    new_lines = list(old_lines)
    if mutation is Mutation.INSERT:
        count = 2 + _stream(config.seed, _T_INSERT, p, f).randrange(4)
        pads = [f"// generated pad {p} {f} {k}" for k in range(count)]
        new_lines = new_lines[:1] + pads + new_lines[1:]
        shift = count
    for method in methods:
        method.new_start = method.old_start + shift
        if method.fixed:
            body2 = method.new_start  # 0-based index of the line after the start
            new_lines[body2] = (
                f"        int v_{method.sid}_b = guard_{method.sid}(v_{method.sid}_a);"
            )
    new_class = class_name
    if mutation is Mutation.METHOD_RENAME:
        first = methods[0]
        decl_index = first.new_start - 2
        new_lines[decl_index] = new_lines[decl_index].replace(
            f" {first.name}(", f" {first.name}R("
        )
    if mutation is Mutation.CLASS_RENAME:
        new_class = class_name + "R"
        new_lines[decl_line - 1] = f"public class {new_class} {{"
    package_dir = package.replace(".", "/")
    return _FilePlan(
        class_name=class_name,
        mutation=mutation,
        methods=methods,
        old_lines=old_lines,
        new_lines=new_lines,
        old_path=f"{package_dir}/{class_name}.java",
        new_path=f"{package_dir}/{new_class}.java",
        renamed_method=renamed_method,
    )


def _expected_stage(plan: _FilePlan, m: int) -> str:
    if plan.mutation is Mutation.CLASS_RENAME:
        return "hash"
    if plan.renamed_method == m:
        return "snippet"
    return "location"


def _plan_project(config: SynthConfig, p: int) -> tuple[list[_FilePlan], ProjectTruth]:
    m_scas = len(config.profiles)
    archetype = p % m_scas
    project_id = f"p{p:03d}"
    package = f"com.synth.{project_id}"
    files = [_plan_file(config, p, f, archetype) for f in range(config.files_per_project)]
    sites = []
    for f, plan in enumerate(files):
        for m, method in enumerate(plan.methods):
            detected = []
            for i in range(m_scas):
                role = config.profiles[(i - archetype) % m_scas]
                rate = role.fp_rate if method.is_decoy else role.detection
                if _stream(config.seed, _T_DETECT, p, f, m, i).uniform() < rate:
                    detected.append(config.profiles[i].sca)
            renamed = plan.renamed_method == m
            sites.append(
                SiteTruth(
                    class_old=f"{package}.{plan.class_name}",
                    class_new=f"{package}.{plan.class_name}"
                    + ("R" if plan.mutation is Mutation.CLASS_RENAME else ""),
                    method_old=f"{method.name}()",
                    method_new=f"{method.name}{'R' if renamed else ''}()",
                    category=method.category,
                    old_start=method.old_start,
                    new_start=method.new_start,
                    kind="decoy" if method.is_decoy else "defect",
                    fixed=method.fixed,
                    mutation=plan.mutation.value,
                    detected_by=tuple(detected),
                    expected_stage=None if method.fixed else _expected_stage(plan, m),
                )
            )
    truth = ProjectTruth(
        project_id=project_id,
        archetype=archetype,
        champion=config.profiles[archetype].sca,
        sites=tuple(sites),
    )
    return files, truth


def _report_document(
    config: SynthConfig,
    p: int,
    files: list[_FilePlan],
    sca_index: int,
    release_id: str,
    old: bool,
) -> dict:
    sca = config.profiles[sca_index].sca
    project_id = f"p{p:03d}"
    package = f"com.synth.{project_id}"
    warnings = []
    for f, plan in enumerate(files):
        for m, method in enumerate(plan.methods):
            stream = _stream(config.seed, _T_DETECT, p, f, m, sca_index)
            archetype = p % len(config.profiles)
            role = config.profiles[(sca_index - archetype) % len(config.profiles)]
            rate = role.fp_rate if method.is_decoy else role.detection
            if stream.uniform() >= rate:
                continue
            if not old and method.fixed:
                continue
            jitter = _stream(config.seed, _T_JITTER, p, f, m, sca_index).randrange(2)
            start = (method.old_start if old else method.new_start) + jitter
            end = (method.old_start if old else method.new_start) + 2
            renamed = plan.renamed_method == m and not old
            class_name = plan.class_name
            if plan.mutation is Mutation.CLASS_RENAME and not old:
                class_name += "R"
            warnings.append(
                {
                    "type": f"{sca.upper()}-{method.category}",
                    "class": f"{package}.{class_name}",
                    "method": f"{method.name}{'R' if renamed else ''}()",
                    "start_line": start,
                    "end_line": end,
                    "message": f"possible {method.category.replace('_', ' ')}",
                    "severity": ("low", "medium", "high")[(f + m) % 3],
                }
            )
    return {
        "sca": sca,
        "project": project_id,
        "release": release_id,
        "warnings": warnings,
    }


def _project_features(config: SynthConfig, p: int, files: list[_FilePlan]) -> list[float]:
    loc_total = sum(len(plan.old_lines) for plan in files)
    n_files = len(files)
    n_methods = sum(len(plan.methods) for plan in files)
    method_loc = [5 + method.extra_pad for plan in files for method in plan.methods]
    values = [
        float(loc_total),
        float(n_files),
        float(n_files),  # one top-level class per file
        float(n_methods),
        n_methods / n_files,
        sum(method_loc) / len(method_loc),
    ]
    for j in range(config.noise_features):
        values.append(_stream(config.seed, _T_NOISE, p, j).uniform())
    return values


FEATURE_NAMES = (
    "loc_total",
    "n_files",
    "n_classes",
    "n_methods",
    "methods_per_class",
    "avg_method_loc",
)


def feature_names(config: SynthConfig) -> tuple[str, ...]:
    return FEATURE_NAMES + tuple(f"noise_{j}" for j in range(config.noise_features))


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _dump_json(document) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _truth_document(truth: CorpusTruth) -> dict:
    projects = []
    for project in truth.projects:
        projects.append(
            {
                "project": project.project_id,
                "archetype": project.archetype,
                "champion": project.champion,
                "n_groups": project.n_groups,
                "counts": {
                    sca: dict(zip(("tp", "fp", "union"), project.counts(sca)))
                    for sca in truth.scas
                },
                "sites": [
                    {
                        "class_old": s.class_old,
                        "class_new": s.class_new,
                        "method_old": s.method_old,
                        "method_new": s.method_new,
                        "category": s.category,
                        "old_start": s.old_start,
                        "new_start": s.new_start,
                        "kind": s.kind,
                        "fixed": s.fixed,
                        "mutation": s.mutation,
                        "detected_by": list(s.detected_by),
                        "expected_stage": s.expected_stage,
                    }
                    for s in project.sites
                ],
            }
        )
    return {"seed": truth.seed, "scas": list(truth.scas), "projects": projects}


def load_truth(path: str | Path) -> CorpusTruth:
    """Read a truth manifest back (inverse of the generator's output)."""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        projects = []
        for entry in document["projects"]:
            sites = tuple(
                SiteTruth(
                    class_old=s["class_old"],
                    class_new=s["class_new"],
                    method_old=s["method_old"],
                    method_new=s["method_new"],
                    category=s["category"],
                    old_start=s["old_start"],
                    new_start=s["new_start"],
                    kind=s["kind"],
                    fixed=s["fixed"],
                    mutation=s["mutation"],
                    detected_by=tuple(s["detected_by"]),
                    expected_stage=s["expected_stage"],
                )
                for s in entry["sites"]
            )
            projects.append(
                ProjectTruth(
                    project_id=entry["project"],
                    archetype=entry["archetype"],
                    champion=entry["champion"],
                    sites=sites,
                )
            )
        return CorpusTruth(
            seed=document["seed"],
            scas=tuple(document["scas"]),
            projects=tuple(projects),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: malformed truth manifest: {exc}") from exc


def default_taxonomy_text() -> str:
    return (
        resources.files("sca_reco.data").joinpath("default_taxonomy.tsv").read_text("utf-8")
    )


def generate_corpus(config: SynthConfig, out_dir: str | Path) -> CorpusTruth:
    """Write a complete corpus under ``out_dir`` and return its ground truth.

    Output is a pure function of the config, byte for byte, so regenerating
    into the same directory is idempotent.
    """
    out_dir = Path(out_dir)
    truths = []
    feature_rows = []
    for p in range(config.n_projects):
        files, truth = _plan_project(config, p)
        truths.append(truth)
        project_dir = out_dir / truth.project_id
        (old_id, old_date), (new_id, new_date) = OLD_RELEASE, NEW_RELEASE
        _write_text(
            project_dir / "releases.json",
            _dump_json(
                {
                    "old": {"id": old_id, "date": old_date},
                    "new": {"id": new_id, "date": new_date},
                }
            ),
        )
        for plan in files:
            _write_text(
                project_dir / old_id / "src" / plan.old_path,
                "\n".join(plan.old_lines) + "\n",
            )
            _write_text(
                project_dir / new_id / "src" / plan.new_path,
                "\n".join(plan.new_lines) + "\n",
            )
        for i in range(len(config.profiles)):
            sca = config.profiles[i].sca
            for release_id, old in ((old_id, True), (new_id, False)):
                _write_text(
                    project_dir / release_id / "reports" / f"{sca}.json",
                    _dump_json(_report_document(config, p, files, i, release_id, old)),
                )
        feature_rows.append((truth.project_id, _project_features(config, p, files)))

    _write_text(out_dir / "scas.txt", "".join(f"{sca}\n" for sca in config.scas))
    _write_text(out_dir / "taxonomy.tsv", default_taxonomy_text())
    map_lines = ["sca\toriginal_type\tgdc_id"]
    for profile in config.profiles:
        for category in SITE_CATEGORIES:
            map_lines.append(f"{profile.sca}\t{profile.sca.upper()}-{category}\t{category}")
    _write_text(out_dir / "gdc_map.tsv", "\n".join(map_lines) + "\n")
    names = feature_names(config)
    csv_lines = ["project," + ",".join(names)]
    for project_id, values in feature_rows:
        csv_lines.append(project_id + "," + ",".join(repr(v) for v in values))
    _write_text(out_dir / "features.csv", "\n".join(csv_lines) + "\n")
    truth = CorpusTruth(seed=config.seed, scas=config.scas, projects=tuple(truths))
    _write_text(out_dir / "truth.json", _dump_json(_truth_document(truth)))
    return truth
