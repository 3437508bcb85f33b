"""Cross-release warning matching and the closed-warning labeling heuristic.

A warning from the older release that reappears in the newer release is
considered ignored by developers (unactionable); one that disappears while
its code survives was fixed (actionable); one whose class or file vanished
cannot be judged (unknown).  Reappearance is decided by a three-stage
cascade, strongest evidence first:

1. location: same class and method, same category, and the diff-mapped old
   start line lands within 3 lines of the candidate;
2. snippet: same class and category, and the whitespace-trimmed text of the
   warned lines is identical in both releases;
3. hash: same category and an identical 64-bit hash of the 100 source tokens
   surrounding the warned line (survives class and file renames).

Matching is one-to-one: old warnings are processed in canonical order and a
consumed candidate is unavailable to later warnings.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass, field, replace
from enum import Enum

from .core import (
    AlignedWarning,
    ProjectSnapshot,
    RawWarning,
    Release,
    ScaId,
    WarningLabel,
    sort_warnings,
    warning_sort_key,
)
from .exceptions import SchemaError
from .ingestion import GdcMapping, canonicalize
from .linediff import lcs_pairs

LOCATION_OFFSET_LIMIT = 3
HASH_WINDOW_TOKENS = 50  # tokens taken on each side of the warned line

_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+")
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_SEPARATOR = 0x1F


class MatchStage(Enum):
    LOCATION = "location"
    SNIPPET = "snippet"
    HASH = "hash"


@dataclass(frozen=True)
class MatchOutcome:
    """Result of matching one old warning against the newer release."""

    matched: AlignedWarning | None
    stage: MatchStage | None

    @property
    def is_match(self) -> bool:
        return self.matched is not None


@dataclass(frozen=True)
class LineMapping:
    """Old-to-new line map per file; lines absent from a map were deleted or
    changed.  ``deleted_files`` holds old paths with no counterpart."""

    files: dict[str, dict[int, int]]
    deleted_files: frozenset[str]

    def known_paths(self) -> set[str]:
        return set(self.files) | set(self.deleted_files)


def compute_line_mapping(old: Release, new: Release) -> LineMapping:
    """LCS-diff every shared file; map unchanged old lines to new lines."""
    files: dict[str, dict[int, int]] = {}
    deleted = set()
    for path, old_lines in old.files.items():
        if path not in new.files:
            deleted.add(path)
            continue
        pairs = lcs_pairs(old_lines, new.files[path])
        files[path] = {i + 1: j + 1 for i, j in pairs}
    return LineMapping(files, frozenset(deleted))


def _class_file_candidates(class_info: str) -> tuple[str, str]:
    """Primary path built from package dots, and the suffix used as fallback."""
    package, _, simple = class_info.rpartition(".")
    outer = simple.split("$", 1)[0]
    primary = (package.replace(".", "/") + "/" if package else "") + outer + ".java"
    return primary, outer + ".java"


def resolve_class_file(release: Release, class_info: str) -> str | None:
    """Resolve a class path to a source file in ``release``.

    Prefers ``<package path>/<OuterClass>.java``; falls back to the
    lexicographically first file whose path ends with the class file name.
    """
    return _resolve_among(release.files.keys(), class_info)


def _resolve_among(paths, class_info: str) -> str | None:
    primary, leaf = _class_file_candidates(class_info)
    paths = set(paths)
    if primary in paths:
        return primary
    hits = sorted(p for p in paths if p == leaf or p.endswith("/" + leaf))
    return hits[0] if hits else None


def _location_target(warning: AlignedWarning, mapping: LineMapping) -> int | None:
    """Where the warned old line lives in the new release, if anywhere.

    A deleted or changed line falls back to the nearest surviving line above.
    """
    path = _resolve_among(mapping.known_paths(), warning.class_info)
    if path is None or path in mapping.deleted_files:
        return None
    file_map = mapping.files[path]
    for line in range(warning.start_line, 0, -1):
        if line in file_map:
            return file_map[line]
    return None


def _method_paths_differ(raw_a: RawWarning, raw_b: RawWarning) -> bool:
    # The method condition is vacuous when either side omits the method.
    if raw_a.method_path is None or raw_b.method_path is None:
        return False
    return raw_a.method_path != raw_b.method_path


def match_location(
    w_a: AlignedWarning,
    w_b: AlignedWarning,
    mapping: LineMapping,
    raw_a: RawWarning,
    raw_b: RawWarning,
) -> bool:
    if w_a.new_type != w_b.new_type or w_a.class_info != w_b.class_info:
        return False
    if _method_paths_differ(raw_a, raw_b):
        return False
    target = _location_target(w_a, mapping)
    if target is None:
        return False
    return abs(target - w_b.start_line) <= LOCATION_OFFSET_LIMIT


def _snippet(release: Release, warning: AlignedWarning) -> str | None:
    path = resolve_class_file(release, warning.class_info)
    if path is None:
        return None
    lines = release.files[path][warning.start_line - 1 : warning.end_line]
    if not lines:
        return None
    return "".join(line.strip() for line in lines)


def match_snippet(w_a: AlignedWarning, w_b: AlignedWarning, old: Release, new: Release) -> bool:
    if w_a.new_type != w_b.new_type or w_a.class_info != w_b.class_info:
        return False
    snippet_a = _snippet(old, w_a)
    snippet_b = _snippet(new, w_b)
    return snippet_a is not None and snippet_a == snippet_b


def _token_stream(lines: tuple[str, ...]) -> tuple[list[str], list[int]]:
    """All identifier/number tokens of a file with their 1-based line numbers."""
    tokens: list[str] = []
    token_lines: list[int] = []
    for number, line in enumerate(lines, start=1):
        for match in _TOKEN_RE.finditer(line):
            tokens.append(match.group())
            token_lines.append(number)
    return tokens, token_lines


def _fnv1a(data: bytes) -> int:
    value = _FNV_OFFSET
    for byte in data:
        value ^= byte
        value = (value * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return value


def _window_hash_from_stream(
    stream: tuple[list[str], list[int]], start_line: int
) -> int | None:
    tokens, token_lines = stream
    if not tokens:
        return None
    anchor = bisect_left(token_lines, start_line)
    window = tokens[max(0, anchor - HASH_WINDOW_TOKENS) : anchor + HASH_WINDOW_TOKENS]
    if not window:
        return None
    return _fnv1a(bytes([_SEPARATOR]).join(t.encode("utf-8") for t in window))


def _window_hash(lines: tuple[str, ...], start_line: int) -> int | None:
    """FNV-1a over the tokens surrounding ``start_line``.

    Window: the HASH_WINDOW_TOKENS tokens before the first token at or after
    the warned line plus the same count from that token onward, truncated at
    file boundaries.  Tokens are joined by a single 0x1F byte before hashing.
    """
    return _window_hash_from_stream(_token_stream(lines), start_line)


def match_hash(w_a: AlignedWarning, w_b: AlignedWarning, old: Release, new: Release) -> bool:
    if w_a.new_type != w_b.new_type:
        return False
    path_a = resolve_class_file(old, w_a.class_info)
    path_b = resolve_class_file(new, w_b.class_info)
    if path_a is None or path_b is None:
        return False
    hash_a = _window_hash(old.files[path_a], w_a.start_line)
    hash_b = _window_hash(new.files[path_b], w_b.start_line)
    return hash_a is not None and hash_a == hash_b


@dataclass(frozen=True)
class MatchContext:
    """Everything the cascade needs besides the two warnings themselves.

    ``raws_old``/``raws_new`` are the source reports; warnings refer into
    them through their origin index.  The memo dict caches class-file
    resolutions, snippets, token streams, and window hashes for the lifetime
    of one release pair; all cached values are pure functions of the two
    releases, so caching cannot change any outcome.
    """

    old: Release
    new: Release
    mapping: LineMapping
    raws_old: tuple[RawWarning, ...]
    raws_new: tuple[RawWarning, ...]
    memo: dict = field(default_factory=dict, repr=False, compare=False)

    def _release(self, which: str) -> Release:
        return self.old if which == "old" else self.new

    def resolve(self, which: str, class_info: str) -> str | None:
        key = ("resolve", which, class_info)
        if key not in self.memo:
            self.memo[key] = resolve_class_file(self._release(which), class_info)
        return self.memo[key]

    def snippet(self, which: str, warning: AlignedWarning) -> str | None:
        key = ("snippet", which, warning.class_info, warning.start_line, warning.end_line)
        if key not in self.memo:
            path = self.resolve(which, warning.class_info)
            if path is None:
                self.memo[key] = None
            else:
                lines = self._release(which).files[path]
                window = lines[warning.start_line - 1 : warning.end_line]
                self.memo[key] = (
                    "".join(line.strip() for line in window) if window else None
                )
        return self.memo[key]

    def window_hash(self, which: str, warning: AlignedWarning) -> int | None:
        key = ("hash", which, warning.class_info, warning.start_line)
        if key not in self.memo:
            path = self.resolve(which, warning.class_info)
            if path is None:
                self.memo[key] = None
            else:
                stream_key = ("tokens", which, path)
                if stream_key not in self.memo:
                    self.memo[stream_key] = _token_stream(self._release(which).files[path])
                self.memo[key] = _window_hash_from_stream(
                    self.memo[stream_key], warning.start_line
                )
        return self.memo[key]


def match_warning(
    w_a: AlignedWarning,
    candidates: list[AlignedWarning],
    context: MatchContext,
) -> MatchOutcome:
    """Run the cascade for one old warning over the unconsumed candidates.

    Within a stage the candidate with minimal |start-line difference| wins
    (for the location stage the difference is taken from the diff-mapped old
    line); remaining ties go to the canonically first candidate.
    """
    raw_a = context.raws_old[w_a.origin[1]]
    target = _location_target(w_a, context.mapping)

    def location_hit(c: AlignedWarning) -> bool:
        if target is None:
            return False
        if w_a.new_type != c.new_type or w_a.class_info != c.class_info:
            return False
        if _method_paths_differ(raw_a, context.raws_new[c.origin[1]]):
            return False
        return abs(target - c.start_line) <= LOCATION_OFFSET_LIMIT

    def snippet_hit(c: AlignedWarning) -> bool:
        if w_a.new_type != c.new_type or w_a.class_info != c.class_info:
            return False
        snippet_a = context.snippet("old", w_a)
        return snippet_a is not None and snippet_a == context.snippet("new", c)

    def hash_hit(c: AlignedWarning) -> bool:
        if w_a.new_type != c.new_type:
            return False
        hash_a = context.window_hash("old", w_a)
        return hash_a is not None and hash_a == context.window_hash("new", c)

    stages = (
        (MatchStage.LOCATION, location_hit, lambda c: abs(target - c.start_line)),
        (MatchStage.SNIPPET, snippet_hit, lambda c: abs(w_a.start_line - c.start_line)),
        (MatchStage.HASH, hash_hit, lambda c: abs(w_a.start_line - c.start_line)),
    )
    for stage, hit, distance in stages:
        hits = [c for c in candidates if hit(c)]
        if hits:
            best = min(hits, key=lambda c: (distance(c), warning_sort_key(c)))
            return MatchOutcome(best, stage)
    return MatchOutcome(None, None)


@dataclass(frozen=True)
class AuditRecord:
    """Per-old-warning trace of what the cascade decided and why."""

    class_info: str
    start_line: int
    new_type: str
    outcome: WarningLabel
    stage: MatchStage | None
    matched_line: int | None
    matched_origin: int | None


def _is_gone(
    warning: AlignedWarning, snapshot: ProjectSnapshot, mapping: LineMapping
) -> bool:
    """True when the warned code cannot be judged in the newer release."""
    old_path = resolve_class_file(snapshot.release_old, warning.class_info)
    if old_path is not None and old_path in mapping.deleted_files:
        return True
    return resolve_class_file(snapshot.release_new, warning.class_info) is None


def label_release_detailed(
    snapshot: ProjectSnapshot,
    sca: ScaId,
    mapping: GdcMapping,
    line_mapping: LineMapping | None = None,
) -> tuple[list[AlignedWarning], list[AuditRecord]]:
    """Label one analyzer's old-release warnings, returning an audit trail.

    Matched warnings are unactionable; unmatched ones are actionable unless
    their file was deleted or their class no longer resolves, in which case
    they are unknown.  Output is in canonical order.
    """
    if sca not in snapshot.reports_old:
        raise SchemaError(f"project {snapshot.project_id} has no {sca!r} report")
    raws_old = snapshot.reports_old[sca]
    raws_new = snapshot.reports_new[sca]
    if line_mapping is None:
        line_mapping = compute_line_mapping(snapshot.release_old, snapshot.release_new)
    context = MatchContext(
        old=snapshot.release_old,
        new=snapshot.release_new,
        mapping=line_mapping,
        raws_old=raws_old,
        raws_new=raws_new,
    )
    old_canon = [canonicalize(raw, mapping, i) for i, raw in enumerate(raws_old)]
    new_canon = [canonicalize(raw, mapping, i) for i, raw in enumerate(raws_new)]
    available = dict(enumerate(new_canon))

    labeled: list[AlignedWarning] = []
    audit: list[AuditRecord] = []
    for warning in sort_warnings(old_canon):
        candidates = [available[i] for i in sorted(available)]
        outcome = match_warning(warning, candidates, context)
        if outcome.matched is not None:
            available.pop(outcome.matched.origin[1])
            label = WarningLabel.UNACTIONABLE
        elif _is_gone(warning, snapshot, line_mapping):
            label = WarningLabel.UNKNOWN
        else:
            label = WarningLabel.ACTIONABLE
        labeled.append(replace(warning, label=label))
        audit.append(
            AuditRecord(
                class_info=warning.class_info,
                start_line=warning.start_line,
                new_type=warning.new_type,
                outcome=label,
                stage=outcome.stage,
                matched_line=outcome.matched.start_line if outcome.matched else None,
                matched_origin=outcome.matched.origin[1] if outcome.matched else None,
            )
        )
    return labeled, audit


def label_release(
    snapshot: ProjectSnapshot,
    sca: ScaId,
    mapping: GdcMapping,
    line_mapping: LineMapping | None = None,
) -> list[AlignedWarning]:
    """Label one analyzer's old-release warnings (see label_release_detailed)."""
    labeled, _ = label_release_detailed(snapshot, sca, mapping, line_mapping)
    return labeled
