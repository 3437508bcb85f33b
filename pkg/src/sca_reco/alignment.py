"""Grouping of warnings that different analyzers raised for the same defect.

Two or three warnings (at most one per analyzer) are considered the same
defect when they share category and class, their start and end lines are
each within 3 of one another pairwise, and their line ranges overlap
pairwise.  Labels are then resolved by vote: unanimous groups keep their
label, a 2-vs-1 group takes the majority, and a conflicting pair is
discarded outright.  Warnings that group with nobody stand alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .core import AlignedWarning, ScaId, WarningLabel, sort_warnings, warning_sort_key

OFFSET_LIMIT = 3


def identical(warnings: Sequence[AlignedWarning], ignore_label: bool = False) -> bool:
    """Do these 2 or 3 warnings from distinct analyzers denote one defect?"""
    group = list(warnings)
    if len(group) not in (2, 3):
        raise ValueError("identity is defined for 2 or 3 warnings")
    scas = [w.origin[0] for w in group]
    if len(set(scas)) != len(scas):
        raise ValueError("warnings must come from distinct analyzers")
    first = group[0]
    for other in group[1:]:
        if other.new_type != first.new_type or other.class_info != first.class_info:
            return False
        if not ignore_label and other.label is not first.label:
            return False
    for a, b in combinations(group, 2):
        if abs(a.start_line - b.start_line) > OFFSET_LIMIT:
            return False
        if abs(a.end_line - b.end_line) > OFFSET_LIMIT:
            return False
        if max(a.start_line, b.start_line) > min(a.end_line, b.end_line):
            return False
    return True


def _resolve_label(members: Sequence[AlignedWarning]) -> WarningLabel | None:
    """Voted label, or None for a conflicting pair (which must be discarded)."""
    labels = [m.label for m in members]
    if all(label is labels[0] for label in labels):
        return labels[0]
    if len(labels) == 2:
        return None
    actionable = sum(1 for label in labels if label is WarningLabel.ACTIONABLE)
    return WarningLabel.ACTIONABLE if actionable >= 2 else WarningLabel.UNACTIONABLE


@dataclass(frozen=True)
class AlignedGroup:
    """A resolved group of 1..3 warnings agreeing on one defect."""

    members: tuple[AlignedWarning, ...]
    resolved_label: WarningLabel

    def __post_init__(self):
        if not 1 <= len(self.members) <= 3:
            raise ValueError("a group holds 1 to 3 warnings")
        if len(self.members) > 1 and not identical(self.members, ignore_label=True):
            raise ValueError("group members do not denote the same defect")
        voted = _resolve_label(self.members)
        if voted is None or voted is not self.resolved_label:
            raise ValueError("resolved label disagrees with the member vote")

    def has_sca(self, sca: ScaId) -> bool:
        return any(m.origin[0] == sca for m in self.members)


@dataclass(frozen=True)
class DiscardedPair:
    """Two warnings that matched in every respect except their labels."""

    members: tuple[AlignedWarning, AlignedWarning]
    reason: str = "label-conflict"


@dataclass(frozen=True)
class AlignmentResult:
    groups: tuple[AlignedGroup, ...]
    discarded: tuple[DiscardedPair, ...]


def align_project(
    labeled: Mapping[ScaId, Sequence[AlignedWarning]],
    sca_order: Sequence[ScaId],
) -> AlignmentResult:
    """Greedily group one project's labeled warnings across analyzers.

    Analyzers are visited in corpus order; each still-unconsumed warning (in
    canonical order) seeds a group, then every later analyzer contributes its
    best compatible unconsumed warning: minimal summed start-line distance to
    the current members, ties by canonical order.  Labels are ignored while
    grouping and resolved by vote afterwards.
    """
    for sca, warnings in labeled.items():
        for w in warnings:
            if w.label is WarningLabel.UNKNOWN:
                raise ValueError(f"unknown-labeled warning from {sca!r} cannot be aligned")
            if w.origin[0] != sca:
                raise ValueError(f"warning origin {w.origin} filed under {sca!r}")

    pools: dict[ScaId, list[AlignedWarning]] = {
        sca: sort_warnings(labeled.get(sca, ())) for sca in sca_order
    }
    consumed: set[tuple[ScaId, int]] = set()
    raw_groups: list[list[AlignedWarning]] = []

    for i, sca in enumerate(sca_order):
        for seed in pools[sca]:
            if seed.origin in consumed:
                continue
            consumed.add(seed.origin)
            members = [seed]
            for later in sca_order[i + 1 :]:
                best = None
                best_key = None
                for candidate in pools[later]:
                    if candidate.origin in consumed:
                        continue
                    if not _compatible(members, candidate):
                        continue
                    distance = sum(
                        abs(candidate.start_line - m.start_line) for m in members
                    )
                    key = (distance, warning_sort_key(candidate))
                    if best_key is None or key < best_key:
                        best, best_key = candidate, key
                if best is not None:
                    consumed.add(best.origin)
                    members.append(best)
            raw_groups.append(members)

    groups: list[AlignedGroup] = []
    discarded: list[DiscardedPair] = []
    for members in raw_groups:
        resolved = _resolve_label(members)
        if resolved is None:
            a, b = sort_warnings(members)
            discarded.append(DiscardedPair((a, b)))
        else:
            groups.append(AlignedGroup(tuple(sort_warnings(members)), resolved))
    groups.sort(key=lambda g: warning_sort_key(g.members[0]))
    discarded.sort(key=lambda d: warning_sort_key(d.members[0]))
    return AlignmentResult(tuple(groups), tuple(discarded))


def _compatible(members: list[AlignedWarning], candidate: AlignedWarning) -> bool:
    return all(identical((m, candidate), ignore_label=True) for m in members)


def distinct_counts(result: AlignmentResult) -> tuple[int, int]:
    """(number of distinct defects, number of actionable ones)."""
    actionable = sum(
        1 for g in result.groups if g.resolved_label is WarningLabel.ACTIONABLE
    )
    return len(result.groups), actionable
