"""Builders shared by the test modules.

Most matching and alignment tests need small hand-built warnings, releases,
and snapshots; the functions here keep those fixtures terse.
"""

from __future__ import annotations

import datetime as dt

from sca_reco.core import (
    AlignedWarning,
    ProjectSnapshot,
    RawWarning,
    Release,
    WarningLabel,
)
from sca_reco.ingestion import GdcMapping

A = WarningLabel.ACTIONABLE
U = WarningLabel.UNACTIONABLE
UNKNOWN = WarningLabel.UNKNOWN

OLD_DATE = dt.date(2024, 1, 1)
NEW_DATE = dt.date(2024, 7, 1)


def aw(
    new_type: str = "null_dereference",
    class_info: str = "com.example.Foo",
    start: int = 10,
    end: int | None = None,
    label: WarningLabel = A,
    sca: str = "alpha",
    index: int = 0,
) -> AlignedWarning:
    return AlignedWarning(
        new_type=new_type,
        class_info=class_info,
        start_line=start,
        end_line=start if end is None else end,
        label=label,
        origin=(sca, index),
    )


def raw(
    sca: str = "alpha",
    original_type: str = "NULL_DEREF",
    class_path: str = "com.example.Foo",
    method: str | None = None,
    start: int = 10,
    end: int | None = None,
) -> RawWarning:
    return RawWarning(
        sca=sca,
        original_type=original_type,
        class_path=class_path,
        method_path=method,
        start_line=start,
        end_line=start if end is None else end,
    )


def release(files: dict[str, list[str]], release_id: str = "r", old: bool = True) -> Release:
    return Release(
        release_id=release_id,
        timestamp=OLD_DATE if old else NEW_DATE,
        files={path: tuple(lines) for path, lines in files.items()},
    )


def snapshot(
    old_files: dict[str, list[str]],
    new_files: dict[str, list[str]],
    reports_old: dict[str, list[RawWarning]],
    reports_new: dict[str, list[RawWarning]],
    project_id: str = "proj",
) -> ProjectSnapshot:
    return ProjectSnapshot(
        project_id=project_id,
        release_old=release(old_files, "r1", old=True),
        release_new=release(new_files, "r2", old=False),
        reports_old={k: tuple(v) for k, v in reports_old.items()},
        reports_new={k: tuple(v) for k, v in reports_new.items()},
    )


def identity_mapping(pairs: dict[tuple[str, str], str] | None = None) -> GdcMapping:
    """Mapping used by the hand-built snapshots.

    Defaults map each analyzer's native spelling onto the category ids the
    builders above use directly.
    """
    entries = {
        ("alpha", "NULL_DEREF"): "null_dereference",
        ("alpha", "LEAK"): "resource_leak",
        ("beta", "NULL_DEREF"): "null_dereference",
        ("beta", "LEAK"): "resource_leak",
    }
    entries.update(pairs or {})
    return GdcMapping(entries)


def java_class(class_name: str, package: str = "com.example", n_methods: int = 2) -> list[str]:
    """A small pseudo-Java file with one method per block of 4 lines."""
    lines = [f"package {package};", "", f"public class {class_name} " + "{"]
    for m in range(n_methods):
        lines.append("")
        lines.append(f"    public void method{m}() " + "{")
        lines.append(f"        int value{m} = compute{m}();")
        lines.append(f"        use(value{m});")
        lines.append("    }")
    lines.append("}")
    return lines
