"""Energy-commit categories: label normalization and the minimum-count rule."""

from __future__ import annotations

import csv
import enum
import logging
import re
from collections import Counter
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

log = logging.getLogger(__name__)

MIN_CATEGORY_COUNT = 20


class Category(str, enum.Enum):
    BUG_FIX_CODE_REFINEMENT = "BugFixCodeRefinement"
    POWER_AWARENESS = "PowerAwareness"
    POWER_SAVE_MODE = "PowerSaveMode"
    POWER_USAGE_MONITORING = "PowerUsageMonitoring"
    WAKELOCK_ADDITION = "WakelockAddition"
    WAKELOCK_OPTIMIZATION = "WakelockOptimization"
    MISCELLANEOUS = "Miscellaneous"


def label_key(label: str) -> str:
    """Case-, space- and punctuation-insensitive lookup key ("Power Save Mode" == "PowerSaveMode")."""
    return re.sub(r"[^0-9a-z]", "", label.lower())


def load_alias_table(path: Path | None = None) -> dict[str, Category]:
    """Alias -> category, from ``path`` or the bundled ``aliases.csv``.

    Canonical names and their spaced spellings always resolve, the table only
    needs the labels that differ in wording.
    """
    table = {label_key(c.value): c for c in Category}
    if path is None:
        text = resources.files("maintscore.data").joinpath("aliases.csv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    for row in csv.DictReader(text.splitlines()):
        table[label_key(row["alias"])] = Category(row["category"])
    return table


def normalize_label(label: str | None, table: Mapping[str, Category]) -> Category:
    if not label or not label.strip():
        return Category.MISCELLANEOUS
    cat = table.get(label_key(label))
    if cat is None:
        log.warning("unknown category label %r mapped to Miscellaneous", label)
        return Category.MISCELLANEOUS
    return cat


@dataclass(frozen=True)
class DatasetRecord:
    project_url: str
    commit_hash: str
    label: str = ""
    category: Category | None = None


def normalize_categories(records: Iterable[DatasetRecord], table: Mapping[str, Category] | None = None) -> list[DatasetRecord]:
    table = table if table is not None else load_alias_table()
    return [replace(r, category=normalize_label(r.label, table)) for r in records]


def apply_min_count_rule(records: Iterable[DatasetRecord], minimum: int = MIN_CATEGORY_COUNT) -> list[DatasetRecord]:
    """Relabel every category with fewer than ``minimum`` records as Miscellaneous."""
    records = list(records)
    counts = Counter(r.category for r in records)
    small = {c for c, k in counts.items() if k < minimum and c is not Category.MISCELLANEOUS}
    return [replace(r, category=Category.MISCELLANEOUS) if r.category in small else r for r in records]


def category_counts(records: Iterable[DatasetRecord]) -> dict[str, int]:
    counts = Counter(r.category.value for r in records if r.category is not None)
    return {c.value: counts[c.value] for c in Category if counts[c.value]}


DATASET_HEADER = ("project_url", "commit_hash", "category")


def read_dataset(path: Path) -> list[DatasetRecord]:
    """Read a ``project_url,commit_hash,category`` CSV (UTF-8, header row)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"project_url", "commit_hash"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return [
            DatasetRecord(row["project_url"].strip(), row["commit_hash"].strip(), (row.get("category") or "").strip())
            for row in reader
            if row.get("project_url") and row.get("commit_hash")
        ]
