"""Media file lookup with closest-name fallback."""

from __future__ import annotations

from pathlib import Path

from ..catalog import Catalog, default_catalog
from ..errors import NoCandidate


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, two-row dynamic programme."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def resolve_asset(value: str, workspace_dir: str | Path, catalog: Catalog | None = None) -> Path:
    """Find ``value`` in ``workspace_dir``, or the nearest file of the same media family.

    Nearness is case-insensitive edit distance on the file name; ties go to the
    lexicographically smallest name.
    """
    catalog = catalog or default_catalog()
    root = Path(workspace_dir)
    exact = root / value
    if exact.is_file():
        return exact
    family = catalog.media_family(value)
    files = sorted(p for p in root.iterdir() if p.is_file()) if root.is_dir() else []
    candidates = [p for p in files if family is not None and catalog.media_family(p.name) == family]
    if not candidates:
        raise NoCandidate(f"no {family or 'media'} file in {root} to stand in for {value!r}")
    want = value.lower()
    return min(candidates, key=lambda p: (edit_distance(want, p.name.lower()), p.name))
