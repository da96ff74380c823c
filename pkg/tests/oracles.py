"""Naive reference transcriptions of the detector scans.

Kept deliberately independent of the streaming implementations: the
first-index pair is rescanned from zero, button runs come from the
first-run scan re-applied at every suffix, and entry bursts are rebuilt
from a groupby-style run split. Verdicts are plain strings.
"""

from __future__ import annotations

import itertools

OK, KO, PENDING = "OK", "KO", "PENDING"

ENTRY, BUTTON = "ENTRY", "BUTTON"


def ref_button_before_entry(cats: list[str]) -> str:
    n = len(cats)
    idx_entry = n
    for i in range(n):
        if cats[i] == ENTRY:
            idx_entry = i
            break
    idx_button = n
    for i in range(n):
        if cats[i] == BUTTON:
            idx_button = i
            break
    return KO if idx_button < idx_entry else OK


def ref_button_runs(cats: list[str]) -> list[tuple[int, int]]:
    """All maximal button runs: the first-run scan applied at every suffix."""
    n = len(cats)
    runs = set()
    for start in range(n):
        i = start
        while i < n and cats[i] != BUTTON:
            i += 1
        if i == n:
            continue
        index1 = i
        i += 1
        while i < n and cats[i] == BUTTON:
            i += 1
        if index1 > 0 and cats[index1 - 1] == BUTTON:
            continue  # scan began inside a run; not maximal
        runs.add((index1, i))
    return sorted(runs)


def ref_ko_button_runs(cats: list[str]) -> list[tuple[int, int]]:
    return [(a, b) for a, b in ref_button_runs(cats) if b - a > 1]


def ref_entry_bursts(cats, rels, threshold):
    """Entry bursts rebuilt from a groupby run split.

    Returns (start, end, verdict, duration, gradient) per burst, where end
    indexes the first non-entry event after the run.
    """
    n = len(cats)
    out = []
    for is_entry, group in itertools.groupby(range(n), key=lambda i: cats[i] == ENTRY):
        indices = list(group)
        if not is_entry:
            continue
        start, end = indices[0], indices[-1] + 1
        if end == n:
            out.append((start, end, PENDING, None, None))
            break
        duration = rels[end] - rels[start]
        gradient = None
        verdict = OK
        if end - start > 1:
            gradient = duration / (end - start)
            if gradient < threshold:
                verdict = KO
        out.append((start, end, verdict, duration, gradient))
    return out
