"""Subjects, group samples, k-group datasets, and CSV ingestion.

A record is one subject's observed time together with a cause code:
0 = censored, 1 = the cause of interest, 2 = all other causes pooled.
A dataset holds k >= 2 groups in the order hypothesized by the user;
position in the sequence is the hypothesized rank, never inferred from
the data.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DataError

VALID_CAUSES = (0, 1, 2)


@dataclass(frozen=True)
class FailureRecord:
    """One subject: observed time and cause code (0 censored, 1, or 2)."""

    time: float
    cause: int

    def __post_init__(self):
        object.__setattr__(self, "time", float(self.time))
        object.__setattr__(self, "cause", int(self.cause))
        if not np.isfinite(self.time) or self.time <= 0:
            raise DataError(f"time must be a positive finite number, got {self.time}")
        if self.cause not in VALID_CAUSES:
            raise DataError(f"cause must be one of {VALID_CAUSES}, got {self.cause}")


@dataclass(frozen=True)
class GroupSample:
    """All records of one population, in input order."""

    label: str
    records: tuple[FailureRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if len(self.records) < 1:
            raise DataError(f"group {self.label!r} is empty")

    @property
    def n(self) -> int:
        return len(self.records)

    @cached_property
    def times(self) -> np.ndarray:
        out = np.array([r.time for r in self.records], dtype=float)
        out.setflags(write=False)
        return out

    @cached_property
    def causes(self) -> np.ndarray:
        out = np.array([r.cause for r in self.records], dtype=np.int64)
        out.setflags(write=False)
        return out

    @property
    def max_time(self) -> float:
        return float(self.times.max())

    @property
    def num_events(self) -> int:
        """Number of uncensored records (cause 1 or 2)."""
        return int(np.count_nonzero(self.causes != 0))


@dataclass(frozen=True)
class MultiGroupDataset:
    """k >= 2 group samples; sequence position is the hypothesized rank."""

    groups: tuple[GroupSample, ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if len(self.groups) < 2:
            raise DataError("a dataset needs at least two groups")
        labels = [g.label for g in self.groups]
        if len(set(labels)) != len(labels):
            raise DataError(f"group labels must be distinct, got {labels}")

    @property
    def k(self) -> int:
        return len(self.groups)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.groups)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(g.n for g in self.groups)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def weights(self) -> np.ndarray:
        """Relative group sizes n_i / n; they sum to one."""
        return np.array(self.sizes, dtype=float) / self.n

    @property
    def censored_flag(self) -> bool:
        return any(np.any(g.causes == 0) for g in self.groups)


def pooled_event_grid(dataset: MultiGroupDataset) -> np.ndarray:
    """Distinct observed times (all cause codes) across all groups, sorted.

    Every per-group step function produced by the estimators has its knots
    inside this grid, so suprema and pointwise projections taken over the
    grid are exact.
    """
    return np.unique(np.concatenate([g.times for g in dataset.groups]))


_HEADER = ["group", "time", "cause"]


def ingest_csv(source, group_order: Sequence[str]) -> MultiGroupDataset:
    """Read `group,time,cause` CSV rows into a dataset.

    ``source`` may be a path, a text or binary stream, or a str/bytes
    payload.  ``group_order`` fixes the hypothesized ordering and must
    cover every label present; rows keep their input order within groups.
    Malformed rows raise :class:`DataError` naming the offending line.
    """
    order = [str(g) for g in group_order]
    if len(set(order)) != len(order):
        raise DataError(f"group order contains duplicates: {order}")

    stream = _as_text_stream(source)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input, expected header 'group,time,cause'", line=1)
    if [h.strip().lower() for h in header] != _HEADER:
        raise DataError(
            f"expected header 'group,time,cause', got {','.join(header)!r}", line=1
        )

    by_label: dict[str, list[FailureRecord]] = {label: [] for label in order}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise DataError(f"expected 3 fields, got {len(row)}", line=lineno)
        label, time_s, cause_s = (field.strip() for field in row)
        if label not in by_label:
            raise DataError(f"unknown group label {label!r}", line=lineno)
        try:
            time = float(time_s)
        except ValueError:
            raise DataError(f"non-numeric time {time_s!r}", line=lineno)
        try:
            cause = int(cause_s)
        except ValueError:
            raise DataError(f"non-integer cause {cause_s!r}", line=lineno)
        try:
            record = FailureRecord(time=time, cause=cause)
        except DataError as exc:
            raise DataError(str(exc), line=lineno) from None
        by_label[label].append(record)

    for label in order:
        if not by_label[label]:
            raise DataError(f"group {label!r} has no records")
    return MultiGroupDataset(
        groups=tuple(GroupSample(label, tuple(by_label[label])) for label in order)
    )


def write_csv(dataset: MultiGroupDataset, stream: IO[str]) -> None:
    """Serialize a dataset back to the `group,time,cause` schema."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(_HEADER)
    for group in dataset.groups:
        for record in group.records:
            writer.writerow([group.label, repr(record.time), record.cause])


def _as_text_stream(source) -> IO[str]:
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, bytes):
        return io.TextIOWrapper(io.BytesIO(source), encoding="utf-8", newline="")
    if hasattr(source, "read"):
        probe = source.read(0)
        if isinstance(probe, bytes):
            return io.TextIOWrapper(source, encoding="utf-8", newline="")
        return source
    raise DataError(f"unsupported CSV source type {type(source).__name__}")
