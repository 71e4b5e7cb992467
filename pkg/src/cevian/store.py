"""Append-only record log for sweep hits and family candidates.

Line-delimited JSON under a one-line schema header. Quadruples are stored as
[numerator, denominator] pairs so grid keys survive the round trip exactly;
residuals and sample parameters are full-precision decimal strings. A torn
trailing line (interrupted writer) is tolerated on read; corruption anywhere
else is an error.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Union

import filelock

from .errors import SchemaMismatch, StoreFailure

logger = logging.getLogger(__name__)

SCHEMA_HEADER = "cevian-log v1"


@dataclass(frozen=True)
class RelationRecord:
    """One sweep hit: a detected relation at one grid quadruple."""

    quadruple: tuple[Fraction, Fraction, Fraction, Fraction]
    basis: str
    coefficients: tuple[int, ...]
    residual: str
    precision_bits: int

    def __post_init__(self):
        object.__setattr__(self, "quadruple",
                           tuple(Fraction(x) for x in self.quadruple))
        object.__setattr__(self, "coefficients",
                           tuple(int(c) for c in self.coefficients))


@dataclass(frozen=True)
class FamilyCandidate:
    """An arithmetic-progression extrapolation of two equal-coefficient hits."""

    basis: str
    coefficients: tuple[int, ...]
    q1: tuple[Fraction, Fraction, Fraction, Fraction]
    q2: tuple[Fraction, Fraction, Fraction, Fraction]
    q3: tuple[Fraction, Fraction, Fraction, Fraction]
    status: str  # "extrapolated" | "confirmed" | "refuted"
    samples: tuple[tuple[str, str], ...] = ()  # (parameter t, relative residual)

    def __post_init__(self):
        for name in ("q1", "q2", "q3"):
            object.__setattr__(self, name,
                               tuple(Fraction(x) for x in getattr(self, name)))
        object.__setattr__(self, "coefficients",
                           tuple(int(c) for c in self.coefficients))
        object.__setattr__(self, "samples",
                           tuple((str(t), str(r)) for t, r in self.samples))
        if self.q1 == self.q2:
            raise ValueError("q1 and q2 must differ to define a direction")
        if tuple(2 * b - a for a, b in zip(self.q1, self.q2)) != self.q3:
            raise ValueError("q1, q2, q3 must be in arithmetic progression")


Record = Union[RelationRecord, FamilyCandidate]


def _frac_pair(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def _record_to_obj(record: Record) -> dict:
    if isinstance(record, RelationRecord):
        return {
            "type": "relation",
            "quadruple": [_frac_pair(x) for x in record.quadruple],
            "basis": record.basis,
            "coefficients": list(record.coefficients),
            "residual": record.residual,
            "precision_bits": record.precision_bits,
        }
    if isinstance(record, FamilyCandidate):
        return {
            "type": "family",
            "basis": record.basis,
            "coefficients": list(record.coefficients),
            "q1": [_frac_pair(x) for x in record.q1],
            "q2": [_frac_pair(x) for x in record.q2],
            "q3": [_frac_pair(x) for x in record.q3],
            "status": record.status,
            "samples": [list(s) for s in record.samples],
        }
    raise TypeError(f"unsupported record type: {type(record).__name__}")


def _quad_from_obj(obj) -> tuple[Fraction, ...]:
    return tuple(Fraction(n, d) for n, d in obj)


def _record_from_obj(obj: dict) -> Record:
    kind = obj.get("type")
    if kind == "relation":
        return RelationRecord(
            quadruple=_quad_from_obj(obj["quadruple"]),
            basis=obj["basis"],
            coefficients=tuple(obj["coefficients"]),
            residual=obj["residual"],
            precision_bits=obj["precision_bits"],
        )
    if kind == "family":
        return FamilyCandidate(
            basis=obj["basis"],
            coefficients=tuple(obj["coefficients"]),
            q1=_quad_from_obj(obj["q1"]),
            q2=_quad_from_obj(obj["q2"]),
            q3=_quad_from_obj(obj["q3"]),
            status=obj["status"],
            samples=tuple((t, r) for t, r in obj["samples"]),
        )
    raise SchemaMismatch(f"unknown record type: {kind!r}")


def record_line(record: Record) -> str:
    return json.dumps(_record_to_obj(record), sort_keys=True, separators=(",", ":"))


class RecordLog:
    """Handle on one log file; append mode holds an exclusive lock."""

    def __init__(self, path, *, _handle=None, _lock=None):
        self.path = Path(path)
        self._handle = _handle
        self._lock = _lock

    @classmethod
    def open_append(cls, path) -> "RecordLog":
        path = Path(path)
        lock = filelock.FileLock(str(path) + ".lock")
        try:
            lock.acquire(timeout=10)
        except (filelock.Timeout, OSError) as exc:
            raise StoreFailure(f"could not lock {path}: {exc}") from exc
        try:
            fresh = not path.exists() or path.stat().st_size == 0
            if not fresh:
                with open(path, encoding="utf-8") as f:
                    header = f.readline().rstrip("\n")
                if header != SCHEMA_HEADER:
                    raise SchemaMismatch(
                        f"{path} has header {header!r}, expected {SCHEMA_HEADER!r}"
                    )
            handle = open(path, "a", encoding="utf-8")
            if fresh:
                handle.write(SCHEMA_HEADER + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except SchemaMismatch:
            if lock is not None:
                lock.release()
            raise
        except OSError as exc:
            if lock is not None:
                lock.release()
            raise StoreFailure(f"could not open {path} for append: {exc}") from exc
        return cls(path, _handle=handle, _lock=lock)

    @classmethod
    def open_read(cls, path) -> "RecordLog":
        path = Path(path)
        if not path.exists():
            raise StoreFailure(f"no such log: {path}")
        return cls(path)

    def append(self, record: Record) -> None:
        if self._handle is None:
            raise StoreFailure("log is not open for append")
        self._handle.write(record_line(record) + "\n")
        self._handle.flush()
        os.fsync(self._handle.fileno())

    def append_many(self, records: Iterable[Record]) -> int:
        """Batched append with one durability barrier at the end."""
        if self._handle is None:
            raise StoreFailure("log is not open for append")
        count = 0
        for record in records:
            self._handle.write(record_line(record) + "\n")
            count += 1
        self._handle.flush()
        os.fsync(self._handle.fileno())
        return count

    def read_all(self) -> list[Record]:
        try:
            with open(self.path, encoding="utf-8") as f:
                raw = f.read()
        except OSError as exc:
            raise StoreFailure(f"could not read {self.path}: {exc}") from exc
        if raw == "":
            raise SchemaMismatch(f"{self.path} has no schema header")
        lines = raw.split("\n")
        tail_complete = lines[-1] == ""
        if tail_complete:
            lines.pop()
        if not lines or lines[0] != SCHEMA_HEADER:
            raise SchemaMismatch(
                f"{self.path} has header {lines[0]!r}, expected {SCHEMA_HEADER!r}"
            )
        records = []
        for i, line in enumerate(lines[1:], start=2):
            last = i == len(lines)
            try:
                records.append(_record_from_obj(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                if last and not tail_complete:
                    logger.warning("ignoring torn trailing line in %s", self.path)
                    break
                raise StoreFailure(
                    f"{self.path} line {i} is corrupt: {exc}"
                ) from exc
        return records

    def group_by_coefficients(self) -> dict:
        """(basis, coefficients) -> sorted unique quadruples of relation records."""
        groups: dict[tuple[str, tuple[int, ...]], set] = {}
        for record in self.read_all():
            if isinstance(record, RelationRecord):
                key = (record.basis, record.coefficients)
                groups.setdefault(key, set()).add(record.quadruple)
        return {key: sorted(quads) for key, quads in groups.items()}

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None
        if self._lock is not None:
            self._lock.release()
            self._lock = None

    def __enter__(self) -> "RecordLog":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
