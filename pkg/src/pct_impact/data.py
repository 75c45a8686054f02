"""Publication records, reference sets and institution samples.

Input is a UTF-8 CSV with header ``id,institution,pub_year,category,
citations[,inv_percentile]``. A paper with several subject categories may
appear as repeated rows sharing an id or carry a single ``|``-separated
category list; both spellings parse to one record. Malformed rows are
collected into a rejects report instead of aborting the run, unless their
fraction exceeds a configurable threshold.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence, Union

from .errors import (
    ConfigurationError,
    EmptyDatasetError,
    RejectThresholdError,
    UnknownInstitutionError,
)

__all__ = [
    "PublicationRecord",
    "ReferenceSetKey",
    "ReferenceSet",
    "InstitutionSample",
    "Dataset",
    "IngestionConfig",
    "RejectedRow",
    "parse_records",
    "serialize_dataset",
    "write_rejects_report",
    "filter_years",
    "group_reference_sets",
    "best_category_percentile",
    "select_institution_sample",
]

REQUIRED_COLUMNS = ("id", "institution", "pub_year", "category", "citations")
OPTIONAL_COLUMNS = ("inv_percentile",)


@dataclass(frozen=True)
class PublicationRecord:
    """One paper: its home institution, fields, year and citation count.

    inv_percentile is an optional pre-supplied inverted percentile in
    [0, 100] (smaller is better, 100 means uncited).
    """

    id: str
    institution: str
    pub_year: int
    categories: tuple[str, ...]
    citations: int
    inv_percentile: Optional[float] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if not self.institution:
            raise ValueError("institution must be non-empty")
        if not self.categories:
            raise ValueError("categories must be non-empty")
        if self.citations < 0:
            raise ValueError(f"citations must be >= 0, got {self.citations}")
        if self.inv_percentile is not None and not 0.0 <= self.inv_percentile <= 100.0:
            raise ValueError(
                f"inv_percentile must be in [0, 100], got {self.inv_percentile}"
            )


@dataclass(frozen=True)
class ReferenceSetKey:
    """Exact (subject category, publication year) pair."""

    category: str
    pub_year: int


@dataclass(frozen=True)
class ReferenceSet:
    """All papers sharing one subject category and publication year."""

    key: ReferenceSetKey
    members: tuple[PublicationRecord, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("reference set must be non-empty")
        for m in self.members:
            if self.key.category not in m.categories or m.pub_year != self.key.pub_year:
                raise ValueError(f"record {m.id} does not belong to set {self.key}")


@dataclass(frozen=True)
class InstitutionSample:
    institution: str
    records: tuple[PublicationRecord, ...]

    def __post_init__(self):
        if not self.records:
            raise ValueError("institution sample must be non-empty")

    @property
    def n(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class Dataset:
    records: tuple[PublicationRecord, ...]

    @property
    def institutions(self) -> frozenset[str]:
        return frozenset(r.institution for r in self.records)

    @property
    def year_range(self) -> tuple[int, int]:
        years = [r.pub_year for r in self.records]
        return (min(years), max(years))


@dataclass(frozen=True)
class IngestionConfig:
    """Knobs for CSV parsing; reject_threshold is a fraction of data rows."""

    reject_threshold: float = 0.10


@dataclass(frozen=True)
class RejectedRow:
    row: int  # physical line number in the source file
    reason: str


@dataclass
class _PendingRecord:
    line: int
    institution: str
    pub_year: int
    citations: int
    inv_percentile: Optional[float]
    categories: list[str] = field(default_factory=list)


def _coerce_stream(source: Union[IO[bytes], IO[str], bytes, str]) -> Iterable[str]:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8-sig"))
    if isinstance(source, str):
        return io.StringIO(source.lstrip("\ufeff"))
    data = source.read()
    if isinstance(data, bytes):
        return io.StringIO(data.decode("utf-8-sig"))
    return io.StringIO(data.lstrip("\ufeff"))


def parse_records(
    source: Union[IO[bytes], IO[str], bytes, str],
    config: IngestionConfig = IngestionConfig(),
) -> tuple[Dataset, list[RejectedRow]]:
    """Parse the CSV contract into a Dataset plus a rejects report.

    Raises ConfigurationError when a required column is missing and
    RejectThresholdError when more than config.reject_threshold of the
    data rows fail validation. Individual bad rows never abort the run
    below that threshold; they are returned with line numbers and reasons.
    """
    reader = csv.DictReader(_coerce_stream(source))
    if reader.fieldnames is None:
        raise ConfigurationError("input is empty; expected a CSV header")
    reader.fieldnames = [f.strip() for f in reader.fieldnames]
    fields = reader.fieldnames
    missing = [c for c in REQUIRED_COLUMNS if c not in fields]
    if missing:
        raise ConfigurationError(f"missing required column(s): {', '.join(missing)}")
    has_pct = "inv_percentile" in fields

    pending: dict[str, _PendingRecord] = {}
    order: list[str] = []
    rejects: list[RejectedRow] = []
    n_rows = 0

    for row in reader:
        n_rows += 1
        line = reader.line_num
        try:
            rec_id = (row.get("id") or "").strip()
            if not rec_id:
                raise ValueError("empty id")
            institution = (row.get("institution") or "").strip()
            if not institution:
                raise ValueError("empty institution")
            pub_year = int((row.get("pub_year") or "").strip())
            cats = [c.strip() for c in (row.get("category") or "").split("|") if c.strip()]
            if not cats:
                raise ValueError("empty category")
            citations = int((row.get("citations") or "").strip())
            if citations < 0:
                raise ValueError(f"citations must be >= 0, got {citations}")
            pct_raw = (row.get("inv_percentile") or "").strip() if has_pct else ""
            inv_pct = float(pct_raw) if pct_raw else None
            if inv_pct is not None and not 0.0 <= inv_pct <= 100.0:
                raise ValueError(f"inv_percentile must be in [0, 100], got {inv_pct}")
        except ValueError as exc:
            rejects.append(RejectedRow(row=line, reason=str(exc)))
            continue

        prev = pending.get(rec_id)
        if prev is None:
            pending[rec_id] = _PendingRecord(
                line=line,
                institution=institution,
                pub_year=pub_year,
                citations=citations,
                inv_percentile=inv_pct,
                categories=cats,
            )
            order.append(rec_id)
        else:
            same = (
                prev.institution == institution
                and prev.pub_year == pub_year
                and prev.citations == citations
                and prev.inv_percentile == inv_pct
            )
            if not same:
                rejects.append(
                    RejectedRow(
                        row=line,
                        reason=f"conflicts with earlier row for id {rec_id!r}",
                    )
                )
                continue
            for c in cats:
                if c not in prev.categories:
                    prev.categories.append(c)

    if n_rows == 0:
        raise EmptyDatasetError("input contains a header but no data rows")
    if len(rejects) / n_rows > config.reject_threshold:
        raise RejectThresholdError(
            f"{len(rejects)} of {n_rows} rows rejected, above the "
            f"{config.reject_threshold:.0%} threshold"
        )
    if not pending:
        raise EmptyDatasetError("no valid records after rejecting malformed rows")

    records = tuple(
        PublicationRecord(
            id=rid,
            institution=pending[rid].institution,
            pub_year=pending[rid].pub_year,
            categories=tuple(pending[rid].categories),
            citations=pending[rid].citations,
            inv_percentile=pending[rid].inv_percentile,
        )
        for rid in order
    )
    return Dataset(records=records), rejects


def _format_pct(p: Optional[float]) -> str:
    if p is None:
        return ""
    return format(p, ".10g")


def serialize_dataset(dataset: Dataset) -> str:
    """Canonical CSV form: fixed column order, one row per record,
    categories joined with '|'. parse -> serialize is idempotent."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(REQUIRED_COLUMNS) + list(OPTIONAL_COLUMNS))
    for r in dataset.records:
        writer.writerow(
            [
                r.id,
                r.institution,
                r.pub_year,
                "|".join(r.categories),
                r.citations,
                _format_pct(r.inv_percentile),
            ]
        )
    return out.getvalue()


def write_rejects_report(rejects: Sequence[RejectedRow], stream: IO[str]) -> None:
    """Rejects report contract: CSV with columns row,reason."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["row", "reason"])
    for r in rejects:
        writer.writerow([r.row, r.reason])


def filter_years(dataset: Dataset, last_year: int) -> Dataset:
    """Keep records published in or before last_year."""
    kept = tuple(r for r in dataset.records if r.pub_year <= last_year)
    if not kept:
        raise EmptyDatasetError(f"no records with pub_year <= {last_year}")
    return Dataset(records=kept)


def group_reference_sets(dataset: Dataset) -> list[ReferenceSet]:
    """Group records into (category, year) reference sets.

    A record with k categories becomes a full member of k sets. Sets come
    back sorted by category then year so downstream output is stable.
    """
    groups: dict[ReferenceSetKey, list[PublicationRecord]] = {}
    for r in dataset.records:
        for cat in r.categories:
            groups.setdefault(ReferenceSetKey(cat, r.pub_year), []).append(r)
    return [
        ReferenceSet(key=k, members=tuple(groups[k]))
        for k in sorted(groups, key=lambda k: (k.category, k.pub_year))
    ]


def best_category_percentile(per_category: Sequence[tuple[str, float]]) -> float:
    """Best (lowest) inverted percentile over a paper's subject categories."""
    if not per_category:
        raise ValueError("best_category_percentile: empty list")
    values = [v for _, v in per_category]
    for v in values:
        if not 0.0 <= v <= 100.0:
            raise ValueError(f"best_category_percentile: value out of [0, 100]: {v}")
    return min(values)


def select_institution_sample(dataset: Dataset, institution: str) -> InstitutionSample:
    """All records of one institution; labels are case-sensitive."""
    records = tuple(r for r in dataset.records if r.institution == institution)
    if not records:
        raise UnknownInstitutionError(institution, sorted(dataset.institutions))
    return InstitutionSample(institution=institution, records=records)
