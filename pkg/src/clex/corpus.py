"""Dated-charter ingestion, tokenization, period slicing, and frequency statistics.

A corpus is a set of dated charters.  Charters are partitioned into period
slices by year intervals, tokenized into sentences, and counted; target words
for change analysis are the ones frequent enough in *every* period.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import string
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

__all__ = [
    "Charter",
    "PeriodSpec",
    "PeriodSlice",
    "SplitResult",
    "FrequencyTable",
    "ChangeLabelSet",
    "DEFAULT_PERIODS",
    "load_charters",
    "load_period_specs",
    "validate_period_specs",
    "normalize_and_tokenize",
    "split_periods",
    "compute_frequencies",
    "select_targets",
    "load_labels",
]


@dataclass(frozen=True)
class Charter:
    """One dated source document."""

    id: str
    year: int
    text: str


@dataclass(frozen=True)
class PeriodSpec:
    """A named, inclusive year interval."""

    name: str
    start_year: int
    end_year: int

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("period name must be non-empty")
        if self.start_year > self.end_year:
            raise ValidationError(
                f"period {self.name!r}: start_year {self.start_year} > end_year {self.end_year}"
            )

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


#: Default three-way split of the dated charters: Anglo-Saxon, Norman, and
#: Plantagenet periods.
DEFAULT_PERIODS: tuple[PeriodSpec, ...] = (
    PeriodSpec("ANG", 589, 1065),
    PeriodSpec("NOR", 1066, 1153),
    PeriodSpec("PLA", 1154, 1272),
)


@dataclass
class PeriodSlice:
    """The tokenized sub-corpus of one period."""

    period: PeriodSpec
    sentences: list[list[str]]
    charter_count: int

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass
class SplitResult:
    """Period slices plus the charters that fell outside every period."""

    slices: dict[str, PeriodSlice]
    excluded: list[Charter]


@dataclass
class FrequencyTable:
    """Per-period word occurrence counts and totals."""

    counts: dict[str, Counter]
    totals: dict[str, int]

    def rate_per_100k(self, word: str, period: str) -> float:
        total = self.totals[period]
        if total == 0:
            raise ValidationError(f"period {period!r} has zero tokens")
        return self.counts[period][word] / total * 100_000


@dataclass
class ChangeLabelSet:
    """Gold binary labels: 1 = changed, 0 = unchanged."""

    labels: dict[str, int]
    ignored: tuple[str, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def changed(self) -> set[str]:
        return {w for w, v in self.labels.items() if v == 1}

    @property
    def unchanged(self) -> set[str]:
        return {w for w, v in self.labels.items() if v == 0}


def _charter_from_fields(fields: Mapping[str, object], where: str) -> Charter:
    for key in ("id", "year", "text"):
        if key not in fields or fields[key] is None:
            raise ParseError(f"{where}: missing field {key!r}")
    raw_year = fields["year"]
    if isinstance(raw_year, bool) or isinstance(raw_year, float):
        raise ParseError(f"{where}: year must be an integer, got {raw_year!r}")
    try:
        year = int(raw_year)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ParseError(f"{where}: year must be an integer, got {raw_year!r}") from None
    cid = str(fields["id"])
    if not cid:
        raise ValidationError(f"{where}: empty charter id")
    if year <= 0:
        raise ValidationError(f"{where}: year must be positive, got {year}")
    return Charter(id=cid, year=year, text=str(fields["text"]))


def load_charters(path: str | Path, format: str | None = None) -> list[Charter]:
    """Load charters from a CSV (header ``id,year,text``) or JSONL file.

    ``format`` is ``"csv"`` or ``"jsonl"``; when omitted it is inferred from
    the file suffix.  Duplicate ids are rejected.
    """
    path = Path(path)
    if format is None:
        format = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson", ".json") else "csv"
    if format not in ("csv", "jsonl"):
        raise ValueError(f"unknown charter format {format!r}")

    charters: list[Charter] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="" if format == "csv" else None) as fh:
        if format == "csv":
            reader = csv.DictReader(fh)
            for row in reader:
                where = f"{path.name}:line {reader.line_num}"
                if None in row:
                    raise ParseError(f"{where}: more columns than header fields")
                charter = _charter_from_fields(row, where)
                if charter.id in seen:
                    raise ValidationError(f"{where}: duplicate charter id {charter.id!r}")
                seen.add(charter.id)
                charters.append(charter)
        else:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                where = f"{path.name}:line {lineno}"
                try:
                    fields = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{where}: invalid JSON ({exc.msg})") from None
                if not isinstance(fields, dict):
                    raise ParseError(f"{where}: expected a JSON object")
                charter = _charter_from_fields(fields, where)
                if charter.id in seen:
                    raise ValidationError(f"{where}: duplicate charter id {charter.id!r}")
                seen.add(charter.id)
                charters.append(charter)
    return charters


def load_period_specs(path: str | Path) -> list[PeriodSpec]:
    """Load a JSON array of ``{name, start_year, end_year}`` objects."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ParseError(f"{path}: expected a JSON array of period objects")
    specs = []
    for i, obj in enumerate(data):
        try:
            specs.append(PeriodSpec(str(obj["name"]), int(obj["start_year"]), int(obj["end_year"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: period entry {i}: {exc}") from None
    validate_period_specs(specs)
    return specs


def validate_period_specs(specs: Sequence[PeriodSpec]) -> None:
    """Check that intervals are sorted ascending and pairwise disjoint."""
    if not specs:
        raise ValidationError("at least one period spec is required")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ValidationError("period names must be unique")
    for prev, cur in zip(specs, specs[1:]):
        if cur.start_year <= prev.end_year:
            raise ValidationError(
                f"periods {prev.name!r} and {cur.name!r} overlap or are out of order"
            )


_SENTENCE_BREAK = re.compile(r"[.;:!?]")


def normalize_and_tokenize(text: str) -> list[list[str]]:
    """Split ``text`` into sentences of lowercased, punctuation-stripped tokens.

    Sentences break on ``. ; : ! ?``; tokens split on whitespace, are
    lowercased, lose leading/trailing punctuation, and are dropped when
    nothing remains.  Empty sentences are dropped.  Total function: any
    string is accepted.
    """
    sentences = []
    for raw in _SENTENCE_BREAK.split(text):
        tokens = []
        for piece in raw.split():
            token = piece.strip(string.punctuation).lower()
            if token:
                tokens.append(token)
        if tokens:
            sentences.append(tokens)
    return sentences


def split_periods(charters: Iterable[Charter], specs: Sequence[PeriodSpec]) -> SplitResult:
    """Assign each charter to the period containing its year and tokenize it.

    Charters dated outside every period are collected in ``excluded`` rather
    than rejected.  Every spec gets a slice, possibly empty.
    """
    validate_period_specs(specs)
    sentences: dict[str, list[list[str]]] = {s.name: [] for s in specs}
    charter_counts: Counter = Counter()
    excluded: list[Charter] = []
    for charter in charters:
        spec = next((s for s in specs if s.contains(charter.year)), None)
        if spec is None:
            excluded.append(charter)
            continue
        sentences[spec.name].extend(normalize_and_tokenize(charter.text))
        charter_counts[spec.name] += 1
    slices = {
        s.name: PeriodSlice(period=s, sentences=sentences[s.name], charter_count=charter_counts[s.name])
        for s in specs
    }
    return SplitResult(slices=slices, excluded=excluded)


def compute_frequencies(slices: Mapping[str, PeriodSlice]) -> FrequencyTable:
    """Count word occurrences per period."""
    if not slices:
        raise ValidationError("no period slices given")
    counts: dict[str, Counter] = {}
    totals: dict[str, int] = {}
    for name, sl in slices.items():
        counter: Counter = Counter()
        for sentence in sl.sentences:
            counter.update(sentence)
        counts[name] = counter
        totals[name] = sum(counter.values())
    return FrequencyTable(counts=counts, totals=totals)


def select_targets(freqs: FrequencyTable, threshold_per_100k: float = 5.0) -> set[str]:
    """Words whose relative frequency strictly exceeds the threshold in every period.

    ``threshold_per_100k`` is in occurrences per 100,000 tokens; the
    comparison is strict, so a word sitting exactly on the threshold in any
    period is excluded.
    """
    for period, total in freqs.totals.items():
        if total <= 0:
            raise ValidationError(f"period {period!r} has zero tokens")
    periods = list(freqs.counts)
    candidates = set(freqs.counts[periods[0]])
    for period in periods[1:]:
        candidates &= set(freqs.counts[period])
    return {
        word
        for word in candidates
        if all(freqs.rate_per_100k(word, p) > threshold_per_100k for p in periods)
    }


def load_labels(path: str | Path, targets: set[str]) -> ChangeLabelSet:
    """Load a two-column ``word,label`` CSV of binary change labels.

    Labels must be 0 or 1.  Words absent from ``targets`` are logged as
    warnings and returned in ``ignored`` instead of being stored.
    """
    path = Path(path)
    labels: dict[str, int] = {}
    ignored: list[str] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            where = f"{path.name}:line {reader.line_num}"
            if len(row) != 2:
                raise ParseError(f"{where}: expected two columns, got {len(row)}")
            word, raw = row[0].strip(), row[1].strip()
            if reader.line_num == 1 and (word.lower(), raw.lower()) == ("word", "label"):
                continue  # optional header
            try:
                value = int(raw)
            except ValueError:
                raise ParseError(f"{where}: label must be 0 or 1, got {raw!r}") from None
            if value not in (0, 1):
                raise ParseError(f"{where}: label must be 0 or 1, got {value}")
            if word not in targets:
                logger.warning("label file %s: %r is not a target word; ignored", path.name, word)
                ignored.append(word)
                continue
            labels[word] = value
    return ChangeLabelSet(labels=labels, ignored=tuple(ignored))
