"""Cross-period similarity scoring and change-detection statistics.

For each target word present in two period spaces we compute the cosine of
its vectors; labeled cosines then yield the separation between changed and
unchanged groups (delta-mu with a Welch t-test) and the point-biserial
Pearson correlation between labels and cosines.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .corpus import ChangeLabelSet
from .errors import ValidationError

__all__ = [
    "SimilarityRow",
    "CoverageGap",
    "PairResult",
    "MetricsResult",
    "GroupSummary",
    "ComparisonReport",
    "cosine",
    "pair_similarities",
    "attach_labels",
    "compute_metrics",
    "distribution_summary",
    "compare_transitions",
    "rows_to_csv",
    "metrics_to_row",
    "METRICS_CSV_HEADER",
]

#: p-value threshold below which a statistic is starred as significant.
SIGNIFICANCE_LEVEL = 0.01


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped into [-1, 1] to absorb float drift."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValidationError("cosine of a zero-norm vector is undefined")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


@dataclass
class SimilarityRow:
    """Per-word cosine values keyed by transition name, plus its gold label."""

    word: str
    cos: dict[str, float] = field(default_factory=dict)
    label: int | None = None


@dataclass(frozen=True)
class CoverageGap:
    word: str
    missing_from: str


@dataclass
class PairResult:
    rows: list[SimilarityRow]
    missing: list[CoverageGap]


def pair_similarities(
    vectors_a: Mapping[str, np.ndarray],
    vectors_b: Mapping[str, np.ndarray],
    targets: Iterable[str],
    transition: str,
    side_names: tuple[str, str] = ("first", "second"),
) -> PairResult:
    """One row per target present on both sides; absentees go to ``missing``
    with the side they fell out of."""
    rows: list[SimilarityRow] = []
    missing: list[CoverageGap] = []
    for word in sorted(set(targets)):
        in_a, in_b = word in vectors_a, word in vectors_b
        if in_a and in_b:
            rows.append(
                SimilarityRow(word=word, cos={transition: cosine(vectors_a[word], vectors_b[word])})
            )
        else:
            if not in_a:
                missing.append(CoverageGap(word=word, missing_from=side_names[0]))
            if not in_b:
                missing.append(CoverageGap(word=word, missing_from=side_names[1]))
    return PairResult(rows=rows, missing=missing)


def attach_labels(rows: Iterable[SimilarityRow], labels: ChangeLabelSet) -> list[SimilarityRow]:
    """Set each row's label from the label set; unlabeled rows keep None."""
    out = []
    for row in rows:
        row.label = labels.labels.get(row.word, row.label)
        out.append(row)
    return out


@dataclass(frozen=True)
class MetricsResult:
    """Change-detection statistics for one transition."""

    transition: str
    delta_mu: float
    t_statistic: float
    t_p_value: float
    rho: float
    rho_p_value: float
    n_changed: int
    n_unchanged: int
    mean_changed: float
    mean_unchanged: float
    ci95_changed: tuple[float, float]
    ci95_unchanged: tuple[float, float]

    @property
    def overall_mean(self) -> float:
        n = self.n_changed + self.n_unchanged
        return (self.n_changed * self.mean_changed + self.n_unchanged * self.mean_unchanged) / n

    @property
    def delta_mu_starred(self) -> bool:
        return self.t_p_value < SIGNIFICANCE_LEVEL

    @property
    def rho_starred(self) -> bool:
        return self.rho_p_value < SIGNIFICANCE_LEVEL

    def to_dict(self) -> dict:
        return {
            "transition": self.transition,
            "delta_mu": self.delta_mu,
            "t_statistic": self.t_statistic,
            "t_p_value": self.t_p_value,
            "rho": self.rho,
            "rho_p_value": self.rho_p_value,
            "n_changed": self.n_changed,
            "n_unchanged": self.n_unchanged,
            "mean_changed": self.mean_changed,
            "mean_unchanged": self.mean_unchanged,
            "ci95_changed": list(self.ci95_changed),
            "ci95_unchanged": list(self.ci95_unchanged),
            "delta_mu_starred": self.delta_mu_starred,
            "rho_starred": self.rho_starred,
        }


def _group_values(rows: Sequence[SimilarityRow], transition: str) -> tuple[np.ndarray, np.ndarray]:
    changed, unchanged = [], []
    for row in rows:
        if row.label is None or transition not in row.cos:
            continue
        (changed if row.label == 1 else unchanged).append(row.cos[transition])
    return np.asarray(changed, dtype=np.float64), np.asarray(unchanged, dtype=np.float64)


def _ci95(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    half = 1.96 * float(values.std(ddof=1)) / math.sqrt(len(values))
    return (mean - half, mean + half)


def compute_metrics(rows: Sequence[SimilarityRow], transition: str) -> MetricsResult:
    """delta-mu with a Welch two-sample t-test, plus the Pearson correlation
    between binary labels (1 = changed) and cosines with its t-distribution
    p-value (n - 2 degrees of freedom).

    With both groups at zero variance the t-test degenerates: t is reported
    as signed infinity with p = 0 (or 0 with p = 1 when the means tie).  A
    constant label or cosine vector makes the correlation undefined and
    raises instead.
    """
    changed, unchanged = _group_values(rows, transition)
    if len(changed) < 2 or len(unchanged) < 2:
        raise ValidationError(
            f"need at least two rows per label group, got {len(changed)} changed / "
            f"{len(unchanged)} unchanged"
        )
    mean_changed = float(changed.mean())
    mean_unchanged = float(unchanged.mean())
    delta_mu = mean_unchanged - mean_changed

    se2 = changed.var(ddof=1) / len(changed) + unchanged.var(ddof=1) / len(unchanged)
    if se2 == 0.0:
        t_stat = 0.0 if delta_mu == 0.0 else math.copysign(math.inf, delta_mu)
        t_p = 1.0 if delta_mu == 0.0 else 0.0
    else:
        with warnings.catch_warnings():
            # a single zero-variance group is legitimate input here
            warnings.simplefilter("ignore", RuntimeWarning)
            t_stat, t_p = stats.ttest_ind(unchanged, changed, equal_var=False)
        t_stat, t_p = float(t_stat), float(t_p)

    labels = np.concatenate([np.ones(len(changed)), np.zeros(len(unchanged))])
    values = np.concatenate([changed, unchanged])
    if np.all(labels == labels[0]):
        raise ValidationError("constant label vector: correlation undefined")
    if np.all(values == values[0]):
        raise ValidationError("constant cosine vector: correlation undefined")
    rho, rho_p = stats.pearsonr(labels, values)

    return MetricsResult(
        transition=transition,
        delta_mu=delta_mu,
        t_statistic=t_stat,
        t_p_value=t_p,
        rho=float(rho),
        rho_p_value=float(rho_p),
        n_changed=len(changed),
        n_unchanged=len(unchanged),
        mean_changed=mean_changed,
        mean_unchanged=mean_unchanged,
        ci95_changed=_ci95(changed),
        ci95_unchanged=_ci95(unchanged),
    )


#: Histogram layout shared by every distribution summary: 20 bins on [0, 1].
HISTOGRAM_BIN_WIDTH = 0.05
_BIN_EDGES = np.round(np.linspace(0.0, 1.0, 21), 10)


@dataclass(frozen=True)
class GroupSummary:
    """Serializable distribution summary of one label group."""

    n: int
    mean: float
    ci95: tuple[float, float]
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    density: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "ci95": list(self.ci95),
            "bin_edges": list(self.bin_edges),
            "counts": list(self.counts),
            "density": list(self.density),
        }


def distribution_summary(rows: Sequence[SimilarityRow], transition: str) -> dict[str, GroupSummary]:
    """Histogram (values clipped into [0, 1]), mean, and normal-approximation
    95% CI per label group, keyed ``"changed"`` / ``"unchanged"``."""
    changed, unchanged = _group_values(rows, transition)
    out: dict[str, GroupSummary] = {}
    for key, values in (("changed", changed), ("unchanged", unchanged)):
        if len(values) < 2:
            raise ValidationError(f"group {key!r} has {len(values)} rows; need at least 2")
        counts, _ = np.histogram(np.clip(values, 0.0, 1.0), bins=_BIN_EDGES)
        out[key] = GroupSummary(
            n=len(values),
            mean=float(values.mean()),
            ci95=_ci95(values),
            bin_edges=tuple(float(e) for e in _BIN_EDGES),
            counts=tuple(int(c) for c in counts),
            density=tuple(float(c) / (len(values) * HISTOGRAM_BIN_WIDTH) for c in counts),
        )
    return out


@dataclass(frozen=True)
class ComparisonReport:
    """Directional expectations between two transitions, reported not enforced."""

    first: str
    second: str
    delta_mu_first: float
    delta_mu_second: float
    rho_first: float
    rho_second: float
    overall_mean_first: float
    overall_mean_second: float

    @property
    def delta_mu_larger_in_first(self) -> bool:
        return self.delta_mu_first > self.delta_mu_second

    @property
    def rho_more_negative_in_first(self) -> bool:
        return self.rho_first < self.rho_second

    @property
    def overall_mean_lower_in_first(self) -> bool:
        return self.overall_mean_first < self.overall_mean_second

    def to_dict(self) -> dict:
        return {
            "first": self.first,
            "second": self.second,
            "delta_mu_first": self.delta_mu_first,
            "delta_mu_second": self.delta_mu_second,
            "rho_first": self.rho_first,
            "rho_second": self.rho_second,
            "overall_mean_first": self.overall_mean_first,
            "overall_mean_second": self.overall_mean_second,
            "delta_mu_larger_in_first": self.delta_mu_larger_in_first,
            "rho_more_negative_in_first": self.rho_more_negative_in_first,
            "overall_mean_lower_in_first": self.overall_mean_lower_in_first,
        }


def compare_transitions(first: MetricsResult, second: MetricsResult) -> ComparisonReport:
    """Report whether the first transition separates groups more strongly.

    Both results must come from the same target set (checked via group
    sizes).  All three expectations use strict inequalities, so ties report
    False.
    """
    if (first.n_changed, first.n_unchanged) != (second.n_changed, second.n_unchanged):
        raise ValidationError(
            "metrics computed on different target sets: "
            f"{first.n_changed}/{first.n_unchanged} vs {second.n_changed}/{second.n_unchanged}"
        )
    return ComparisonReport(
        first=first.transition,
        second=second.transition,
        delta_mu_first=first.delta_mu,
        delta_mu_second=second.delta_mu,
        rho_first=first.rho,
        rho_second=second.rho,
        overall_mean_first=first.overall_mean,
        overall_mean_second=second.overall_mean,
    )


METRICS_CSV_HEADER = [
    "model",
    "transition",
    "delta_mu",
    "t_statistic",
    "t_p",
    "rho",
    "rho_p",
    "n_changed",
    "n_unchanged",
    "mean_changed",
    "mean_unchanged",
    "ci95_changed_low",
    "ci95_changed_high",
    "ci95_unchanged_low",
    "ci95_unchanged_high",
    "delta_mu_starred",
    "rho_starred",
]


def metrics_to_row(model: str, m: MetricsResult) -> list:
    return [
        model,
        m.transition,
        m.delta_mu,
        m.t_statistic,
        m.t_p_value,
        m.rho,
        m.rho_p_value,
        m.n_changed,
        m.n_unchanged,
        m.mean_changed,
        m.mean_unchanged,
        m.ci95_changed[0],
        m.ci95_changed[1],
        m.ci95_unchanged[0],
        m.ci95_unchanged[1],
        int(m.delta_mu_starred),
        int(m.rho_starred),
    ]


def rows_to_csv(rows: Sequence[SimilarityRow], transitions: Sequence[str], path: str | Path) -> None:
    """Write similarity rows as CSV: word, one cosine column per transition,
    then the label (empty when unlabeled)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", *[f"cos_{t}" for t in transitions], "label"])
        for row in rows:
            writer.writerow(
                [
                    row.word,
                    *[row.cos.get(t, "") for t in transitions],
                    "" if row.label is None else row.label,
                ]
            )
