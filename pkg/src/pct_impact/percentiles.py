"""Citation counts to percentile ranks, top-x% classification, MNCS.

A reference set (all papers sharing a subject category and publication
year) is normalized by ranking its citation counts. Two rank-to-percentile
formulas are supported, in plain or inverted orientation, with optional
pinning of uncited papers to the worst value. Ties at the top-x% threshold
are resolved by fractional counting so the set-level share is exactly x%.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .data import Dataset, InstitutionSample, group_reference_sets
from .errors import CapabilityError, DegenerateReferenceError

__all__ = [
    "PercentileFormula",
    "PercentileScheme",
    "PercentileAssignment",
    "Counting",
    "TopShareResult",
    "FractionalTopShare",
    "NormalizedScore",
    "OutlierSensitivityReport",
    "rank_ascending",
    "rank_descending",
    "percentile_rank",
    "classify_top_x",
    "fractional_top_share",
    "institution_top_share",
    "mncs",
    "normalized_scores",
    "outlier_sensitivity",
    "outlier_sensitivity_report",
    "assign_best_percentiles",
    "BestPercentileRow",
]


class PercentileFormula(Enum):
    """Rank-to-percentile mapping: 100 (i-1)/n or 100 i/n."""

    COMMON = "common"
    INCITES = "incites"


@dataclass(frozen=True)
class PercentileScheme:
    """Fully determines how citation ranks become percentiles.

    inverted ranks papers by descending citations, so 100 means worst.
    zero_rank_adjust pins uncited papers to the orientation's worst value
    (0 when not inverted, 100 when inverted) after tie resolution.
    """

    formula: PercentileFormula = PercentileFormula.COMMON
    inverted: bool = False
    zero_rank_adjust: bool = False

    def worst_value(self) -> float:
        return 100.0 if self.inverted else 0.0


@dataclass(frozen=True)
class PercentileAssignment:
    paper_id: str
    rank: int
    percentile: float
    tied_with: int  # size of the tie group, including the paper itself
    top_x_weight: float


class Counting(Enum):
    BINARY = "binary"
    FRACTIONAL = "fractional"


@dataclass(frozen=True)
class TopShareResult:
    institution: str
    n: int
    share: float
    threshold_x: float
    counting: Counting


def rank_ascending(citations: Sequence[int]) -> list[int]:
    """Rank papers by ascending citation count, ties at the maximum rank.

    A tie group occupying sorted positions j..k all receive rank k, so a
    tied paper never ranks better than the last paper it ties with.
    """
    if not citations:
        raise ValueError("rank_ascending: empty citation list")
    ordered = sorted(citations)
    return [bisect_right(ordered, c) for c in citations]


def rank_descending(citations: Sequence[int]) -> list[int]:
    """Rank papers by descending citation count, ties at the maximum rank."""
    if not citations:
        raise ValueError("rank_descending: empty citation list")
    ordered = sorted(citations)
    n = len(ordered)
    return [n - bisect_left(ordered, c) for c in citations]


def percentile_rank(
    citations: Sequence[int],
    scheme: PercentileScheme,
    x: float = 10.0,
    ids: Optional[Sequence[str]] = None,
) -> list[PercentileAssignment]:
    """Assign a percentile to every paper of one reference set.

    The rank i is ascending (or descending when inverted) with max-tie
    resolution; the percentile is 100 (i-1)/n or 100 i/n depending on the
    formula. Fractional top-x weights are computed for the same set so the
    assignment rows carry everything downstream indicators need.
    """
    if not citations:
        raise ValueError("percentile_rank: empty citation list")
    n = len(citations)
    if ids is None:
        ids = [str(i) for i in range(n)]
    elif len(ids) != n:
        raise ValueError("percentile_rank: ids and citations lengths differ")

    ranks = rank_descending(citations) if scheme.inverted else rank_ascending(citations)
    counts: dict[int, int] = {}
    for c in citations:
        counts[c] = counts.get(c, 0) + 1
    fts = fractional_top_share(citations, x)

    out = []
    for pid, c, i in zip(ids, citations, ranks):
        if scheme.formula is PercentileFormula.COMMON:
            pct = 100.0 * (i - 1) / n
        else:
            pct = 100.0 * i / n
        if scheme.zero_rank_adjust and c == 0:
            pct = scheme.worst_value()
        out.append(
            PercentileAssignment(
                paper_id=pid,
                rank=i,
                percentile=pct,
                tied_with=counts[c],
                top_x_weight=float(fts.weight_for(c)),
            )
        )
    return out


def classify_top_x(inv_percentile: float, x: float) -> int:
    """1 if an inverted percentile is x or better (smaller), else 0."""
    if not 0.0 <= inv_percentile <= 100.0:
        raise ValueError(
            f"classify_top_x: inv_percentile must be in [0, 100], got {inv_percentile}"
        )
    if not 0.0 < x < 100.0:
        raise ValueError(f"classify_top_x: x must be in (0, 100), got {x}")
    return 1 if inv_percentile <= x else 0


@dataclass(frozen=True)
class FractionalTopShare:
    """Per-paper top-x weights for one reference set.

    Papers strictly above the threshold citation count get weight 1;
    papers tied at the threshold share the remaining slots equally, which
    makes the set-level share exactly x/100. The two binary readings of a
    threshold tie (exclude or include the tie group) are exposed as counts.
    """

    weights: tuple[Fraction, ...]
    share: Fraction
    slots: Fraction
    threshold_value: int
    count_above: int
    tie_count: int
    weight_at_threshold: Fraction

    def weight_for(self, citations: int) -> Fraction:
        """Weight of any paper in this set with the given citation count."""
        if citations > self.threshold_value:
            return Fraction(1)
        if citations == self.threshold_value:
            return self.weight_at_threshold
        return Fraction(0)

    @property
    def binary_share_excluding_ties(self) -> Fraction:
        return Fraction(self.count_above, len(self.weights))

    @property
    def binary_share_including_ties(self) -> Fraction:
        return Fraction(self.count_above + self.tie_count, len(self.weights))


def fractional_top_share(citations: Sequence[int], x: float) -> FractionalTopShare:
    """Distribute n*x/100 top slots over a reference set, splitting ties.

    The threshold is the citation count at descending position
    ceil(n*x/100). Computed in exact rational arithmetic.
    """
    if not citations:
        raise ValueError("fractional_top_share: empty citation list")
    if not 0.0 < x < 100.0:
        raise ValueError(f"fractional_top_share: x must be in (0, 100), got {x}")
    n = len(citations)
    slots = Fraction(n) * Fraction(x) / 100
    ordered = sorted(citations)  # ascending; descending position k is ordered[n - k]
    threshold = ordered[n - math.ceil(slots)]
    count_above = n - bisect_right(ordered, threshold)
    tie_count = bisect_right(ordered, threshold) - bisect_left(ordered, threshold)
    remaining = slots - count_above
    w_tie = remaining / tie_count
    w_tie = min(max(w_tie, Fraction(0)), Fraction(1))
    weights = tuple(
        Fraction(1) if c > threshold else (w_tie if c == threshold else Fraction(0))
        for c in citations
    )
    return FractionalTopShare(
        weights=weights,
        share=sum(weights, Fraction(0)) / n,
        slots=slots,
        threshold_value=threshold,
        count_above=count_above,
        tie_count=tie_count,
        weight_at_threshold=w_tie,
    )


def institution_top_share(
    sample: InstitutionSample,
    x: float = 10.0,
    counting: Counting = Counting.BINARY,
    weights: Optional[Mapping[str, float | Fraction]] = None,
) -> TopShareResult:
    """Share of an institution's papers among the top x% of their fields.

    BINARY averages the 0/1 classification of each paper's inverted
    percentile. FRACTIONAL averages per-paper tie weights, which must be
    supplied from full reference sets (see assign_best_percentiles); it
    cannot be derived from pre-supplied percentiles alone.
    """
    if counting is Counting.BINARY:
        missing = [r.id for r in sample.records if r.inv_percentile is None]
        if missing:
            raise CapabilityError(
                "binary top-share needs an inverted percentile for every record; "
                f"missing for: {', '.join(missing[:5])}"
            )
        hits = sum(classify_top_x(r.inv_percentile, x) for r in sample.records)
        share = hits / sample.n
    else:
        if weights is None:
            raise CapabilityError(
                "fractional top-share needs per-paper weights computed from raw "
                "reference-set citation counts; pre-supplied percentiles are not enough"
            )
        missing = [r.id for r in sample.records if r.id not in weights]
        if missing:
            raise CapabilityError(
                f"fractional top-share: no weight for records: {', '.join(missing[:5])}"
            )
        share = float(sum(Fraction(weights[r.id]) for r in sample.records) / sample.n)
    return TopShareResult(
        institution=sample.institution,
        n=sample.n,
        share=float(share),
        threshold_x=x,
        counting=counting,
    )


@dataclass(frozen=True)
class NormalizedScore:
    paper_id: str
    ratio: float


def mncs(citations: Sequence[float], ref_means: Sequence[float]) -> float:
    """Mean normalized citation score: average of citations / field mean."""
    if len(citations) != len(ref_means):
        raise ValueError("mncs: citations and ref_means lengths differ")
    if not citations:
        raise ValueError("mncs: empty sample")
    bad = [m for m in ref_means if m <= 0]
    if bad:
        raise DegenerateReferenceError(
            f"mncs: reference means must be positive, got {bad[0]}"
        )
    return math.fsum(c / m for c, m in zip(citations, ref_means)) / len(citations)


def normalized_scores(
    ids: Sequence[str], citations: Sequence[float], ref_means: Sequence[float]
) -> list[NormalizedScore]:
    """Per-paper citation ratios backing an MNCS value."""
    mncs(citations, ref_means)  # reuse validation
    return [
        NormalizedScore(paper_id=i, ratio=c / m)
        for i, c, m in zip(ids, citations, ref_means)
    ]


@dataclass(frozen=True)
class OutlierSensitivityReport:
    """How MNCS and the fractional top-x share react to the top-cited paper."""

    n: int
    dropped_citations: int
    mncs_full: float
    mncs_without_max: float
    mncs_abs_delta: float
    mncs_rel_delta: float
    top_share_full: float
    top_share_without_max: float
    top_share_abs_delta: float
    top_share_rel_delta: float
    threshold_x: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "dropped_citations": self.dropped_citations,
            "mncs": {
                "full": self.mncs_full,
                "without_max": self.mncs_without_max,
                "abs_delta": self.mncs_abs_delta,
                "rel_delta": self.mncs_rel_delta,
            },
            "top_share": {
                "full": self.top_share_full,
                "without_max": self.top_share_without_max,
                "abs_delta": self.top_share_abs_delta,
                "rel_delta": self.top_share_rel_delta,
            },
            "threshold_x": self.threshold_x,
        }


def outlier_sensitivity_report(
    citations: Sequence[int],
    ref_means: Sequence[float],
    weights: Sequence[Union[float, Fraction]],
    x: float = 10.0,
) -> OutlierSensitivityReport:
    """Drop the top-cited paper and compare both indicators before and after.

    The per-paper reference means and top-x weights are taken as given and
    held fixed; only the sample membership changes.
    """
    n = len(citations)
    if n < 2:
        raise ValueError("outlier sensitivity needs at least 2 papers")
    if len(ref_means) != n or len(weights) != n:
        raise ValueError("citations, ref_means and weights must have equal length")

    idx_max = max(range(n), key=lambda i: citations[i])
    kept = [i for i in range(n) if i != idx_max]

    mncs_full = mncs(citations, ref_means)
    mncs_drop = mncs([citations[i] for i in kept], [ref_means[i] for i in kept])

    w = [Fraction(v) for v in weights]
    share_full = float(sum(w, Fraction(0)) / n)
    share_drop = float(sum((w[i] for i in kept), Fraction(0)) / (n - 1))

    def rel(a: float, b: float) -> float:
        return abs(a - b) / abs(a) if a != 0 else (0.0 if b == 0 else math.inf)

    return OutlierSensitivityReport(
        n=n,
        dropped_citations=citations[idx_max],
        mncs_full=mncs_full,
        mncs_without_max=mncs_drop,
        mncs_abs_delta=abs(mncs_full - mncs_drop),
        mncs_rel_delta=rel(mncs_full, mncs_drop),
        top_share_full=share_full,
        top_share_without_max=share_drop,
        top_share_abs_delta=abs(share_full - share_drop),
        top_share_rel_delta=rel(share_full, share_drop),
        threshold_x=x,
    )


def outlier_sensitivity(
    citations: Sequence[int],
    x: float = 10.0,
    reference_citations: Optional[Sequence[int]] = None,
    ref_means: Optional[Sequence[float]] = None,
) -> OutlierSensitivityReport:
    """Recompute MNCS and fractional top-x share without the top-cited paper.

    The reference distribution (threshold and field means) is held fixed;
    only the institution sample loses its maximum. Defaults treat the
    sample itself as its reference set.
    """
    n = len(citations)
    if n < 2:
        raise ValueError("outlier_sensitivity: need at least 2 papers")
    if reference_citations is None:
        reference_citations = citations
    if ref_means is None:
        mean_ref = math.fsum(reference_citations) / len(reference_citations)
        ref_means = [mean_ref] * n
    elif len(ref_means) != n:
        raise ValueError("outlier_sensitivity: ref_means length must match citations")

    fts = fractional_top_share(reference_citations, x)
    weights = [fts.weight_for(c) for c in citations]
    return outlier_sensitivity_report(citations, ref_means, weights, x)


@dataclass(frozen=True)
class BestPercentileRow:
    """One output row of the percentile pipeline: a paper in its best set."""

    paper_id: str
    reference_set: str
    rank: int
    percentile: float
    tied_with: int
    top_x_weight: float


def assign_best_percentiles(
    dataset: Dataset, scheme: PercentileScheme, x: float = 10.0
) -> list[BestPercentileRow]:
    """Percentile every paper within each of its reference sets, keep the best.

    A paper with k categories is ranked in k sets; the reported percentile
    is the one where it performs best (lowest when inverted, highest
    otherwise), together with that set's tie metadata and fractional
    weight. Rows come back in the dataset's record order.
    """
    per_paper: dict[str, BestPercentileRow] = {}
    for refset in group_reference_sets(dataset):
        cits = [m.citations for m in refset.members]
        ids = [m.id for m in refset.members]
        assignments = percentile_rank(cits, scheme, x=x, ids=ids)
        label = f"{refset.key.category}:{refset.key.pub_year}"
        for a in assignments:
            row = BestPercentileRow(
                paper_id=a.paper_id,
                reference_set=label,
                rank=a.rank,
                percentile=a.percentile,
                tied_with=a.tied_with,
                top_x_weight=a.top_x_weight,
            )
            prev = per_paper.get(a.paper_id)
            if prev is None:
                per_paper[a.paper_id] = row
            elif scheme.inverted and row.percentile < prev.percentile:
                per_paper[a.paper_id] = row
            elif not scheme.inverted and row.percentile > prev.percentile:
                per_paper[a.paper_id] = row
    return [per_paper[r.id] for r in dataset.records]
