"""Closed-form inference for percentile scores and top-x% proportions.

Covers summary statistics, one- and two-sample t tests with Cohen's d,
proportion z tests with Cohen's h, Wald confidence intervals, and the
magnitude labels used to judge substantive (not just statistical)
significance. Every p-value and interval goes through the kernels in
:mod:`pct_impact.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import DegenerateVarianceError
from .kernels import normal_cdf, normal_quantile, t_cdf, t_quantile

__all__ = [
    "Magnitude",
    "MAGNITUDE_THRESHOLDS",
    "SummaryStats",
    "MeanTestResult",
    "ProportionTestResult",
    "OverlapVerdict",
    "summarize",
    "one_sample_t",
    "cohens_d_one",
    "pooled_sd",
    "two_sample_pooled_t",
    "two_sample_welch_t",
    "one_sample_prop_z",
    "cohens_h_one",
    "two_sample_prop_z",
    "classify_magnitude",
    "ci_overlap_verdict",
]

#: Cohen's benchmarks for |d| and |h|; each boundary belongs to the larger class.
MAGNITUDE_THRESHOLDS = (0.2, 0.5, 0.8)


class Magnitude(Enum):
    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


def classify_magnitude(effect: float) -> Magnitude:
    """Label |effect| using the 0.2 / 0.5 / 0.8 benchmarks.

    Boundaries go to the larger class, so |effect| = 0.5 is MEDIUM.
    """
    if not math.isfinite(effect):
        raise ValueError(f"classify_magnitude: effect must be finite, got {effect}")
    e = abs(effect)
    small, medium, large = MAGNITUDE_THRESHOLDS
    if e < small:
        return Magnitude.NEGLIGIBLE
    if e < medium:
        return Magnitude.SMALL
    if e < large:
        return Magnitude.MEDIUM
    return Magnitude.LARGE


@dataclass(frozen=True)
class SummaryStats:
    """Sample size, mean, sample SD (n-1 divisor) and SE of the mean.

    For n = 1 the SD and SE are undefined and stored as None.
    """

    n: int
    mean: float
    sd: Optional[float]
    se: Optional[float]

    def __post_init__(self):
        if self.sd is not None and self.se is not None and self.sd > 0:
            expected = self.sd / math.sqrt(self.n)
            if abs(self.se - expected) > 1e-12 * expected:
                raise ValueError(
                    f"SummaryStats: se {self.se} is not sd/sqrt(n) = {expected}"
                )

    @classmethod
    def from_moments(cls, n: int, mean: float, sd: float) -> "SummaryStats":
        """Build from already-aggregated moments (e.g. a published table)."""
        if n < 1:
            raise ValueError(f"SummaryStats: n must be >= 1, got {n}")
        if sd < 0:
            raise ValueError(f"SummaryStats: sd must be >= 0, got {sd}")
        return cls(n=n, mean=float(mean), sd=float(sd), se=float(sd) / math.sqrt(n))


def summarize(values: Sequence[float]) -> SummaryStats:
    """Mean, sample standard deviation and standard error of a sample."""
    n = len(values)
    if n == 0:
        raise ValueError("summarize: empty input")
    mean = math.fsum(values) / n
    if n == 1:
        return SummaryStats(n=1, mean=mean, sd=None, se=None)
    ss = math.fsum((v - mean) ** 2 for v in values)
    sd = math.sqrt(ss / (n - 1))
    return SummaryStats(n=n, mean=mean, sd=sd, se=sd / math.sqrt(n))


@dataclass(frozen=True)
class MeanTestResult:
    """Outcome of a one- or two-sample t test on mean percentile scores."""

    estimate: float  # observed mean, or difference of means
    se: float
    statistic_t: float
    df: float
    p_two_tailed: float
    ci_low: float
    ci_high: float
    effect_d: float
    magnitude: Magnitude
    method: str
    pooled_sd: Optional[float] = None

    def to_json_dict(self) -> dict:
        out = {
            "estimate": self.estimate,
            "se": self.se,
            "t": self.statistic_t,
            "df": self.df,
            "p": self.p_two_tailed,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "d": self.effect_d,
            "magnitude": self.magnitude.value,
            "method": self.method,
        }
        if self.pooled_sd is not None:
            out["pooled_sd"] = self.pooled_sd
        return out


@dataclass(frozen=True)
class ProportionTestResult:
    """Outcome of a one- or two-sample large-sample proportion z test."""

    estimate: float  # observed proportion, or difference of proportions
    se: float  # SE used for the confidence interval (unpooled)
    statistic_z: float
    p_two_tailed: float
    ci_low: float
    ci_high: float
    effect_h: float
    magnitude: Magnitude
    method: str

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "se": self.se,
            "z": self.statistic_z,
            "p": self.p_two_tailed,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "h": self.effect_h,
            "magnitude": self.magnitude.value,
            "method": self.method,
        }


def _two_tailed_t_p(t: float, df: float) -> float:
    return 2.0 * (1.0 - t_cdf(abs(t), df))


def _two_tailed_z_p(z: float) -> float:
    return 2.0 * (1.0 - normal_cdf(abs(z)))


def cohens_d_one(stats: SummaryStats, mu0: float) -> float:
    """One-sample Cohen's d: (mean - mu0) / sd.

    Algebraically identical to t / sqrt(n) for the one-sample t test.
    """
    if stats.sd is None or stats.sd <= 0:
        raise DegenerateVarianceError("cohens_d_one: sample SD is zero or undefined")
    return (stats.mean - mu0) / stats.sd


def one_sample_t(stats: SummaryStats, mu0: float, ci_level: float = 0.95) -> MeanTestResult:
    """Test whether a sample mean differs from mu0.

    t = (mean - mu0) / (sd / sqrt(n)) on n - 1 degrees of freedom, with a
    symmetric t-based confidence interval around the mean and Cohen's d as
    the effect size.
    """
    if stats.n < 2 or stats.sd is None:
        raise ValueError("one_sample_t: need n >= 2 with a defined SD")
    if stats.sd <= 0:
        raise DegenerateVarianceError("one_sample_t: sample SD is zero")
    if not 0.0 < ci_level < 1.0:
        raise ValueError(f"one_sample_t: ci_level must be in (0, 1), got {ci_level}")
    se = stats.se if stats.se is not None else stats.sd / math.sqrt(stats.n)
    df = stats.n - 1
    t = (stats.mean - mu0) / se
    crit = t_quantile(0.5 + ci_level / 2.0, df)
    d = cohens_d_one(stats, mu0)
    return MeanTestResult(
        estimate=stats.mean,
        se=se,
        statistic_t=t,
        df=float(df),
        p_two_tailed=_two_tailed_t_p(t, df),
        ci_low=stats.mean - crit * se,
        ci_high=stats.mean + crit * se,
        effect_d=d,
        magnitude=classify_magnitude(d),
        method="one-sample t",
    )


def pooled_sd(a: SummaryStats, b: SummaryStats) -> float:
    """Pooled standard deviation under the equal-variance assumption.

    sp = sqrt(((n1-1) s1^2 + (n2-1) s2^2) / (n1 + n2 - 2))
    """
    if a.sd is None or b.sd is None:
        raise ValueError("pooled_sd: both samples need a defined SD")
    if a.n + b.n < 3:
        raise ValueError("pooled_sd: need n1 + n2 >= 3")
    if a.sd == 0 and b.sd == 0:
        raise DegenerateVarianceError("pooled_sd: both sample SDs are zero")
    num = (a.n - 1) * a.sd**2 + (b.n - 1) * b.sd**2
    return math.sqrt(num / (a.n + b.n - 2))


def two_sample_pooled_t(
    a: SummaryStats, b: SummaryStats, ci_level: float = 0.95
) -> MeanTestResult:
    """Equal-variance two-sample t test for a difference in means.

    The standard error of the difference is sqrt(sp^2 (n1+n2)/(n1 n2)) and
    Cohen's d is the difference divided by the pooled SD.
    """
    sp = pooled_sd(a, b)
    se = math.sqrt(sp**2 * (a.n + b.n) / (a.n * b.n))
    df = a.n + b.n - 2
    diff = a.mean - b.mean
    t = diff / se
    crit = t_quantile(0.5 + ci_level / 2.0, df)
    d = diff / sp
    return MeanTestResult(
        estimate=diff,
        se=se,
        statistic_t=t,
        df=float(df),
        p_two_tailed=_two_tailed_t_p(t, df),
        ci_low=diff - crit * se,
        ci_high=diff + crit * se,
        effect_d=d,
        magnitude=classify_magnitude(d),
        method="two-sample pooled t",
        pooled_sd=sp,
    )


def two_sample_welch_t(
    a: SummaryStats, b: SummaryStats, ci_level: float = 0.95
) -> MeanTestResult:
    """Welch's t test, allowing the two group variances to differ.

    Degrees of freedom follow the Welch-Satterthwaite approximation. The
    effect size is still Cohen's d over the pooled SD so that the pooled
    and Welch variants report comparable magnitudes.
    """
    if a.n < 2 or b.n < 2 or a.sd is None or b.sd is None:
        raise ValueError("two_sample_welch_t: both groups need n >= 2")
    va, vb = a.sd**2 / a.n, b.sd**2 / b.n
    if va + vb == 0:
        raise DegenerateVarianceError("two_sample_welch_t: both variances are zero")
    se = math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va**2 / (a.n - 1) + vb**2 / (b.n - 1))
    diff = a.mean - b.mean
    t = diff / se
    crit = t_quantile(0.5 + ci_level / 2.0, df)
    sp = pooled_sd(a, b)
    d = diff / sp
    return MeanTestResult(
        estimate=diff,
        se=se,
        statistic_t=t,
        df=df,
        p_two_tailed=_two_tailed_t_p(t, df),
        ci_low=diff - crit * se,
        ci_high=diff + crit * se,
        effect_d=d,
        magnitude=classify_magnitude(d),
        method="two-sample Welch t",
        pooled_sd=sp,
    )


def cohens_h_one(p: float, p0: float) -> float:
    """Cohen's h for proportions: 2 asin(sqrt(p)) - 2 asin(sqrt(p0)).

    Defined on the closed interval [0, 1] at both ends (asin(1) = pi/2).
    """
    for name, v in (("p", p), ("p0", p0)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"cohens_h_one: {name} must be in [0, 1], got {v}")
    return 2.0 * math.asin(math.sqrt(p)) - 2.0 * math.asin(math.sqrt(p0))


def one_sample_prop_z(
    count: float, n: int, p0: float, ci_level: float = 0.95
) -> ProportionTestResult:
    """Large-sample z test of a proportion against p0.

    The test uses the null SD sqrt(p0 (1-p0) / n); the confidence interval
    is the Wald interval around the observed proportion. Cohen's h is the
    effect size. count may be fractional when it comes from tie-weighted
    counting.
    """
    if not 0 <= count <= n:
        raise ValueError(f"one_sample_prop_z: need 0 <= count <= n, got {count}/{n}")
    if not 0.0 < p0 < 1.0:
        raise ValueError(f"one_sample_prop_z: p0 must be in (0, 1), got {p0}")
    if not 0.0 < ci_level < 1.0:
        raise ValueError(f"one_sample_prop_z: ci_level must be in (0, 1), got {ci_level}")
    p = count / n
    se0 = math.sqrt(p0 * (1.0 - p0) / n)
    z = (p - p0) / se0
    se = math.sqrt(p * (1.0 - p) / n)
    crit = normal_quantile(0.5 + ci_level / 2.0)
    h = cohens_h_one(p, p0)
    return ProportionTestResult(
        estimate=p,
        se=se,
        statistic_z=z,
        p_two_tailed=_two_tailed_z_p(z),
        ci_low=p - crit * se,
        ci_high=p + crit * se,
        effect_h=h,
        magnitude=classify_magnitude(h),
        method="one-sample proportion z (Wald CI)",
    )


def two_sample_prop_z(
    count1: float, n1: int, count2: float, n2: int, ci_level: float = 0.95
) -> ProportionTestResult:
    """z test for equality of two proportions.

    The z statistic uses the pooled proportion for its standard error; the
    confidence interval for the difference uses the unpooled standard
    error. Cohen's h substitutes the second proportion for p0.
    """
    if not 0 <= count1 <= n1 or not 0 <= count2 <= n2:
        raise ValueError("two_sample_prop_z: counts must satisfy 0 <= count <= n")
    if n1 < 1 or n2 < 1:
        raise ValueError("two_sample_prop_z: both groups must be non-empty")
    p1, p2 = count1 / n1, count2 / n2
    pooled = (count1 + count2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise DegenerateVarianceError(
            "two_sample_prop_z: pooled proportion is degenerate (0 or 1)"
        )
    diff = p1 - p2
    se_pooled = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = diff / se_pooled
    se_unpooled = math.sqrt(p1 * (1.0 - p1) / n1 + p2 * (1.0 - p2) / n2)
    crit = normal_quantile(0.5 + ci_level / 2.0)
    h = cohens_h_one(p1, p2)
    return ProportionTestResult(
        estimate=diff,
        se=se_unpooled,
        statistic_z=z,
        p_two_tailed=_two_tailed_z_p(z),
        ci_low=diff - crit * se_unpooled,
        ci_high=diff + crit * se_unpooled,
        effect_h=h,
        magnitude=classify_magnitude(h),
        method="two-sample proportion z (pooled SE for z, unpooled for CI)",
    )


@dataclass(frozen=True)
class OverlapVerdict:
    """What overlap of two 95% confidence intervals does and does not imply."""

    overlap: bool
    statement: str


def ci_overlap_verdict(
    ci_a: tuple[float, float], ci_b: tuple[float, float]
) -> OverlapVerdict:
    """Apply the interval-overlap rule for two 95% CIs.

    Overlapping intervals mean the difference is not significant at the
    .01 level; disjoint intervals mean it is. Overlap says nothing either
    way about the .05 level, so the verdict never mentions it.
    """
    for name, (lo, hi) in (("ci_a", ci_a), ("ci_b", ci_b)):
        if lo > hi:
            raise ValueError(f"ci_overlap_verdict: {name} has lo > hi")
    overlap = ci_a[0] <= ci_b[1] and ci_b[0] <= ci_a[1]
    if overlap:
        return OverlapVerdict(True, "not significant at the .01 level")
    return OverlapVerdict(False, "significant at the .01 level")
