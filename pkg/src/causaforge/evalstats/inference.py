"""Group-comparison inference: one-way ANOVA, Bonferroni pairwise t-tests,
Spearman rank correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import DegenerateRanks, InsufficientData, LengthMismatch
from .tails import f_tail, t_tail_two_sided


@dataclass(frozen=True)
class AnovaResult:
    f: float
    df_between: int
    df_within: int
    p: float
    r_squared: float


@dataclass(frozen=True)
class PairwiseResult:
    group_a: str
    group_b: str
    contrast: float
    cohen_d: float
    t: float
    df: int
    p_adjusted: float


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _sample_variance(values: Sequence[float], mean: float) -> float:
    return math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)


def one_way_anova(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """F = MS_between / MS_within; R^2 = SS_between / SS_total.

    The p-value is the upper tail of the F(df_between, df_within) distribution.
    """
    if len(groups) < 2 or any(len(g) < 2 for g in groups):
        raise InsufficientData("ANOVA needs >= 2 groups with >= 2 samples each")
    all_values = [v for g in groups for v in g]
    grand_mean = _mean(all_values)
    ss_between = math.fsum(len(g) * (_mean(g) - grand_mean) ** 2 for g in groups)
    ss_within = math.fsum(
        math.fsum((v - _mean(g)) ** 2 for v in g) for g in groups
    )
    df_between = len(groups) - 1
    df_within = len(all_values) - len(groups)
    ss_total = ss_between + ss_within
    if ss_total == 0.0:
        return AnovaResult(f=0.0, df_between=df_between, df_within=df_within, p=1.0, r_squared=0.0)
    r_squared = ss_between / ss_total
    if ss_within == 0.0:
        return AnovaResult(
            f=math.inf, df_between=df_between, df_within=df_within, p=0.0, r_squared=r_squared
        )
    f = (ss_between / df_between) / (ss_within / df_within)
    return AnovaResult(
        f=f,
        df_between=df_between,
        df_within=df_within,
        p=f_tail(f, df_between, df_within),
        r_squared=r_squared,
    )


def pairwise_bonferroni(
    groups: Mapping[str, Sequence[float]], family_size: int | None = None
) -> list[PairwiseResult]:
    """Pooled-variance two-sample t-tests over every unordered group pair.

    Cohen's d uses the pooled sample standard deviation; each two-sided p is
    multiplied by the family size (all C(G, 2) pairs unless overridden) and
    capped at 1.
    """
    labels = list(groups)
    if len(labels) < 2:
        raise InsufficientData("need at least two groups")
    for label in labels:
        if len(groups[label]) < 2:
            raise InsufficientData(f"group {label!r} needs >= 2 samples")
    n_pairs = len(labels) * (len(labels) - 1) // 2
    family = n_pairs if family_size is None else family_size
    if family < 1:
        raise ValueError("family_size must be >= 1")

    results = []
    for i, label_a in enumerate(labels):
        for label_b in labels[i + 1 :]:
            a, b = groups[label_a], groups[label_b]
            mean_a, mean_b = _mean(a), _mean(b)
            var_a, var_b = _sample_variance(a, mean_a), _sample_variance(b, mean_b)
            df = len(a) + len(b) - 2
            pooled_var = ((len(a) - 1) * var_a + (len(b) - 1) * var_b) / df
            contrast = mean_a - mean_b
            if pooled_var == 0.0:
                d = 0.0 if contrast == 0.0 else math.copysign(math.inf, contrast)
                t = d
            else:
                pooled_sd = math.sqrt(pooled_var)
                d = contrast / pooled_sd
                t = contrast / (pooled_sd * math.sqrt(1.0 / len(a) + 1.0 / len(b)))
            p = t_tail_two_sided(t, df) if math.isfinite(t) else 0.0
            results.append(
                PairwiseResult(
                    group_a=label_a,
                    group_b=label_b,
                    contrast=contrast,
                    cohen_d=d,
                    t=t,
                    df=df,
                    p_adjusted=min(1.0, family * p),
                )
            )
    return results


def format_pairwise_table(results: Sequence[PairwiseResult]) -> str:
    """Comparison / Contrast / Cohen's d / t value / p value rows."""
    lines = ["Comparison\tContrast\tCohen's d\tt value\tp value"]
    for r in results:
        lines.append(
            f"{r.group_a} vs. {r.group_b}\t{r.contrast:.4f}\t{r.cohen_d:.4f}"
            f"\t{r.t:.2f}\t{r.p_adjusted:.4g}"
        )
    return "\n".join(lines)


def average_ranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with tied values sharing the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson correlation of average ranks, with a t-based two-sided p.

    p uses t = rho * sqrt((n - 2) / (1 - rho^2)) on n - 2 degrees of freedom;
    perfect monotone data gives p = 0.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)} samples")
    n = len(x)
    if n < 3:
        raise InsufficientData("need at least 3 paired samples")
    rank_x = average_ranks(x)
    rank_y = average_ranks(y)
    mean_x, mean_y = _mean(rank_x), _mean(rank_y)
    dev_x = [r - mean_x for r in rank_x]
    dev_y = [r - mean_y for r in rank_y]
    ss_x = math.fsum(d * d for d in dev_x)
    ss_y = math.fsum(d * d for d in dev_y)
    if ss_x == 0.0 or ss_y == 0.0:
        raise DegenerateRanks("one variable is entirely tied")
    rho = math.fsum(a * b for a, b in zip(dev_x, dev_y)) / math.sqrt(ss_x * ss_y)
    rho = max(-1.0, min(1.0, rho))
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return rho, t_tail_two_sided(t, n - 2)
