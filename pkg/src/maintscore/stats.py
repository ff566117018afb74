"""Nonparametric tests and effect summaries for score deltas and lifespans."""

from __future__ import annotations

import bisect
import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .history.lifespan import LifespanBin, LifespanRecord
from .scoring import DEFAULT_EPSILON, Direction, direction_of

DEFAULT_ALPHA = 0.05
EXACT_MAX_N = 25


@dataclass(frozen=True)
class PairedSample:
    differences: tuple[float, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not all(math.isfinite(d) for d in self.differences):
            raise ValueError(f"non-finite difference in sample {self.label!r}")


@dataclass(frozen=True)
class TestResult:
    test: str
    statistic: float
    p_value: float
    n: int
    m: int | None = None
    alpha: float = DEFAULT_ALPHA
    method: str = ""
    degenerate: bool = False

    __test__ = False  # keep pytest from collecting this class

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha

    def as_dict(self) -> dict:
        out = {
            "test": self.test,
            "statistic": self.statistic,
            "p": self.p_value,
            "n": self.n,
            "alpha": self.alpha,
            "significant": self.significant,
            "method": self.method,
            "degenerate": self.degenerate,
        }
        if self.m is not None:
            out["m"] = self.m
        return out


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties sharing the mean of the positions they span."""
    order = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def signed_ranks(differences: Sequence[float], zero_method: str = "wilcox") -> tuple[list[float], list[bool]]:
    """Ranks of |d| and their signs (True = positive), with zero differences dropped.

    ``wilcox`` drops zeros before ranking; ``pratt`` ranks them and then drops them.
    """
    if zero_method == "wilcox":
        kept = [d for d in differences if d != 0]
        ranks = average_ranks([abs(d) for d in kept])
    elif zero_method == "pratt":
        ranks_all = average_ranks([abs(d) for d in differences])
        kept = [d for d in differences if d != 0]
        ranks = [r for r, d in zip(ranks_all, differences) if d != 0]
    else:
        raise ValueError(f"unknown zero_method {zero_method!r}")
    return ranks, [d > 0 for d in kept]


def _exact_p(ranks: Sequence[float], w_plus: float) -> float:
    # Doubling makes average ranks integral so the null distribution can be counted exactly.
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled:
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    w = round(2 * w_plus)
    lower = sum(counts[: w + 1])
    upper = sum(counts[w:])
    return min(1.0, 2 * min(lower, upper) / 2 ** len(doubled))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2))


def _approx_p(ranks: Sequence[float], w_plus: float) -> float:
    mean = sum(ranks) / 2
    # Sum of squared ranks / 4 is the null variance; with average ranks this
    # already carries the tie correction.
    var = sum(r * r for r in ranks) / 4
    if var == 0:
        return 1.0
    z = max(abs(w_plus - mean) - 0.5, 0.0) / math.sqrt(var)
    return min(1.0, 2 * _normal_sf(z))


def wilcoxon_signed_rank(
    differences: Iterable[float],
    alpha: float = DEFAULT_ALPHA,
    zero_method: str = "wilcox",
    method: str = "auto",
) -> TestResult:
    """Two-sided paired Wilcoxon signed-rank test on ``differences``.

    The statistic is the sum of ranks of positive differences. ``method`` is
    ``auto`` (exact up to 25 non-zero differences, normal approximation above),
    ``exact`` or ``approx``.
    """
    diffs = list(differences)
    if not diffs:
        raise ValueError("wilcoxon_signed_rank needs at least one difference")
    if not all(math.isfinite(d) for d in diffs):
        raise ValueError("differences must be finite")
    ranks, positive = signed_ranks(diffs, zero_method)
    n = len(ranks)
    if n == 0:
        return TestResult("wilcoxon", 0.0, 1.0, 0, alpha=alpha, method="none", degenerate=True)
    w_plus = sum(r for r, pos in zip(ranks, positive) if pos)
    if method == "auto":
        method = "exact" if n <= EXACT_MAX_N else "approx"
    if method == "exact":
        p = _exact_p(ranks, w_plus)
    elif method == "approx":
        p = _approx_p(ranks, w_plus)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TestResult("wilcoxon", w_plus, p, n, alpha=alpha, method=method)


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    xs, ys = sorted(a), sorted(b)
    n, m = len(xs), len(ys)
    d = 0.0
    for v in sorted(set(xs) | set(ys)):
        d = max(d, abs(bisect.bisect_right(xs, v) / n - bisect.bisect_right(ys, v) / m))
    return d


def kolmogorov_sf(x: float) -> float:
    """Survival function of the limiting Kolmogorov distribution."""
    if x <= 0:
        return 1.0
    if x < 1.18:
        # Theta-function form converges fast for small arguments.
        s = 0.0
        for k in range(1, 50):
            term = math.exp(-((2 * k - 1) ** 2) * math.pi ** 2 / (8 * x * x))
            s += term
            if term < 1e-17:
                break
        return min(1.0, max(0.0, 1.0 - math.sqrt(2 * math.pi) / x * s))
    s = 0.0
    for k in range(1, 100):
        term = math.exp(-2 * k * k * x * x)
        s += term if k % 2 else -term
        if term < 1e-17:
            break
    return min(1.0, max(0.0, 2 * s))


def ks_two_sample(a: Sequence[float], b: Sequence[float], alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    if not a or not b:
        raise ValueError("ks_two_sample needs two non-empty samples")
    d = ks_statistic(a, b)
    n, m = len(a), len(b)
    en = n * m / (n + m)
    return TestResult("ks", d, kolmogorov_sf(math.sqrt(en) * d), n, m, alpha, method="asymptotic")


@dataclass(frozen=True)
class EffectSummary:
    n: int
    mean: float
    median: float
    decrease: float
    unchanged: float
    increase: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "median": self.median,
            "percent_decrease": self.decrease,
            "percent_unchanged": self.unchanged,
            "percent_increase": self.increase,
        }


def effect_summary(differences: Iterable[float], epsilon: float = DEFAULT_EPSILON) -> EffectSummary:
    diffs = list(differences)
    if not diffs:
        raise ValueError("effect_summary needs at least one difference")
    n = len(diffs)
    dirs = [direction_of(d, epsilon) for d in diffs]
    dec = dirs.count(Direction.DECREASE)
    inc = dirs.count(Direction.INCREASE)
    return EffectSummary(
        n=n,
        mean=statistics.fmean(diffs),
        median=float(statistics.median(diffs)),
        decrease=dec / n,
        unchanged=(n - dec - inc) / n,
        increase=inc / n,
    )


def bin_distribution(records: Iterable[LifespanRecord]) -> dict[str, dict[str, float]]:
    counts = {b: 0 for b in LifespanBin}
    for rec in records:
        counts[rec.bin] += 1
    total = sum(counts.values())
    return {
        b.value: {"count": counts[b], "fraction": counts[b] / total if total else 0.0}
        for b in LifespanBin
    }
