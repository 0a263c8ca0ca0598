"""Timing aggregation, histograms, speedups and Student's t-tests."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from .errors import DegenerateSamples, DivisionByZero, EmptyInput, InvalidBinWidth

TIME_FIELDS = ("batch_time", "update_time", "combined_time")


@dataclass(frozen=True)
class TimingRecord:
    step_index: int
    batch_time: float
    update_time: float

    @property
    def combined_time(self) -> float:
        return self.batch_time + self.update_time


@dataclass(frozen=True)
class Aggregate:
    mean: float
    median: float
    std: float
    count: int
    degenerate: bool = False  # std undefined for a single value; reported as 0

    def as_dict(self):
        return {"mean": self.mean, "median": self.median, "std": self.std,
                "count": self.count, "degenerate": self.degenerate}


def summarize(values: Sequence[float]) -> Aggregate:
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("no values to aggregate")
    if x.size == 1:
        v = float(x[0])
        return Aggregate(v, v, 0.0, 1, degenerate=True)
    return Aggregate(float(x.mean()), float(np.median(x)), float(x.std(ddof=1)), int(x.size))


def aggregate(records: Sequence[TimingRecord]) -> Dict[str, Aggregate]:
    """Mean, median and sample std of each timing field."""
    if not records:
        raise EmptyInput("no timing records")
    return {name: summarize([getattr(r, name) for r in records]) for name in TIME_FIELDS}


def speedup(t_slow: float, t_fast: float) -> float:
    if t_fast == 0:
        raise DivisionByZero("speedup against a zero duration")
    if t_fast < 0 or t_slow < 0:
        raise ValueError("durations must be non-negative")
    return t_slow / t_fast


def interquartile_range(values: Sequence[float]) -> float:
    q1, q3 = np.percentile(np.asarray(values, dtype=np.float64), [25, 75])
    return float(q3 - q1)


# --- t distribution ---------------------------------------------------------

_TINY = 1e-300
_EPS = 1e-16


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    # Modified Lentz evaluation of the incomplete-beta continued fraction.
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge (x={x}, a={a}, b={b})")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """``I_x(a, b)`` for ``a, b > 0`` and ``0 <= x <= 1``."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    # The fraction converges fast only below the mean; flip otherwise.
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_continued_fraction(x, a, b) / a
    return 1.0 - math.exp(log_front) * _beta_continued_fraction(1.0 - x, b, a) / b


def t_two_sided_p(t: float, df: float) -> float:
    """``P(|T| >= |t|)`` for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    p = regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)
    return min(max(p, 0.0), 1.0)


def significance_level(p: float) -> str:
    if p <= 0.05:
        return "strong"
    if p <= 0.10:
        return "moderate"
    return "none"


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: int
    p_value: float
    significance: str = field(init=False)
    degenerate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "significance", significance_level(self.p_value))


def students_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-sample pooled-variance t-test with a two-sided p-value.

    When both samples have zero variance but different means the statistic
    is unbounded; the result is flagged ``degenerate`` with ``t = nan`` and
    ``p = 0``. Equal constant samples raise :class:`DegenerateSamples`.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.size < 2 or y.size < 2:
        raise EmptyInput("each sample needs at least two values")
    na, nb = x.size, y.size
    df = na + nb - 2
    mean_diff = float(x.mean()) - float(y.mean())
    ss = float(((x - x.mean()) ** 2).sum() + ((y - y.mean()) ** 2).sum())
    if ss == 0.0:
        if mean_diff == 0.0:
            raise DegenerateSamples("both samples are constant and equal; t is undefined")
        return TTestResult(math.nan, df, 0.0, degenerate=True)
    pooled_var = ss / df
    t = mean_diff / math.sqrt(pooled_var * (1.0 / na + 1.0 / nb))
    return TTestResult(t, df, t_two_sided_p(t, df))


def pairwise_t_tests(samples: Mapping[str, Sequence[float]]) -> Dict[str, Dict[str, Optional[TTestResult]]]:
    """All-pairs t-tests; the diagonal is ``t = 0, p = 1``.

    Pairs that cannot be tested (too few values, or equal constants) map
    to None.
    """
    names = list(samples)
    out = {r: {} for r in names}
    for i, r in enumerate(names):
        for j, c in enumerate(names):
            if i == j:
                out[r][c] = TTestResult(0.0, len(samples[r]) * 2 - 2, 1.0)
            elif j < i:
                mirror = out[c][r]
                out[r][c] = None if mirror is None else TTestResult(
                    -mirror.t_statistic, mirror.degrees_of_freedom, mirror.p_value, mirror.degenerate)
            else:
                try:
                    out[r][c] = students_t_test(samples[r], samples[c])
                except (EmptyInput, DegenerateSamples):
                    out[r][c] = None
    return out


def write_matrix_csv(path, names: Sequence[str], matrix: Mapping[str, Mapping[str, object]]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["", *names])
        for r in names:
            writer.writerow([r, *(matrix[r][c] for c in names)])


# --- histograms -------------------------------------------------------------

@dataclass
class Histogram:
    """Half-open bins ``[origin + i*w, origin + (i+1)*w)`` keyed by ``i``."""

    bin_width: float
    origin: float = 0.0
    counts: Dict[int, int] = field(default_factory=dict)
    total: int = 0

    def bin_of(self, x: float) -> int:
        return math.floor((x - self.origin) / self.bin_width)

    def rows(self):
        return [(self.origin + i * self.bin_width, c) for i, c in sorted(self.counts.items())]

    def mass_at_or_above(self, threshold: float) -> int:
        """Count in bins whose lower edge is at or above ``threshold``."""
        return sum(c for lo, c in self.rows() if lo >= threshold)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_lower", "count"])
            writer.writerows(self.rows())


def _check_width(bin_width):
    if not bin_width > 0 or math.isinf(bin_width):
        raise InvalidBinWidth(f"bin width must be a positive finite number, got {bin_width}")


def histogram(values: Sequence[float], bin_width: float = 1.0, origin: float = 0.0) -> Histogram:
    _check_width(bin_width)
    h = Histogram(bin_width, origin)
    counts = Counter(h.bin_of(float(v)) for v in values)
    h.counts = dict(counts)
    h.total = sum(counts.values())
    return h


def histogram_from_counts(value_counts: Mapping[float, int], bin_width: float = 1.0,
                          origin: float = 0.0) -> Histogram:
    """Bin pre-tallied ``{value: count}`` pairs."""
    _check_width(bin_width)
    h = Histogram(bin_width, origin)
    counts: Counter = Counter()
    for value, count in value_counts.items():
        counts[h.bin_of(float(value))] += int(count)
    h.counts = dict(counts)
    h.total = sum(counts.values())
    return h
