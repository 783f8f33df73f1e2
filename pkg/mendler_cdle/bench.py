#!/usr/bin/env python3
"""
Step-count benchmarks for numeral encodings
Measures predecessor β-steps and numeral normal-form sizes for Church,
Parigot and Mendler numerals, and classifies how each series grows
"""

import json
import logging
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .config import BenchConfig, EvalConfig
from .parser import parse_pure
from .reduction import normalize
from .syntax import PureApp, PureLam, PureTerm, PureVar, alpha_eq, pure_apps, pure_lams, size

logger = logging.getLogger(__name__)

CONSTANT = "constant"
LINEAR = "linear"
QUADRATIC = "quadratic"
EXPONENTIAL = "exponential"
INCONCLUSIVE = "inconclusive"

# Classes an encoding may be expected to show. fit_growth never reports
# quadratic, so an encoding expecting it is measured but never confirmed.
GROWTH_CLASSES = (CONSTANT, LINEAR, QUADRATIC, EXPONENTIAL)

MIN_POINTS = 6
R2_THRESHOLD = 0.999
RATIO_THRESHOLD = 1.8

# Deep numerals recurse deeply; worker threads get a larger stack
THREAD_STACK_SIZE = 256 * 1024 * 1024

FORMATS = ('table', 'json-lines')

# Erasures of the Mendler constructors, in normal form
MENDLER_ZERO = parse_pure("λ alg. alg (λ f. f alg) (λ i. λ j. i (λ x. x))")
MENDLER_SUC = parse_pure("λ n. λ alg. alg (λ f. f alg) (λ i. λ j. j n)")

CHURCH_ZERO = parse_pure("λ s. λ z. z")
CHURCH_SUC = parse_pure("λ n. λ s. λ z. s (n s z)")

PARIGOT_ZERO = CHURCH_ZERO
PARIGOT_SUC = parse_pure("λ n. λ s. λ z. s n (n s z)")
PARIGOT_PRED = PureLam('n', pure_apps(PureVar('n'), parse_pure("λ p. λ r. p"), PARIGOT_ZERO))


# ---------------------------------------------------------------------------
# Numerals
# ---------------------------------------------------------------------------

def mk_church(n: int) -> PureTerm:
    """
    Church numeral λs.λz.sⁿ z

    Example:
        >>> str(mk_church(2))
        'λs. λz. s (s z)'
    """
    if n < 0:
        raise ValueError(f"numerals start at 0, got {n}")
    body: PureTerm = PureVar('z')
    for _ in range(n):
        body = PureApp(PureVar('s'), body)
    return pure_lams(('s', 'z'), body)


@lru_cache(maxsize=None)
def _parigot_spine(n: int) -> PureTerm:
    # normal form of Pₙ s z with s and z free
    if n == 0:
        return PureVar('z')
    return pure_apps(PureVar('s'), mk_parigot(n - 1), _parigot_spine(n - 1))


@lru_cache(maxsize=None)
def mk_parigot(n: int) -> PureTerm:
    """
    Parigot numeral in normal form

    P₀ = λs.λz.z and Pₙ₊₁ = λs.λz. s Pₙ (Pₙ s z), with the inner Pₙ s z
    reduced, so each numeral holds every smaller one.
    """
    if n < 0:
        raise ValueError(f"numerals start at 0, got {n}")
    return pure_lams(('s', 'z'), _parigot_spine(n))


@lru_cache(maxsize=None)
def mk_mendler(n: int) -> PureTerm:
    """
    Mendler numeral: the normal form of suc applied n times to zero

    Example:
        >>> str(mk_mendler(0))
        'λalg. alg (λf. f alg) (λi. λj. i (λx. x))'
    """
    if n < 0:
        raise ValueError(f"numerals start at 0, got {n}")
    if n == 0:
        return normalize(MENDLER_ZERO).normal_form
    return normalize(PureApp(MENDLER_SUC, mk_mendler(n - 1))).normal_form


# ---------------------------------------------------------------------------
# Encodings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Encoding:
    """
    A numeral encoding: a numeral generator plus closed pred, suc and zero

    expected maps each measured series ('pred_steps', 'size') to the growth
    class the encoding is known for.
    """
    name: str
    numeral: Callable[[int], PureTerm]
    pred: PureTerm
    suc: PureTerm
    zero: PureTerm
    expected: Dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        unknown = sorted(set(self.expected.values()) - set(GROWTH_CLASSES))
        if unknown:
            raise ValueError(f"{self.name}: unknown growth class {', '.join(unknown)}; "
                             f"expected one of {', '.join(GROWTH_CLASSES)}")

    def pred_correct(self, n: int, config: Optional[EvalConfig] = None) -> bool:
        """pred applied to numeral n+1 normalizes to numeral n"""
        stats = normalize(PureApp(self.pred, self.numeral(n + 1)), config)
        return not stats.exhausted and alpha_eq(stats.normal_form, self.numeral(n))


def church_encoding(pred: PureTerm) -> Encoding:
    """Church numerals with the given (linear-time) predecessor"""
    return Encoding('church', mk_church, pred, CHURCH_SUC, CHURCH_ZERO,
                    {'pred_steps': LINEAR, 'size': LINEAR})


def parigot_encoding() -> Encoding:
    """Parigot numerals, whose predecessor is a projection"""
    return Encoding('parigot', mk_parigot, PARIGOT_PRED, PARIGOT_SUC, PARIGOT_ZERO,
                    {'pred_steps': CONSTANT, 'size': EXPONENTIAL})


def mendler_encoding(pred: PureTerm) -> Encoding:
    """Mendler numerals with the given (constant-time) predecessor"""
    return Encoding('mendler', mk_mendler, pred, MENDLER_SUC, MENDLER_ZERO,
                    {'pred_steps': CONSTANT, 'size': LINEAR})


def standard_encodings(corpus=None) -> List[Encoding]:
    """
    The three benchmarked encodings

    The Church and Mendler predecessors are the erasures of the checked
    corpus definitions predK and pred.

    Args:
        corpus: A Corpus that has checked church and nat; checked on demand
            when omitted

    Raises:
        CdleError: If the corpus does not check
    """
    if corpus is None:
        from .corpus import Corpus
        corpus = Corpus()
    for module in ('nat', 'church'):
        if module not in corpus.modules:
            corpus.check(corpus.manifest.upto(module))
    return [
        church_encoding(corpus.erasure('predK')),
        parigot_encoding(),
        mendler_encoding(corpus.erasure('pred')),
    ]


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PredMeasurement:
    """β-steps of pred applied to numeral n"""
    n: int
    beta_steps: int
    ok: bool
    exhausted: bool = False


def measure_pred(encoding: Encoding, n: int,
                 config: Optional[EvalConfig] = None) -> PredMeasurement:
    """
    Normalize pred applied to numeral n and count β-steps

    Args:
        encoding: Encoding under test
        n: Numeral, at least 1
        config: Evaluation settings (fuel)

    Returns:
        PredMeasurement; ok when the result is numeral n-1
    """
    if n < 1:
        raise ValueError(f"pred is measured from 1, got {n}")
    stats = normalize(PureApp(encoding.pred, encoding.numeral(n)), config)
    if stats.exhausted:
        logger.warning(f"{encoding.name}: fuel exhausted measuring pred {n}")
        return PredMeasurement(n, stats.beta_steps, False, True)
    ok = alpha_eq(stats.normal_form, encoding.numeral(n - 1))
    if not ok:
        logger.error(f"{encoding.name}: pred {n} did not give {n - 1}")
    return PredMeasurement(n, stats.beta_steps, ok)


def measure_size(encoding: Encoding, n: int) -> int:
    """Node count of the normal form of numeral n"""
    return size(encoding.numeral(n))


# ---------------------------------------------------------------------------
# Growth classification
# ---------------------------------------------------------------------------

@dataclass
class GrowthFit:
    """Growth class of a series with the statistics that decided it"""
    kind: str
    statistics: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'class': self.kind, **self.statistics}


def _is_constant(values: Sequence[float]) -> bool:
    return max(values) == min(values)


def _exact_slopes(points: Sequence[Tuple[int, float]]) -> List[Fraction]:
    return [Fraction(v2 - v1) / (n2 - n1)
            for (n1, v1), (n2, v2) in zip(points, points[1:])]


def _linear_regression(points: Sequence[Tuple[int, float]]) -> Tuple[float, float]:
    xs = np.array([n for n, _ in points], dtype=float)
    ys = np.array([v for _, v in points], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = ys - (slope * xs + intercept)
    total = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if total == 0 else 1.0 - float(np.sum(residual ** 2)) / total
    return float(slope), r2


def _unit_ratios(points: Sequence[Tuple[int, float]]) -> List[float]:
    # growth factor per unit step of n between neighbouring points
    ratios = []
    for (n1, v1), (n2, v2) in zip(points, points[1:]):
        if v1 <= 0:
            return []
        ratios.append((v2 / v1) ** (1.0 / (n2 - n1)))
    return ratios


def fit_growth(series: Sequence[Tuple[int, float]]) -> GrowthFit:
    """
    Classify a series of (n, value) points

    constant: all values equal. linear: exact equal slopes between points,
    or a regression with R² above 0.999 and positive slope. exponential:
    the value grows by at least 1.8 per unit of n between every pair of
    neighbouring points. A series that matches no class, or more than one,
    is inconclusive. Only the constant test runs on fewer than 6 points.

    Args:
        series: Points with strictly increasing n

    Returns:
        GrowthFit naming the class and the test values

    Raises:
        ValueError: If n is not strictly increasing or the series is empty

    Example:
        >>> fit_growth([(1, 7), (2, 7), (4, 7)]).kind
        'constant'
    """
    points = [(int(n), v) for n, v in series]
    if not points:
        raise ValueError("cannot classify an empty series")
    if any(n2 <= n1 for (n1, _), (n2, _) in zip(points, points[1:])):
        raise ValueError("series must be strictly increasing in n")
    values = [v for _, v in points]
    stats: Dict[str, object] = {'points': len(points)}

    if _is_constant(values):
        stats['value'] = values[0]
        return GrowthFit(CONSTANT, stats)
    if len(points) < MIN_POINTS:
        stats['reason'] = f"fewer than {MIN_POINTS} points"
        return GrowthFit(INCONCLUSIVE, stats)

    matches = []
    slopes = _exact_slopes(points)
    slope, r2 = _linear_regression(points)
    stats['slope'] = round(slope, 6)
    stats['r2'] = round(r2, 6)
    if len(set(slopes)) == 1 and slopes[0] > 0:
        stats['exact'] = True
        matches.append(LINEAR)
    elif r2 > R2_THRESHOLD and slope > 0:
        stats['exact'] = False
        matches.append(LINEAR)

    ratios = _unit_ratios(points)
    if ratios:
        stats['min_ratio'] = round(min(ratios), 6)
        if min(ratios) >= RATIO_THRESHOLD:
            matches.append(EXPONENTIAL)

    if len(matches) == 1:
        return GrowthFit(matches[0], stats)
    stats['candidates'] = matches
    return GrowthFit(INCONCLUSIVE, stats)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class SeriesPoint:
    """One n of a benchmark series; pred_steps is None where pred was not run"""
    n: int
    size: Optional[int] = None
    pred_steps: Optional[int] = None
    pred_ok: Optional[bool] = None

    def to_dict(self) -> dict:
        return {'n': self.n, 'pred_steps': self.pred_steps, 'size': self.size,
                'pred_ok': self.pred_ok}


@dataclass
class BenchReport:
    """Series and growth classes measured for one encoding"""
    encoding: str
    series: List[SeriesPoint] = field(default_factory=list)
    growth: Dict[str, GrowthFit] = field(default_factory=dict)
    expected: Dict[str, str] = field(default_factory=dict)
    config: Dict[str, object] = field(default_factory=dict)
    exhausted: bool = False
    seconds: float = 0.0

    @property
    def pred_ok(self) -> bool:
        return all(p.pred_ok is not False for p in self.series)

    @property
    def confirmed(self) -> bool:
        """Every measured series grows as expected and every pred was right"""
        return (not self.exhausted and self.pred_ok and
                all(self.growth.get(k) is not None and self.growth[k].kind == v
                    for k, v in self.expected.items()))

    def pred_series(self) -> List[Tuple[int, int]]:
        return [(p.n, p.pred_steps) for p in self.series if p.pred_steps is not None]

    def size_series(self) -> List[Tuple[int, int]]:
        return [(p.n, p.size) for p in self.series if p.size is not None]

    def to_dict(self) -> dict:
        return {
            'encoding': self.encoding,
            'series': [p.to_dict() for p in self.series],
            'growthFit': {k: f.to_dict() for k, f in self.growth.items()},
            'expected': dict(self.expected),
            'confirmed': self.confirmed,
            'config': self.config,
            'seconds': round(self.seconds, 3),
        }


def _points(encoding: Encoding, config: BenchConfig) -> Tuple[List[int], List[int]]:
    if encoding.expected.get('size') == EXPONENTIAL:
        return list(config.parigot_points), list(config.parigot_points)
    return list(config.pred_points), list(config.size_points)


def _measure(job: Tuple[Encoding, str, int], eval_config: EvalConfig):
    encoding, what, n = job
    if what == 'pred':
        return encoding.name, what, n, measure_pred(encoding, n, eval_config)
    return encoding.name, what, n, measure_size(encoding, n)


def run_bench(encodings: Optional[Sequence[Encoding]] = None,
              config: Optional[BenchConfig] = None) -> List[BenchReport]:
    """
    Measure every encoding and classify its series

    Jobs are independent; with config.workers > 1 they run on a thread
    pool and the results are merged by (encoding, n).

    Args:
        encodings: Encodings to measure; standard_encodings() by default
        config: Points, fuel and worker count

    Returns:
        One BenchReport per encoding, in the order given
    """
    config = config or BenchConfig()
    encodings = list(encodings) if encodings is not None else standard_encodings()
    eval_config = config.eval_config()

    jobs: List[Tuple[Encoding, str, int]] = []
    for encoding in encodings:
        pred_points, size_points = _points(encoding, config)
        jobs.extend((encoding, 'pred', n) for n in pred_points if n >= 1)
        jobs.extend((encoding, 'size', n) for n in size_points)

    started = time.perf_counter()
    if config.workers > 1:
        threading.stack_size(THREAD_STACK_SIZE)
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda job: _measure(job, eval_config), jobs))
    else:
        results = [_measure(job, eval_config) for job in jobs]
    elapsed = time.perf_counter() - started

    reports = []
    for encoding in encodings:
        points: Dict[int, SeriesPoint] = {}
        report = BenchReport(encoding.name, expected=dict(encoding.expected),
                             config=config.to_dict(), seconds=elapsed)
        for name, what, n, value in results:
            if name != encoding.name:
                continue
            point = points.setdefault(n, SeriesPoint(n))
            if what == 'pred':
                point.pred_steps = value.beta_steps
                point.pred_ok = value.ok
                report.exhausted |= value.exhausted
            else:
                point.size = value
        report.series = [points[n] for n in sorted(points)]
        if not report.exhausted:
            report.growth['pred_steps'] = fit_growth(report.pred_series())
            report.growth['size'] = fit_growth(report.size_series())
        logger.info(f"{encoding.name}: {len(report.series)} points, "
                    f"confirmed={report.confirmed}")
        reports.append(report)
    return reports


def emit_report(reports: Sequence[BenchReport], fmt: str = 'table',
                stream: Optional[TextIO] = None):
    """
    Write reports as JSON lines (one record per encoding) or a table

    Args:
        reports: Bench reports
        fmt: 'table' or 'json-lines'
        stream: Output stream, stdout by default
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    stream = stream or sys.stdout
    if fmt == 'json-lines':
        for report in reports:
            stream.write(json.dumps(report.to_dict(), ensure_ascii=False) + "\n")
        return
    if not reports:
        return

    header = ('encoding', 'points', 'pred steps', 'pred growth', 'size', 'size growth',
              'confirmed')
    rows = [header]
    for report in reports:
        pred = report.pred_series()
        sizes = report.size_series()
        rows.append((
            report.encoding,
            str(len(report.series)),
            f"{pred[0][1]}..{pred[-1][1]}" if pred else "-",
            report.growth['pred_steps'].kind if 'pred_steps' in report.growth else "-",
            f"{sizes[0][1]}..{sizes[-1][1]}" if sizes else "-",
            report.growth['size'].kind if 'size' in report.growth else "-",
            "yes" if report.confirmed else "NO",
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    for row in rows:
        stream.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")
