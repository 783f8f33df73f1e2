"""
Tests for numeral generators, measurements and growth classification
"""

import dataclasses
import io
import json
import pytest
from mendler_cdle.bench import (
    CHURCH_SUC, CHURCH_ZERO, CONSTANT, EXPONENTIAL, GROWTH_CLASSES, INCONCLUSIVE, LINEAR,
    MENDLER_ZERO, QUADRATIC,
    BenchReport, GrowthFit, SeriesPoint, emit_report, fit_growth, measure_pred,
    measure_size, mendler_encoding, mk_church, mk_mendler, mk_parigot, parigot_encoding,
    run_bench, standard_encodings,
)
from mendler_cdle.config import BenchConfig, EvalConfig
from mendler_cdle.reduction import normalize
from mendler_cdle.syntax import PureApp, alpha_eq, size


def sample_report(name, confirmed=True):
    kind = LINEAR if confirmed else INCONCLUSIVE
    return BenchReport(
        name,
        series=[SeriesPoint(1, 5, 12, True), SeriesPoint(2, 7, 19, True)],
        growth={'pred_steps': GrowthFit(kind), 'size': GrowthFit(LINEAR)},
        expected={'pred_steps': LINEAR, 'size': LINEAR},
    )


class TestNumerals:
    """Test the numeral generators"""

    def test_church_two(self):
        assert str(mk_church(2)) == 'λs. λz. s (s z)'

    def test_church_matches_successor(self):
        numeral = CHURCH_ZERO
        for n in range(6):
            assert alpha_eq(normalize(numeral).normal_form, mk_church(n))
            numeral = PureApp(CHURCH_SUC, numeral)

    def test_church_size_grows_by_two(self):
        sizes = [size(mk_church(n)) for n in range(1, 20)]
        assert {b - a for a, b in zip(sizes, sizes[1:])} == {2}

    def test_mendler_zero(self):
        assert alpha_eq(mk_mendler(0), MENDLER_ZERO)
        assert str(mk_mendler(0)) == 'λalg. alg (λf. f alg) (λi. λj. i (λx. x))'

    def test_mendler_numerals_are_normal(self):
        for n in range(5):
            assert normalize(mk_mendler(n)).beta_steps == 0

    def test_mendler_size_is_linear(self):
        sizes = [size(mk_mendler(n)) for n in range(2, 65)]
        assert len({b - a for a, b in zip(sizes, sizes[1:])}) == 1
        assert fit_growth(list(zip(range(2, 65), sizes))).kind == LINEAR

    def test_parigot_zero_and_one(self):
        assert str(mk_parigot(0)) == 'λs. λz. z'
        assert str(mk_parigot(1)) == 'λs. λz. s (λs. λz. z) z'

    def test_parigot_size_doubles(self):
        for n in range(12):
            assert size(mk_parigot(n + 1)) == 2 * size(mk_parigot(n)) + 3
        for n in range(2, 13):
            assert size(mk_parigot(n + 1)) / size(mk_parigot(n)) >= 1.9

    def test_negative_numerals(self):
        for make in (mk_church, mk_parigot, mk_mendler):
            with pytest.raises(ValueError):
                make(-1)


class TestFitGrowth:
    """Test fit_growth"""

    def test_constant(self):
        assert fit_growth([(1, 7), (2, 7), (4, 7)]).kind == CONSTANT

    def test_exact_linear(self):
        fit = fit_growth([(n, 3 + 2 * n) for n in range(1, 9)])
        assert fit.kind == LINEAR
        assert fit.statistics['exact']

    def test_linear_on_doubling_points(self):
        fit = fit_growth([(n, 3 + 2 * n) for n in (1, 2, 4, 8, 16, 32, 64)])
        assert fit.kind == LINEAR

    def test_noisy_linear(self):
        fit = fit_growth([(n, 10 * n + (1 if n % 2 else 0)) for n in range(1, 11)])
        assert fit.kind == LINEAR
        assert not fit.statistics['exact']

    def test_exponential(self):
        assert fit_growth([(n, 2 ** n) for n in range(1, 9)]).kind == EXPONENTIAL

    def test_parigot_like_exponential(self):
        sizes = [(n, size(mk_parigot(n))) for n in range(1, 9)]
        assert fit_growth(sizes).kind == EXPONENTIAL

    def test_quadratic_is_inconclusive(self):
        fit = fit_growth([(n, n * n) for n in range(1, 9)])
        assert fit.kind == INCONCLUSIVE

    def test_too_few_points(self):
        fit = fit_growth([(1, 1), (2, 2), (3, 3)])
        assert fit.kind == INCONCLUSIVE
        assert 'reason' in fit.statistics

    def test_single_point_is_constant(self):
        assert fit_growth([(4, 11)]).kind == CONSTANT

    def test_empty_series(self):
        with pytest.raises(ValueError):
            fit_growth([])

    def test_unordered_series(self):
        with pytest.raises(ValueError):
            fit_growth([(2, 1), (1, 2)])

    def test_to_dict(self):
        record = fit_growth([(1, 7), (2, 7)]).to_dict()
        assert record['class'] == CONSTANT
        assert record['value'] == 7


class TestMeasurements:
    """Test measure_pred and measure_size"""

    def test_parigot_pred_is_constant(self):
        encoding = parigot_encoding()
        steps = {measure_pred(encoding, n).beta_steps for n in range(1, 10)}
        assert len(steps) == 1

    def test_parigot_pred_correct(self):
        encoding = parigot_encoding()
        for n in range(10):
            assert encoding.pred_correct(n)

    def test_pred_of_zero_rejected(self):
        with pytest.raises(ValueError):
            measure_pred(parigot_encoding(), 0)

    def test_measure_size(self):
        assert measure_size(parigot_encoding(), 0) == 3

    def test_exhausted_measurement(self):
        result = measure_pred(parigot_encoding(), 3, EvalConfig(fuel=2))
        assert result.exhausted
        assert not result.ok


class TestRunBench:
    """Test run_bench without the corpus"""

    def test_parigot_confirmed(self, small_bench_config):
        [report] = run_bench([parigot_encoding()], small_bench_config)
        assert report.encoding == 'parigot'
        assert report.growth['pred_steps'].kind == CONSTANT
        assert report.growth['size'].kind == EXPONENTIAL
        assert report.confirmed
        assert [p.n for p in report.series] == small_bench_config.parigot_points

    def test_worker_pool_gives_same_series(self, small_bench_config):
        serial = run_bench([parigot_encoding()], small_bench_config)[0]
        pooled = BenchConfig(pred_points=small_bench_config.pred_points,
                             size_points=small_bench_config.size_points,
                             parigot_points=small_bench_config.parigot_points,
                             workers=3)
        parallel = run_bench([parigot_encoding()], pooled)[0]
        assert parallel.series == serial.series
        assert parallel.growth['size'].kind == serial.growth['size'].kind

    def test_quadratic_expectation_is_never_confirmed(self, small_bench_config):
        encoding = dataclasses.replace(parigot_encoding(),
                                       expected={'pred_steps': CONSTANT, 'size': QUADRATIC})
        [report] = run_bench([encoding], small_bench_config)
        assert report.growth['size'].kind != QUADRATIC
        assert not report.confirmed

    def test_unknown_expected_class(self):
        assert QUADRATIC in GROWTH_CLASSES
        with pytest.raises(ValueError):
            dataclasses.replace(parigot_encoding(), expected={'size': 'cubic'})

    def test_exhausted_fuel(self):
        config = BenchConfig(parigot_points=[1, 2, 3], fuel=2)
        [report] = run_bench([parigot_encoding()], config)
        assert report.exhausted
        assert report.growth == {}
        assert not report.confirmed


class TestEmitReport:
    """Test emit_report"""

    def test_empty_report_writes_nothing(self):
        for fmt in ('table', 'json-lines'):
            out = io.StringIO()
            emit_report([], fmt, out)
            assert out.getvalue() == ""

    def test_json_lines(self):
        out = io.StringIO()
        emit_report([sample_report('church'), sample_report('mendler')], 'json-lines', out)
        lines = out.getvalue().splitlines()
        assert len(lines) == 2
        record = json.loads(lines[0])
        assert set(record) == {'encoding', 'series', 'growthFit', 'expected', 'confirmed',
                               'config', 'seconds'}
        assert record['growthFit']['size']['class'] == LINEAR
        assert record['confirmed'] is True

    def test_table_rows(self):
        out = io.StringIO()
        reports = [sample_report('church'), sample_report('parigot', False),
                   sample_report('mendler')]
        emit_report(reports, 'table', out)
        lines = out.getvalue().splitlines()
        assert len(lines) == 4
        assert lines[0].startswith('encoding')
        assert lines[2].startswith('parigot')
        assert lines[2].rstrip().endswith('NO')
        assert '12..19' in lines[1]

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report([], 'xml', io.StringIO())


@pytest.mark.integration
class TestCorpusEncodings:
    """Benchmarks of the predecessors taken from the checked corpus"""

    def test_standard_encodings(self, checked_corpus):
        names = [e.name for e in standard_encodings(checked_corpus)]
        assert names == ['church', 'parigot', 'mendler']

    def test_mendler_numerals_follow_corpus_suc(self, checked_corpus):
        suc = checked_corpus.erasure('suc')
        numeral = checked_corpus.erasure('zero')
        for n in range(17):
            assert alpha_eq(normalize(numeral).normal_form, mk_mendler(n)), n
            numeral = PureApp(suc, numeral)

    def test_pred_correct(self, checked_corpus):
        for encoding in standard_encodings(checked_corpus):
            if encoding.name == 'parigot':
                continue
            for n in range(33):
                assert encoding.pred_correct(n), (encoding.name, n)

    def test_mendler_pred_constant(self, checked_corpus):
        encoding = mendler_encoding(checked_corpus.erasure('pred'))
        steps = {measure_pred(encoding, n + 1).beta_steps for n in (0, 1, 2, 4, 8, 16, 32, 64)}
        assert len(steps) == 1

    def test_church_pred_steps_grow_steadily(self, checked_corpus):
        church = standard_encodings(checked_corpus)[0]
        steps = [measure_pred(church, n).beta_steps for n in range(1, 25)]
        differences = [b - a for a, b in zip(steps, steps[1:])]
        assert all(d > 0 for d in differences)
        assert len(set(differences[-10:])) == 1

    def test_small_bench_confirmed(self, checked_corpus, small_bench_config):
        reports = run_bench(standard_encodings(checked_corpus), small_bench_config)
        for report in reports:
            assert report.confirmed, report.to_dict()


@pytest.mark.slow
class TestFullScale:
    """Measurements at the full benchmark sizes"""

    def test_mendler_pred_constant_to_256(self, checked_corpus):
        encoding = mendler_encoding(checked_corpus.erasure('pred'))
        points = (0, 1, 2, 4, 8, 16, 32, 64, 128, 256)
        steps = {measure_pred(encoding, n + 1).beta_steps for n in points}
        assert len(steps) == 1

    def test_church_pred_doubles(self, checked_corpus):
        church = standard_encodings(checked_corpus)[0]
        for n in (32, 64, 128):
            ratio = measure_pred(church, 2 * n).beta_steps / measure_pred(church, n).beta_steps
            assert 1.8 <= ratio <= 2.2, n

    def test_default_bench_confirmed(self, checked_corpus):
        reports = run_bench(standard_encodings(checked_corpus), BenchConfig(workers=2))
        assert all(report.confirmed for report in reports)
