"""
Tests for normal-order reduction and step counting
"""

import pytest
from mendler_cdle.config import EvalConfig
from mendler_cdle.parser import parse_pure
from mendler_cdle.reduction import (
    beta_eq, is_eta_redex, normalize, normalize_by_steps, step,
)
from mendler_cdle.syntax import PureApp, PureLam, PureVar, alpha_eq, subst_pure


OMEGA = parse_pure("(λ x. x x) (λ x. x x)")
ETA = EvalConfig(eta_enabled=True)


def all_reducts(t, eta=False):
    """Every term reachable from t by contracting exactly one redex"""
    found = []
    if isinstance(t, PureApp) and isinstance(t.fun, PureLam):
        found.append(subst_pure(t.fun.body, t.fun.name, t.arg))
    if eta and is_eta_redex(t):
        found.append(t.body.fun)
    if isinstance(t, PureLam):
        found += [PureLam(t.name, b) for b in all_reducts(t.body, eta)]
    elif isinstance(t, PureApp):
        found += [PureApp(f, t.arg) for f in all_reducts(t.fun, eta)]
        found += [PureApp(t.fun, a) for a in all_reducts(t.arg, eta)]
    return found


def innermost_step(t):
    """Contract the rightmost-innermost β-redex"""
    if isinstance(t, PureVar):
        return None
    if isinstance(t, PureLam):
        body = innermost_step(t.body)
        return None if body is None else PureLam(t.name, body)
    arg = innermost_step(t.arg)
    if arg is not None:
        return PureApp(t.fun, arg)
    fun = innermost_step(t.fun)
    if fun is not None:
        return PureApp(fun, t.arg)
    if isinstance(t.fun, PureLam):
        return subst_pure(t.fun.body, t.fun.name, t.arg)
    return None


def innermost_normalize(t, fuel=500):
    for _ in range(fuel):
        reduct = innermost_step(t)
        if reduct is None:
            return t
        t = reduct
    return None


class TestStep:
    """Test single-step contraction"""

    def test_beta_redex(self):
        assert step(parse_pure("(λ x. x) y")) == PureVar('y')

    def test_normal_form_has_no_step(self):
        assert step(parse_pure("λ x. x")) is None

    def test_eta_only_when_enabled(self):
        t = parse_pure("λ x. f x")
        assert step(t) is None
        assert step(t, ETA) == PureVar('f')

    def test_eta_requires_fresh_variable(self):
        assert not is_eta_redex(parse_pure("λ x. x x"))

    def test_leftmost_outermost(self):
        t = parse_pure("(λ x. λ y. y) ((λ z. z) w)")
        assert alpha_eq(step(t), parse_pure("λ y. y"))

    def test_step_is_one_contraction(self, rng, make_term):
        """The reduct is among the single-step reducts of the term"""
        checked = 0
        for _ in range(300):
            t = make_term(rng, 6)
            reduct = step(t, ETA)
            if reduct is None:
                assert all_reducts(t, eta=True) == []
                continue
            checked += 1
            assert any(alpha_eq(reduct, r) for r in all_reducts(t, eta=True))
        assert checked > 0


class TestNormalize:
    """Test normalize"""

    def test_counts_beta_steps(self):
        stats = normalize(parse_pure("(λ x. x) ((λ y. y) z)"))
        assert stats.normal_form == PureVar('z')
        assert stats.beta_steps == 2
        assert stats.fuel_used == 2
        assert not stats.exhausted

    def test_omega_exhausts_fuel(self):
        stats = normalize(OMEGA, EvalConfig(fuel=1000))
        assert stats.exhausted
        assert stats.fuel_used == 1000

    def test_normal_order_finds_normal_form(self):
        t = PureApp(parse_pure("λ x. λ y. y"), OMEGA)
        stats = normalize(t, EvalConfig(fuel=100))
        assert not stats.exhausted
        assert alpha_eq(stats.normal_form, parse_pure("λ y. y"))

    def test_eta_normal_form(self):
        stats = normalize(parse_pure("λ x. (λ y. f y) x"), ETA)
        assert stats.normal_form == PureVar('f')
        assert stats.eta_steps >= 1
        assert stats.beta_steps + stats.eta_steps == stats.fuel_used

    def test_without_eta_keeps_lambda(self):
        stats = normalize(parse_pure("λ x. (λ y. f y) x"))
        assert alpha_eq(stats.normal_form, parse_pure("λ x. f x"))
        assert stats.eta_steps == 0

    def test_church_addition(self):
        two = parse_pure("λ s z. s (s z)")
        plus = parse_pure("λ m n s z. m s (n s z)")
        stats = normalize(PureApp(PureApp(plus, two), two))
        assert alpha_eq(stats.normal_form, parse_pure("λ s z. s (s (s (s z)))"))

    def test_agrees_with_iterated_step(self, rng, make_term):
        """The fast normalizer counts exactly what iterating step counts"""
        cfg = EvalConfig(fuel=200)
        for _ in range(200):
            t = make_term(rng, 6)
            fast = normalize(t, cfg)
            slow = normalize_by_steps(t, cfg)
            assert fast.exhausted == slow.exhausted
            if not fast.exhausted:
                assert alpha_eq(fast.normal_form, slow.normal_form)
                assert fast.beta_steps == slow.beta_steps

    def test_normal_forms_are_confluent(self, rng, make_term):
        """Innermost reduction reaches the same normal form on 500 terminating terms"""
        compared = 0
        for _ in range(5000):
            t = make_term(rng, rng.randint(3, 6))
            outer = normalize(t, EvalConfig(fuel=500))
            inner = innermost_normalize(t)
            if outer.exhausted or inner is None:
                continue
            assert alpha_eq(outer.normal_form, inner), t
            compared += 1
            if compared == 500:
                break
        assert compared == 500

    def test_deterministic(self):
        t = parse_pure("(λ f x. f (f x)) (λ y. y) z")
        assert normalize(t) == normalize(t)

    def test_to_dict(self):
        record = normalize(parse_pure("(λ x. x) y")).to_dict()
        assert record == {'normal_form': 'y', 'beta_steps': 1, 'eta_steps': 0,
                          'fuel_used': 1, 'exhausted': False}


class TestBetaEq:
    """Test beta_eq"""

    def test_redex_equals_reduct(self):
        assert beta_eq(parse_pure("(λ x. x) y"), PureVar('y'))

    def test_distinct_normal_forms(self):
        result = beta_eq(parse_pure("λ x y. x"), parse_pure("λ x y. y"))
        assert not result
        assert not result.diverged

    def test_divergence_is_flagged(self):
        result = beta_eq(OMEGA, PureVar('y'), EvalConfig(fuel=100))
        assert not result
        assert result.diverged

    def test_eta_equality(self):
        assert not beta_eq(parse_pure("λ x. f x"), PureVar('f'))
        assert beta_eq(parse_pure("λ x. f x"), PureVar('f'), ETA)

    def test_mendler_fold_computes(self):
        """foldM alg (inFixM x) and alg (foldM alg) x are convertible"""
        fold = parse_pure("λ alg x. x alg")
        in_fix = parse_pure("λ x alg. alg (λ x'. x' alg) x")
        lhs = PureApp(PureApp(fold, PureVar('alg')), PureApp(in_fix, PureVar('v')))
        rhs = PureApp(PureApp(PureVar('alg'), PureApp(fold, PureVar('alg'))), PureVar('v'))
        assert beta_eq(lhs, rhs)


@pytest.mark.integration
class TestCorpusReduction:
    """Reduction of erasures taken from the checked corpus"""

    def test_church_predecessor_of_one(self, checked_corpus):
        one = parse_pure("λ s z. s z")
        stats = normalize(PureApp(checked_corpus.erasure('predK'), one))
        assert alpha_eq(stats.normal_form, parse_pure("λ s z. z"))

    def test_pred_suc_is_constant_time(self, checked_corpus):
        pred = checked_corpus.erasure('pred')
        suc = checked_corpus.erasure('suc')
        numeral = normalize(checked_corpus.erasure('zero')).normal_form
        counts = set()
        for _ in range(9):
            stats = normalize(PureApp(pred, PureApp(suc, numeral)))
            assert alpha_eq(stats.normal_form, numeral)
            counts.add(stats.beta_steps)
            numeral = normalize(PureApp(suc, numeral)).normal_form
        assert len(counts) == 1

    def test_lambek_computation(self, checked_corpus):
        out = checked_corpus.erasure('outFixIndM')
        into = checked_corpus.erasure('inFixIndM')
        for name in ('zero', 'suc'):
            value = checked_corpus.erasure(name)
            assert beta_eq(PureApp(out, PureApp(into, value)), value)
