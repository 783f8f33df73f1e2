#!/usr/bin/env python3
"""
Bidirectional type checker for CDLE
Curry-style Calculus of Constructions with implicit products, dependent
intersections and heterogeneous equality. Definitional equality compares
embedded terms by β-conversion of their erasures.

One expression syntax serves terms, types and kinds; the checker decides the
level of a node from its classifier. A classifier that is a kind (★ or a
Π-chain ending in ★) classifies a type; anything else classifies a term.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .config import EvalConfig
from .errors import (
    CannotSynthesize, CdleError, DuplicateDefinition, ErasedVarOccursFree, ErasureMismatch,
    FuelExhausted, IllFormedEquation, KernelError, KindMismatch, MotiveNoOccurrence,
    NotAFunction, NotAnIntersection, TypeMismatch, UnboundTypeVariable, UnboundVariable,
)
from .parser import show_expr
from .reduction import beta_eq, normalize
from .syntax import (
    ANONYMOUS, All, App, Beta, Eq, ErasedApp, ErasedLam, Expr, Iota, Lam, Let, Pair, Pi,
    Proj1, Proj2, PureTerm, Rho, Star, TypeApp, Var, alpha_eq, erase, expr_alpha_eq,
    expr_free_vars, fresh_name, is_kind, subst, subst_many, subst_pure_many,
)

logger = logging.getLogger(__name__)

TERM = "term"
TYPE = "type"
STAR = Star()


# ---------------------------------------------------------------------------
# Context entries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TermVar:
    """A term variable and its type"""
    name: str
    type: Expr


@dataclass(frozen=True)
class TypeVar:
    """A type variable and its kind"""
    name: str
    kind: Expr


@dataclass(frozen=True)
class Def:
    """
    A checked definition

    body is None for postulates. erasure is the closed erasure of a term
    definition with every definition it mentions unfolded; type definitions
    have none. params lists the module parameters the definition was
    generalized over, outermost first.
    """
    name: str
    classifier: Expr
    body: Optional[Expr]
    erasure: Optional[PureTerm] = None
    level: str = TERM
    params: Tuple[Tuple[str, Expr], ...] = ()

    @property
    def postulate(self) -> bool:
        return self.body is None

    @property
    def is_type(self) -> bool:
        return self.level == TYPE


Entry = Union[TermVar, TypeVar, Def]


def classifier_of(entry: Entry) -> Expr:
    if isinstance(entry, TermVar):
        return entry.type
    if isinstance(entry, TypeVar):
        return entry.kind
    return entry.classifier


def _entry(name: str, domain: Expr) -> Entry:
    return TypeVar(name, domain) if is_kind(domain) else TermVar(name, domain)


@dataclass(frozen=True, eq=False)
class Context:
    """
    Typing context: checked global definitions plus a telescope of locals

    Locals shadow globals. Contexts are never mutated; every extension
    returns a new Context sharing the old parts.

    Attributes:
        globals: Checked definitions by name
        locals: Bound variables and let definitions, innermost last
        params: Module parameters in scope (also present in locals)
        aliases: Names that stand for a definition applied to the current
            module parameters or to import arguments
        config: Fuel and η settings for definitional equality
        current: Name of the definition being checked, for diagnostics
    """
    globals: Mapping[str, Def] = field(default_factory=dict)
    locals: Tuple[Entry, ...] = ()
    params: Tuple[Entry, ...] = ()
    aliases: Mapping[str, Expr] = field(default_factory=dict)
    config: EvalConfig = field(default_factory=EvalConfig)
    current: Optional[str] = None

    def lookup(self, name: str) -> Optional[Entry]:
        for entry in reversed(self.locals):
            if entry.name == name:
                return entry
        return self.globals.get(name)

    def extend(self, entry: Entry) -> 'Context':
        return replace(self, locals=self.locals + (entry,))

    def define(self, definition: Def) -> 'Context':
        if definition.name in self.globals:
            raise DuplicateDefinition(f"{definition.name} is already defined",
                                      definition=definition.name)
        return replace(self, globals={**self.globals, definition.name: definition})

    def with_config(self, config: EvalConfig) -> 'Context':
        return replace(self, config=config)

    @cached_property
    def taken(self) -> FrozenSet[str]:
        """Every name a fresh binder must avoid"""
        return frozenset(self.globals) | {e.name for e in self.locals} | frozenset(self.aliases)

    def __contains__(self, name: str) -> bool:
        return self.lookup(name) is not None


@dataclass(frozen=True)
class Judgment:
    """
    One typing question: check subject against classifier, or infer it

    Example:
        >>> Judgment(ctx, Var('zero')).run()
        Var(name='Nat')
    """
    ctx: Context
    subject: Expr
    classifier: Optional[Expr] = None

    @property
    def mode(self) -> str:
        return "infer" if self.classifier is None else "check"

    def run(self) -> Expr:
        if self.classifier is None:
            return _infer(self.ctx, self.subject)
        _check(self.ctx, self.subject, self.classifier)
        return self.classifier


# ---------------------------------------------------------------------------
# Binders and erasure in context
# ---------------------------------------------------------------------------

def _open(ctx: Context, name: str, body: Expr) -> Tuple[str, Expr]:
    """Pick a name for a binder entering ctx, renaming body to match"""
    if name != ANONYMOUS and name not in ctx.taken:
        return name, body
    new = fresh_name(name, ctx.taken | expr_free_vars(body))
    return new, subst(body, name, Var(new))


def _open_pair(ctx: Context, name: str, body: Expr,
               other: str, other_body: Expr) -> Tuple[str, Expr, Expr]:
    """Open two binders under one shared name"""
    base = name if name != ANONYMOUS else other
    clash = (base == ANONYMOUS or base in ctx.taken
             or (base != name and base in expr_free_vars(body))
             or (base != other and base in expr_free_vars(other_body)))
    new = base
    if clash:
        new = fresh_name(base, ctx.taken | expr_free_vars(body) | expr_free_vars(other_body))
    if new != name:
        body = subst(body, name, Var(new))
    if new != other:
        other_body = subst(other_body, other, Var(new))
    return new, body, other_body


def erase_in_context(ctx: Context, t: Expr) -> PureTerm:
    """
    Erase t and unfold every term definition it mentions

    Args:
        ctx: Context holding the definitions
        t: Annotated term

    Returns:
        A pure term whose free variables are locals or postulates
    """
    pure = erase(t)
    unfold = {}
    for name in pure.fv:
        entry = ctx.lookup(name)
        if isinstance(entry, Def) and entry.erasure is not None:
            unfold[name] = entry.erasure
    return subst_pure_many(pure, unfold) if unfold else pure


def _erasable(t: Expr) -> bool:
    try:
        erase(t)
    except TypeError:
        return False
    return True


def _require_scope(ctx: Context, t: Expr):
    for name in sorted(expr_free_vars(t)):
        if name not in ctx:
            raise UnboundVariable(f"{name} is not declared", actual=name)


def terms_equal(ctx: Context, a: Expr, b: Expr) -> bool:
    """
    β-convertibility (βη under the η pragma) of two terms' erasures

    Raises:
        FuelExhausted: If either side fails to normalize within fuel
    """
    conversion = beta_eq(erase_in_context(ctx, a), erase_in_context(ctx, b), ctx.config)
    if conversion.diverged:
        raise FuelExhausted(
            f"no normal form within {ctx.config.fuel} steps while comparing "
            f"{show_expr(a)} and {show_expr(b)}",
            expected=show_expr(a), actual=show_expr(b))
    return conversion.equal


# ---------------------------------------------------------------------------
# Definitional equality
# ---------------------------------------------------------------------------

def _spine(t: Expr) -> Tuple[Expr, List[Tuple[Expr, type]]]:
    args = []
    while isinstance(t, (App, TypeApp)):
        args.append((t.arg, type(t)))
        t = t.fun
    args.reverse()
    return t, args


def _reapply(head: Expr, args: Sequence[Tuple[Expr, type]]) -> Expr:
    for arg, node in args:
        head = node(head, arg)
    return head


def whnf(ctx: Context, t: Expr) -> Expr:
    """
    Weak head normal form of a type or kind

    Unfolds type definitions in head position and contracts type-level
    β-redexes. Term definitions are never unfolded here.
    """
    while True:
        head, args = _spine(t)
        if isinstance(head, Var):
            entry = ctx.lookup(head.name)
            if not (isinstance(entry, Def) and entry.is_type and entry.body is not None):
                return t
            t = _reapply(entry.body, args)
        elif isinstance(head, Lam) and args:
            (arg, _), rest = args[0], args[1:]
            t = _reapply(subst(head.body, head.name, arg), rest)
        elif isinstance(head, Let):
            t = _reapply(subst(head.body, head.name, head.value), args)
        else:
            return t


def _argument_domains(ctx: Context, head: Var, count: int) -> List[Optional[Expr]]:
    """Domains of the first count parameters of a type variable's kind"""
    entry = ctx.lookup(head.name)
    kind = classifier_of(entry) if entry is not None else None
    domains = []
    for _ in range(count):
        if isinstance(kind, (Pi, All)):
            domains.append(kind.domain)
            kind = kind.body
        else:
            domains.append(None)
    return domains


def _arguments_equal(ctx: Context, head: Var, xs, ys) -> bool:
    for domain, (x, _), (y, _) in zip(_argument_domains(ctx, head, len(xs)), xs, ys):
        if domain is not None:
            same = def_eq(ctx, x, y) if is_kind(domain) else terms_equal(ctx, x, y)
        else:
            same = def_eq(ctx, x, y) or (_erasable(x) and _erasable(y) and terms_equal(ctx, x, y))
        if not same:
            return False
    return True


def _rigid_match(ctx: Context, a: Expr, b: Expr) -> bool:
    head_a, args_a = _spine(a)
    head_b, args_b = _spine(b)
    return (isinstance(head_a, Var) and isinstance(head_b, Var)
            and head_a.name == head_b.name and len(args_a) == len(args_b)
            and _arguments_equal(ctx, head_a, args_a, args_b))


def def_eq(ctx: Context, a: Expr, b: Expr) -> bool:
    """
    Definitional equality of two types (or two kinds)

    Structural up to alpha, unfolding type definitions and contracting
    type-level β. Embedded terms are equal when their erasures are
    β-convertible.

    Args:
        ctx: Context for unfolding and for classifying arguments
        a: Type or kind
        b: Type or kind

    Returns:
        True if a and b are definitionally equal

    Raises:
        FuelExhausted: If comparing embedded terms ran out of fuel

    Example:
        >>> def_eq(ctx, Var('Nat'), TypeApp(TypeApp(Var('FixIndM'), Var('NF')), Var('nfimap')))
        True
    """
    if expr_alpha_eq(a, b):
        return True
    if _rigid_match(ctx, a, b):
        return True
    a, b = whnf(ctx, a), whnf(ctx, b)
    if expr_alpha_eq(a, b):
        return True
    return _structurally_equal(ctx, a, b)


def _structurally_equal(ctx: Context, a: Expr, b: Expr) -> bool:
    if isinstance(a, Star) or isinstance(b, Star):
        return isinstance(a, Star) and isinstance(b, Star)
    if isinstance(a, (Pi, All, Iota)):
        if type(a) is not type(b) or not def_eq(ctx, a.domain, b.domain):
            return False
        name, body_a, body_b = _open_pair(ctx, a.name, a.body, b.name, b.body)
        return def_eq(ctx.extend(_entry(name, a.domain)), body_a, body_b)
    if isinstance(a, Lam):
        if not isinstance(b, Lam):
            return False
        domain = a.annot if a.annot is not None else b.annot
        name, body_a, body_b = _open_pair(ctx, a.name, a.body, b.name, b.body)
        inner = ctx.extend(_entry(name, domain)) if domain is not None else ctx.extend(
            TermVar(name, Var(ANONYMOUS)))
        return def_eq(inner, body_a, body_b)
    if isinstance(a, Eq):
        return (isinstance(b, Eq) and terms_equal(ctx, a.lhs, b.lhs)
                and terms_equal(ctx, a.rhs, b.rhs))
    if isinstance(a, (App, TypeApp)):
        return _rigid_match(ctx, a, b)
    return False


# ---------------------------------------------------------------------------
# Formation
# ---------------------------------------------------------------------------

def check_kind_formation(ctx: Context, kind: Expr):
    """Check that kind is ★ or a well-formed Π-chain ending in ★"""
    if isinstance(kind, Star):
        return
    if not isinstance(kind, Pi) or not is_kind(kind):
        raise KindMismatch(f"{show_expr(kind)} is not a kind", expected="a kind",
                           actual=show_expr(kind))
    name, body = _open(ctx, kind.name, kind.body)
    check_kind_formation(ctx.extend(_binder_entry(ctx, name, kind.domain)), body)


def _binder_entry(ctx: Context, name: str, domain: Expr) -> Entry:
    """Validate a binder's domain, a kind or a type, and make its entry"""
    if is_kind(domain):
        check_kind_formation(ctx, domain)
        return TypeVar(name, domain)
    check_kind(ctx, domain)
    return TermVar(name, domain)


def check_kind(ctx: Context, t: Expr, kind: Expr = STAR):
    """Check that the type t has the given kind (★ unless stated)"""
    head, _ = _spine(t)
    if isinstance(head, Var) and head.name not in ctx:
        raise UnboundTypeVariable(f"type {head.name} is not declared", actual=head.name)
    _check(ctx, t, kind)


def _check_classifier(ctx: Context, classifier: Expr):
    if is_kind(classifier):
        check_kind_formation(ctx, classifier)
    else:
        check_kind(ctx, classifier)


def _equation_side(ctx: Context, t: Expr):
    try:
        classifier = _infer(ctx, t)
    except CannotSynthesize:
        # unannotated sides only need their free names declared
        _require_scope(ctx, t)
        return
    except FuelExhausted:
        raise
    except KernelError as e:
        raise IllFormedEquation(f"{show_expr(t)} is not typeable: {e.message}",
                                actual=show_expr(t))
    if is_kind(classifier):
        raise IllFormedEquation(f"{show_expr(t)} is a type, equations relate terms",
                                actual=show_expr(t))


# ---------------------------------------------------------------------------
# Inference
# ---------------------------------------------------------------------------

def infer_term(ctx: Context, t: Expr) -> Expr:
    """
    Synthesize the type of a term

    Args:
        ctx: Well-formed context
        t: Term in a synthesizing form (variable, annotated λ, application,
            erased or type application, projection, let)

    Returns:
        A type T of kind ★

    Raises:
        UnboundVariable: t mentions an undeclared name
        NotAFunction: An application's head has no matching product type
        NotAnIntersection: A projection's subject is not an intersection
        KindMismatch: t is a type
        CannotSynthesize: t is β, ρ, a pair, a Λ or an unannotated λ
    """
    classifier = _infer(ctx, t)
    if is_kind(classifier):
        raise KindMismatch(f"{show_expr(t)} is a type, not a term",
                           expected="a type", actual=show_expr(classifier))
    return classifier


def infer_type_kind(ctx: Context, t: Expr) -> Expr:
    """Synthesize the kind of a type"""
    if isinstance(t, Var) and t.name not in ctx:
        raise UnboundTypeVariable(f"type {t.name} is not declared", actual=t.name)
    classifier = _infer(ctx, t)
    if not is_kind(classifier):
        raise KindMismatch(f"{show_expr(t)} is a term of type {show_expr(classifier)}, not a type",
                           expected="a kind", actual=show_expr(classifier))
    return classifier


def _function_type(ctx: Context, f: Expr, node: type) -> Expr:
    classifier = whnf(ctx, _infer(ctx, f))
    if node is App and isinstance(classifier, Pi):
        return classifier
    if node is ErasedApp and isinstance(classifier, All):
        return classifier
    if node is TypeApp and (isinstance(classifier, All)
                            or (isinstance(classifier, Pi) and is_kind(classifier))):
        return classifier
    spelled = {App: "applied", ErasedApp: "given an erased argument", TypeApp: "given a type argument"}
    raise NotAFunction(f"{show_expr(f)} cannot be {spelled[node]}; its type is {show_expr(classifier)}",
                       actual=show_expr(classifier))


def _infer(ctx: Context, e: Expr) -> Expr:
    if isinstance(e, Var):
        entry = ctx.lookup(e.name)
        if entry is None:
            raise UnboundVariable(f"{e.name} is not declared", actual=e.name)
        return classifier_of(entry)

    if isinstance(e, Star):
        raise KindMismatch("★ is a kind and has no classifier", actual="★")

    if isinstance(e, (Pi, Iota)):
        if is_kind(e.domain):
            raise KindMismatch(f"quantify over {show_expr(e.domain)} with ∀, not with a product",
                               actual=show_expr(e))
        if is_kind(e):
            raise KindMismatch(f"{show_expr(e)} is a kind, not a type", actual=show_expr(e))
        name, body = _open(ctx, e.name, e.body)
        check_kind(ctx.extend(_binder_entry(ctx, name, e.domain)), body)
        return STAR

    if isinstance(e, All):
        name, body = _open(ctx, e.name, e.body)
        check_kind(ctx.extend(_binder_entry(ctx, name, e.domain)), body)
        return STAR

    if isinstance(e, Eq):
        _equation_side(ctx, e.lhs)
        _equation_side(ctx, e.rhs)
        return STAR

    if isinstance(e, Lam) and e.annot is not None:
        name, body = _open(ctx, e.name, e.body)
        inner = _infer(ctx.extend(_binder_entry(ctx, name, e.annot)), body)
        if is_kind(e.annot) and not is_kind(inner):
            raise KindMismatch(f"abstract over the type {name} with Λ, not λ",
                               actual=show_expr(e.annot))
        return Pi(name, e.annot, inner)

    if isinstance(e, (App, ErasedApp, TypeApp)):
        product = _function_type(ctx, e.fun, type(e))
        _check(ctx, e.arg, product.domain)
        return subst(product.body, product.name, e.arg)

    if isinstance(e, (Proj1, Proj2)):
        classifier = whnf(ctx, _infer(ctx, e.arg))
        if not isinstance(classifier, Iota):
            raise NotAnIntersection(f"{show_expr(e.arg)} has type {show_expr(classifier)}, "
                                    f"which is not an intersection", actual=show_expr(classifier))
        if isinstance(e, Proj1):
            return classifier.domain
        return subst(classifier.body, classifier.name, Proj1(e.arg))

    if isinstance(e, Let):
        inner, name, body = _enter_let(ctx, e)
        return subst(_infer(inner, body), name, e.value)

    form = {Lam: "an unannotated λ", ErasedLam: "a Λ", Beta: "β", Rho: "ρ",
            Pair: "an intersection pair"}.get(type(e), type(e).__name__)
    raise CannotSynthesize(f"cannot synthesize a type for {form}; it needs an expected type",
                           actual=show_expr(e))


def _enter_let(ctx: Context, e: Let) -> Tuple[Context, str, Expr]:
    _check_classifier(ctx, e.classifier)
    _check(ctx, e.value, e.classifier)
    name, body = _open(ctx, e.name, e.body)
    return ctx.extend(_make_def(ctx, name, e.classifier, e.value)), name, body


def _make_def(ctx: Context, name: str, classifier: Expr, body: Optional[Expr]) -> Def:
    if is_kind(classifier):
        return Def(name, classifier, body, None, TYPE)
    erasure = erase_in_context(ctx, body) if body is not None else None
    return Def(name, classifier, body, erasure, TERM)


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

def check_term(ctx: Context, t: Expr, expected: Expr):
    """
    Check that t inhabits the type expected

    Args:
        ctx: Well-formed context
        t: Term
        expected: A type of kind ★ in ctx

    Raises:
        TypeMismatch: t has a type not definitionally equal to expected
        ErasedVarOccursFree: A Λ-bound variable is used computationally
        ErasureMismatch: An intersection pair's components differ after erasure
        MotiveNoOccurrence: ρ rewrote nothing (only with strict_rho)
    """
    _check(ctx, t, expected)


def _mismatch(ctx: Context, t: Expr, expected: Expr, actual: Expr) -> KernelError:
    error = KindMismatch if is_kind(expected) or is_kind(actual) else TypeMismatch
    return error(f"{show_expr(t)} has {'kind' if is_kind(actual) else 'type'} {show_expr(actual)}, "
                 f"expected {show_expr(expected)}",
                 expected=show_expr(expected), actual=show_expr(actual))


def _check(ctx: Context, e: Expr, expected: Expr):
    if isinstance(e, Lam):
        _check_lambda(ctx, e, expected)
    elif isinstance(e, ErasedLam):
        _check_erased_lambda(ctx, e, expected)
    elif isinstance(e, Beta):
        goal = whnf(ctx, expected)
        if not isinstance(goal, Eq):
            raise TypeMismatch(f"β proves equations, not {show_expr(expected)}",
                               expected=show_expr(expected), actual="t ≃ t")
        _check_beta(ctx, goal.lhs, goal.rhs)
    elif isinstance(e, Rho):
        _check_rho(ctx, e, expected)
    elif isinstance(e, Pair):
        _check_pair(ctx, e, expected)
    elif isinstance(e, Let):
        inner, _, body = _enter_let(ctx, e)
        _check(inner, body, expected)
    else:
        actual = _infer(ctx, e)
        if not def_eq(ctx, actual, expected):
            raise _mismatch(ctx, e, expected, actual)


def _check_lambda(ctx: Context, e: Lam, expected: Expr):
    goal = whnf(ctx, expected)
    if not isinstance(goal, Pi):
        raise TypeMismatch(f"a λ-abstraction cannot have type {show_expr(expected)}",
                           expected=show_expr(expected), actual=show_expr(e))
    if e.annot is not None:
        _check_classifier(ctx, e.annot)
        if not def_eq(ctx, e.annot, goal.domain):
            raise _mismatch(ctx, Var(e.name), goal.domain, e.annot)
    name, body, codomain = _open_pair(ctx, e.name, e.body, goal.name, goal.body)
    _check(ctx.extend(_entry(name, goal.domain)), body, codomain)


def _check_erased_lambda(ctx: Context, e: ErasedLam, expected: Expr):
    goal = whnf(ctx, expected)
    if not isinstance(goal, All):
        raise TypeMismatch(f"a Λ-abstraction cannot have type {show_expr(expected)}",
                           expected=show_expr(expected), actual=show_expr(e))
    if e.annot is not None:
        _check_classifier(ctx, e.annot)
        if not def_eq(ctx, e.annot, goal.domain):
            raise _mismatch(ctx, Var(e.name), goal.domain, e.annot)
    name, body, codomain = _open_pair(ctx, e.name, e.body, goal.name, goal.body)
    _check(ctx.extend(_entry(name, goal.domain)), body, codomain)
    if name in erase(body).fv:
        raise ErasedVarOccursFree(
            f"{name} is bound by Λ but occurs in the erasure {erase(body)}",
            expected=f"{name} ∉ FV(|t|)", actual=str(erase(body)))


def _check_beta(ctx: Context, lhs: Expr, rhs: Expr):
    _require_scope(ctx, lhs)
    _require_scope(ctx, rhs)
    if not terms_equal(ctx, lhs, rhs):
        raise TypeMismatch(
            f"β cannot prove {show_expr(lhs)} ≃ {show_expr(rhs)}: "
            f"{erase_in_context(ctx, lhs)} and {erase_in_context(ctx, rhs)} are not β-equal",
            expected=show_expr(Eq(lhs, rhs)), actual=f"{show_expr(lhs)} ≃ {show_expr(lhs)}")


def _check_pair(ctx: Context, e: Pair, expected: Expr):
    goal = whnf(ctx, expected)
    if not isinstance(goal, Iota):
        raise TypeMismatch(f"an intersection pair cannot have type {show_expr(expected)}",
                           expected=show_expr(expected), actual=show_expr(e))
    if e.proof is None:
        raise ErasureMismatch(
            f"[{show_expr(e.first)}, {show_expr(e.second)}] needs a proof that its "
            f"components are equal", expected=show_expr(Eq(e.first, e.second)))
    if isinstance(e.proof, Beta):
        _require_scope(ctx, e.first)
        _require_scope(ctx, e.second)
        if not terms_equal(ctx, e.first, e.second):
            raise ErasureMismatch(
                f"the components of an intersection must erase to β-equal terms, got "
                f"{erase_in_context(ctx, e.first)} and {erase_in_context(ctx, e.second)}",
                expected=str(erase_in_context(ctx, e.first)),
                actual=str(erase_in_context(ctx, e.second)))
    _check(ctx, e.first, goal.domain)
    _check(ctx, e.second, subst(goal.body, goal.name, e.first))
    if not isinstance(e.proof, Beta):
        _check(ctx, e.proof, Eq(e.first, e.second))


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

def _normal_erasure(ctx: Context, t: Expr) -> Optional[PureTerm]:
    try:
        pure = erase_in_context(ctx, t)
    except TypeError:
        return None
    stats = normalize(pure, ctx.config)
    return None if stats.exhausted else stats.normal_form


def rewrite(ctx: Context, goal: Expr, lhs: Expr, rhs: Expr) -> Tuple[Expr, int]:
    """
    Replace each maximal subterm of goal that is convertible with lhs by rhs

    A subterm matches when the normal form of its erasure is alpha-equivalent
    to that of lhs. Binders that capture a free name of lhs or rhs are not
    entered.

    Returns:
        The rewritten goal and the number of occurrences replaced
    """
    target = _normal_erasure(ctx, lhs)
    if target is None:
        return goal, 0
    blocked = expr_free_vars(lhs) | expr_free_vars(rhs)
    hits = 0

    def visit(e: Expr) -> Expr:
        nonlocal hits
        if not isinstance(e, (Star, Pi, All, Iota, Eq, Beta)):
            found = _normal_erasure(ctx, e)
            if found is not None and alpha_eq(found, target):
                hits += 1
                return rhs
        if isinstance(e, (Var, Star, Beta)):
            return e
        if isinstance(e, (Pi, All, Iota)):
            body = e.body if e.name in blocked else visit(e.body)
            return type(e)(e.name, visit(e.domain), body)
        if isinstance(e, (Lam, ErasedLam)):
            body = e.body if e.name in blocked else visit(e.body)
            return type(e)(e.name, None if e.annot is None else visit(e.annot), body)
        if isinstance(e, Eq):
            return Eq(visit(e.lhs), visit(e.rhs))
        if isinstance(e, (App, ErasedApp, TypeApp)):
            return type(e)(visit(e.fun), visit(e.arg))
        if isinstance(e, (Proj1, Proj2)):
            return type(e)(visit(e.arg))
        if isinstance(e, Pair):
            proof = None if e.proof is None else visit(e.proof)
            return Pair(visit(e.first), visit(e.second), proof)
        if isinstance(e, Rho):
            return Rho(visit(e.proof), visit(e.body), e.motive, e.reverse)
        if isinstance(e, Let):
            body = e.body if e.name in blocked else visit(e.body)
            return Let(e.name, visit(e.classifier), visit(e.value), body)
        return e

    return visit(goal), hits


def _check_rho(ctx: Context, e: Rho, expected: Expr):
    proof_type = whnf(ctx, infer_term(ctx, e.proof))
    if not isinstance(proof_type, Eq):
        raise TypeMismatch(f"ρ rewrites with a proof of an equation, got {show_expr(proof_type)}",
                           expected="t₁ ≃ t₂", actual=show_expr(proof_type))
    lhs, rhs = proof_type.lhs, proof_type.rhs
    if e.reverse:
        lhs, rhs = rhs, lhs

    if e.motive is not None:
        name, motive = _open(ctx, *e.motive)
        # goal at the right-hand side, body at the left
        instance = subst(motive, name, rhs)
        if not def_eq(ctx, instance, expected):
            raise _mismatch(ctx, e, expected, instance)
        _check(ctx, e.body, subst(motive, name, lhs))
        return

    rewritten, hits = rewrite(ctx, expected, lhs, rhs)
    if not hits:
        unfolded = whnf(ctx, expected)
        if unfolded is not expected:
            rewritten, hits = rewrite(ctx, unfolded, lhs, rhs)
    if not hits:
        message = (f"ρ found no occurrence of {show_expr(lhs)} in {show_expr(expected)}")
        if ctx.config.strict_rho:
            raise MotiveNoOccurrence(message, expected=show_expr(lhs), actual=show_expr(expected))
        logger.warning(f"{ctx.current or '<expression>'}: {message}")
    _check(ctx, e.body, rewritten)


# ---------------------------------------------------------------------------
# Definitions and module parameters
# ---------------------------------------------------------------------------

def elaborate(ctx: Context, e: Expr) -> Expr:
    """Expand names that stand for parameter-applied definitions"""
    return subst_many(e, ctx.aliases) if ctx.aliases else e


def apply_parameters(definition: Def, args: Sequence[Expr]) -> Expr:
    """
    Reference to a generalized definition applied to module arguments

    Type parameters are passed with ·, term parameters with - for terms and
    by juxtaposition for types.
    """
    reference: Expr = Var(definition.name)
    for (_, classifier), arg in zip(definition.params, args):
        if is_kind(classifier):
            reference = TypeApp(reference, arg)
        elif definition.is_type:
            reference = App(reference, arg)
        else:
            reference = ErasedApp(reference, arg)
    return reference


def _generalize(ctx: Context, definition: Def) -> Def:
    params = tuple((p.name, classifier_of(p)) for p in ctx.params)
    classifier, body = definition.classifier, definition.body
    for name, domain in reversed(params):
        if definition.is_type:
            classifier = Pi(name, domain, classifier)
            body = None if body is None else Lam(name, domain, body)
        else:
            classifier = All(name, domain, classifier)
            body = None if body is None else ErasedLam(name, domain, body)
    if definition.erasure is not None:
        leaked = sorted(definition.erasure.fv & {name for name, _ in params})
        if leaked:
            raise ErasedVarOccursFree(
                f"module parameter {', '.join(leaked)} is used computationally",
                expected="parameters erased", actual=str(definition.erasure))
    return Def(definition.name, classifier, body, definition.erasure, definition.level, params)


def check_definition(ctx: Context, name: str, classifier: Expr,
                     body: Optional[Expr]) -> Context:
    """
    Check a definition and add it to the context

    Inside a parametrized module the definition is checked with the
    parameters as locals, then generalized over them (∀/Λ for terms, Π/λ for
    types). Later definitions of the same module keep referring to it by its
    bare name.

    Args:
        ctx: Context to extend
        name: Fresh global name
        classifier: Type of a term definition or kind of a type definition
        body: Definition body, or None for a postulate

    Returns:
        The extended context

    Raises:
        DuplicateDefinition: If name is already taken
        KernelError: If the body or classifier does not check; the error
            carries the definition name
    """
    if name in ctx.globals or any(p.name == name for p in ctx.params):
        raise DuplicateDefinition(f"{name} is already defined", definition=name)
    logger.debug(f"checking {name}")
    local = replace(ctx, current=name)
    classifier = elaborate(ctx, classifier)
    body = None if body is None else elaborate(ctx, body)
    try:
        _check_classifier(local, classifier)
        if body is not None:
            _check(local, body, classifier)
        definition = _make_def(local, name, classifier, body)
        if ctx.params:
            definition = _generalize(local, definition)
    except CdleError as e:
        raise e.locate(definition=name)

    extended = ctx.define(definition)
    if ctx.params:
        args = [Var(p.name) for p in ctx.params]
        extended = replace(extended, aliases={**extended.aliases,
                                              name: apply_parameters(definition, args)})
    return extended


def enter_module(ctx: Context, params: Sequence[Tuple[str, Expr]]) -> Context:
    """Bring module parameters into scope as locals"""
    for name, classifier in params:
        if name in ctx:
            raise DuplicateDefinition(f"module parameter {name} shadows a definition",
                                      definition=name)
        classifier = elaborate(ctx, classifier)
        _check_classifier(ctx, classifier)
        entry = _entry(name, classifier)
        ctx = replace(ctx.extend(entry), params=ctx.params + (entry,))
    return ctx


def leave_module(ctx: Context) -> Context:
    """Drop locals, parameters and aliases; keep the checked definitions"""
    return replace(ctx, locals=(), params=(), aliases={}, current=None)


def import_instance(ctx: Context, names: Iterable[str], args: Sequence[Expr]) -> Context:
    """
    Make names stand for their definitions applied to args

    Args:
        ctx: Context that already holds the generalized definitions
        names: Definitions of one parametrized module
        args: One argument per module parameter

    Raises:
        KindMismatch: If the argument count is wrong
        KernelError: If an argument does not fit its parameter
    """
    args = [elaborate(ctx, arg) for arg in args]
    aliases = dict(ctx.aliases)
    for name in names:
        definition = ctx.globals[name]
        if len(args) != len(definition.params):
            raise KindMismatch(f"{name} takes {len(definition.params)} module arguments, "
                               f"got {len(args)}", definition=name)
        reference = apply_parameters(definition, args)
        _infer(ctx, reference)
        aliases[name] = reference
    return replace(ctx, aliases=aliases)


def empty_context(config: Optional[EvalConfig] = None) -> Context:
    return Context(config=config or EvalConfig())
