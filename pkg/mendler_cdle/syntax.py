#!/usr/bin/env python3
"""
Syntax for the CDLE kernel
Annotated expressions (terms, types and kinds share one tree), pure lambda
terms, binding machinery and the erasure function
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple, Union


ANONYMOUS = "_"


# ---------------------------------------------------------------------------
# Pure lambda terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PureVar:
    """Variable occurrence in an erased term"""
    name: str
    fv: FrozenSet[str] = field(init=False, compare=False, repr=False)
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'fv', frozenset((self.name,)))
        object.__setattr__(self, 'size', 1)

    def __str__(self) -> str:
        return show_pure(self)


@dataclass(frozen=True)
class PureLam:
    """Abstraction in an erased term"""
    name: str
    body: 'PureTerm'
    fv: FrozenSet[str] = field(init=False, compare=False, repr=False)
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'fv', self.body.fv - {self.name})
        object.__setattr__(self, 'size', 1 + self.body.size)

    def __str__(self) -> str:
        return show_pure(self)


@dataclass(frozen=True)
class PureApp:
    """Application in an erased term"""
    fun: 'PureTerm'
    arg: 'PureTerm'
    fv: FrozenSet[str] = field(init=False, compare=False, repr=False)
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'fv', self.fun.fv | self.arg.fv)
        object.__setattr__(self, 'size', 1 + self.fun.size + self.arg.size)

    def __str__(self) -> str:
        return show_pure(self)


PureTerm = Union[PureVar, PureLam, PureApp]

IDENTITY = PureLam("x", PureVar("x"))


def pure_apps(head: PureTerm, *args: PureTerm) -> PureTerm:
    """Left-nested application of head to args"""
    for arg in args:
        head = PureApp(head, arg)
    return head


def pure_lams(names: Iterable[str], body: PureTerm) -> PureTerm:
    """Nest abstractions, first name outermost"""
    for name in reversed(list(names)):
        body = PureLam(name, body)
    return body


def free_vars(t: PureTerm) -> FrozenSet[str]:
    """
    Exact free-variable set of a pure term

    Example:
        >>> sorted(free_vars(PureApp(PureVar('x'), PureVar('y'))))
        ['x', 'y']
    """
    return t.fv


def size(t: PureTerm) -> int:
    """Number of AST nodes: one per variable, abstraction and application"""
    return t.size


def fresh_name(name: str, avoid: Iterable[str]) -> str:
    """
    Prime a name until it is clear of avoid

    Args:
        name: Preferred name
        avoid: Names that are taken

    Returns:
        name itself when free, otherwise name with enough trailing primes
    """
    taken = set(avoid)
    if name not in taken and name != ANONYMOUS:
        return name
    base = "x" if name == ANONYMOUS else name
    candidate = base + "'"
    while candidate in taken:
        candidate += "'"
    return candidate


def subst_pure(t: PureTerm, x: str, s: PureTerm) -> PureTerm:
    """
    Capture-avoiding substitution [s/x]t on pure terms

    Example:
        >>> str(subst_pure(PureLam('y', PureApp(PureVar('x'), PureVar('y'))), 'x', PureVar('y')))
        "λy'. y y'"
    """
    return subst_pure_many(t, {x: s})


def subst_pure_many(t: PureTerm, mapping: Mapping[str, PureTerm]) -> PureTerm:
    """Simultaneous capture-avoiding substitution on pure terms"""
    live = {k: v for k, v in mapping.items() if k in t.fv}
    if not live:
        return t
    if isinstance(t, PureVar):
        return live[t.name]
    if isinstance(t, PureApp):
        return PureApp(subst_pure_many(t.fun, live), subst_pure_many(t.arg, live))
    inner = {k: v for k, v in live.items() if k != t.name}
    if not inner:
        return t
    incoming = frozenset().union(*(v.fv for v in inner.values()))
    if t.name in incoming:
        renamed = fresh_name(t.name, incoming | t.body.fv)
        body = subst_pure_many(t.body, {**inner, t.name: PureVar(renamed)})
        return PureLam(renamed, body)
    return PureLam(t.name, subst_pure_many(t.body, inner))


def alpha_eq(a: PureTerm, b: PureTerm) -> bool:
    """True iff a and b differ only in the names of bound variables"""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: PureTerm, b: PureTerm, env_a: Dict[str, int], env_b: Dict[str, int],
           depth: int) -> bool:
    while True:
        if a.size != b.size:
            return False
        if isinstance(a, PureVar) and isinstance(b, PureVar):
            level_a = env_a.get(a.name)
            level_b = env_b.get(b.name)
            if level_a is None and level_b is None:
                return a.name == b.name
            return level_a == level_b
        if isinstance(a, PureLam) and isinstance(b, PureLam):
            env_a = {**env_a, a.name: depth}
            env_b = {**env_b, b.name: depth}
            a, b, depth = a.body, b.body, depth + 1
            continue
        if isinstance(a, PureApp) and isinstance(b, PureApp):
            if not _alpha(a.arg, b.arg, env_a, env_b, depth):
                return False
            a, b = a.fun, b.fun
            continue
        return False


def show_pure(t: PureTerm) -> str:
    """Render a pure term with minimal parentheses, e.g. 'λx. x (λy. y)'"""
    if isinstance(t, PureVar):
        return t.name
    if isinstance(t, PureLam):
        return f"λ{t.name}. {show_pure(t.body)}"
    fun = show_pure(t.fun)
    if isinstance(t.fun, PureLam):
        fun = f"({fun})"
    arg = show_pure(t.arg)
    if not isinstance(t.arg, PureVar):
        arg = f"({arg})"
    return f"{fun} {arg}"


# ---------------------------------------------------------------------------
# Annotated expressions
# ---------------------------------------------------------------------------
#
# One tree carries terms, types and kinds. The kernel decides the level of a
# node from the context, so `Lam` is both a term abstraction and a type-level
# abstraction, and `App` is both term application and a type applied to a
# term index.

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Star:
    pass


@dataclass(frozen=True)
class Pi:
    """Explicit product `Π x : A. B`; arrows use the anonymous name"""
    name: str
    domain: 'Expr'
    body: 'Expr'


@dataclass(frozen=True)
class All:
    """Implicit product `∀ x : A. B`"""
    name: str
    domain: 'Expr'
    body: 'Expr'


@dataclass(frozen=True)
class Iota:
    """Dependent intersection `ι x : A. B`"""
    name: str
    domain: 'Expr'
    body: 'Expr'


@dataclass(frozen=True)
class Eq:
    """Heterogeneous equation `lhs ≃ rhs` between terms"""
    lhs: 'Expr'
    rhs: 'Expr'


@dataclass(frozen=True)
class Lam:
    """`λ x. t` or `λ x : A. t`"""
    name: str
    annot: Optional['Expr']
    body: 'Expr'


@dataclass(frozen=True)
class ErasedLam:
    """`Λ x. t`, abstraction over an erased term or a type"""
    name: str
    annot: Optional['Expr']
    body: 'Expr'


@dataclass(frozen=True)
class App:
    fun: 'Expr'
    arg: 'Expr'


@dataclass(frozen=True)
class ErasedApp:
    """`t -t'`"""
    fun: 'Expr'
    arg: 'Expr'


@dataclass(frozen=True)
class TypeApp:
    """`t · T`, also type-to-type application `F · X`"""
    fun: 'Expr'
    arg: 'Expr'


@dataclass(frozen=True)
class Beta:
    pass


@dataclass(frozen=True)
class Rho:
    """
    Rewrite `ρ p - t` (or `ρ⁻ p - t` when reverse) with an optional motive

    The motive `@ x. T` binds x in T.
    """
    proof: 'Expr'
    body: 'Expr'
    motive: Optional[Tuple[str, 'Expr']] = None
    reverse: bool = False


@dataclass(frozen=True)
class Pair:
    """Intersection introduction `[t1, t2 {p}]`; proof is None when omitted"""
    first: 'Expr'
    second: 'Expr'
    proof: Optional['Expr']


@dataclass(frozen=True)
class Proj1:
    arg: 'Expr'


@dataclass(frozen=True)
class Proj2:
    arg: 'Expr'


@dataclass(frozen=True)
class Let:
    """`let x ◂ C = v in b`"""
    name: str
    classifier: 'Expr'
    value: 'Expr'
    body: 'Expr'


Expr = Union[Var, Star, Pi, All, Iota, Eq, Lam, ErasedLam, App, ErasedApp, TypeApp,
             Beta, Rho, Pair, Proj1, Proj2, Let]

BINDERS = (Pi, All, Iota, Lam, ErasedLam)


def arrow(domain: Expr, codomain: Expr) -> Pi:
    """Non-dependent product `domain ➔ codomain`"""
    return Pi(ANONYMOUS, domain, codomain)


def is_kind(e: Expr) -> bool:
    """Kinds are ★ and explicit products ending in ★"""
    while isinstance(e, Pi):
        e = e.body
    return isinstance(e, Star)


def _binder_domain(e) -> Optional[Expr]:
    return e.domain if isinstance(e, (Pi, All, Iota)) else e.annot


def _rebuild_binder(e, name: str, domain: Optional[Expr], body: Expr):
    return type(e)(name, domain, body)


def expr_free_vars(e: Expr) -> FrozenSet[str]:
    """Free names of an annotated expression, at every level"""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, (Star, Beta)):
        return frozenset()
    if isinstance(e, BINDERS):
        domain = _binder_domain(e)
        outer = expr_free_vars(domain) if domain is not None else frozenset()
        return outer | (expr_free_vars(e.body) - {e.name})
    if isinstance(e, Eq):
        return expr_free_vars(e.lhs) | expr_free_vars(e.rhs)
    if isinstance(e, (App, ErasedApp, TypeApp)):
        return expr_free_vars(e.fun) | expr_free_vars(e.arg)
    if isinstance(e, Rho):
        names = expr_free_vars(e.proof) | expr_free_vars(e.body)
        if e.motive is not None:
            names |= expr_free_vars(e.motive[1]) - {e.motive[0]}
        return names
    if isinstance(e, Pair):
        names = expr_free_vars(e.first) | expr_free_vars(e.second)
        return names | expr_free_vars(e.proof) if e.proof is not None else names
    if isinstance(e, (Proj1, Proj2)):
        return expr_free_vars(e.arg)
    if isinstance(e, Let):
        return (expr_free_vars(e.classifier) | expr_free_vars(e.value)
                | (expr_free_vars(e.body) - {e.name}))
    raise TypeError(f"not an expression: {e!r}")


def subst(e: Expr, x: str, s: Expr) -> Expr:
    """
    Capture-avoiding substitution [s/x]e on annotated expressions

    Used for ∀/Π elimination, intersection projections and ρ motives.

    Example:
        >>> subst(App(Var('Q'), Var('x')), 'x', Var('zero'))
        App(fun=Var(name='Q'), arg=Var(name='zero'))
    """
    return subst_many(e, {x: s})


def subst_many(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Simultaneous capture-avoiding substitution on annotated expressions"""
    if not mapping:
        return e
    return _subst(e, dict(mapping), _incoming(mapping))


def _incoming(mapping: Mapping[str, Expr]) -> FrozenSet[str]:
    return frozenset(itertools.chain.from_iterable(expr_free_vars(v) for v in mapping.values()))


def _under(name: str, body: Expr, mapping: Dict[str, Expr],
           incoming: FrozenSet[str]) -> Tuple[str, Expr]:
    inner = {k: v for k, v in mapping.items() if k != name}
    if not inner:
        return name, body
    if name in incoming and any(k in expr_free_vars(body) for k in inner):
        renamed = fresh_name(name, incoming | expr_free_vars(body) | set(inner))
        inner[name] = Var(renamed)
        return renamed, _subst(body, inner, incoming | {renamed})
    return name, _subst(body, inner, incoming)


def _subst(e: Expr, mapping: Dict[str, Expr], incoming: FrozenSet[str]) -> Expr:
    go = lambda sub: _subst(sub, mapping, incoming)  # noqa: E731
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, (Star, Beta)):
        return e
    if isinstance(e, BINDERS):
        domain = _binder_domain(e)
        domain = go(domain) if domain is not None else None
        name, body = _under(e.name, e.body, mapping, incoming)
        return _rebuild_binder(e, name, domain, body)
    if isinstance(e, Eq):
        return Eq(go(e.lhs), go(e.rhs))
    if isinstance(e, (App, ErasedApp, TypeApp)):
        return type(e)(go(e.fun), go(e.arg))
    if isinstance(e, Rho):
        motive = e.motive
        if motive is not None:
            motive = _under(motive[0], motive[1], mapping, incoming)
        return Rho(go(e.proof), go(e.body), motive, e.reverse)
    if isinstance(e, Pair):
        return Pair(go(e.first), go(e.second), go(e.proof) if e.proof is not None else None)
    if isinstance(e, (Proj1, Proj2)):
        return type(e)(go(e.arg))
    if isinstance(e, Let):
        name, body = _under(e.name, e.body, mapping, incoming)
        return Let(name, go(e.classifier), go(e.value), body)
    raise TypeError(f"not an expression: {e!r}")


def expr_alpha_eq(a: Expr, b: Expr) -> bool:
    """Alpha-equivalence on annotated expressions"""
    return _expr_alpha(a, b, {}, {}, 0)


def _expr_alpha(a: Expr, b: Expr, env_a: Dict[str, int], env_b: Dict[str, int],
                depth: int) -> bool:
    if type(a) is not type(b):
        return False
    same = lambda x, y: _expr_alpha(x, y, env_a, env_b, depth)  # noqa: E731

    def bound(name_a, body_a, name_b, body_b):
        return _expr_alpha(body_a, body_b, {**env_a, name_a: depth},
                           {**env_b, name_b: depth}, depth + 1)

    def optional(x, y):
        if x is None or y is None:
            return x is None and y is None
        return same(x, y)

    if isinstance(a, Var):
        level_a, level_b = env_a.get(a.name), env_b.get(b.name)
        if level_a is None and level_b is None:
            return a.name == b.name
        return level_a == level_b
    if isinstance(a, (Star, Beta)):
        return True
    if isinstance(a, BINDERS):
        return (optional(_binder_domain(a), _binder_domain(b))
                and bound(a.name, a.body, b.name, b.body))
    if isinstance(a, Eq):
        return same(a.lhs, b.lhs) and same(a.rhs, b.rhs)
    if isinstance(a, (App, ErasedApp, TypeApp)):
        return same(a.fun, b.fun) and same(a.arg, b.arg)
    if isinstance(a, Rho):
        if a.reverse != b.reverse or (a.motive is None) != (b.motive is None):
            return False
        if a.motive is not None and not bound(a.motive[0], a.motive[1], *b.motive):
            return False
        return same(a.proof, b.proof) and same(a.body, b.body)
    if isinstance(a, Pair):
        return same(a.first, b.first) and same(a.second, b.second) and optional(a.proof, b.proof)
    if isinstance(a, (Proj1, Proj2)):
        return same(a.arg, b.arg)
    if isinstance(a, Let):
        return (same(a.classifier, b.classifier) and same(a.value, b.value)
                and bound(a.name, a.body, b.name, b.body))
    return False


# ---------------------------------------------------------------------------
# Erasure
# ---------------------------------------------------------------------------

def erase(e: Expr) -> PureTerm:
    """
    Erase an annotated term to its pure lambda term

    Λ-abstractions, erased and type arguments, ρ, intersection proofs and
    projections vanish; β becomes λx. x; let substitutes its value.

    Args:
        e: Annotated term

    Returns:
        The unique erasure

    Raises:
        TypeError: If e is a type or kind former (★, Π, ∀, ι, ≃)

    Example:
        >>> str(erase(Pair(Var('a'), Var('b'), Beta())))
        'a'
    """
    if isinstance(e, Var):
        return PureVar(e.name)
    if isinstance(e, Lam):
        return PureLam(e.name, erase(e.body))
    if isinstance(e, App):
        return PureApp(erase(e.fun), erase(e.arg))
    if isinstance(e, (ErasedLam, Rho)):
        return erase(e.body)
    if isinstance(e, (ErasedApp, TypeApp)):
        return erase(e.fun)
    if isinstance(e, Beta):
        return IDENTITY
    if isinstance(e, Pair):
        return erase(e.first)
    if isinstance(e, (Proj1, Proj2)):
        return erase(e.arg)
    if isinstance(e, Let):
        erased = erase(e.body)
        if e.name not in erased.fv:
            return erased
        return subst_pure(erased, e.name, erase(e.value))
    raise TypeError(f"a {type(e).__name__} is not a term and has no erasure")
