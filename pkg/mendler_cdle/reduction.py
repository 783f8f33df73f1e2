#!/usr/bin/env python3
"""
Normal-order reduction of pure lambda terms
Fuel-bounded β (optionally βη) normalization with exact step counts
"""

import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .config import EvalConfig
from .syntax import (
    PureApp, PureLam, PureTerm, PureVar, alpha_eq, pure_apps, subst_pure,
)

logger = logging.getLogger(__name__)

# Numerals at the top of the benchmark range nest a few thousand nodes deep
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


@dataclass(frozen=True)
class ReductionStats:
    """Outcome of normalize; normal_form is the input term when exhausted"""
    normal_form: PureTerm
    beta_steps: int
    eta_steps: int
    fuel_used: int
    exhausted: bool

    def to_dict(self) -> dict:
        return {
            'normal_form': str(self.normal_form),
            'beta_steps': self.beta_steps,
            'eta_steps': self.eta_steps,
            'fuel_used': self.fuel_used,
            'exhausted': self.exhausted,
        }


class _OutOfFuel(Exception):
    pass


def _spine(t: PureTerm) -> Tuple[PureTerm, List[PureTerm]]:
    args = []
    while isinstance(t, PureApp):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def is_eta_redex(t: PureTerm) -> bool:
    """λx. f x with x not free in f"""
    return (isinstance(t, PureLam) and isinstance(t.body, PureApp)
            and isinstance(t.body.arg, PureVar) and t.body.arg.name == t.name
            and t.name not in t.body.fun.fv)


def _step_beta(t: PureTerm) -> Optional[PureTerm]:
    if isinstance(t, PureVar):
        return None
    if isinstance(t, PureLam):
        body = _step_beta(t.body)
        return None if body is None else PureLam(t.name, body)
    if isinstance(t.fun, PureLam):
        return subst_pure(t.fun.body, t.fun.name, t.arg)
    fun = _step_beta(t.fun)
    if fun is not None:
        return PureApp(fun, t.arg)
    arg = _step_beta(t.arg)
    return None if arg is None else PureApp(t.fun, arg)


def _step_eta(t: PureTerm) -> Optional[PureTerm]:
    if is_eta_redex(t):
        return t.body.fun
    if isinstance(t, PureVar):
        return None
    if isinstance(t, PureLam):
        body = _step_eta(t.body)
        return None if body is None else PureLam(t.name, body)
    fun = _step_eta(t.fun)
    if fun is not None:
        return PureApp(fun, t.arg)
    arg = _step_eta(t.arg)
    return None if arg is None else PureApp(t.fun, arg)


def step(t: PureTerm, cfg: Optional[EvalConfig] = None) -> Optional[PureTerm]:
    """
    Contract one redex: the leftmost-outermost β-redex, or when there is
    none and η is enabled, the leftmost-outermost η-redex

    Args:
        t: Pure term
        cfg: Evaluation settings (only eta_enabled is consulted)

    Returns:
        The reduct, or None when t is normal under cfg
    """
    cfg = cfg or EvalConfig()
    reduct = _step_beta(t)
    if reduct is None and cfg.eta_enabled:
        reduct = _step_eta(t)
    return reduct


class _Normalizer:
    """Head reduction first, then arguments left to right and under binders"""

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.beta = 0
        self.eta = 0

    def _spend(self):
        if self.beta + self.eta >= self.fuel:
            raise _OutOfFuel()

    def beta_normal(self, t: PureTerm) -> PureTerm:
        while True:
            head, args = _spine(t)
            if isinstance(head, PureLam) and args:
                self._spend()
                self.beta += 1
                t = pure_apps(subst_pure(head.body, head.name, args[0]), *args[1:])
                continue
            if isinstance(head, PureLam):
                return PureLam(head.name, self.beta_normal(head.body))
            return pure_apps(head, *[self.beta_normal(a) for a in args])

    def eta_normal(self, t: PureTerm) -> PureTerm:
        if isinstance(t, PureVar):
            return t
        if isinstance(t, PureApp):
            return PureApp(self.eta_normal(t.fun), self.eta_normal(t.arg))
        reduced = PureLam(t.name, self.eta_normal(t.body))
        if is_eta_redex(reduced):
            self._spend()
            self.eta += 1
            return reduced.body.fun
        return reduced


def normalize(t: PureTerm, cfg: Optional[EvalConfig] = None) -> ReductionStats:
    """
    Normalize under normal order until no redex remains or fuel runs out

    β-steps are counted exactly as leftmost-outermost contraction would count
    them. With η enabled the β-normal form is then η-contracted.

    Args:
        t: Pure term
        cfg: Evaluation settings; defaults to EvalConfig()

    Returns:
        ReductionStats; exhausted=True means fuel ran out

    Example:
        >>> normalize(PureApp(PureLam('x', PureVar('x')), PureVar('y'))).beta_steps
        1
    """
    cfg = cfg or EvalConfig()
    machine = _Normalizer(cfg.fuel)
    try:
        result = machine.beta_normal(t)
        if cfg.eta_enabled:
            result = machine.eta_normal(result)
    except _OutOfFuel:
        logger.debug(f"fuel exhausted after {machine.beta} β and {machine.eta} η steps")
        return ReductionStats(t, machine.beta, machine.eta, machine.beta + machine.eta, True)
    used = machine.beta + machine.eta
    return ReductionStats(result, machine.beta, machine.eta, used, False)


def normalize_by_steps(t: PureTerm, cfg: Optional[EvalConfig] = None) -> ReductionStats:
    """Normalize by iterating step; slow, used to cross-check normalize"""
    cfg = cfg or EvalConfig()
    beta = eta = 0
    current = t
    while beta + eta < cfg.fuel:
        reduct = _step_beta(current)
        if reduct is not None:
            beta += 1
        elif cfg.eta_enabled:
            reduct = _step_eta(current)
            if reduct is not None:
                eta += 1
        if reduct is None:
            return ReductionStats(current, beta, eta, beta + eta, False)
        current = reduct
    if step(current, cfg) is None:
        return ReductionStats(current, beta, eta, beta + eta, False)
    return ReductionStats(t, beta, eta, beta + eta, True)


@dataclass(frozen=True)
class Conversion:
    """Answer of beta_eq; diverged says the answer is only conservative"""
    equal: bool
    diverged: bool = False

    def __bool__(self) -> bool:
        return self.equal


def beta_eq(a: PureTerm, b: PureTerm, cfg: Optional[EvalConfig] = None) -> Conversion:
    """
    Convertibility of two pure terms (βη when η is enabled)

    Args:
        a: Pure term
        b: Pure term
        cfg: Evaluation settings, fuel applies to each side separately

    Returns:
        A Conversion that is truthy iff both sides normalize within fuel to
        alpha-equivalent normal forms; diverged is set when fuel ran out
    """
    if alpha_eq(a, b):
        return Conversion(True)
    left = normalize(a, cfg)
    right = normalize(b, cfg)
    if left.exhausted or right.exhausted:
        return Conversion(False, diverged=True)
    return Conversion(alpha_eq(left.normal_form, right.normal_form))
