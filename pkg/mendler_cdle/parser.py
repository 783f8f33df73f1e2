#!/usr/bin/env python3
"""
Parser and pretty-printer for .mcd source files
Reads the display notation of the corpus (◂, ➔, λ, Λ, Π, ∀, ι, ≃, β, ρ)
and its ASCII spellings into syntax trees, and prints them back
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken
from lark.lexer import PatternStr

from .errors import ParseError
from .syntax import (
    ANONYMOUS, All, App, Beta, Eq, ErasedApp, ErasedLam, Expr, Iota, Lam, Let, Pair, Pi,
    Proj1, Proj2, PureTerm, Rho, Star, TypeApp, Var, erase,
)

logger = logging.getLogger(__name__)

GRAMMAR = r'''
start: pragma* module_header? import_stmt* definition*

pragma: PRAGMA
module_header: "module" NAME param* "."
param: "(" NAME ":" expr ")"
import_stmt: "import" NAME atom* "."
definition: NAME _ANNOT expr ["=" expr] "."

?expr: eqn
     | eqn _ARROW expr                                  -> arrow
     | binder

?binder: _LAM names [":" expr] "." expr                 -> lam
       | _BIGLAM names [":" expr] "." expr              -> erased_lam
       | _PI names ":" expr "." expr                    -> pi
       | _FORALL names ":" expr "." expr                -> forall
       | _IOTA names ":" expr "." expr                  -> iota
       | _RHO atom "-" expr                             -> rho
       | _RHO_REV atom "-" expr                         -> rho_rev
       | _RHO atom "@" NAME "." motive "-" expr         -> rho_motive
       | _RHO_REV atom "@" NAME "." motive "-" expr     -> rho_rev_motive
       | "let" NAME _ANNOT expr "=" expr "in" expr      -> let

names: NAME+

?eqn: app
    | app _EQUIV app                                    -> equation

?app: atom
    | app atom                                          -> app
    | app "-" atom                                      -> erased_app
    | app _TAPP atom                                    -> type_app

// erased arguments in a motive need parentheses; its "-" ends it
?motive: motive_app
       | motive_app _EQUIV motive_app                   -> equation

?motive_app: atom
           | motive_app atom                            -> app
           | motive_app _TAPP atom                      -> type_app

?atom: NAME                                             -> var
     | _STAR                                            -> star
     | _BETA                                            -> beta
     | "(" expr ")"
     | "[" expr "," expr ["{" expr "}"] "]"             -> pair
     | atom ".1"                                        -> proj1
     | atom ".2"                                        -> proj2

_ANNOT: "◂" | "|>"
_ARROW: "➔" | "->" | "→"
_EQUIV: "≃" | "~="
_TAPP: "·" | "⋅" | "^"
_STAR: "★" | "*"
_LAM: "λ" | "\\"
_BIGLAM: "Λ" | "/\\"
_PI: "Π" | "!"
_FORALL.2: "∀" | /forall(?![\w'])/
_IOTA.2: "ι" | /iota(?![\w'])/
_BETA.2: "β" | /beta(?![\w'])/
_RHO.2: "ρ" | /rho(?![\w'])/
_RHO_REV.3: "ρ⁻" | /rho'(?![\w'])/

PRAGMA: /#[A-Za-z_]+=(on|off)/
NAME: /[a-zA-Z_αγ-θκμ-πς-ωΑ-ΚΜ-ΟΡ-Ω][a-zA-Z0-9_'₀-₉Α-Ωα-ω]*/
COMMENT: /--[^\n]*/

%ignore COMMENT
%ignore /\s+/
'''

# Display forms for terminals that have no literal pattern
_TERMINAL_NAMES = {
    'NAME': 'name', 'PRAGMA': 'pragma', '$END': 'end of input',
    '_ANNOT': '◂', '_ARROW': '➔', '_EQUIV': '≃', '_TAPP': '·', '_STAR': '★',
    '_LAM': 'λ', '_BIGLAM': 'Λ', '_PI': 'Π', '_FORALL': '∀', '_IOTA': 'ι',
    '_BETA': 'β', '_RHO': 'ρ', '_RHO_REV': 'ρ⁻',
}


# ---------------------------------------------------------------------------
# Source modules
# ---------------------------------------------------------------------------

@dataclass
class Definition:
    """One `name ◂ classifier = body.` item; body is None for a postulate"""
    name: str
    classifier: Expr
    body: Optional[Expr] = None
    line: int = field(default=0, compare=False)

    @property
    def postulate(self) -> bool:
        return self.body is None


@dataclass
class Import:
    """`import name args.`; args instantiate the module's parameters"""
    module: str
    args: List[Expr] = field(default_factory=list)


@dataclass
class SourceModule:
    """
    A parsed .mcd file

    Attributes:
        path: File the module was read from, if any
        pragmas: Switches such as eta and postulate
        params: Module parameters (name, classifier) from the header
        imports: Imported modules in order
        defs: Definitions in order
    """
    path: Optional[str] = field(default=None, compare=False)
    pragmas: Dict[str, bool] = field(default_factory=dict)
    params: List[Tuple[str, Expr]] = field(default_factory=list)
    imports: List[Import] = field(default_factory=list)
    defs: List[Definition] = field(default_factory=list)

    @property
    def name(self) -> str:
        return Path(self.path).stem if self.path else "<input>"

    def pragma(self, key: str) -> bool:
        return self.pragmas.get(key, False)

    def definition(self, name: str) -> Definition:
        for d in self.defs:
            if d.name == name:
                return d
        raise KeyError(f"{self.name} has no definition named {name}")


def _nest(node, names: Sequence[str], domain: Optional[Expr], body: Expr) -> Expr:
    for name in reversed(names):
        body = node(name, domain, body)
    return body


class _ToSyntax(Transformer):
    """Builds syntax trees while the LALR parser runs"""

    def start(self, items):
        module = SourceModule()
        for item in items:
            if isinstance(item, tuple) and item[0] == 'pragma':
                module.pragmas[item[1]] = item[2]
            elif isinstance(item, list):
                module.params = item
            elif isinstance(item, Import):
                module.imports.append(item)
            else:
                module.defs.append(item)
        return module

    def pragma(self, a):
        key, value = str(a[0])[1:].split('=')
        return ('pragma', key, value == 'on')

    def module_header(self, a): return list(a[1:])
    def param(self, a): return (str(a[0]), a[1])
    def import_stmt(self, a): return Import(str(a[0]), list(a[1:]))

    def definition(self, a):
        return Definition(str(a[0]), a[1], a[2], line=getattr(a[0], 'line', 0))

    def names(self, a): return [str(t) for t in a]
    def lam(self, a): return _nest(Lam, a[0], a[1], a[2])
    def erased_lam(self, a): return _nest(ErasedLam, a[0], a[1], a[2])
    def pi(self, a): return _nest(Pi, a[0], a[1], a[2])
    def forall(self, a): return _nest(All, a[0], a[1], a[2])
    def iota(self, a): return _nest(Iota, a[0], a[1], a[2])
    def rho(self, a): return Rho(a[0], a[1])
    def rho_rev(self, a): return Rho(a[0], a[1], reverse=True)
    def rho_motive(self, a): return Rho(a[0], a[3], (str(a[1]), a[2]))
    def rho_rev_motive(self, a): return Rho(a[0], a[3], (str(a[1]), a[2]), reverse=True)
    def let(self, a): return Let(str(a[0]), a[1], a[2], a[3])
    def arrow(self, a): return Pi(ANONYMOUS, a[0], a[1])
    def equation(self, a): return Eq(a[0], a[1])
    def app(self, a): return App(a[0], a[1])
    def erased_app(self, a): return ErasedApp(a[0], a[1])
    def type_app(self, a): return TypeApp(a[0], a[1])
    def var(self, a): return Var(str(a[0]))
    def star(self, a): return Star()
    def beta(self, a): return Beta()
    def pair(self, a): return Pair(a[0], a[1], a[2])
    def proj1(self, a): return Proj1(a[0])
    def proj2(self, a): return Proj2(a[0])


class Parser:
    """LALR parser for modules and standalone expressions"""

    def __init__(self):
        self._lark = Lark(GRAMMAR, parser='lalr', start=['start', 'expr'],
                          transformer=_ToSyntax(), maybe_placeholders=True)

    def _display(self, terminals) -> List[str]:
        shown = []
        for name in terminals:
            if name in _TERMINAL_NAMES:
                shown.append(_TERMINAL_NAMES[name])
                continue
            try:
                pattern = self._lark.get_terminal(name).pattern
            except KeyError:
                shown.append(name)
                continue
            shown.append(pattern.value if isinstance(pattern, PatternStr) else name)
        return shown

    def parse(self, text: str, start: str = 'start', file: Optional[str] = None):
        try:
            return self._lark.parse(text, start=start)
        except UnexpectedInput as e:
            line, column = e.line, e.column
            if isinstance(e, UnexpectedEOF) or line is None or line < 0:
                line = text.count('\n') + 1
                column = len(text) - text.rfind('\n')
            if isinstance(e, UnexpectedToken):
                found = 'end of input' if e.token.type == '$END' else repr(str(e.token))
                expected = self._display(e.expected)
            elif isinstance(e, UnexpectedCharacters):
                found = repr(e.char)
                expected = self._display(e.allowed or ())
            else:
                found = 'end of input'
                expected = self._display(getattr(e, 'expected', ()) or ())
            raise ParseError(f"unexpected {found} at line {line}, column {column}",
                             line, column, expected, file) from None


_parser: Optional[Parser] = None


def get_parser() -> Parser:
    """The shared parser (building the LALR tables takes a moment)"""
    global _parser
    if _parser is None:
        logger.debug("building LALR tables")
        _parser = Parser()
    return _parser


def parse_module(text: str, path: Optional[Union[str, Path]] = None) -> SourceModule:
    """
    Parse the text of a .mcd file

    Args:
        text: UTF-8 source; LF or CRLF line endings
        path: Where the text came from, used in diagnostics

    Returns:
        SourceModule with pragmas, parameters, imports and definitions

    Raises:
        ParseError: With line, column and the tokens that would have fit

    Example:
        >>> parse_module("id ◂ ∀ X : ★. X ➔ X = Λ X. λ x. x.").defs[0].name
        'id'
    """
    file = str(path) if path is not None else None
    module = get_parser().parse(text, 'start', file)
    module.path = file
    return module


def load_module(path: Union[str, Path]) -> SourceModule:
    """Read and parse a .mcd file"""
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        return parse_module(f.read(), path)


def parse_expr(text: str) -> Expr:
    """Parse a single expression"""
    return get_parser().parse(text, 'expr')


def parse_pure(text: str) -> PureTerm:
    """Parse an expression and erase it"""
    return erase(parse_expr(text))


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

# Precedence levels: a form printed where a higher level is required is
# parenthesized
EXPR, EQN, APP, ATOM = range(4)


def show_expr(e: Expr) -> str:
    """
    Print an expression with the fewest parentheses that parse back to it

    Example:
        >>> show_expr(Beta())
        'β'
    """
    return _show(e, EXPR)


def _show(e: Expr, level: int) -> str:
    text, own = _render(e)
    return f"({text})" if own < level else text


def _binder(symbol: str, name: str, domain: Optional[Expr], body: Expr) -> str:
    head = f"{symbol} {name}" if domain is None else f"{symbol} {name} : {_show(domain, EXPR)}"
    return f"{head}. {_show(body, EXPR)}"


def _render(e: Expr) -> Tuple[str, int]:
    if isinstance(e, Var):
        return e.name, ATOM
    if isinstance(e, Star):
        return "★", ATOM
    if isinstance(e, Beta):
        return "β", ATOM
    if isinstance(e, Pi) and e.name == ANONYMOUS:
        return f"{_show(e.domain, EQN)} ➔ {_show(e.body, EXPR)}", EXPR
    if isinstance(e, (Pi, All, Iota)):
        symbol = {Pi: "Π", All: "∀", Iota: "ι"}[type(e)]
        return _binder(symbol, e.name, e.domain, e.body), EXPR
    if isinstance(e, (Lam, ErasedLam)):
        return _binder("λ" if isinstance(e, Lam) else "Λ", e.name, e.annot, e.body), EXPR
    if isinstance(e, Eq):
        return f"{_show(e.lhs, APP)} ≃ {_show(e.rhs, APP)}", EQN
    if isinstance(e, App):
        return f"{_show(e.fun, APP)} {_show(e.arg, ATOM)}", APP
    if isinstance(e, ErasedApp):
        return f"{_show(e.fun, APP)} -{_show(e.arg, ATOM)}", APP
    if isinstance(e, TypeApp):
        return f"{_show(e.fun, APP)} · {_show(e.arg, ATOM)}", APP
    if isinstance(e, (Proj1, Proj2)):
        return f"{_show(e.arg, ATOM)}.{1 if isinstance(e, Proj1) else 2}", ATOM
    if isinstance(e, Pair):
        proof = "" if e.proof is None else f" {{{_show(e.proof, EXPR)}}}"
        return f"[{_show(e.first, EXPR)}, {_show(e.second, EXPR)}{proof}]", ATOM
    if isinstance(e, Rho):
        symbol = "ρ⁻" if e.reverse else "ρ"
        motive = ""
        if e.motive is not None:
            motive = f" @ {e.motive[0]}. {_show(e.motive[1], ATOM)}"
        return f"{symbol} {_show(e.proof, ATOM)}{motive} - {_show(e.body, EXPR)}", EXPR
    if isinstance(e, Let):
        return (f"let {e.name} ◂ {_show(e.classifier, EXPR)} = {_show(e.value, EXPR)} "
                f"in {_show(e.body, EXPR)}"), EXPR
    raise TypeError(f"not an expression: {e!r}")


def show_definition(d: Definition) -> str:
    head = f"{d.name} ◂ {show_expr(d.classifier)}"
    if d.body is None:
        return head + "."
    body = show_expr(d.body)
    if len(head) + len(body) > 76:
        return f"{head}\n  = {body}."
    return f"{head} = {body}."


def print_module(module: SourceModule) -> str:
    """
    Print a module back to .mcd text

    parse_module(print_module(m)) equals m for every module m.
    """
    lines = [f"#{key}={'on' if on else 'off'}" for key, on in module.pragmas.items()]
    if module.params:
        params = " ".join(f"({name} : {show_expr(c)})" for name, c in module.params)
        lines.append(f"module _ {params}.")
    for item in module.imports:
        args = "".join(f" {_show(arg, ATOM)}" for arg in item.args)
        lines.append(f"import {item.module}{args}.")
    if lines:
        lines.append("")
    lines.extend(show_definition(d) + "\n" for d in module.defs)
    return "\n".join(lines).rstrip("\n") + "\n"
