"""
Mendler CDLE
============

A small type checker for the Calculus of Dependent Lambda Eliminations
(CDLE), the corpus of Mendler-style encodings it checks, and benchmarks that
count β-steps and numeral sizes for Church, Parigot and Mendler numerals.

Checking the shipped corpus:
    $ python -m mendler_cdle corpus

Basic Usage:
    >>> from mendler_cdle import Corpus, normalize
    >>> corpus = Corpus()
    >>> report = corpus.check()
    >>> report.ok
    True
    >>> str(normalize(corpus.erasure('zero')).normal_form)
    'λalg. alg (λf. f alg) (λi. λj. i (λx. x))'

Features:
    - Bidirectional checker with erasure-based definitional equality
    - Dependent intersections, implicit products and equality with β and ρ
    - Parametrized modules and quarantined postulates
    - Normal-order reduction with exact β/η step counts
    - Growth classification of benchmark series

License: MIT
"""

__version__ = "1.0.0"
__license__ = "MIT"

from .syntax import PureApp, PureLam, PureTerm, PureVar, alpha_eq, erase, size
from .reduction import ReductionStats, beta_eq, normalize, step
from .kernel import (
    Context, Def, check_definition, check_term, def_eq, empty_context, infer_term,
)
from .parser import load_module, parse_expr, parse_module, parse_pure, print_module
from .corpus import Corpus, CorpusManifest, CorpusReport, check_corpus
from .bench import (
    BenchReport, Encoding, emit_report, fit_growth, measure_pred, measure_size,
    mk_church, mk_mendler, mk_parigot, run_bench,
)
from .config import BenchConfig, ConfigManager, EvalConfig
from .errors import CdleError, CorpusError, KernelError, ParseError

__all__ = [
    'PureApp',
    'PureLam',
    'PureTerm',
    'PureVar',
    'alpha_eq',
    'erase',
    'size',
    'ReductionStats',
    'beta_eq',
    'normalize',
    'step',
    'Context',
    'Def',
    'check_definition',
    'check_term',
    'def_eq',
    'empty_context',
    'infer_term',
    'load_module',
    'parse_expr',
    'parse_module',
    'parse_pure',
    'print_module',
    'Corpus',
    'CorpusManifest',
    'CorpusReport',
    'check_corpus',
    'BenchReport',
    'Encoding',
    'emit_report',
    'fit_growth',
    'measure_pred',
    'measure_size',
    'mk_church',
    'mk_mendler',
    'mk_parigot',
    'run_bench',
    'BenchConfig',
    'ConfigManager',
    'EvalConfig',
    'CdleError',
    'CorpusError',
    'KernelError',
    'ParseError',
]
