#!/usr/bin/env python3
"""
Command-line entry point for mendler_cdle

    python -m mendler_cdle check FILE... [--def NAME]
    python -m mendler_cdle erase FILE NAME
    python -m mendler_cdle normalize [FILE] TARGET | --expr TEXT
    python -m mendler_cdle corpus [--keep-going] [--gaps]
    python -m mendler_cdle bench [--workers N]

Exit codes: 0 ok, 1 type error, 2 parse error or missing file,
3 fuel exhausted, 4 a benchmark series grew unlike expected
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .bench import FORMATS, emit_report, run_bench, standard_encodings
from .config import ConfigManager, Settings, env_flag
from .corpus import MANIFEST_NAME, Corpus, CorpusManifest, elaborate_gaps
from .errors import CdleError, CorpusError, FuelExhausted, KernelError
from .kernel import erase_in_context, infer_term
from .parser import parse_expr, parse_pure
from .reduction import normalize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_FUEL = 3
EXIT_GROWTH = 4

_RULE_EXIT = {'parse': EXIT_PARSE_ERROR, 'corpus': EXIT_PARSE_ERROR, 'fuel': EXIT_FUEL}


def exit_code(error: Exception) -> int:
    """Exit code for an error raised while running a subcommand"""
    if isinstance(error, FuelExhausted):
        return EXIT_FUEL
    if isinstance(error, KernelError):
        return EXIT_TYPE_ERROR
    if isinstance(error, CdleError):
        return _RULE_EXIT.get(error.rule, EXIT_TYPE_ERROR)
    return EXIT_PARSE_ERROR


def _record_exit(record: dict) -> int:
    return _RULE_EXIT.get(record.get('rule'), EXIT_TYPE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--fuel', type=int, help='reduction steps allowed per normalization')
    common.add_argument('--eta', action='store_true', default=None,
                        help='decide equality up to βη instead of β')
    common.add_argument('--format', choices=FORMATS, help='output format')
    common.add_argument('--config', type=Path, help='JSON settings file')
    common.add_argument('-v', '--verbose', action='store_true', default=None,
                        help='log at DEBUG level')

    parser = argparse.ArgumentParser(
        prog='mendler-cdle',
        description='Type checker and benchmarks for Mendler-style lambda encodings')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', parents=[common],
                                help='type check .mcd files or a MANIFEST')
    check.add_argument('paths', nargs='+', type=Path)
    check.add_argument('--def', dest='definition', help='report only this definition')

    erase = commands.add_parser('erase', parents=[common], help='print the erasure of a definition')
    erase.add_argument('path', type=Path)
    erase.add_argument('name')

    norm = commands.add_parser('normalize', parents=[common],
                               help='normalize a definition or a term and count β-steps')
    norm.add_argument('path', type=Path, nargs='?')
    norm.add_argument('target', nargs='?', help='definition name or term over the file')
    norm.add_argument('--expr', help='untyped lambda term to normalize')

    corpus = commands.add_parser('corpus', parents=[common], help='check the shipped corpus')
    corpus.add_argument('--keep-going', action='store_true',
                        help='report every failing module instead of stopping')
    corpus.add_argument('--gaps', action='store_true',
                        help='print the definitions the listings leave out')

    bench = commands.add_parser('bench', parents=[common], help='run the numeral benchmarks')
    bench.add_argument('--workers', type=int, help='measure on a thread pool')
    return parser


def load_settings(args: argparse.Namespace) -> Settings:
    """Config file, then MENDLER_CDLE_* variables, then flags"""
    settings = ConfigManager(args.config).settings
    if args.fuel is not None:
        settings.eval = replace(settings.eval, fuel=args.fuel)
        settings.bench = replace(settings.bench, fuel=args.fuel)
    if args.eta is not None:
        settings.eval = settings.eval.with_eta(args.eta)
    if args.format is not None:
        settings.format = args.format
    if args.verbose is not None:
        settings.verbose = args.verbose
    if getattr(args, 'workers', None) is not None:
        settings.bench = replace(settings.bench, workers=args.workers)
    return settings


def report_error(error: CdleError, settings: Settings):
    if settings.format == 'json-lines':
        print(json.dumps(error.to_record(), ensure_ascii=False), file=sys.stderr)
        return
    where = error.file or ''
    if error.span:
        where = f"{where}:{error.span[0]}:{error.span[1]}"
    print(f"{where}: {error}" if where else str(error), file=sys.stderr)
    if error.expected is not None:
        print(f"  expected: {error.expected}", file=sys.stderr)
    if error.actual is not None:
        print(f"  actual:   {error.actual}", file=sys.stderr)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _is_manifest(path: Path) -> bool:
    return path.name == MANIFEST_NAME or (path.is_dir() and (path / MANIFEST_NAME).exists())


def run_check(paths: Sequence[Path], settings: Settings,
              definition: Optional[str] = None) -> int:
    """Check files in order; one corpus is shared so later files see earlier ones"""
    corpus = Corpus(settings.eval)
    found = definition is None
    for path in paths:
        if not path.exists():
            raise CorpusError(f"no such file: {path}", file=str(path))
        if _is_manifest(path):
            directory = path if path.is_dir() else path.parent
            report = corpus.check(CorpusManifest.load(directory))
            modules = [corpus.modules[m.name] for m in report.modules]
        else:
            modules = [corpus.check_file(path)]
        for checked in modules:
            names = list(checked.definitions)
            if definition is not None:
                names = [n for n in names if n == definition]
                found = found or bool(names)
                if not names:
                    continue
            if settings.format == 'json-lines':
                print(json.dumps({'module': checked.name, 'ok': True, 'definitions': names,
                                  'quarantined': checked.quarantined}, ensure_ascii=False))
            elif definition is not None:
                print(f"[OK] {checked.name}.{definition}")
            else:
                note = " (quarantined)" if checked.quarantined else ""
                print(f"[OK] {checked.name}: {len(names)} definitions{note}")
    if not found:
        raise CorpusError(f"no definition named {definition}")
    return EXIT_OK


def _checked_context(path: Path, settings: Settings):
    if not path.exists():
        raise CorpusError(f"no such file: {path}", file=str(path))
    corpus = Corpus(settings.eval)
    checked = corpus.check_file(path)
    return corpus, corpus.context(checked.name)


def run_erase(path: Path, name: str, settings: Settings) -> int:
    """Print the normal form of a definition's erasure"""
    corpus, _ = _checked_context(path, settings)
    try:
        stats = normalize(corpus.erasure(name), settings.eval)
    except KeyError as e:
        raise CorpusError(str(e.args[0]), file=str(path))
    if stats.exhausted:
        raise FuelExhausted(f"the erasure of {name} has no normal form within "
                            f"{settings.eval.fuel} steps", definition=name, file=str(path))
    erasure = stats.normal_form
    if settings.format == 'json-lines':
        print(json.dumps({'name': name, 'erasure': str(erasure)}, ensure_ascii=False))
    else:
        print(erasure)
    return EXIT_OK


def run_normalize(path: Optional[Path], target: Optional[str], expr: Optional[str],
                  settings: Settings) -> int:
    """
    Normalize an erasure and print the normal form with its step count

    With a file, target is a definition name or a term that synthesizes a
    type over the file's definitions. Without one, --expr is an untyped term.
    """
    if path is None and expr is None:
        raise CorpusError("normalize needs a FILE and a TARGET, or --expr")
    if path is None:
        pure = parse_pure(expr)
    else:
        source = target if target is not None else expr
        if source is None:
            raise CorpusError("normalize needs a TARGET with a FILE")
        corpus, ctx = _checked_context(path, settings)
        term = parse_expr(source)
        infer_term(ctx, term)
        pure = erase_in_context(ctx, term)

    stats = normalize(pure, settings.eval)
    if stats.exhausted:
        raise FuelExhausted(f"no normal form within {settings.eval.fuel} steps",
                            file=str(path) if path else None)
    if settings.format == 'json-lines':
        print(json.dumps(stats.to_dict(), ensure_ascii=False))
    else:
        print(stats.normal_form)
        print(f"β-steps: {stats.beta_steps}" +
              (f", η-steps: {stats.eta_steps}" if settings.eval.eta_enabled else ""))
    return EXIT_OK


def run_corpus(settings: Settings, keep_going: bool = False, gaps: bool = False) -> int:
    if gaps:
        for text in elaborate_gaps().values():
            print(text)
            print()
        return EXIT_OK

    report = Corpus(settings.eval).check(keep_going=keep_going)
    if settings.format == 'json-lines':
        for definition in report.definitions:
            print(json.dumps(definition.to_dict(), ensure_ascii=False))
    else:
        rows = [('module', 'definition', 'level', 'seconds', 'status')]
        for module in report.modules:
            for d in module.definitions:
                status = 'ok' if d.ok else f"FAIL [{d.error['rule']}]"
                if d.postulate:
                    status += ' (postulate)'
                rows.append((d.module, d.name, d.level, f"{d.seconds:.3f}", status))
            if module.error is not None:
                rows.append((module.name, '-', '-', '-', f"FAIL [{module.error['rule']}]"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        for row in rows:
            print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())

    for module in report.modules:
        if module.error is not None:
            report_error_record(module.error, settings)
    for failure in report.failures():
        report_error_record(failure.error, settings)
    if report.ok:
        return EXIT_OK
    records = [m.error for m in report.modules if m.error] + [d.error for d in report.failures()]
    return _record_exit(records[0])


def report_error_record(record: dict, settings: Settings):
    if settings.format == 'json-lines':
        print(json.dumps(record, ensure_ascii=False), file=sys.stderr)
    else:
        print(f"{record['file']}:{record['line']}: [{record['rule']}] "
              f"in '{record['definition']}': {record['message']}", file=sys.stderr)


def run_bench_command(settings: Settings) -> int:
    reports = run_bench(standard_encodings(Corpus()), settings.bench)
    emit_report(reports, settings.format)
    if any(r.exhausted for r in reports):
        logger.error("fuel ran out during the benchmark")
        return EXIT_FUEL
    if not all(r.confirmed for r in reports):
        logger.error("a series did not grow as expected")
        return EXIT_GROWTH
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose or env_flag("VERBOSE") else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    try:
        settings = load_settings(args)
    except (FileNotFoundError, KeyError, ValueError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    if settings.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        if args.command == 'check':
            return run_check(args.paths, settings, args.definition)
        if args.command == 'erase':
            return run_erase(args.path, args.name, settings)
        if args.command == 'normalize':
            return run_normalize(args.path, args.target, args.expr, settings)
        if args.command == 'corpus':
            return run_corpus(settings, args.keep_going, args.gaps)
        return run_bench_command(settings)
    except CdleError as e:
        report_error(e, settings)
        return exit_code(e)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR


if __name__ == '__main__':
    sys.exit(main())
