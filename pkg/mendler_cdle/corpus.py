#!/usr/bin/env python3
"""
Corpus harness for mendler_cdle
Loads the shipped .mcd modules in manifest order, checks every definition
with the kernel and reports names, normalized erasures and timings
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .config import EvalConfig
from .errors import CdleError, CorpusError, FuelExhausted
from .kernel import (
    Context, Def, TERM, check_definition, def_eq, enter_module,
    import_instance, leave_module,
)
from .parser import SourceModule, load_module, show_definition
from .reduction import normalize
from .syntax import PureTerm, Var

logger = logging.getLogger(__name__)

# Get path to the shipped corpus
CORPUS_DIR = Path(__file__).parent / 'data' / 'corpus'
MANIFEST_NAME = 'MANIFEST'
SOURCE_SUFFIX = '.mcd'

# Definitions whose bodies are elided in the listings the corpus follows
GAPS = ('fm2im', 'eqv1', 'eqv2', 'convIH', 'nfmap', 'indITree', 'uimP')


@dataclass
class CorpusManifest:
    """Ordered list of module names and the directory holding them"""
    directory: Path
    modules: List[str] = field(default_factory=list)

    @classmethod
    def load(cls, directory: Optional[Union[str, Path]] = None) -> 'CorpusManifest':
        """
        Read the MANIFEST file of a corpus directory

        Blank lines and lines starting with # are skipped.

        Raises:
            CorpusError: If the manifest is missing or names a module twice
        """
        directory = Path(directory) if directory is not None else CORPUS_DIR
        path = directory / MANIFEST_NAME
        if not path.exists():
            raise CorpusError(f"no {MANIFEST_NAME} in {directory}", file=str(path))
        modules = []
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                if line in modules:
                    raise CorpusError(f"{line} is listed twice", file=str(path))
                modules.append(line)
        return cls(directory, modules)

    def path(self, module: str) -> Path:
        return self.directory / f"{module}{SOURCE_SUFFIX}"

    def upto(self, module: str) -> 'CorpusManifest':
        """The manifest prefix that ends with module"""
        if module not in self.modules:
            raise CorpusError(f"{module} is not in the manifest")
        return CorpusManifest(self.directory, self.modules[:self.modules.index(module) + 1])


@dataclass
class DefinitionReport:
    """Outcome of checking one definition"""
    module: str
    name: str
    ok: bool
    level: str = TERM
    erasure: Optional[str] = None
    seconds: float = 0.0
    postulate: bool = False
    error: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            'module': self.module,
            'name': self.name,
            'ok': self.ok,
            'level': self.level,
            'erasure': self.erasure,
            'seconds': round(self.seconds, 6),
            'postulate': self.postulate,
            'error': self.error,
        }


@dataclass
class ModuleReport:
    """Outcome of checking one module"""
    name: str
    path: Optional[str]
    quarantined: bool = False
    eta: bool = False
    definitions: List[DefinitionReport] = field(default_factory=list)
    seconds: float = 0.0
    error: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(d.ok for d in self.definitions)

    def to_dict(self) -> dict:
        return {
            'module': self.name,
            'path': self.path,
            'ok': self.ok,
            'quarantined': self.quarantined,
            'eta': self.eta,
            'seconds': round(self.seconds, 6),
            'definitions': [d.to_dict() for d in self.definitions],
            'error': self.error,
        }


@dataclass
class CorpusReport:
    """Per-module and per-definition results of a corpus run"""
    modules: List[ModuleReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(m.ok for m in self.modules)

    @property
    def definitions(self) -> List[DefinitionReport]:
        return [d for m in self.modules for d in m.definitions]

    def module(self, name: str) -> ModuleReport:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)

    def definition(self, name: str) -> DefinitionReport:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(name)

    def failures(self) -> List[DefinitionReport]:
        return [d for d in self.definitions if not d.ok]

    def to_dict(self) -> dict:
        return {
            'ok': self.ok,
            'modules': [m.to_dict() for m in self.modules],
        }


@dataclass
class CheckedModule:
    """A module whose definitions all checked"""
    source: SourceModule
    definitions: Dict[str, Def]
    closure: Tuple[str, ...]

    @property
    def name(self) -> str:
        return self.source.name

    @property
    def quarantined(self) -> bool:
        return self.source.pragma('postulate')


class Corpus:
    """
    Checks .mcd modules and keeps what was checked

    A module sees the definitions of every module it imports, directly or
    through other imports, and nothing else. Imports with arguments
    instantiate a parametrized module; inside a parametrized module the
    header parameters are in scope and each definition is generalized over
    them.

    Example:
        >>> corpus = Corpus()
        >>> report = corpus.check()
        >>> report.definition('predSuc').ok
        True
    """

    def __init__(self, config: Optional[EvalConfig] = None,
                 manifest: Optional[CorpusManifest] = None):
        self.config = config or EvalConfig()
        self._manifest = manifest
        self.modules: Dict[str, CheckedModule] = {}

    @property
    def manifest(self) -> CorpusManifest:
        if self._manifest is None:
            self._manifest = CorpusManifest.load()
        return self._manifest

    # -- contexts -----------------------------------------------------------

    def _closure(self, source: SourceModule) -> Tuple[str, ...]:
        seen: List[str] = []
        for item in source.imports:
            if item.module not in self.modules:
                raise CorpusError(f"{source.name} imports {item.module}, which is not checked yet",
                                  file=source.path)
            if self.modules[item.module].quarantined and not source.pragma('postulate'):
                raise CorpusError(f"{source.name} imports quarantined module {item.module}; "
                                  f"only #postulate=on modules may", file=source.path)
            for name in self.modules[item.module].closure + (item.module,):
                if name not in seen:
                    seen.append(name)
        return tuple(seen)

    def _globals(self, closure: Iterable[str]) -> Dict[str, Def]:
        visible: Dict[str, Def] = {}
        for module in closure:
            for name, definition in self.modules[module].definitions.items():
                if name in visible and visible[name] is not definition:
                    raise CorpusError(f"{name} is defined in more than one imported module")
                visible[name] = definition
        return visible

    def module_config(self, source: SourceModule) -> EvalConfig:
        if 'eta' in source.pragmas:
            return self.config.with_eta(source.pragma('eta'))
        return self.config

    def context(self, module: str) -> Context:
        """
        Context holding a checked module's definitions and all it imports

        Module parameters are not in scope; definitions of a parametrized
        module appear generalized.
        """
        if module not in self.modules:
            raise CorpusError(f"{module} is not checked")
        checked = self.modules[module]
        globals_ = self._globals(checked.closure + (module,))
        return Context(globals=globals_, config=self.module_config(checked.source))

    def _open(self, source: SourceModule, closure: Tuple[str, ...]) -> Context:
        ctx = Context(globals=self._globals(closure), config=self.module_config(source))
        try:
            ctx = enter_module(ctx, source.params)
            for item in source.imports:
                if item.args:
                    names = list(self.modules[item.module].definitions)
                    ctx = import_instance(ctx, names, item.args)
        except CdleError as e:
            raise e.locate(file=source.path)
        return ctx

    # -- checking -----------------------------------------------------------

    def check_module(self, source: SourceModule, keep_going: bool = False) -> ModuleReport:
        """
        Check every definition of a parsed module, in order

        Args:
            source: Parsed module whose imports are already checked
            keep_going: Record a failing definition and stop the module
                instead of raising

        Returns:
            ModuleReport with one entry per definition that was tried

        Raises:
            CorpusError: Unknown import, duplicate module or a postulate
                outside a #postulate=on module
            CdleError: The first failing definition, located at its file
                and line (unless keep_going)
        """
        if source.name in self.modules:
            raise CorpusError(f"module {source.name} is already checked", file=source.path)
        started = time.perf_counter()
        closure = self._closure(source)
        report = ModuleReport(source.name, source.path, quarantined=source.pragma('postulate'),
                              eta=self.module_config(source).eta_enabled)
        ctx = self._open(source, closure)
        before = set(ctx.globals)

        for item in source.defs:
            t0 = time.perf_counter()
            try:
                if item.postulate and not source.pragma('postulate'):
                    raise CorpusError(f"{item.name} has no body; postulates need #postulate=on",
                                      definition=item.name)
                ctx = check_definition(ctx, item.name, item.classifier, item.body)
            except CdleError as e:
                e.locate(definition=item.name, span=(item.line, 1), file=source.path)
                report.definitions.append(DefinitionReport(
                    source.name, item.name, False, seconds=time.perf_counter() - t0,
                    postulate=item.postulate, error=e.to_record()))
                report.seconds = time.perf_counter() - started
                logger.info(f"{source.name}: {item.name} failed after {report.seconds:.3f}s")
                if keep_going:
                    return report
                raise
            definition = ctx.globals[item.name]
            report.definitions.append(DefinitionReport(
                source.name, item.name, True, level=definition.level,
                erasure=self._show_erasure(definition, ctx.config),
                seconds=time.perf_counter() - t0, postulate=item.postulate))

        ctx = leave_module(ctx)
        own = {name: d for name, d in ctx.globals.items() if name not in before}
        self.modules[source.name] = CheckedModule(source, own, closure)
        report.seconds = time.perf_counter() - started
        logger.info(f"{source.name}: {len(own)} definitions checked in {report.seconds:.3f}s")
        return report

    @staticmethod
    def _show_erasure(definition: Def, config: EvalConfig) -> Optional[str]:
        if definition.erasure is None:
            return None
        stats = normalize(definition.erasure, config)
        return str(stats.normal_form)

    def check(self, manifest: Optional[CorpusManifest] = None,
              keep_going: bool = False) -> CorpusReport:
        """
        Check the modules of a manifest in order

        Modules already checked are skipped. With keep_going a failing
        module is recorded and modules that import it are reported as
        blocked.

        Args:
            manifest: Modules to check; defaults to the shipped corpus
            keep_going: Collect failures instead of raising the first one

        Returns:
            CorpusReport

        Raises:
            CdleError: The first failure, unless keep_going
        """
        manifest = manifest or self.manifest
        report = CorpusReport()
        for name in manifest.modules:
            if name in self.modules:
                continue
            path = manifest.path(name)
            try:
                source = self._read(path)
                if source.name != name:
                    raise CorpusError(f"{path} does not hold module {name}", file=str(path))
                report.modules.append(self.check_module(source, keep_going))
            except CdleError as e:
                if not keep_going:
                    raise
                e.locate(file=str(path))
                if not report.modules or report.modules[-1].name != name:
                    report.modules.append(ModuleReport(name, str(path), error=e.to_record()))
        return report

    @staticmethod
    def _read(path: Path) -> SourceModule:
        if not path.exists():
            raise CorpusError(f"no such module file: {path}", file=str(path))
        return load_module(path)

    def require(self, module: str, search: Sequence[Union[str, Path]] = ()) -> CheckedModule:
        """
        Check a module and, first, everything it imports

        Module files are looked up in the search directories in order, then
        in the shipped corpus.

        Raises:
            CorpusError: A module file is missing or imports form a cycle
        """
        return self._require(module, [Path(d) for d in search] + [CORPUS_DIR], ())

    def _require(self, module: str, search: List[Path], pending: Tuple[str, ...]) -> CheckedModule:
        if module in self.modules:
            return self.modules[module]
        if module in pending:
            raise CorpusError(f"import cycle: {' → '.join(pending + (module,))}")
        for directory in search:
            path = directory / f"{module}{SOURCE_SUFFIX}"
            if path.exists():
                return self.check_file(path, search, pending + (module,))
        raise CorpusError(f"cannot find module {module} in {', '.join(map(str, search))}")

    def check_file(self, path: Union[str, Path], search: Sequence[Path] = (),
                   pending: Tuple[str, ...] = ()) -> CheckedModule:
        """Check a .mcd file, loading its imports on demand"""
        path = Path(path)
        source = self._read(path)
        directories = [path.parent] + [d for d in search if d != path.parent]
        if CORPUS_DIR not in directories:
            directories.append(CORPUS_DIR)
        for item in source.imports:
            self._require(item.module, directories, pending + (source.name,))
        self.check_module(source)
        return self.modules[source.name]

    # -- queries ------------------------------------------------------------

    def definition(self, name: str) -> Def:
        for checked in self.modules.values():
            if name in checked.definitions:
                return checked.definitions[name]
        raise KeyError(f"{name} is not defined in any checked module")

    def erasure(self, name: str) -> PureTerm:
        """Closed erasure of a term definition (postulates stay free)"""
        definition = self.definition(name)
        if definition.erasure is None:
            raise CorpusError(f"{name} is a type or a postulate and has no erasure",
                              definition=name)
        return definition.erasure

    def inhabits_empty(self, module: str) -> List[str]:
        """
        Definitions of a module whose type is ∀ X : ★. X

        Only quarantined modules may have any.
        """
        ctx = self.context(module)
        empty = ctx.lookup('Empty')
        target = Var('Empty') if empty is not None else None
        found = []
        for name, definition in self.modules[module].definitions.items():
            if target is None or definition.is_type or definition.params:
                continue
            try:
                if def_eq(ctx, definition.classifier, target):
                    found.append(name)
            except FuelExhausted:
                continue
        return found


def check_corpus(manifest: Optional[CorpusManifest] = None,
                 config: Optional[EvalConfig] = None,
                 keep_going: bool = False) -> CorpusReport:
    """
    Check the shipped corpus (or another manifest) from scratch

    Raises:
        CdleError: The first failing definition, with its name, file and
            line, unless keep_going
    """
    return Corpus(config, manifest).check(manifest, keep_going)


def elaborate_gaps(manifest: Optional[CorpusManifest] = None) -> Dict[str, str]:
    """
    Source text of the definitions whose bodies the listings elide

    Returns:
        Definition name to its printed .mcd definition
    """
    manifest = manifest or CorpusManifest.load()
    found: Dict[str, str] = {}
    for module in manifest.modules:
        source = load_module(manifest.path(module))
        for item in source.defs:
            if item.name in GAPS:
                found[item.name] = show_definition(item)
    missing = [name for name in GAPS if name not in found]
    if missing:
        raise CorpusError(f"no definition for {', '.join(missing)} in the corpus")
    return found
