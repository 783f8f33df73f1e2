"""
Error types for the CDLE kernel, parser and corpus harness

Every error can render itself as a structured diagnostic record:
{file, line, col, rule, expected, actual, definition, message}
"""

from typing import Optional, Tuple


class CdleError(Exception):
    """Base class for everything the checker reports"""

    rule = "error"

    def __init__(self, message: str, *, expected=None, actual=None,
                 span: Optional[Tuple[int, int]] = None,
                 definition: Optional[str] = None, file: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.expected = expected
        self.actual = actual
        self.span = span
        self.definition = definition
        self.file = file

    def locate(self, *, definition: Optional[str] = None, span=None,
               file: Optional[str] = None) -> 'CdleError':
        """Fill in location fields that are still unknown; returns self"""
        if self.definition is None:
            self.definition = definition
        if self.span is None:
            self.span = span
        if self.file is None:
            self.file = file
        return self

    def to_record(self) -> dict:
        """Structured diagnostic for the CLI"""
        line, col = self.span if self.span else (None, None)
        return {
            'file': self.file,
            'line': line,
            'col': col,
            'rule': self.rule,
            'expected': None if self.expected is None else str(self.expected),
            'actual': None if self.actual is None else str(self.actual),
            'definition': self.definition,
            'message': self.message,
        }

    def __str__(self) -> str:
        where = f" in '{self.definition}'" if self.definition else ""
        return f"[{self.rule}]{where}: {self.message}"


class KernelError(CdleError):
    """A typing rule failed"""
    rule = "kernel"


class UnboundVariable(KernelError):
    rule = "var"


class UnboundTypeVariable(KernelError):
    rule = "tvar"


class NotAFunction(KernelError):
    rule = "app"


class NotAnIntersection(KernelError):
    rule = "proj"


class KindMismatch(KernelError):
    rule = "kind"


class TypeMismatch(KernelError):
    rule = "conv"


class CannotSynthesize(KernelError):
    rule = "synth"


class ErasedVarOccursFree(KernelError):
    rule = "Λ-intro"


class ErasureMismatch(KernelError):
    rule = "ι-intro"


class IllFormedEquation(KernelError):
    rule = "≃-form"


class MotiveNoOccurrence(KernelError):
    rule = "ρ"


class FuelExhausted(KernelError):
    """Definitional equality gave up before reaching normal forms"""
    rule = "fuel"


class DuplicateDefinition(KernelError):
    rule = "def"


class ParseError(CdleError):
    """Syntax error with position and the set of tokens that would fit"""

    rule = "parse"

    def __init__(self, message: str, line: int, column: int, expected=(), file=None):
        super().__init__(message, span=(line, column), file=file,
                         expected=", ".join(sorted(expected)) if expected else None)
        self.line = line
        self.column = column
        self.expected_tokens = frozenset(expected)


class CorpusError(CdleError):
    """Manifest, import or file-system problem in the corpus harness"""
    rule = "corpus"
