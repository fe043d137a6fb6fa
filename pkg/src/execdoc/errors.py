"""Exception hierarchy.

Every failure the engine can report derives from :class:`ExecDocError`, so
callers (notably the CLI) can separate domain failures from programming bugs.
"""


class ExecDocError(Exception):
    pass


# --- MathML parsing -------------------------------------------------------

class MathMLParseError(ExecDocError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnsupportedElementError(MathMLParseError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"unsupported element <{element}>")


class StructureError(MathMLParseError):
    pass


# --- evaluation -----------------------------------------------------------

class EvaluationError(ExecDocError):
    pass


class UnboundIdentifierError(EvaluationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound identifier {name!r}")


class UnregisteredFunctionError(EvaluationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unregistered function {name!r}")


class DimensionError(EvaluationError):
    def __init__(self, message, left=None, right=None):
        self.left = left
        self.right = right
        if left is not None or right is not None:
            message = f"{message}: [{left}] vs [{right}]"
        super().__init__(message)


class NumericDomainError(EvaluationError):
    pass


class TypeMismatchError(EvaluationError):
    pass


class FunctionConflictError(ExecDocError):
    pass


class UnitLookupError(ExecDocError):
    pass


class DictionaryError(ExecDocError):
    pass


# --- selectors ------------------------------------------------------------

class SelectorSyntaxError(ExecDocError):
    def __init__(self, message, path, position):
        self.path = path
        self.position = position
        super().__init__(f"{message} at offset {position} in {path!r}")


class UnboundPrefixError(ExecDocError):
    def __init__(self, prefix):
        self.prefix = prefix
        super().__init__(f"unbound namespace prefix {prefix!r}")


# --- chemistry ------------------------------------------------------------

class CMLError(ExecDocError):
    pass


class DanglingReferenceError(CMLError):
    def __init__(self, ref):
        self.ref = ref
        super().__init__(f"bond references unknown atom {ref!r}")


class DuplicateAtomError(CMLError):
    pass


class MissingCoordinatesError(CMLError):
    pass


class UnknownElementError(CMLError):
    pass


class DegenerateGeometryError(ExecDocError):
    pass


# --- forcefield -----------------------------------------------------------

class ForcefieldError(ExecDocError):
    pass


class MissingParameterError(ForcefieldError):
    def __init__(self, kind, types, context=None):
        self.kind = kind
        self.types = tuple(types)
        msg = f"no {kind} parameters for atom types {'-'.join(map(str, self.types))}"
        if context:
            msg = f"{msg} ({context})"
        super().__init__(msg)


# --- optimizer ------------------------------------------------------------

class OptimizerInputError(ExecDocError):
    pass


# --- documents ------------------------------------------------------------

class DocumentError(ExecDocError):
    pass


class UndefinedVariableError(DocumentError):
    def __init__(self, name, location):
        self.name = name
        self.location = location
        super().__init__(f"undefined variable {name!r} at {location}")


class SymbolCycleError(DocumentError):
    def __init__(self, chain):
        self.chain = tuple(chain)
        super().__init__("cyclic variable definition: " + " -> ".join(self.chain))


class TransclusionError(DocumentError):
    pass


class InclusionCycleError(TransclusionError):
    def __init__(self, chain):
        self.chain = tuple(chain)
        super().__init__("inclusion cycle: " + " -> ".join(self.chain))


class DepthLimitError(TransclusionError):
    pass


class EditError(DocumentError):
    pass


class DecorationError(DocumentError):
    pass


class ComputationError(DocumentError):
    def __init__(self, message, location, cause=None):
        self.location = location
        self.cause = cause
        super().__init__(f"{message} at {location}")
