"""Exception types shared across the package."""


class RbnError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RbnError):
    """Lexical or syntactic error in a model, scenario, or formula source."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class ModelValidationError(RbnError):
    """A parsed model failed network validation; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.violations))


class UnboundVariableError(RbnError):
    """A formula or constraint was evaluated with an incomplete binding."""


class MissingInterpretationError(RbnError):
    """The structure does not interpret a relation needed for evaluation."""


class UnknownCombinatorError(RbnError):
    """A combination-function name is not present in the registry."""


class DuplicateCombinatorError(RbnError):
    """Attempt to register a combination function under a taken name."""


class InconsistentEvidenceError(RbnError):
    """The evidence set has probability zero under the model."""


class WellFoundednessError(RbnError):
    """The ground self-dependency relation of a recursive relation is cyclic."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        cyc = " -> ".join(str(a) for a in self.witness)
        super().__init__(f"cyclic ground dependency: {cyc}")


class BudgetExceededError(RbnError):
    """Brute-force enumeration would exceed the configured bit budget."""


class NotNormalizableError(RbnError):
    """Dependency formula mentions rigid symbols; no cardinality normal form."""


class RecursiveNetworkError(RbnError):
    """Operation is defined for non-recursive networks only."""
