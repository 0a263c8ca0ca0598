"""Exception types raised across the package."""


class GraphBatchError(Exception):
    """Base class for all package errors."""


class IndexOutOfRange(GraphBatchError, IndexError):
    pass


class LengthMismatch(GraphBatchError, ValueError):
    pass


class EmptyBatch(GraphBatchError, ValueError):
    pass


class CorruptBatch(GraphBatchError, ValueError):
    pass


class DomainError(GraphBatchError, ValueError):
    pass


class InvalidDummy(GraphBatchError, ValueError):
    pass


class BudgetExceeded(GraphBatchError, ValueError):
    pass


class GraphExceedsBudget(GraphBatchError):
    """A single graph is larger than the padding budget.

    Fatal for the dynamic batcher: the run has to be restarted with a
    larger budget.
    """

    def __init__(self, message, graph_size=None, budget=None, position=None):
        super().__init__(message)
        self.graph_size = graph_size
        self.budget = budget
        self.position = position


class EmptyDataset(GraphBatchError, ValueError):
    pass


class OutOfOrderStep(GraphBatchError, ValueError):
    pass


class InvalidParams(GraphBatchError, ValueError):
    pass


class ParseError(GraphBatchError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyInput(GraphBatchError, ValueError):
    pass


class DivisionByZero(GraphBatchError, ZeroDivisionError):
    pass


class DegenerateSamples(GraphBatchError, ValueError):
    pass


class InvalidBinWidth(GraphBatchError, ValueError):
    pass


class MismatchedConfigs(GraphBatchError, ValueError):
    pass


class MissingQuantity(GraphBatchError, KeyError):
    pass
