"""Exception hierarchy shared by all modules."""


class SuperclauseError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SuperclauseError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class TautologyError(SuperclauseError, ValueError):
    """A clause containing both a literal and its negation."""

    def __init__(self, literals, line=None):
        self.literals = tuple(literals)
        self.line = line
        text = " ".join(str(lit) for lit in self.literals)
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}tautological clause: {text}")


class ResourceLimitError(SuperclauseError):
    """A configured cap (variables, closure size, oracle size, iterations) was exceeded."""


class VariableCapError(ResourceLimitError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"truth-table enumeration over {count} variables exceeds the cap of {cap}")


class TruncatedClosureError(ResourceLimitError):
    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"resolution closure truncated at the budget of {budget} clauses")


class OracleCapError(ResourceLimitError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"minimization oracle needs {count} candidate clauses, cap is {cap}")


class IterationCapError(ResourceLimitError):
    pass


class PreconditionError(SuperclauseError, ValueError):
    """An operation was called outside the conditions it is defined for."""


class Cancelled(SuperclauseError):
    pass
