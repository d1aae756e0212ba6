"""Exception types shared across the package."""


class ContractError(ValueError):
    """An operation was called outside its precondition."""


class BudgetExceeded(RuntimeError):
    """A reduction ran out of its step budget.

    Usually means the system is not terminating, or the budget is too small.
    """

    def __init__(self, message, *, steps=None):
        super().__init__(message)
        self.steps = steps


class ConsistencyError(RuntimeError):
    """A result failed its own verification (a bug or an unsound added reduction)."""


class ParseError(ValueError):
    """Malformed system file, certificate file, or word argument."""

    def __init__(self, message, *, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self._render())

    def _render(self):
        where = []
        if self.source:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if where:
            return f"{', '.join(where)}: {self.message}"
        return self.message
