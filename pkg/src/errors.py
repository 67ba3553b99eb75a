class VilenkinError(Exception):
    """Base class for every error raised by this package."""


class InputError(VilenkinError):
    """Malformed or inconsistent input (files, tokens, arguments)."""

    def __init__(self, message, path=None, line=None, column=None):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        self.column = column

    def __str__(self):
        where = []
        if self.path is not None:
            where.append(str(self.path))
        if self.line is not None:
            where.append(str(self.line))
            if self.column is not None:
                where.append(str(self.column))
        if where:
            return f"{':'.join(where)}: {self.message}"
        return self.message


class PrimeMismatchError(InputError):
    """Two operands were built over different primes."""


class OverlapError(InputError):
    """Pieces of a set description intersect in positive measure."""

    def __init__(self, message, first=None, second=None, lines=(), path=None):
        line = lines[-1] if lines else None
        super().__init__(message, path=path, line=line)
        self.first = first
        self.second = second
        self.lines = tuple(lines)


class DomainError(VilenkinError):
    """An operation was applied outside the set it is defined on."""
