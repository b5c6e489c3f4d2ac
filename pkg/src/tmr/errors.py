"""Exception hierarchy.

The CLI maps :class:`InputError` to exit status 2 and
:class:`InconsistentRuns` to exit status 3.
"""


class TMRError(Exception):
    pass


class InputError(TMRError):
    """Problem with an input file; optionally carries its location."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        super().__init__(message)
        self.message = message
        self.source = source
        self.line = line

    def __str__(self) -> str:
        where = self.source or ""
        if self.line is not None:
            where = f"{where}:{self.line}" if where else f"line {self.line}"
        return f"{where}: {self.message}" if where else self.message


class MalformedLine(InputError):
    pass


class UnknownTag(InputError):
    pass


class NoEntities(InputError):
    pass


class SegmentationMismatch(InputError):
    pass


class OverlappingMentions(TMRError, ValueError):
    pass


class InconsistentRuns(TMRError):
    pass
