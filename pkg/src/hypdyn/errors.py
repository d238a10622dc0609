"""Exception types shared across the package."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class EscapeError(DomainError):
    """A horseshoe orbit left the square before the requested depth.

    ``escape_time`` counts iterates of the map (forward) or of its inverse
    (backward) that were successfully taken before the point fell outside
    the relevant pair of strips.
    """

    def __init__(self, message, escape_time, direction="forward"):
        super().__init__(message)
        self.escape_time = escape_time
        self.direction = direction
