"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """A numeric precondition was violated (order, level, or domain bounds).

    Kept distinct from plain ValueError so callers (notably the CLI) can
    separate "your numbers are inadmissible" from "your file is malformed".
    """
