"""Error taxonomy shared by the whole toolkit.

Parameter errors cover anything a caller passed that fails validation;
capacity errors cover requests that are well-formed but exceed a hard
resource guard. The CLI maps them to exit codes 2 and 3 respectively.
"""


class ParameterError(ValueError):
    """A caller-supplied parameter failed validation."""


class DegenerateParameterError(ParameterError):
    """A parameter sits exactly on a degenerate boundary (e.g. p in {0, 1})."""


class CapacityError(RuntimeError):
    """The request would exceed a hard size or work guard."""
