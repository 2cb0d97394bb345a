"""
Complement Sampling Lab - Exceptions
"""


class ComplementLabError(Exception):
    """Base class for every error raised by the lab."""


class ParameterRangeError(ComplementLabError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class ScaleError(ParameterRangeError):
    """The request exceeds an enumeration or simulation size limit."""


class QubitIndexError(ComplementLabError, IndexError):
    """A qubit index is out of range or used twice."""


class DimensionMismatchError(ComplementLabError, ValueError):
    """Two states (or a state and a spec) live on different registers."""


class DegenerateBranchError(ComplementLabError, RuntimeError):
    """A measurement selected a branch with (numerically) zero mass."""


class PayloadMismatchError(ComplementLabError, ValueError):
    """A referee payload was handed to a player of the wrong kind."""


class TranscriptError(ComplementLabError, ValueError):
    """A game transcript could not be parsed or does not fit its config."""
