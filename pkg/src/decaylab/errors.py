class DecayLabError(Exception):
    """Base class for errors raised by decaylab."""


class ModelError(DecayLabError):
    """Invalid physical operating point, e.g. a voltage in the breakdown region."""


class DataError(DecayLabError):
    """Malformed or inconsistent input data."""
