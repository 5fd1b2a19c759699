"""Exception types shared across the package."""


class LimitIdError(Exception):
    """Base class for every error raised by limitid."""


class NotNormalized(LimitIdError):
    """Masses or conditional rows do not sum to exactly 1."""


class NegativeMass(LimitIdError):
    """A probability mass or weight is negative."""


class ZeroNormalizer(LimitIdError):
    """A weight family sums to zero where a positive normalizer is required."""


class BaseExhausted(LimitIdError):
    """A finite hypothesis list has fewer surviving entries than requested."""


class EmptyList(LimitIdError):
    """An operation requires a nonempty hypothesis list."""


class AlphabetTooSmall(LimitIdError):
    """The alphabet has fewer symbols than the construction needs."""


class AlphabetTooLarge(LimitIdError):
    """The alphabet cannot be byte-serialized (more than 256 symbols)."""


class UnknownSymbol(LimitIdError):
    """A data symbol does not belong to the alphabet."""


class ZeroMassContext(LimitIdError):
    """A conditional probability was requested on a zero-mass prefix."""


class ConfigError(LimitIdError):
    """An experiment configuration is missing, malformed, or inconsistent."""
