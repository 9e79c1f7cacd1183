"""Exception types shared across the toolkit."""


class ChanAugError(Exception):
    """Base class for all toolkit errors."""


class FormatError(ChanAugError):
    """A binary file does not match the expected on-disk layout."""


class ParseError(ChanAugError):
    """A text artifact (manifest, plan, bank) failed to parse."""


class ValidationError(ChanAugError):
    """Inputs violate a documented precondition or invariant."""


class ConfigError(ChanAugError):
    """A configuration object or file is inconsistent."""


class DegenerateInputError(ChanAugError):
    """The operation is undefined for this input (e.g. zero-power signal)."""
