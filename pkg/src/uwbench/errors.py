"""Exception taxonomy.

Every error raised by this package derives from :class:`UwbenchError`.
The two broad families map onto the CLI exit-code contract:
``ConfigError`` exits with 2, ``DataError`` with 3 (usage errors, handled
at the argument-parsing layer, exit with 1).
"""


class UwbenchError(Exception):
    """Base class for all package errors."""


class ConfigError(UwbenchError):
    """Invalid configuration, coefficients, or option values."""


class DataError(UwbenchError):
    """Invalid, missing, or inconsistent input data."""


# -- water coefficients -------------------------------------------------

class MissingFile(ConfigError):
    pass


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidCoefficient(ConfigError):
    def __init__(self, class_id, field, value):
        super().__init__(
            f"water class {class_id!r}: {field} = {value!r} out of range"
        )
        self.class_id = class_id
        self.field = field
        self.value = value


class UnknownWaterClass(ConfigError):
    pass


class InvalidConfig(ConfigError):
    pass


class NonPositiveGain(ConfigError):
    pass


class NonPositiveScale(ConfigError):
    pass


# -- image / depth data -------------------------------------------------

class DimensionMismatch(DataError):
    pass


class OutOfRangeInput(DataError):
    pass


class UnpairedFile(DataError):
    def __init__(self, message, rgb_orphans=(), depth_orphans=()):
        super().__init__(message)
        self.rgb_orphans = list(rgb_orphans)
        self.depth_orphans = list(depth_orphans)


class EmptyDataset(DataError):
    pass


# -- evaluation ----------------------------------------------------------

class EmptyMask(DataError):
    pass


class NonPositivePrediction(DataError):
    pass


class NonPositiveDepth(DataError):
    pass


class ZeroMedian(DataError):
    pass


class NoValidImages(DataError):
    pass
