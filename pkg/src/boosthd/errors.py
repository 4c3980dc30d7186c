"""Exception hierarchy.

Every error belongs to one of four families, mirrored by the CLI exit
codes: config (1), io (2), data (3), numeric (4).
"""

EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class BoostHDError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_DATA


class ConfigError(BoostHDError):
    exit_code = EXIT_CONFIG


class IoError(BoostHDError):
    exit_code = EXIT_IO


class DataError(BoostHDError):
    exit_code = EXIT_DATA


class NumericError(BoostHDError):
    exit_code = EXIT_NUMERIC


# --- vector / encoder ---

class DimensionMismatch(DataError):
    pass


class ZeroNormVector(NumericError):
    pass


class EmptyInput(DataError):
    pass


class ZeroDimension(ConfigError):
    pass


class NonFiniteInput(DataError):
    pass


class DegenerateEncoding(NumericError):
    pass


# --- training ---

class UntrainedClass(NumericError):
    pass


class NegativeWeight(DataError):
    pass


class AllZeroWeights(DataError):
    pass


class TooManyLearners(ConfigError):
    pass


class SingleClassData(DataError):
    pass


# --- serialization ---

class IoFailure(IoError):
    pass


class FormatVersionMismatch(IoError):
    pass


class ChecksumMismatch(IoError):
    pass


# --- spectral ---

class InvalidParams(ConfigError):
    pass


class LogSingularity(NumericError):
    pass


class QuadratureFailure(NumericError):
    pass


class DecompositionFailure(NumericError):
    pass


class ZeroNormRow(DataError):
    pass


# --- data pipeline ---

class MissingColumn(DataError):
    pass


class UnparseableCell(DataError):
    pass


class WindowTooLarge(DataError):
    pass


class EmptyDataset(DataError):
    pass


class UnknownSubject(DataError):
    pass


class EmptySplit(DataError):
    pass


class UnknownClass(DataError):
    pass


class InvalidRatio(ConfigError):
    pass


class LengthMismatch(DataError):
    pass


# --- perturbation / eval ---

class InvalidProbability(ConfigError):
    pass


class NonFinite(DataError):
    pass


class SchemaMismatch(DataError):
    pass
