"""Exception hierarchy shared by the library and the CLI exit codes."""


class RPBoostError(Exception):
    pass


class ShapeError(RPBoostError, ValueError):
    """Operand dimensions do not line up."""


class NumericalError(RPBoostError, ArithmeticError):
    pass


class SingularSystemError(NumericalError):
    """Cholesky hit a non-positive pivot."""


class DataError(RPBoostError, ValueError):
    pass


class MissingFileError(DataError, FileNotFoundError):
    pass


class RaggedRowError(DataError):
    pass


class FieldParseError(DataError):
    pass


class SingleClassError(DataError):
    pass


class LibsvmFormatError(DataError):
    pass


class EmptyDataError(DataError):
    pass


class ModelFormatError(DataError):
    pass
