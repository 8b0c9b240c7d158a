"""Exception hierarchy shared by all modules."""


class InfoTypesError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(InfoTypesError, ValueError):
    pass


class InvalidDensityError(InfoTypesError, ValueError):
    pass


class DegenerateInputError(InfoTypesError, ValueError):
    pass


class InvalidDecompositionError(InfoTypesError, ValueError):
    pass


class NoWitnessError(InfoTypesError):
    """Raised when a witness decomposition is requested but presence fails."""


class UnsupportedDimensionError(InfoTypesError, ValueError):
    pass


class UnsupportedHypothesisError(InfoTypesError, ValueError):
    """Raised when a checker is handed an input its theorem does not cover."""


class DocumentError(InfoTypesError, ValueError):
    """A serialized document could not be parsed.

    ``field`` names the offending field (dotted path) and ``line`` the source
    line when the failure came from the JSON decoder.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
