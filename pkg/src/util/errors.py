class RectihullError(Exception):
    """ Base class of all errors raised by the library """


class EmptySample(RectihullError, ValueError):
    """ A hull, Psi or oracle evaluation got no points """


class EmptySet(RectihullError, ValueError):
    """ One of the sets of a distance computation is empty """


class RejectionStall(RectihullError, RuntimeError):
    """ Rejection sampling accepts too few draws to make progress """


class InvalidGeometry(RectihullError, ValueError):
    """ Invalid polygon, region tree or geometric parameter """


class InputParseError(RectihullError, ValueError):
    """ Malformed CSV or JSON input, optionally pointing to the offending line """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
