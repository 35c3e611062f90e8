"""Exception hierarchy shared by all btnkit modules."""


class BTNError(Exception):
    """Base class for every error raised by btnkit."""


class DimensionError(BTNError, ValueError):
    """A vector, gate or layer has the wrong width."""


class StateError(BTNError, RuntimeError):
    """The object is not in a state that supports the operation."""


class RangeError(BTNError, ValueError):
    """A numeric argument lies outside the supported range."""


class InputError(BTNError, ValueError):
    """Malformed or contradictory input data."""


class InfeasibleError(BTNError, ValueError):
    """The request cannot be satisfied (e.g. more distinct vectors than 2**D)."""


class ResourceError(BTNError, RuntimeError):
    """A computation would exceed its configured budget."""


class FormatError(BTNError, ValueError):
    """A serialized document could not be parsed.

    ``location`` names the offending line or JSON path.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class KeyCollision(BTNError, ValueError):
    """Two dataset vectors share the same key value."""

    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"vectors {i} and {j} both have key value {value}")


class CodeCollision(BTNError, ValueError):
    """Two codes handed to a gmap layer are identical."""

    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"codes {i} and {j} are identical")


class SearchExhausted(BTNError, RuntimeError):
    """A randomized search ran out of attempts.

    ``collision`` holds the colliding index pair of the last failed draw,
    when there was one.
    """

    def __init__(self, attempts, collision=None):
        self.attempts = attempts
        self.collision = collision
        msg = f"no valid draw in {attempts} attempts"
        if collision is not None:
            msg += f" (last collision: vectors {collision[0]} and {collision[1]})"
        super().__init__(msg)
