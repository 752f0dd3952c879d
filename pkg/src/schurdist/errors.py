class SchurdistError(Exception):
    pass


class ResourceError(SchurdistError):
    """Requested size exceeds a configured cap."""


class UnsupportedRegion(SchurdistError):
    """Triplet lies in a region the requested formula does not cover."""


class InvalidInput(SchurdistError, ValueError):
    pass
