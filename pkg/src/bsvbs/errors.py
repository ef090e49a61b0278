class BSvBSError(Exception):
    """Base class for all package errors."""


class ConfigError(BSvBSError, ValueError):
    """Invalid run configuration or parameter set."""


class MembershipError(BSvBSError, ValueError):
    """A policy field is not a member of its axis."""


class DegenerateSpaceError(ConfigError):
    """The learner needs at least two arms."""


class NormalizationError(BSvBSError, ValueError):
    """A reward handed to the learner lies outside [0, 1]."""


class ShapeError(BSvBSError, ValueError):
    """Reward rows with inconsistent arm dimension."""


class CapabilityError(BSvBSError):
    """A computation needs data the run did not record."""


class TraceParseError(BSvBSError, ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class IncompleteTraceError(BSvBSError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        shown = ", ".join(f"({b}, {a})" for b, a in self.missing[:10])
        more = "" if len(self.missing) <= 10 else f" and {len(self.missing) - 10} more"
        super().__init__(f"trace lacks (bucket, arm) rows: {shown}{more}")


class UndefinedSavingsError(BSvBSError, ZeroDivisionError):
    """Reference consumption equals the minimum, so savings are undefined."""
