"""Exception hierarchy shared by all modules."""


class NonAutoDynError(Exception):
    """Base class for library errors."""


class MixedSpace(NonAutoDynError):
    """Two points from different state spaces were compared."""


class WindowExhausted(NonAutoDynError):
    """A symbolic comparison or extension needed more symbols than allowed."""


class PrecisionExhausted(NonAutoDynError):
    """A mechanical-word floor stayed ambiguous at the maximum working precision."""


class CertifiedDepthExceeded(NonAutoDynError):
    """A coding-tree walk went below the depth at which its language is certified."""


class InvalidCode(NonAutoDynError):
    """A word or bit string does not correspond to an admissible cylinder."""


class CertificationFailed(NonAutoDynError):
    """A factor language did not stabilise under further substitution."""


class NetTooLarge(NonAutoDynError):
    """An epsilon net would need more points than the configured maximum."""


class HorizonTooLarge(NonAutoDynError):
    """An orbit horizon exceeds the configured maximum."""


class EmptyRegion(NonAutoDynError):
    """No sampled point fell inside a region."""


class CoverageGap(NonAutoDynError):
    """An image point lies in no member of a finite cover."""


class ConstructionFailed(NonAutoDynError):
    """A corpus system failed its construction-time consistency checks."""


class MissingSeries(NonAutoDynError):
    """A report does not contain the requested plot series."""


class ConfigError(NonAutoDynError):
    """An experiment configuration is invalid. ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
