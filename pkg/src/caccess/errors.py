"""Exception hierarchy.

Two families matter to callers: :class:`ScenarioError` covers anything wrong
with an input document, :class:`DomainError` covers inputs that are well-formed
but for which a quantity is undefined. The CLI maps them to distinct exit codes.
"""


class CaccessError(Exception):
    """Base class for every error raised by this package."""


class ScenarioError(CaccessError):
    """A scenario (or companion input file) could not be read or validated."""


class ScenarioSyntaxError(ScenarioError):
    """The document is not parseable JSON."""


class ValidationError(ScenarioError, ValueError):
    """A value violates a data-model invariant.

    ``path`` locates the offending field, e.g. ``lgas[3].population``.
    """

    def __init__(self, message, path=""):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class InvalidSpec(ValidationError):
    """A distance-factor specification is malformed."""


class DomainError(CaccessError):
    """A computation is undefined for otherwise valid input."""


class EmptyFacilities(DomainError):
    pass


class ZeroIncidence(DomainError):
    pass


class ZeroTotalUtilisation(DomainError):
    pass


class NonPositiveRatio(DomainError):
    pass


class MismatchedRegions(DomainError):
    pass


class TooManyCombinations(DomainError):
    pass


class EmptyCandidates(DomainError):
    pass
