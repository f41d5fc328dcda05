"""Typed errors raised across the package.

Every error derives from ``ArtifactError`` and carries an ``exit_code`` that
the command line front end uses directly.
"""


class ArtifactError(Exception):
    exit_code = 1


class InvalidInput(ArtifactError):
    exit_code = 4


class DegeneratePartition(InvalidInput):
    """The two angles of a characteristic pair coincide."""


class InvalidPair(InvalidInput):
    """An angle pair failed the characteristic-pair checks."""


class MalformedConfiguration(InvalidInput):
    pass


class NoCluster(InvalidInput):
    """No ray class meets both critical cycles (a failed precondition)."""


class Obstructed(ArtifactError):
    exit_code = 2

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoConvergence(ArtifactError):
    exit_code = 3


class DerivativeVanished(NoConvergence):
    pass


class SingularSystem(NoConvergence):
    pass


class BranchAmbiguity(NoConvergence):
    pass


class DegenerateImage(NoConvergence):
    pass


class RootFindingFailure(NoConvergence):
    pass


class UnboundedJob(InvalidInput):
    pass
