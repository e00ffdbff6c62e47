"""Exception types raised across the package."""


class KGGError(Exception):
    pass


class DegenerateDiameter(KGGError, ValueError):
    """The two diameter endpoints coincide within tolerance."""


class DuplicatePoints(KGGError, ValueError):
    pass


class TooLarge(KGGError, ValueError):
    """Input exceeds the cap of an exponential oracle."""


class OddCardinality(KGGError, ValueError):
    pass


class NoPerfectMatching(KGGError):
    pass


class EmptyClass(KGGError, ValueError):
    pass


class ConstraintViolated(KGGError):
    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"{constraint}: {detail}" if detail else constraint)


class SelfCheckFailed(KGGError):
    pass
