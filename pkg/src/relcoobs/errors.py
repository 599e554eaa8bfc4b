"""Exception types raised on rejected inputs."""


class AlphabetMismatch(ValueError):
    pass


class UnknownAgent(ValueError):
    pass


class LanguagePairError(ValueError):
    """K ⊆ C ⊆ L_m(G) does not hold."""


class BudgetExceeded(RuntimeError):
    """The brute-force oracle refused an instance that is too large."""


class NotRelativelyCoobservable(ValueError):
    """Local supervisors cannot be extracted: their decisions would conflict."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
