"""Exception types raised across the package."""


class WLStarError(Exception):
    pass


class DivisionByZero(WLStarError, ZeroDivisionError):
    pass


class UnknownSymbol(WLStarError, KeyError):
    pass


class NotTransitionRegular(WLStarError):
    pass


class AlphabetMismatch(WLStarError):
    pass


class SemifieldMismatch(WLStarError):
    pass


class IncompleteRow(WLStarError):
    pass


class NotAnEmpiricalSystem(WLStarError):
    def __init__(self, predicate, witness=None):
        self.predicate = predicate
        self.witness = witness
        super().__init__(f"system is not {predicate} (witness: {witness!r})")


class NonDeterministicTarget(WLStarError):
    pass


class OracleInconsistent(WLStarError):
    pass


class IterationCapExceeded(WLStarError):
    pass


class ParseError(WLStarError, ValueError):
    pass
