"""Exception types shared across the package."""


class TwoDomError(Exception):
    """Base class for all errors raised by twodom."""


class NotATree(TwoDomError):
    pass


class MalformedGraph6(TwoDomError):
    pass


class Infeasible(TwoDomError):
    """No vertex set satisfies the predicate under the given constraint."""


class TooLarge(TwoDomError):
    pass


class SelfCheckFailed(TwoDomError):
    def __init__(self, pattern_id: str, invariant: str):
        super().__init__(f"pattern {pattern_id}: {invariant}")
        self.pattern_id = pattern_id
        self.invariant = invariant


class InadmissiblePattern(TwoDomError):
    pass


class NoSuchEmbedding(TwoDomError):
    pass


class InvalidAttacher(TwoDomError):
    pass


class PreconditionViolated(TwoDomError):
    def __init__(self, clause: str):
        super().__init__(clause)
        self.clause = clause


class InternalInconsistency(TwoDomError):
    pass
