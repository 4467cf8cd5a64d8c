"""Exception types shared across the pipeline."""


class SenticorrError(Exception):
    """Base class for all pipeline errors."""


class CorpusError(SenticorrError):
    pass


class MalformedRecord(CorpusError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateReviewId(CorpusError):
    def __init__(self, review_id, line):
        self.review_id = review_id
        self.line = line
        super().__init__(f"line {line}: duplicate review_id {review_id!r}")


class EmptyReview(CorpusError):
    def __init__(self, review_id):
        self.review_id = review_id
        super().__init__(f"review {review_id!r} has no sentences")


class EmptyTrainingSet(SenticorrError):
    pass


class ZeroTotalCount(SenticorrError):
    pass


class EmptyKeywordSet(SenticorrError):
    pass


class SingleClassTrainingSet(SenticorrError):
    pass


class DimensionMismatch(SenticorrError):
    pass


class InsufficientSamplesPerClass(SenticorrError):
    pass


class ConstantInput(SenticorrError):
    pass


class DegenerateInput(SenticorrError):
    pass


class InputTooLarge(SenticorrError):
    pass


class NonConvergenceWarning(RuntimeWarning):
    """Solver hit its iteration cap; the returned model is the last iterate."""
