"""Exception hierarchy shared by every module.

The CLI maps any :class:`NLBoxError` to exit status 1.
"""


class NLBoxError(Exception):
    pass


class NegativeProbability(NLBoxError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"negative probability {value} at {index}")


class NotNormalized(NLBoxError):
    def __init__(self, column, total):
        self.column = column
        self.total = total
        super().__init__(f"column {column} sums to {total}, expected 1")


class BadWeights(NLBoxError):
    pass


class BadParam(NLBoxError):
    pass


class SignallingInput(NLBoxError):
    pass


class SizeMismatch(NLBoxError):
    pass


class NotCorrelatedForm(NLBoxError):
    pass


class TooLarge(NLBoxError):
    pass


class DegenerateGame(NLBoxError):
    pass


class ArityTooLarge(NLBoxError):
    pass


class NotCoprime(NLBoxError):
    pass
