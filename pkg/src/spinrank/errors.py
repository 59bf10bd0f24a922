"""Exception hierarchy.

Everything derived from ``InputError`` is a problem with the data or the
arguments handed in (CLI exit code 1). ``InvariantError`` means the library
caught itself producing something inconsistent (CLI exit code 2).
"""


class SpinRankError(Exception):
    pass


class InputError(SpinRankError):
    pass


class InvariantError(SpinRankError):
    pass


class EmptyInput(InputError, ValueError):
    pass


class SelfLoop(InputError, ValueError):
    def __init__(self, label):
        super().__init__(f"self-loop on member {label!r}")
        self.label = label


class InvalidWeight(InputError, ValueError):
    pass


class OutOfRange(InputError, IndexError):
    pass


class IsolatedMember(InputError, ValueError):
    def __init__(self, label):
        super().__init__(f"member {label!r} has no incident edges")
        self.label = label


class Malformed(InputError, ValueError):
    def __init__(self, line_no, reason):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class LengthMismatch(InputError, ValueError):
    pass


class TooSmall(InputError, ValueError):
    pass


class NonFinite(InputError, ValueError):
    def __init__(self, index):
        super().__init__(f"non-finite score at index {index}")
        self.index = index


class TooManyEdges(InputError, ValueError):
    pass


class TooFewEdges(InputError, ValueError):
    pass


class VariantMismatch(InvariantError):
    pass
