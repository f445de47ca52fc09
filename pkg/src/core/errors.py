"""
Exception hierarchy for rsld-lab
"""


class RsldError(Exception):
    """Base class for all engine and lab errors"""
    pass


class TermError(RsldError):
    """Exception raised for malformed terms or atoms"""
    pass


class ParseError(RsldError):
    """Exception raised when program or goal text cannot be parsed"""

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class PriorityClash(RsldError):
    """Exception raised when two atoms of one p-goal share a priority"""
    pass


class OrderViolation(RsldError):
    """Exception raised when a concatenation F|G is requested but F does not precede G"""
    pass


class ShiftingError(RsldError):
    """Exception raised for non increasing shiftings or priorities outside the support"""
    pass


class EmptyGoal(RsldError):
    """Exception raised when an atom is selected from the empty goal"""
    pass


class StandardisationError(RsldError):
    """Exception raised when a renamed clause shares variables with the avoided set"""
    pass


class ReductionError(RsldError):
    """Exception raised when a reduction certificate fails verification inside a derivation"""
    pass


class UnknownTag(RsldError):
    """Exception raised when lineage tags do not occur in the designated resolvent"""
    pass


class DerivationIndexError(RsldError, IndexError):
    """Exception raised for step indices past the end of a derivation"""
    pass


class RuleError(RsldError):
    """Exception raised for unknown or misused scheduling and selection rules"""
    pass


class InvalidInstance(RsldError):
    """Exception raised when a lab instance violates its own preconditions"""
    pass


class NoWitnessDerivation(RsldError):
    """Exception raised when a bounded search finds no derivation with the required template"""
    pass


class NoEmbedding(RsldError):
    """Exception raised when no SLD derivation embeds a reduced derivation within the search bound"""
    pass
