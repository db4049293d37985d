"""Exception hierarchy shared by every necklace module."""


class NecklaceError(Exception):
    """Base class for all errors raised on bad input."""


class FormulaSyntaxError(NecklaceError):
    """Formula or sequent text does not parse."""

    def __init__(self, message: str, text: str = "", offset: int = 0) -> None:
        super().__init__(f"{message} at byte {offset}")
        self.text = text
        self.offset = offset


class ReservedNameError(FormulaSyntaxError):
    """A `__`-prefixed identifier occurred where only user names are allowed."""


class FragmentError(NecklaceError):
    """Formula uses a connective the selected system or operation does not allow."""


class SearchLimitError(NecklaceError):
    """Memo table or node limit exhausted."""


class ProofError(NecklaceError):
    """Malformed proof object, proof file, or cut type mismatch."""


class GrammarError(NecklaceError):
    """Malformed grammar, unknown symbol or illegal query."""


class ShapeError(NecklaceError):
    """Sequent does not have the shape an operation requires."""


class AutomatonError(NecklaceError):
    """Malformed automaton."""


class AlphabetMismatchError(AutomatonError):
    pass


class StateLimitError(AutomatonError):
    pass


class InterpretationError(NecklaceError):
    """Unassigned primitive or epsilon-mode violation."""


class HypergraphError(NecklaceError):
    """Rank mismatch, isolated node, repeated external node or bad type text."""


class VacuousResidualWarning(UserWarning):
    """Residual by the empty language: the result is every word."""


class BatchError(NecklaceError):
    """Unreadable batch file or a line that is not a sequent."""
