"""
Formula and sequent data model.

* Types are built from primitives with ``\\``, ``/``, ``*`` and the postfix
  operators ``^c`` (cyclic shift), ``^r`` (reversal) and ``^b`` (bracelet).
* ``print_formula`` is canonical: binary nodes are parenthesised, primitives
  and postfix chains are not, a postfix applied to a postfix gets parentheses.
* ``parse_formula``/``parse_sequent`` report errors with a UTF-8 byte offset.
* Polarity, size and per-system fragment checks live here too.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from necklace.errors import FormulaSyntaxError, FragmentError, ReservedNameError

LOG = logging.getLogger(__name__)

RESERVED_PREFIX = "__"


@dataclass(frozen=True)
class Prim:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Under:
    """``left \\ right``; ``left`` is the denominator."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Over:
    """``left / right``; ``right`` is the denominator."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Prod:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Shift:
    inner: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Rev:
    inner: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Brac:
    inner: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


Formula = Union[Prim, Under, Over, Prod, Shift, Rev, Brac]
Unary = (Shift, Rev, Brac)
Binary = (Under, Over, Prod)

SUFFIX = {Shift: "^c", Rev: "^r", Brac: "^b"}
INFIX = {Under: "\\", Over: "/", Prod: "*"}


class Polarity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    def flipped(self) -> "Polarity":
        return Polarity.ODD if self is Polarity.EVEN else Polarity.EVEN


class SystemId(enum.Enum):
    L = "L"
    LNECK = "Lneck"
    LCS = "LCS"
    LREV = "Lrev"
    LBRAC = "Lbrac"

    @classmethod
    def parse(cls, text: str) -> "SystemId":
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        raise ValueError(f"unknown system {text!r}; expected one of "
                         + "|".join(m.value for m in cls))

    @property
    def unary(self) -> frozenset[type]:
        """Postfix connectives admitted by the system."""
        return _SYSTEM_UNARY[self]


_SYSTEM_UNARY: dict[SystemId, frozenset[type]] = {
    SystemId.L: frozenset(),
    SystemId.LNECK: frozenset({Shift}),
    SystemId.LCS: frozenset(),
    SystemId.LREV: frozenset({Rev}),
    SystemId.LBRAC: frozenset({Rev, Brac}),
}


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[Formula, ...]
    succedent: Formula

    def __post_init__(self) -> None:
        if not isinstance(self.antecedent, tuple):
            object.__setattr__(self, "antecedent", tuple(self.antecedent))
        if not self.antecedent:
            raise ValueError("sequent antecedent must be nonempty")

    def __str__(self) -> str:
        return print_sequent(self)

    def __len__(self) -> int:
        return len(self.antecedent)

    def formulas(self) -> Iterator[Formula]:
        yield from self.antecedent
        yield self.succedent

    def rotate(self, offset: int) -> "Sequent":
        """Antecedent ``X[offset:] + X[:offset]``, same succedent."""
        ant = self.antecedent
        k = offset % len(ant)
        return Sequent(ant[k:] + ant[:k], self.succedent)

    def total_size(self) -> int:
        return sum(size(a) for a in self.antecedent) + len(self.antecedent) - 1 + size(self.succedent)


# ----------------------------------------------------------------------
# printing

def print_formula(f: Formula) -> str:
    if isinstance(f, Prim):
        return f.name
    if isinstance(f, Unary):
        inner = print_formula(f.inner)
        if isinstance(f.inner, Unary):
            inner = f"({inner})"
        return inner + SUFFIX[type(f)]
    return f"({print_formula(f.left)} {INFIX[type(f)]} {print_formula(f.right)})"


def print_sequent(s: Sequent) -> str:
    return ", ".join(print_formula(a) for a in s.antecedent) + " -> " + print_formula(s.succedent)


# ----------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<post>\^[crb])|(?P<arrow>->)|(?P<op>[()*/\\,]))"
)
_POSTFIX = {"^c": Shift, "^r": Rev, "^b": Brac}


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, allow_reserved: bool) -> None:
        self.text = text
        self.allow_reserved = allow_reserved
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, _byte_offset(text, pos))
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.index = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _error(self, message: str) -> FormulaSyntaxError:
        tok = self._peek()
        pos = tok[2] if tok else len(self.text)
        return FormulaSyntaxError(message, self.text, _byte_offset(self.text, pos))

    def _take(self, value: str) -> bool:
        tok = self._peek()
        if tok is not None and tok[1] == value:
            self.index += 1
            return True
        return False

    def at_end(self) -> bool:
        return self.index >= len(self.tokens)

    def formula(self) -> Formula:
        left = self._prod()
        tok = self._peek()
        if tok is not None and tok[1] in ("\\", "/"):
            self.index += 1
            right = self._prod()
            follow = self._peek()
            if follow is not None and follow[1] in ("\\", "/"):
                raise self._error("chained division needs parentheses")
            return Under(left, right) if tok[1] == "\\" else Over(left, right)
        return left

    def _prod(self) -> Formula:
        result = self._post()
        while self._take("*"):
            result = Prod(result, self._post())
        return result

    def _post(self) -> Formula:
        result = self._atom()
        while True:
            tok = self._peek()
            if tok is None or tok[0] != "post":
                return result
            self.index += 1
            result = _POSTFIX[tok[1]](result)

    def _atom(self) -> Formula:
        tok = self._peek()
        if tok is None:
            raise self._error("unexpected end of input")
        kind, value, pos = tok
        if kind == "ident":
            if value.startswith(RESERVED_PREFIX) and not self.allow_reserved:
                raise ReservedNameError(f"reserved identifier {value!r}", self.text, _byte_offset(self.text, pos))
            self.index += 1
            return Prim(value)
        if value == "(":
            self.index += 1
            inner = self.formula()
            if not self._take(")"):
                raise self._error("expected ')'")
            return inner
        raise self._error(f"unexpected token {value!r}")

    def sequent(self) -> Sequent:
        antecedent = [self.formula()]
        while self._take(","):
            antecedent.append(self.formula())
        if not self._take("->"):
            raise self._error("expected '->'")
        succedent = self.formula()
        return Sequent(tuple(antecedent), succedent)


def parse_formula(text: str, *, allow_reserved: bool = False) -> Formula:
    parser = _Parser(text, allow_reserved)
    result = parser.formula()
    if not parser.at_end():
        raise parser._error("trailing input")
    return result


def parse_sequent(text: str, *, allow_reserved: bool = False) -> Sequent:
    parser = _Parser(text, allow_reserved)
    if parser.at_end() or parser._peek()[0] == "arrow":
        raise parser._error("empty antecedent")
    result = parser.sequent()
    if not parser.at_end():
        raise parser._error("trailing input")
    return result


# ----------------------------------------------------------------------
# structure

def size(f: Formula) -> int:
    if isinstance(f, Prim):
        return 0
    if isinstance(f, Unary):
        return 1 + size(f.inner)
    return 1 + size(f.left) + size(f.right)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Prim):
        return ()
    if isinstance(f, Unary):
        return (f.inner,)
    return (f.left, f.right)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order, occurrences repeated."""
    yield f
    for child in children(f):
        yield from subformulas(child)


def primitives(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prim)}


def product(formulas: Iterable[Formula]) -> Formula:
    """Left-associated product of a nonempty sequence."""
    items = list(formulas)
    if not items:
        raise ValueError("product of an empty sequence")
    result = items[0]
    for item in items[1:]:
        result = Prod(result, item)
    return result


def mirror(f: Formula) -> Formula:
    """Swap ``\\`` with ``/`` and reverse products."""
    if isinstance(f, Prim):
        return f
    if isinstance(f, Unary):
        return type(f)(mirror(f.inner))
    if isinstance(f, Under):
        return Over(mirror(f.right), mirror(f.left))
    if isinstance(f, Over):
        return Under(mirror(f.right), mirror(f.left))
    return Prod(mirror(f.right), mirror(f.left))


def mirror_sequent(s: Sequent) -> Sequent:
    return Sequent(tuple(mirror(a) for a in reversed(s.antecedent)), mirror(s.succedent))


def classify_parity(f: Formula) -> list[tuple[tuple[int, ...], Formula, Polarity]]:
    """Tag every occurrence; denominators flip polarity."""
    out: list[tuple[tuple[int, ...], Formula, Polarity]] = []

    def walk(g: Formula, path: tuple[int, ...], pol: Polarity) -> None:
        out.append((path, g, pol))
        if isinstance(g, Unary):
            walk(g.inner, path + (0,), pol)
        elif isinstance(g, Under):
            walk(g.left, path + (0,), pol.flipped())
            walk(g.right, path + (1,), pol)
        elif isinstance(g, Over):
            walk(g.left, path + (0,), pol)
            walk(g.right, path + (1,), pol.flipped())
        elif isinstance(g, Prod):
            walk(g.left, path + (0,), pol)
            walk(g.right, path + (1,), pol)

    walk(f, (), Polarity.EVEN)
    return out


def _require_neck_fragment(f: Formula) -> None:
    for g in subformulas(f):
        if isinstance(g, (Rev, Brac)):
            raise FragmentError(f"{print_formula(f)} is outside the ^c fragment")


def is_even_cyclic(f: Formula) -> bool:
    _require_neck_fragment(f)
    return all(pol is Polarity.EVEN for _, g, pol in classify_parity(f) if isinstance(g, Shift))


def is_odd_cyclic(f: Formula) -> bool:
    _require_neck_fragment(f)
    return all(pol is Polarity.ODD for _, g, pol in classify_parity(f) if isinstance(g, Shift))


def check_fragment(item: Formula | Sequent, system: SystemId) -> None:
    """Raise FragmentError if ``item`` uses a postfix the system lacks."""
    formulas = item.formulas() if isinstance(item, Sequent) else [item]
    allowed = system.unary
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, Unary) and type(g) not in allowed:
                raise FragmentError(
                    f"{SUFFIX[type(g)]} is not a connective of {system.value} (in {print_formula(f)})"
                )
