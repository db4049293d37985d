"""
Categorial grammars and right-linear grammars.

Grammar file format (UTF-8, line based, ``#`` starts a comment)::

    system: Lneck
    start: s^c
    a : (s / q^c) / p^c
    b : p

Right-linear format::

    start: S
    S -> a B
    B -> b
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Union

from necklace.errors import FormulaSyntaxError, GrammarError, ShapeError
from necklace.formula import (
    RESERVED_PREFIX,
    Formula,
    Over,
    Prim,
    Sequent,
    SystemId,
    check_fragment,
    parse_formula,
    primitives,
    print_formula,
)
from necklace.proofs import ProofNode
from necklace.search import SearchConfig, Searcher

LOG = logging.getLogger(__name__)

Word = Union[str, Sequence[str]]


def split_word(word: Word) -> tuple[str, ...]:
    """Whitespace-separated symbols if there is whitespace, else characters."""
    if isinstance(word, str):
        return tuple(word.split()) if any(ch.isspace() for ch in word) else tuple(word)
    return tuple(word)


def spell(symbols: Sequence[str]) -> str:
    return ("" if all(len(a) == 1 for a in symbols) else " ").join(symbols)


class Witness(NamedTuple):
    assignment: tuple[Formula, ...]
    proof: ProofNode


@dataclass(frozen=True)
class Grammar:
    lexicon: tuple[tuple[str, Formula], ...]
    distinguished: Formula
    system: SystemId = SystemId.L
    alphabet: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "lexicon", tuple((a, f) for a, f in self.lexicon))
        if not self.alphabet:
            object.__setattr__(self, "alphabet", tuple(dict.fromkeys(a for a, _ in self.lexicon)))
        for symbol, f in self.lexicon:
            if symbol not in self.alphabet:
                raise GrammarError(f"lexicon symbol {symbol!r} is not in the alphabet")
            check_fragment(f, self.system)
        check_fragment(self.distinguished, self.system)

    def types_for(self, symbol: str) -> list[Formula]:
        return [f for a, f in self.lexicon if a == symbol]

    def toolbox(self) -> list[Formula]:
        return list(dict.fromkeys(f for _, f in self.lexicon))

    def with_system(self, system: SystemId) -> "Grammar":
        return replace(self, system=system)

    def map(self, lexical: Callable[[Formula], Formula], start: Callable[[Formula], Formula],
            system: SystemId) -> "Grammar":
        return Grammar(tuple((a, lexical(f)) for a, f in self.lexicon),
                       start(self.distinguished), system, self.alphabet)

    def searcher(self) -> Searcher:
        return Searcher(SearchConfig.for_system(self.system))


# ----------------------------------------------------------------------
# membership

def member(g: Grammar, word: Word, *, searcher: Optional[Searcher] = None) -> Optional[Witness]:
    """First lexicon assignment (in lexicon order) whose sequent is derivable."""
    symbols = split_word(word)
    if not symbols:
        raise GrammarError("the empty word is never in the language")
    for symbol in symbols:
        if symbol not in g.alphabet:
            raise GrammarError(f"unknown symbol {symbol!r}")
    choices = [g.types_for(a) for a in symbols]
    if any(not c for c in choices):
        return None
    searcher = searcher or g.searcher()
    for assignment in itertools.product(*choices):
        proof = searcher.derive(Sequent(assignment, g.distinguished))
        if proof is not None:
            return Witness(assignment, proof)
    return None


def enumerate_language(g: Grammar, max_len: int) -> set[str]:
    searcher = g.searcher()
    found: set[str] = set()
    for n in range(1, max_len + 1):
        for symbols in itertools.product(g.alphabet, repeat=n):
            if member(g, symbols, searcher=searcher) is not None:
                found.add(spell(symbols))
        LOG.info("length %d done: %d words so far", n, len(found))
    return found


# ----------------------------------------------------------------------
# files

def parse_grammar(text: str, source: str = "<string>") -> Grammar:
    system = SystemId.L
    start: Optional[Formula] = None
    lexicon: list[tuple[str, Formula]] = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise GrammarError(f"{source}:{number}: expected '<symbol> : <formula>'")
        key, value = key.strip(), value.strip()
        try:
            if key == "system":
                system = SystemId.parse(value)
            elif key == "start":
                start = parse_formula(value, allow_reserved=True)
            elif not key or len(key.split()) != 1:
                raise GrammarError(f"{source}:{number}: bad symbol {key!r}")
            else:
                lexicon.append((key, parse_formula(value, allow_reserved=True)))
        except (FormulaSyntaxError, ValueError) as exc:
            raise GrammarError(f"{source}:{number}: {exc}") from exc
    if start is None:
        raise GrammarError(f"{source}: missing 'start:' line")
    if not lexicon:
        raise GrammarError(f"{source}: empty lexicon")
    names = set().union(primitives(start), *(primitives(f) for _, f in lexicon))
    if any(name.startswith(RESERVED_PREFIX) for name in names):
        LOG.warning("%s uses reserved generated names", source)
    return Grammar(tuple(lexicon), start, system)


def load_grammar(path: Union[str, Path]) -> Grammar:
    return parse_grammar(Path(path).read_text(encoding="utf-8"), str(path))


def dump_grammar(g: Grammar) -> str:
    lines = [f"system: {g.system.value}", f"start: {print_formula(g.distinguished)}"]
    lines += [f"{a} : {print_formula(f)}" for a, f in g.lexicon]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# right-linear grammars

class Production(NamedTuple):
    head: str
    terminal: str
    tail: Optional[str] = None

    def __str__(self) -> str:
        return f"{self.head} -> {self.terminal}" + (f" {self.tail}" if self.tail else "")


@dataclass(frozen=True)
class RightLinearGrammar:
    productions: tuple[Production, ...]
    start: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "productions", tuple(Production(*p) for p in self.productions))
        if self.start not in self.nonterminals:
            raise GrammarError(f"start symbol {self.start!r} has no productions")
        for p in self.productions:
            if p.tail is not None and p.tail not in self.nonterminals:
                raise GrammarError(f"{p}: {p.tail!r} has no productions")

    @property
    def nonterminals(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(p.head for p in self.productions))

    @property
    def terminals(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(p.terminal for p in self.productions))

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> "RightLinearGrammar":
        start: Optional[str] = None
        productions: list[Production] = []
        for number, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("start:"):
                start = line[len("start:"):].strip()
                continue
            head, arrow, body = line.partition("->")
            parts = body.split()
            if not arrow or len(head.split()) != 1 or len(parts) not in (1, 2):
                raise GrammarError(f"{source}:{number}: production must be 'X -> a Y' or 'X -> a'")
            productions.append(Production(head.strip(), *parts))
        if start is None:
            raise GrammarError(f"{source}: missing 'start:' line")
        return cls(tuple(productions), start)

    def language(self, max_len: int) -> set[str]:
        """Direct derivation oracle, words up to ``max_len``."""
        words: set[str] = set()
        frontier: list[tuple[tuple[str, ...], str]] = [((), self.start)]
        while frontier:
            prefix, head = frontier.pop()
            if len(prefix) >= max_len:
                continue
            for p in self.productions:
                if p.head != head:
                    continue
                extended = prefix + (p.terminal,)
                if p.tail is None:
                    words.add(spell(extended))
                else:
                    frontier.append((extended, p.tail))
        return words


def load_right_linear(path: Union[str, Path]) -> RightLinearGrammar:
    return RightLinearGrammar.from_text(Path(path).read_text(encoding="utf-8"), str(path))


def import_right_linear(rl: RightLinearGrammar) -> Grammar:
    lexicon = [(p.terminal, Prim(p.head) if p.tail is None else Over(Prim(p.head), Prim(p.tail)))
               for p in rl.productions]
    return Grammar(tuple(lexicon), Prim(rl.start), SystemId.L)


def perm_closure_oracle(rl: RightLinearGrammar, max_len: int) -> set[str]:
    closed: set[str] = set()
    for word in rl.language(max_len):
        for perm in itertools.permutations(split_word(word)):
            closed.add(spell(perm))
    return closed


# ----------------------------------------------------------------------
# chains of primitive divisions

def _division_chain(s: Sequent) -> tuple[list[tuple[str, str]], str, str]:
    *divisions, last = s.antecedent
    if not isinstance(last, Prim) or not isinstance(s.succedent, Prim):
        raise ShapeError(f"{s}: last antecedent type and succedent must be primitive")
    pairs = []
    for f in divisions:
        if not (isinstance(f, Over) and isinstance(f.left, Prim) and isinstance(f.right, Prim)):
            raise ShapeError(f"{s}: {print_formula(f)} is not of the form p/q")
        pairs.append((f.left.name, f.right.name))
    return pairs, last.name, s.succedent.name


def find_chain_order(s: Sequent) -> Optional[tuple[int, ...]]:
    """0-based ``sigma`` with ``p[sigma[0]] = s0``, ``q[sigma[i]] = p[sigma[i+1]]``, ``q[sigma[-1]] = pn``."""
    pairs, last, goal = _division_chain(s)
    if not pairs:
        return () if last == goal else None
    for sigma in itertools.permutations(range(len(pairs))):
        chain = [pairs[i] for i in sigma]
        if chain[0][0] != goal or chain[-1][1] != last:
            continue
        if all(chain[i][1] == chain[i + 1][0] for i in range(len(chain) - 1)):
            return sigma
    return None


def reorder_chain(s: Sequent, sigma: Iterable[int]) -> Sequent:
    """Apply ``sigma`` to the division types, keeping the final primitive last."""
    *divisions, last = s.antecedent
    return Sequent(tuple(divisions[i] for i in sigma) + (last,), s.succedent)
