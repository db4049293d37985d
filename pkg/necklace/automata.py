"""
Finite automata over a fixed alphabet, and the language operations the
formal-language semantics needs.

An ``Automaton`` is an immutable NFA without epsilon moves; states are
``0 .. states-1``. Determinization is capped at ``STATE_LIMIT`` states.
"""

from __future__ import annotations

import json
import logging
import warnings
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

from necklace.errors import AlphabetMismatchError, AutomatonError, StateLimitError, VacuousResidualWarning

LOG = logging.getLogger(__name__)

STATE_LIMIT = 10_000

Transition = tuple[int, str, int]


class _Dfa(NamedTuple):
    start: int
    table: list[dict[str, int]]
    accepting: frozenset[int]


@dataclass(frozen=True)
class Automaton:
    alphabet: tuple[str, ...]
    states: int
    initial: frozenset[int]
    accepting: frozenset[int]
    delta: frozenset[Transition]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", frozenset((int(p), str(a), int(q)) for p, a, q in self.delta))
        if self.states < 0:
            raise AutomatonError("negative state count")
        for q in self.initial | self.accepting:
            if not 0 <= q < self.states:
                raise AutomatonError(f"state {q} out of range 0..{self.states - 1}")
        for p, a, q in self.delta:
            if not (0 <= p < self.states and 0 <= q < self.states):
                raise AutomatonError(f"transition ({p}, {a!r}, {q}) leaves the state range")
            if a not in self.alphabet:
                raise AutomatonError(f"symbol {a!r} is not in the alphabet")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def empty(cls, alphabet: Iterable[str]) -> "Automaton":
        return cls(tuple(alphabet), 1, frozenset({0}), frozenset(), frozenset())

    @classmethod
    def universal(cls, alphabet: Iterable[str]) -> "Automaton":
        alphabet = tuple(alphabet)
        return cls(alphabet, 1, frozenset({0}), frozenset({0}), frozenset((0, a, 0) for a in alphabet))

    @classmethod
    def from_words(cls, words: Iterable[Union[str, Sequence[str]]], alphabet: Iterable[str] = ()) -> "Automaton":
        """Trie automaton for a finite language."""
        words = [tuple(w) for w in words]
        letters = set(alphabet) | {a for w in words for a in w}
        children: list[dict[str, int]] = [{}]
        accepting = set()
        for w in words:
            node = 0
            for a in w:
                if a not in children[node]:
                    children.append({})
                    children[node][a] = len(children) - 1
                node = children[node][a]
            accepting.add(node)
        delta = {(p, a, q) for p, out in enumerate(children) for a, q in out.items()}
        return cls(tuple(letters), len(children), frozenset({0}), frozenset(accepting), frozenset(delta))

    def over(self, alphabet: Iterable[str]) -> "Automaton":
        """Same language over a larger alphabet."""
        alphabet = tuple(alphabet)
        missing = set(self.alphabet) - set(alphabet)
        if missing:
            raise AlphabetMismatchError(f"alphabet lacks {sorted(missing)}")
        return Automaton(alphabet, self.states, self.initial, self.accepting, self.delta)

    # ------------------------------------------------------------------
    # running

    @cached_property
    def _moves(self) -> dict[tuple[int, str], frozenset[int]]:
        moves: dict[tuple[int, str], set[int]] = {}
        for p, a, q in self.delta:
            moves.setdefault((p, a), set()).add(q)
        return {key: frozenset(value) for key, value in moves.items()}

    def step(self, current: frozenset[int], symbol: str) -> frozenset[int]:
        out: set[int] = set()
        for q in current:
            out |= self._moves.get((q, symbol), frozenset())
        return frozenset(out)

    def accepts(self, word: Union[str, Sequence[str]]) -> bool:
        current = self.initial
        for a in word:
            if a not in self.alphabet:
                return False
            current = self.step(current, a)
        return bool(current & self.accepting)

    def words(self, max_len: int) -> set[str]:
        found: set[str] = set()
        frontier = [("", self.initial)]
        for _ in range(max_len + 1):
            following = []
            for prefix, current in frontier:
                if current & self.accepting:
                    found.add(prefix)
                following += [(prefix + a, nxt) for a in self.alphabet if (nxt := self.step(current, a))]
            frontier = following
        return found

    # ------------------------------------------------------------------
    # determinization and minimization

    def _subsets(self, limit: int = STATE_LIMIT) -> _Dfa:
        start = self.initial
        index = {start: 0}
        table: list[dict[str, int]] = [{}]
        queue = deque([start])
        while queue:
            current = queue.popleft()
            row = table[index[current]]
            for a in self.alphabet:
                nxt = self.step(current, a)
                if nxt not in index:
                    if len(index) >= limit:
                        raise StateLimitError(f"determinization exceeds {limit} states")
                    index[nxt] = len(table)
                    table.append({})
                    queue.append(nxt)
                row[a] = index[nxt]
        accepting = frozenset(i for subset, i in index.items() if subset & self.accepting)
        return _Dfa(0, table, accepting)

    @staticmethod
    def _from_dfa(alphabet: tuple[str, ...], dfa: _Dfa) -> "Automaton":
        delta = frozenset((p, a, q) for p, row in enumerate(dfa.table) for a, q in row.items())
        return Automaton(alphabet, len(dfa.table), frozenset({dfa.start}), dfa.accepting, delta)

    def determinize(self, limit: int = STATE_LIMIT) -> "Automaton":
        """Complete DFA of the reachable subsets."""
        return self._from_dfa(self.alphabet, self._subsets(limit))

    def minimize(self, limit: int = STATE_LIMIT) -> "Automaton":
        dfa = self._subsets(limit)
        block = [1 if q in dfa.accepting else 0 for q in range(len(dfa.table))]
        while True:
            signature = [(block[q],) + tuple(block[dfa.table[q][a]] for a in self.alphabet)
                         for q in range(len(dfa.table))]
            numbering: dict[tuple, int] = {}
            refined = [numbering.setdefault(sig, len(numbering)) for sig in signature]
            if len(numbering) == len(set(block)):
                break
            block = refined
        classes = {}
        for q in range(len(dfa.table)):
            classes.setdefault(block[q], q)
        renumber = {b: i for i, b in enumerate(classes)}
        table = [{a: renumber[block[dfa.table[q][a]]] for a in self.alphabet} for q in classes.values()]
        accepting = frozenset(renumber[block[q]] for q in dfa.accepting)
        return self._from_dfa(self.alphabet, _Dfa(renumber[block[dfa.start]], table, accepting))

    # ------------------------------------------------------------------
    # decision procedures

    def is_empty(self) -> bool:
        seen = set(self.initial)
        queue = deque(self.initial)
        while queue:
            q = queue.popleft()
            if q in self.accepting:
                return False
            for a in self.alphabet:
                for nxt in self._moves.get((q, a), ()):
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        return True

    def includes(self, other: "Automaton") -> bool:
        """``L(other)`` is a subset of ``L(self)``."""
        _same_alphabet(self, other)
        start = (other.initial, self.initial)
        seen = {start}
        queue = deque([start])
        while queue:
            mine, theirs = queue.popleft()
            if mine & other.accepting and not theirs & self.accepting:
                return False
            for a in self.alphabet:
                nxt = (other.step(mine, a), self.step(theirs, a))
                if nxt[0] and nxt not in seen:
                    if len(seen) >= STATE_LIMIT:
                        raise StateLimitError(f"inclusion check exceeds {STATE_LIMIT} states")
                    seen.add(nxt)
                    queue.append(nxt)
        return True

    def equivalent(self, other: "Automaton") -> bool:
        return self.includes(other) and other.includes(self)

    def trim(self) -> "Automaton":
        """Drop states that are unreachable or cannot reach acceptance."""
        forward = _closure(self.initial, {(p, q) for p, _, q in self.delta})
        backward = _closure(self.accepting, {(q, p) for p, _, q in self.delta})
        useful = sorted(forward & backward)
        if not useful:
            return Automaton.empty(self.alphabet)
        renumber = {q: i for i, q in enumerate(useful)}
        return Automaton(
            self.alphabet,
            len(useful),
            frozenset(renumber[q] for q in self.initial if q in renumber),
            frozenset(renumber[q] for q in self.accepting if q in renumber),
            frozenset((renumber[p], a, renumber[q]) for p, a, q in self.delta if p in renumber and q in renumber),
        )


def _closure(start: Iterable[int], edges: set[tuple[int, int]]) -> set[int]:
    seen = set(start)
    queue = deque(seen)
    while queue:
        p = queue.popleft()
        for src, dst in edges:
            if src == p and dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return seen


def _same_alphabet(a: Automaton, b: Automaton) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {list(a.alphabet)} vs {list(b.alphabet)}")


def _shifted(a: Automaton, offset: int) -> set[Transition]:
    return {(p + offset, x, q + offset) for p, x, q in a.delta}


# ----------------------------------------------------------------------
# language operations

def lang_union(a: Automaton, b: Automaton) -> Automaton:
    _same_alphabet(a, b)
    n = a.states
    return Automaton(
        a.alphabet,
        n + b.states,
        a.initial | {q + n for q in b.initial},
        a.accepting | {q + n for q in b.accepting},
        frozenset(a.delta | _shifted(b, n)),
    )


def lang_concat(a: Automaton, b: Automaton) -> Automaton:
    _same_alphabet(a, b)
    n = a.states
    b_initial = {q + n for q in b.initial}
    delta = set(a.delta) | _shifted(b, n)
    delta |= {(p, x, i) for p, x, q in a.delta if q in a.accepting for i in b_initial}
    initial = set(a.initial)
    if a.initial & a.accepting:
        initial |= b_initial
    accepting = {q + n for q in b.accepting}
    if b.initial & b.accepting:
        accepting |= a.accepting
    return Automaton(a.alphabet, n + b.states, frozenset(initial), frozenset(accepting), frozenset(delta))


def lang_reverse(a: Automaton) -> Automaton:
    return Automaton(a.alphabet, a.states, a.accepting, a.initial, frozenset((q, x, p) for p, x, q in a.delta))


def lang_cyclic_shift(a: Automaton) -> Automaton:
    """``{vu : uv in L}``: union over states q of (q to accepting) then (initial to q)."""
    a = a.trim()
    result = Automaton.empty(a.alphabet)
    for q in range(a.states):
        tail = Automaton(a.alphabet, a.states, frozenset({q}), a.accepting, a.delta)
        head = Automaton(a.alphabet, a.states, a.initial, frozenset({q}), a.delta)
        result = lang_union(result, lang_concat(tail, head))
    LOG.debug("cyclic shift over %d states", a.states)
    return result.minimize()


def _vacuous(alphabet: tuple[str, ...]) -> Automaton:
    warnings.warn("residual by the empty language is the universal language", VacuousResidualWarning,
                  stacklevel=3)
    return Automaton.universal(alphabet)


def lang_left_residual(b: Automaton, a: Automaton) -> Automaton:
    """``B\\A = {u : vu in A for every v in B}``."""
    _same_alphabet(a, b)
    if b.is_empty():
        return _vacuous(a.alphabet)
    dfa = a._subsets()
    # DFA states of A reachable by some word of B
    start = (b.initial, dfa.start)
    seen = {start}
    queue = deque([start])
    reached: set[int] = set()
    while queue:
        mine, d = queue.popleft()
        if mine & b.accepting:
            reached.add(d)
        for x in a.alphabet:
            nxt = (b.step(mine, x), dfa.table[d][x])
            if nxt[0] and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    origin = frozenset(reached)
    index = {origin: 0}
    table: list[dict[str, int]] = [{}]
    queue2 = deque([origin])
    while queue2:
        current = queue2.popleft()
        row = table[index[current]]
        for x in a.alphabet:
            nxt = frozenset(dfa.table[d][x] for d in current)
            if nxt not in index:
                if len(index) >= STATE_LIMIT:
                    raise StateLimitError(f"residual exceeds {STATE_LIMIT} states")
                index[nxt] = len(table)
                table.append({})
                queue2.append(nxt)
            row[x] = index[nxt]
    accepting = frozenset(i for subset, i in index.items() if subset <= dfa.accepting)
    return Automaton._from_dfa(a.alphabet, _Dfa(0, table, accepting)).minimize()


def lang_right_residual(a: Automaton, b: Automaton) -> Automaton:
    """``A/B = {u : uv in A for every v in B}``."""
    _same_alphabet(a, b)
    if b.is_empty():
        return _vacuous(a.alphabet)
    dfa = a._subsets()
    delta = frozenset((p, x, q) for p, row in enumerate(dfa.table) for x, q in row.items())
    accepting = frozenset(
        d for d in range(len(dfa.table))
        if Automaton(a.alphabet, len(dfa.table), frozenset({d}), dfa.accepting, delta).includes(b)
    )
    return Automaton(a.alphabet, len(dfa.table), frozenset({dfa.start}), accepting, delta).minimize()


# ----------------------------------------------------------------------
# JSON

def automaton_to_dict(a: Automaton) -> dict:
    return {
        "alphabet": list(a.alphabet),
        "states": a.states,
        "initial": sorted(a.initial),
        "accepting": sorted(a.accepting),
        "delta": [list(t) for t in sorted(a.delta)],
    }


def automaton_from_dict(data: dict) -> Automaton:
    try:
        return Automaton(
            tuple(data["alphabet"]),
            int(data["states"]),
            frozenset(data["initial"]),
            frozenset(data["accepting"]),
            frozenset(tuple(t) for t in data["delta"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise AutomatonError(f"malformed automaton: {exc}") from exc


def load_automaton(path: Union[str, Path]) -> Automaton:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise AutomatonError(f"{path}: {exc}") from exc
    return automaton_from_dict(data)


def dump_automaton(a: Automaton) -> str:
    return json.dumps(automaton_to_dict(a))
