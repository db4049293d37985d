"""
Cut-free backward proof search for L, Lneck, LCS, Lrev and Lbrac.

* Rotation rules are folded: a node whose succedent admits rotation branches
  over every cyclic offset and then applies a non-rotation rule.
* Results are memoised per (sequent, remaining cut budget).
* For Lrev/Lbrac the reversal step for ``Gamma -> B^r`` may grow the
  antecedent, so open goals are tracked and refutations that relied on an
  open goal are not memoised.
* Lbrac additionally tries cuts on ``C^r`` for ``C`` a subformula of the
  current goal, bounded by ``cut_budget`` along every branch.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional, Sequence

from necklace.errors import SearchLimitError
from necklace.formula import (
    Brac,
    Formula,
    Over,
    Prim,
    Prod,
    Rev,
    Sequent,
    Shift,
    SystemId,
    Under,
    check_fragment,
    subformulas,
)
from necklace.proofs import ProofNode, RuleId

LOG = logging.getLogger(__name__)

DEFAULT_MEMO_LIMIT = 500_000


@dataclass(frozen=True)
class SearchConfig:
    system: SystemId
    cut_budget: int = 0
    memo_limit: int = DEFAULT_MEMO_LIMIT

    def __post_init__(self) -> None:
        if self.cut_budget < 0:
            raise ValueError("cut_budget must be non-negative")
        if self.cut_budget and self.system is not SystemId.LBRAC:
            raise ValueError(f"cut_budget must be 0 for {self.system.value}")

    @classmethod
    def for_system(cls, system: SystemId, **overrides) -> "SearchConfig":
        if system is SystemId.LBRAC:
            overrides.setdefault("cut_budget", 1)
        return cls(system, **overrides)


class _Step(NamedTuple):
    rule: RuleId
    premises: tuple[tuple[Sequent, int], ...]
    offset: Optional[int] = None
    build: Optional[Callable[[list[ProofNode]], ProofNode]] = None


def _toggle(f: Formula) -> Formula:
    return f.inner if isinstance(f, Rev) else Rev(f)


class Searcher:
    """One memo table, one system; not thread-safe."""

    def __init__(self, config: SearchConfig) -> None:
        self.config = config
        self.system = config.system
        self._memo: dict[tuple[Sequent, int], Optional[ProofNode]] = {}
        self._flat: dict[tuple[Sequent, int], Optional[ProofNode]] = {}
        self._open: set[tuple[Sequent, int]] = set()
        self._reversal = self.system in (SystemId.LREV, SystemId.LBRAC)

    # ------------------------------------------------------------------
    def derive(self, s: Sequent) -> Optional[ProofNode]:
        """Return a proof of ``s`` or None."""
        check_fragment(s, self.system)
        proof, _ = self._prove(s, self.config.cut_budget)
        LOG.debug("%s %s: %s (memo %d/%d)", self.system.value, s,
                  "derivable" if proof else "underivable", len(self._memo), len(self._flat))
        return proof

    def derivable(self, s: Sequent) -> bool:
        return self.derive(s) is not None

    # ------------------------------------------------------------------
    def _store(self, table: dict, key: tuple[Sequent, int], value: Optional[ProofNode]) -> None:
        if len(self._memo) + len(self._flat) >= self.config.memo_limit:
            raise SearchLimitError(f"memo limit {self.config.memo_limit} exceeded")
        table[key] = value

    def _rotation_rule(self, s: Sequent) -> Optional[RuleId]:
        if len(s.antecedent) < 2:
            return None
        if self.system is SystemId.LCS:
            return RuleId.CS
        if self.system is SystemId.LNECK and isinstance(s.succedent, Shift):
            return RuleId.NeckRot
        if self.system is SystemId.LBRAC and isinstance(s.succedent, Brac):
            return RuleId.BracRot
        return None

    # ------------------------------------------------------------------
    def _prove(self, s: Sequent, budget: int) -> tuple[Optional[ProofNode], bool]:
        """Proof or None, plus whether a refutation leaned on an open goal."""
        key = (s, budget)
        if key in self._memo:
            return self._memo[key], False
        if key in self._open:
            return None, True
        self._open.add(key)
        tainted = False
        found: Optional[ProofNode] = None
        try:
            rotation = self._rotation_rule(s)
            offsets = range(len(s.antecedent)) if rotation else (0,)
            for k in offsets:
                proof, t = self._prove_flat(s.rotate(k) if k else s, budget)
                tainted = tainted or t
                if proof is not None:
                    found = proof if k == 0 else ProofNode(s, rotation, (proof,), k)
                    break
        finally:
            self._open.discard(key)
        if found is not None or not tainted:
            self._store(self._memo, key, found)
        return found, found is None and tainted

    # ------------------------------------------------------------------
    def _prove_flat(self, s: Sequent, budget: int) -> tuple[Optional[ProofNode], bool]:
        """Like _prove but the last rule is not a rotation."""
        key = (s, budget)
        if key in self._flat:
            return self._flat[key], False
        tainted = False
        for step in self._steps(s, budget):
            proofs: list[ProofNode] = []
            for premise, premise_budget in step.premises:
                proof, t = self._prove(premise, premise_budget)
                tainted = tainted or t
                if proof is None:
                    break
                proofs.append(proof)
            else:
                node = step.build(proofs) if step.build else ProofNode(s, step.rule, tuple(proofs), step.offset)
                self._store(self._flat, key, node)
                return node, False
        if not tainted:
            self._store(self._flat, key, None)
        return None, tainted

    # ------------------------------------------------------------------
    def _steps(self, s: Sequent, budget: int) -> Iterator[_Step]:
        """Backward rule applications in a fixed order: axioms, right, left, cut."""
        ant, succ = s.antecedent, s.succedent
        n = len(ant)
        system = self.system

        if n == 1 and isinstance(succ, Prim) and ant[0] == succ:
            yield _Step(RuleId.Ax, ())
            return
        if system is SystemId.LBRAC and n == 1 and isinstance(ant[0], Rev) and succ == Brac(ant[0].inner):
            yield _Step(RuleId.AxRevBrac, ())
            return

        if isinstance(succ, Under):
            yield _Step(RuleId.UnderR, ((Sequent((succ.left,) + ant, succ.right), budget),))
        elif isinstance(succ, Over):
            yield _Step(RuleId.OverR, ((Sequent(ant + (succ.right,), succ.left), budget),))
        elif isinstance(succ, Prod):
            for k in range(1, n):
                yield _Step(RuleId.ProdR, ((Sequent(ant[:k], succ.left), budget),
                                           (Sequent(ant[k:], succ.right), budget)))
        elif isinstance(succ, Shift):
            yield _Step(RuleId.NeckR, ((Sequent(ant, succ.inner), budget),))
        elif isinstance(succ, Brac):
            yield _Step(RuleId.BracR, ((Sequent(ant, succ.inner), budget),))
        elif isinstance(succ, Rev):
            if isinstance(succ.inner, Rev):
                yield _Step(RuleId.RevRevR, ((Sequent(ant, succ.inner.inner), budget),))
            yield self._reverse_step(s, budget)

        for i, f in enumerate(ant):
            if isinstance(f, Prod):
                yield _Step(RuleId.ProdL, ((Sequent(ant[:i] + (f.left, f.right) + ant[i + 1:], succ), budget),))
            elif isinstance(f, Under):
                for j in range(i):
                    main = Sequent(ant[:j] + (f.right,) + ant[i + 1:], succ)
                    minor = Sequent(ant[j:i], f.left)
                    yield _Step(RuleId.UnderL, ((main, budget), (minor, budget)))
            elif isinstance(f, Over):
                for j in range(i + 2, n + 1):
                    main = Sequent(ant[:i] + (f.left,) + ant[j:], succ)
                    minor = Sequent(ant[i + 1:j], f.right)
                    yield _Step(RuleId.OverL, ((main, budget), (minor, budget)))
            elif isinstance(f, Shift) and n == 1 and isinstance(succ, Shift):
                yield _Step(RuleId.NeckL, ((Sequent((f.inner,), succ), budget),))
            elif isinstance(f, Brac) and n == 1 and isinstance(succ, Brac):
                yield _Step(RuleId.BracL, ((Sequent((f.inner,), succ), budget),))
            elif isinstance(f, Rev) and isinstance(f.inner, Rev):
                yield _Step(RuleId.RevRevL, ((Sequent(ant[:i] + (f.inner.inner,) + ant[i + 1:], succ), budget),))

        if system is SystemId.LBRAC and budget > 0:
            yield from self._cut_steps(s, budget)

    # ------------------------------------------------------------------
    def _reverse_step(self, s: Sequent, budget: int) -> _Step:
        """``Gamma -> B^r`` from the reversed, toggled antecedent ``-> B``."""
        ant, succ = s.antecedent, s.succedent
        premise = Sequent(tuple(_toggle(a) for a in reversed(ant)), succ.inner)

        def build(proofs: list[ProofNode]) -> ProofNode:
            reversed_ant = tuple(Rev(a) for a in reversed(premise.antecedent))
            node = ProofNode(Sequent(reversed_ant, succ), RuleId.RevRev, (proofs[0],))
            current = list(reversed_ant)
            for i, original in enumerate(ant):
                if current[i] != original:
                    current[i] = original
                    node = ProofNode(Sequent(tuple(current), succ), RuleId.RevRevL, (node,))
            return node

        return _Step(RuleId.RevRev, ((premise, budget),), build=build)

    def _cut_steps(self, s: Sequent, budget: int) -> Iterator[_Step]:
        ant, succ = s.antecedent, s.succedent
        closure: list[Formula] = []
        seen: set[Formula] = set()
        for f in s.formulas():
            for g in subformulas(f):
                if g not in seen:
                    seen.add(g)
                    closure.append(g)
        for a in range(len(ant)):
            for b in range(a + 1, len(ant) + 1):
                for c in closure:
                    cut_formula = Rev(c)
                    if b - a == 1 and ant[a] == cut_formula:
                        continue
                    left = Sequent(ant[a:b], cut_formula)
                    right = Sequent(ant[:a] + (cut_formula,) + ant[b:], succ)
                    yield _Step(RuleId.Cut, ((left, budget - 1), (right, budget - 1)), offset=a)


def derive(s: Sequent, cfg: SearchConfig) -> Optional[ProofNode]:
    return Searcher(cfg).derive(s)


# ----------------------------------------------------------------------
# corpus generation

_UNARY_ORDER = (Shift, Rev, Brac)
_BINARY_ORDER = (Under, Over, Prod)


def formulas_of_size(alphabet: Sequence[str], k: int, system: SystemId,
                     _cache: Optional[dict[int, list[Formula]]] = None) -> list[Formula]:
    """All formulas with exactly ``k`` connectives, in enumeration order."""
    cache = {} if _cache is None else _cache
    if k in cache:
        return cache[k]
    if k == 0:
        result: list[Formula] = [Prim(a) for a in alphabet]
    else:
        result = []
        for unary in _UNARY_ORDER:
            if unary in system.unary:
                result.extend(unary(f) for f in formulas_of_size(alphabet, k - 1, system, cache))
        for binary in _BINARY_ORDER:
            for i in range(k):
                lefts = formulas_of_size(alphabet, i, system, cache)
                rights = formulas_of_size(alphabet, k - 1 - i, system, cache)
                result.extend(binary(l, r) for l in lefts for r in rights)
    cache[k] = result
    return result


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_sequents(alphabet: Sequence[str], max_total_size: int, system: SystemId) -> Iterator[Sequent]:
    """Every sequent whose total size (see Sequent.total_size) is at most the bound."""
    cache: dict[int, list[Formula]] = {}
    for total in range(max_total_size + 1):
        for n in range(1, total + 2):
            budget = total - (n - 1)
            for sizes in _compositions(budget, n + 1):
                pools = [formulas_of_size(alphabet, k, system, cache) for k in sizes]
                for combo in itertools.product(*pools):
                    yield Sequent(tuple(combo[:-1]), combo[-1])
