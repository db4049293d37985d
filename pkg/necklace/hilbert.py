"""
Hilbert-style calculus over single-formula sequents ``A -> B``.

Axioms: identity, both directions of associativity, ``C -> C^c``.
Rules: currying (HCurry), uncurrying (HUncurry), transitivity (HTrans),
``A^c -> C^c`` from ``A -> C^c`` (HNeckMono) and ``B*A -> C^c`` from
``A*B -> C^c`` (HNeckRot).

``to_hilbert`` turns a cut-free Lneck sequent proof of ``A1, ..., An -> B``
into a derivation of the left-associated product ``A1 * ... * An -> B``.
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Optional, Sequence

from necklace.errors import ProofError
from necklace.formula import Formula, Over, Prod, Sequent, Shift, Under, product
from necklace.proofs import ProofNode, RuleId

LOG = logging.getLogger(__name__)


class HilbertStep(NamedTuple):
    sequent: Sequent
    rule: RuleId
    premises: tuple[int, ...] = ()


def _single(s: Sequent) -> Optional[Formula]:
    return s.antecedent[0] if len(s.antecedent) == 1 else None


def _check_step(step: HilbertStep, cited: list[Sequent]) -> Optional[str]:
    a, b = _single(step.sequent), step.sequent.succedent
    if a is None:
        return "antecedent must be a single formula"
    rule = step.rule
    if rule is RuleId.HAxId:
        return None if not cited and a == b else "identity axiom needs A -> A"
    if rule is RuleId.HAxAssoc:
        if cited:
            return "axioms take no premises"
        if isinstance(a, Prod) and isinstance(a.right, Prod) and b == Prod(Prod(a.left, a.right.left), a.right.right):
            return None
        if isinstance(a, Prod) and isinstance(a.left, Prod) and b == Prod(a.left.left, Prod(a.left.right, a.right)):
            return None
        return "not an associativity instance"
    if rule is RuleId.HAxNeck:
        return None if not cited and b == Shift(a) else "axiom needs C -> C^c"
    if rule is RuleId.HTrans:
        if len(cited) != 2:
            return "transitivity takes two premises"
        first, second = cited
        if first.antecedent == (a,) and second.succedent == b and first.succedent == _single(second):
            return None
        return "premises do not chain"
    if len(cited) != 1:
        return f"{rule.value} takes one premise"
    premise = cited[0]
    pa, pb = _single(premise), premise.succedent
    if pa is None:
        return "premise antecedent must be a single formula"
    if rule is RuleId.HCurry:
        if isinstance(pa, Prod) and ((a == pa.left and b == Over(pb, pa.right))
                                     or (a == pa.right and b == Under(pa.left, pb))):
            return None
        return "not a currying of the premise"
    if rule is RuleId.HUncurry:
        if isinstance(a, Prod) and ((pa == a.left and pb == Over(b, a.right))
                                    or (pa == a.right and pb == Under(a.left, b))):
            return None
        return "not an uncurrying of the premise"
    if rule is RuleId.HNeckMono:
        if isinstance(b, Shift) and pb == b and a == Shift(pa):
            return None
        return "needs A^c -> C^c from A -> C^c"
    if rule is RuleId.HNeckRot:
        if isinstance(b, Shift) and pb == b and isinstance(pa, Prod) and a == Prod(pa.right, pa.left):
            return None
        return "needs B*A -> C^c from A*B -> C^c"
    return f"{rule.value} is not a Hilbert rule"


def find_invalid_hilbert_step(steps: Sequence[HilbertStep]) -> Optional[tuple[int, str]]:
    for index, step in enumerate(steps):
        if any(not 0 <= j < index for j in step.premises):
            return index, "premise index must refer to an earlier step"
        reason = _check_step(step, [steps[j].sequent for j in step.premises])
        if reason is not None:
            return index, reason
    return None


def check_hilbert_proof(steps: Sequence[HilbertStep]) -> bool:
    problem = find_invalid_hilbert_step(steps)
    if problem is not None:
        LOG.debug("bad Hilbert step %d: %s", *problem)
    return problem is None


# ----------------------------------------------------------------------
# translation from sequent proofs

def _seq(a: Formula, b: Formula) -> Sequent:
    return Sequent((a,), b)


class _Builder:
    def __init__(self) -> None:
        self.steps: list[HilbertStep] = []
        self.index: dict[Sequent, int] = {}

    def add(self, sequent: Sequent, rule: RuleId, premises: tuple[int, ...] = ()) -> int:
        if sequent in self.index:
            return self.index[sequent]
        self.steps.append(HilbertStep(sequent, rule, premises))
        self.index[sequent] = len(self.steps) - 1
        return self.index[sequent]

    def lhs(self, i: int) -> Formula:
        return self.steps[i].sequent.antecedent[0]

    def rhs(self, i: int) -> Formula:
        return self.steps[i].sequent.succedent

    # ------------------------------------------------------------------
    def ident(self, a: Formula) -> int:
        return self.add(_seq(a, a), RuleId.HAxId)

    def trans(self, i: int, j: int) -> int:
        if self.rhs(i) != self.lhs(j):
            raise ProofError(f"cannot chain {self.steps[i].sequent} and {self.steps[j].sequent}")
        return self.add(_seq(self.lhs(i), self.rhs(j)), RuleId.HTrans, (i, j))

    def chain(self, *indices: int) -> int:
        result = indices[0]
        for j in indices[1:]:
            result = self.trans(result, j)
        return result

    def mono_left(self, i: int, b: Formula) -> int:
        """``A*B -> A'*B`` from ``A -> A'``."""
        a, a2 = self.lhs(i), self.rhs(i)
        target = Prod(a2, b)
        curried = self.add(_seq(a2, Over(target, b)), RuleId.HCurry, (self.ident(target),))
        return self.add(_seq(Prod(a, b), target), RuleId.HUncurry, (self.trans(i, curried),))

    def mono_right(self, a: Formula, i: int) -> int:
        """``A*B -> A*B'`` from ``B -> B'``."""
        b, b2 = self.lhs(i), self.rhs(i)
        target = Prod(a, b2)
        curried = self.add(_seq(b2, Under(a, target)), RuleId.HCurry, (self.ident(target),))
        return self.add(_seq(Prod(a, b), target), RuleId.HUncurry, (self.trans(i, curried),))

    def split(self, first: Sequence[Formula], second: Sequence[Formula]) -> int:
        """``P(first+second) -> P(first)*P(second)``."""
        if len(second) == 1:
            return self.ident(product(list(first) + list(second)))
        *init, last = second
        a, b = product(first), product(init)
        grouped = self.mono_left(self.split(first, init), last)
        assoc = self.add(_seq(Prod(Prod(a, b), last), Prod(a, Prod(b, last))), RuleId.HAxAssoc)
        return self.trans(grouped, assoc)

    def join(self, first: Sequence[Formula], second: Sequence[Formula]) -> int:
        """``P(first)*P(second) -> P(first+second)``."""
        if len(second) == 1:
            return self.ident(product(list(first) + list(second)))
        *init, last = second
        a, b = product(first), product(init)
        assoc = self.add(_seq(Prod(a, Prod(b, last)), Prod(Prod(a, b), last)), RuleId.HAxAssoc)
        return self.trans(assoc, self.mono_left(self.join(first, init), last))

    def split_segments(self, segments: Sequence[Sequence[Formula]]) -> int:
        flat = [f for seg in segments for f in seg]
        if len(segments) == 1:
            return self.ident(product(flat))
        rest = [f for seg in segments[:-1] for f in seg]
        head = self.split(rest, segments[-1])
        return self.trans(head, self.mono_left(self.split_segments(segments[:-1]), product(segments[-1])))

    def join_segments(self, segments: Sequence[Sequence[Formula]]) -> int:
        flat = [f for seg in segments for f in seg]
        if len(segments) == 1:
            return self.ident(product(flat))
        rest = [f for seg in segments[:-1] for f in seg]
        grouped = self.mono_left(self.join_segments(segments[:-1]), product(segments[-1]))
        return self.trans(grouped, self.join(rest, segments[-1]))

    def mono_at(self, factors: Sequence[Formula], position: int, i: int) -> int:
        """``P(factors) -> P(factors with position replaced)`` from a step on that factor."""
        if len(factors) == 1:
            return i
        if position == len(factors) - 1:
            return self.mono_right(product(factors[:-1]), i)
        return self.mono_left(self.mono_at(factors[:-1], position, i), factors[-1])

    def replace_segment(self, gamma: Sequence[Formula], middle: Sequence[Formula],
                        delta: Sequence[Formula], i: int, middle2: Sequence[Formula]) -> int:
        """``P(gamma+middle+delta) -> P(gamma+middle2+delta)`` from ``P(middle) -> P(middle2)``."""
        before = [seg for seg in (gamma, middle, delta) if seg]
        after = [seg for seg in (gamma, middle2, delta) if seg]
        position = 1 if gamma else 0
        factors = [product(seg) for seg in before]
        return self.chain(self.split_segments(before), self.mono_at(factors, position, i),
                          self.join_segments(after))


def _locate_prod(s: Sequent, premise: Sequent) -> int:
    for i, f in enumerate(s.antecedent):
        if isinstance(f, Prod) and premise == Sequent(
                s.antecedent[:i] + (f.left, f.right) + s.antecedent[i + 1:], s.succedent):
            return i
    raise ProofError(f"malformed (*->) at {s}")


def _locate_under(s: Sequent, main: Sequent, minor: Sequent) -> int:
    k = len(minor.antecedent)
    for i, f in enumerate(s.antecedent):
        if (isinstance(f, Under) and f.left == minor.succedent and i >= k
                and s.antecedent[i - k:i] == minor.antecedent
                and main.antecedent == s.antecedent[:i - k] + (f.right,) + s.antecedent[i + 1:]):
            return i
    raise ProofError(f"malformed (\\->) at {s}")


def _locate_over(s: Sequent, main: Sequent, minor: Sequent) -> int:
    k = len(minor.antecedent)
    for i, f in enumerate(s.antecedent):
        if (isinstance(f, Over) and f.right == minor.succedent
                and s.antecedent[i + 1:i + 1 + k] == minor.antecedent
                and main.antecedent == s.antecedent[:i] + (f.left,) + s.antecedent[i + 1 + k:]):
            return i
    raise ProofError(f"malformed (/->) at {s}")


def to_hilbert(proof: ProofNode) -> list[HilbertStep]:
    """Translate a cut-free Lneck proof; the last step concludes the product sequent."""
    b = _Builder()

    def visit(node: ProofNode) -> int:
        s = node.conclusion
        ant, succ = s.antecedent, s.succedent
        rule = node.rule
        tops = [visit(p) for p in node.premises]
        if rule is RuleId.Ax:
            return b.ident(succ)
        if rule is RuleId.UnderR:
            joined = b.trans(b.join([succ.left], ant), tops[0])
            return b.add(_seq(product(ant), succ), RuleId.HCurry, (joined,))
        if rule is RuleId.OverR:
            return b.add(_seq(product(ant), succ), RuleId.HCurry, (tops[0],))
        if rule is RuleId.ProdR:
            left, right = (p.conclusion for p in node.premises)
            return b.chain(b.split(left.antecedent, right.antecedent),
                           b.mono_left(tops[0], product(right.antecedent)),
                           b.mono_right(succ.left, tops[1]))
        if rule is RuleId.ProdL:
            i = _locate_prod(s, node.premises[0].conclusion)
            f = ant[i]
            swap = b.replace_segment(ant[:i], [f], ant[i + 1:], b.ident(f), [f.left, f.right])
            return b.trans(swap, tops[0])
        if rule is RuleId.UnderL:
            main, minor = (p.conclusion for p in node.premises)
            i = _locate_under(s, main, minor)
            f, k = ant[i], len(minor.antecedent)
            apply = b.add(_seq(Prod(f.left, f), f.right), RuleId.HUncurry, (b.ident(f),))
            local = b.trans(b.mono_left(tops[1], f), apply)
            swap = b.replace_segment(ant[:i - k], ant[i - k:i + 1], ant[i + 1:], local, [f.right])
            return b.trans(swap, tops[0])
        if rule is RuleId.OverL:
            main, minor = (p.conclusion for p in node.premises)
            i = _locate_over(s, main, minor)
            f, k = ant[i], len(minor.antecedent)
            apply = b.add(_seq(Prod(f, f.right), f.left), RuleId.HUncurry, (b.ident(f),))
            local = b.chain(b.split([f], minor.antecedent), b.mono_right(f, tops[1]), apply)
            swap = b.replace_segment(ant[:i], ant[i:i + 1 + k], ant[i + 1 + k:], local, [f.left])
            return b.trans(swap, tops[0])
        if rule is RuleId.NeckR:
            return b.trans(tops[0], b.add(_seq(succ.inner, succ), RuleId.HAxNeck))
        if rule is RuleId.NeckL:
            return b.add(_seq(ant[0], succ), RuleId.HNeckMono, (tops[0],))
        if rule is RuleId.NeckRot:
            premise = node.premises[0].conclusion
            offsets = [node.offset] if node.offset is not None else range(len(ant))
            k = next(j for j in offsets if s.rotate(j) == premise)
            psi, pi = ant[:k], ant[k:]
            swapped = b.trans(b.join(pi, psi), tops[0])
            rotated = b.add(_seq(Prod(product(psi), product(pi)), succ), RuleId.HNeckRot, (swapped,))
            return b.trans(b.split(psi, pi), rotated)
        raise ProofError(f"{rule.value} has no Hilbert counterpart")

    root = visit(proof)
    if root != len(b.steps) - 1:
        closing = b.ident(b.rhs(root))
        b.steps.append(HilbertStep(b.steps[root].sequent, RuleId.HTrans, (root, closing)))
    LOG.debug("Hilbert translation: %d steps", len(b.steps))
    return b.steps
