"""Proof trees for the string-sequent systems and their checker."""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from necklace.errors import FormulaSyntaxError, FragmentError, ProofError
from necklace.formula import (
    Brac,
    Formula,
    Over,
    Prod,
    Rev,
    Sequent,
    Shift,
    SystemId,
    Under,
    check_fragment,
    parse_sequent,
    print_sequent,
)

LOG = logging.getLogger(__name__)


class RuleId(enum.Enum):
    Ax = "Ax"
    UnderL = "UnderL"
    UnderR = "UnderR"
    OverL = "OverL"
    OverR = "OverR"
    ProdL = "ProdL"
    ProdR = "ProdR"
    NeckR = "NeckR"
    NeckL = "NeckL"
    NeckRot = "NeckRot"
    CS = "CS"
    RevRev = "RevRev"
    RevRevL = "RevRevL"
    RevRevR = "RevRevR"
    BracR = "BracR"
    BracL = "BracL"
    BracRot = "BracRot"
    AxRevBrac = "AxRevBrac"
    Cut = "Cut"
    OverL2 = "OverL2"
    UnderOverL2 = "UnderOverL2"
    ProdR2 = "ProdR2"
    ProdL2 = "ProdL2"
    HAxId = "HAxId"
    HAxAssoc = "HAxAssoc"
    HAxNeck = "HAxNeck"
    HCurry = "HCurry"
    HUncurry = "HUncurry"
    HTrans = "HTrans"
    HNeckMono = "HNeckMono"
    HNeckRot = "HNeckRot"


_LAMBEK = frozenset({
    RuleId.Ax, RuleId.UnderL, RuleId.UnderR, RuleId.OverL, RuleId.OverR, RuleId.ProdL, RuleId.ProdR,
    RuleId.OverL2, RuleId.UnderOverL2, RuleId.ProdR2, RuleId.ProdL2,
})
_REVERSAL = frozenset({RuleId.RevRev, RuleId.RevRevL, RuleId.RevRevR})

SYSTEM_RULES: dict[SystemId, frozenset[RuleId]] = {
    SystemId.L: _LAMBEK,
    SystemId.LNECK: _LAMBEK | {RuleId.NeckR, RuleId.NeckL, RuleId.NeckRot},
    SystemId.LCS: _LAMBEK | {RuleId.CS},
    SystemId.LREV: _LAMBEK | _REVERSAL,
    SystemId.LBRAC: _LAMBEK | _REVERSAL | {
        RuleId.BracR, RuleId.BracL, RuleId.BracRot, RuleId.AxRevBrac, RuleId.Cut,
    },
}


@dataclass(frozen=True)
class ProofNode:
    conclusion: Sequent
    rule: RuleId
    premises: tuple["ProofNode", ...] = ()
    offset: Optional[int] = field(default=None, compare=True)

    def __str__(self) -> str:
        return f"{print_sequent(self.conclusion)}  [{self.rule.value}]"

    def nodes(self) -> Iterator["ProofNode"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def count(self, rule: RuleId) -> int:
        return sum(1 for n in self.nodes() if n.rule is rule)

    def rules(self) -> set[RuleId]:
        return {n.rule for n in self.nodes()}

    def depth(self) -> int:
        return 1 + max((p.depth() for p in self.premises), default=0)


# ----------------------------------------------------------------------
# rule figures; each checker returns None or a reason

Checker = Callable[[ProofNode], Optional[str]]


def _arity(node: ProofNode, n: int) -> Optional[str]:
    if len(node.premises) != n:
        return f"{node.rule.value} takes {n} premise(s), got {len(node.premises)}"
    return None


def _check_ax(node: ProofNode) -> Optional[str]:
    s = node.conclusion
    if problem := _arity(node, 0):
        return problem
    if len(s.antecedent) != 1 or s.antecedent[0] != s.succedent:
        return "axiom needs A -> A"
    return None


def _check_under_right(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    if not isinstance(s.succedent, Under):
        return "succedent is not B \\ A"
    if node.premises[0].conclusion != Sequent((s.succedent.left,) + s.antecedent, s.succedent.right):
        return "premise must be B, Pi -> A"
    return None


def _check_over_right(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    if not isinstance(s.succedent, Over):
        return "succedent is not A / B"
    if node.premises[0].conclusion != Sequent(s.antecedent + (s.succedent.right,), s.succedent.left):
        return "premise must be Pi, B -> A"
    return None


def _check_prod_right(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 2):
        return problem
    s = node.conclusion
    left, right = (p.conclusion for p in node.premises)
    if not isinstance(s.succedent, Prod):
        return "succedent is not a product"
    if (left.succedent, right.succedent) != (s.succedent.left, s.succedent.right):
        return "premise succedents do not match the factors"
    if left.antecedent + right.antecedent != s.antecedent:
        return "antecedents do not concatenate to the conclusion"
    return None


def _check_prod_left(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    premise = node.premises[0].conclusion
    for i, f in enumerate(s.antecedent):
        if isinstance(f, Prod):
            expected = Sequent(s.antecedent[:i] + (f.left, f.right) + s.antecedent[i + 1:], s.succedent)
            if premise == expected:
                return None
    return "no product in the antecedent splits into the premise"


def _check_under_left(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 2):
        return problem
    s = node.conclusion
    main, minor = (p.conclusion for p in node.premises)
    pi = minor.antecedent
    k = len(pi)
    for i, f in enumerate(s.antecedent):
        if isinstance(f, Under) and f.left == minor.succedent and i >= k and s.antecedent[i - k:i] == pi:
            expected = Sequent(s.antecedent[:i - k] + (f.right,) + s.antecedent[i + 1:], s.succedent)
            if main == expected:
                return None
    return "not an instance of (\\->)"


def _check_over_left(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 2):
        return problem
    s = node.conclusion
    main, minor = (p.conclusion for p in node.premises)
    pi = minor.antecedent
    k = len(pi)
    for i, f in enumerate(s.antecedent):
        if isinstance(f, Over) and f.right == minor.succedent and s.antecedent[i + 1:i + 1 + k] == pi:
            expected = Sequent(s.antecedent[:i] + (f.left,) + s.antecedent[i + 1 + k:], s.succedent)
            if main == expected:
                return None
    return "not an instance of (/->)"


def _unary_right(kind: type) -> Checker:
    def check(node: ProofNode) -> Optional[str]:
        if problem := _arity(node, 1):
            return problem
        s = node.conclusion
        if not isinstance(s.succedent, kind):
            return f"succedent head is not {kind.__name__}"
        if node.premises[0].conclusion != Sequent(s.antecedent, s.succedent.inner):
            return "premise must strip the succedent head"
        return None
    return check


def _unary_left(kind: type) -> Checker:
    def check(node: ProofNode) -> Optional[str]:
        if problem := _arity(node, 1):
            return problem
        s = node.conclusion
        if len(s.antecedent) != 1 or not isinstance(s.antecedent[0], kind):
            return f"antecedent must be a single {kind.__name__} formula"
        if not isinstance(s.succedent, kind):
            return f"succedent head is not {kind.__name__}"
        if node.premises[0].conclusion != Sequent((s.antecedent[0].inner,), s.succedent):
            return "premise must strip the antecedent head"
        return None
    return check


def _rotation(kind: Optional[type]) -> Checker:
    def check(node: ProofNode) -> Optional[str]:
        if problem := _arity(node, 1):
            return problem
        s = node.conclusion
        if kind is not None and not isinstance(s.succedent, kind):
            return f"rotation needs a {kind.__name__} succedent"
        premise = node.premises[0].conclusion
        n = len(s.antecedent)
        offsets = range(n) if node.offset is None else [node.offset]
        if any(0 <= k < n and premise == s.rotate(k) for k in offsets):
            return None
        return "premise is not a rotation of the conclusion"
    return check


def _check_rev_rev(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    if not isinstance(s.succedent, Rev) or not all(isinstance(a, Rev) for a in s.antecedent):
        return "conclusion must be A_n^r, ..., A_1^r -> B^r"
    expected = Sequent(tuple(a.inner for a in reversed(s.antecedent)), s.succedent.inner)
    if node.premises[0].conclusion != expected:
        return "premise must be A_1, ..., A_n -> B"
    return None


def _double_rev(a: Formula, b: Formula) -> bool:
    return a == Rev(Rev(b)) or b == Rev(Rev(a))


def _check_rev_rev_left(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    premise = node.premises[0].conclusion
    if premise.succedent != s.succedent or len(premise.antecedent) != len(s.antecedent):
        return "premise must differ in one antecedent formula only"
    diffs = [i for i, (a, b) in enumerate(zip(s.antecedent, premise.antecedent)) if a != b]
    if len(diffs) != 1 or not _double_rev(s.antecedent[diffs[0]], premise.antecedent[diffs[0]]):
        return "antecedents must differ by one double reversal"
    return None


def _check_rev_rev_right(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    premise = node.premises[0].conclusion
    if premise.antecedent != s.antecedent or not _double_rev(s.succedent, premise.succedent):
        return "succedents must differ by one double reversal"
    return None


def _check_ax_rev_brac(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 0):
        return problem
    s = node.conclusion
    if (len(s.antecedent) == 1 and isinstance(s.antecedent[0], Rev)
            and s.succedent == Brac(s.antecedent[0].inner)):
        return None
    return "axiom needs A^r -> A^b"


def _check_cut(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 2):
        return problem
    s = node.conclusion
    left, right = (p.conclusion for p in node.premises)
    if right.succedent != s.succedent:
        return "right premise succedent differs from the conclusion"
    positions = range(len(right.antecedent)) if node.offset is None else [node.offset]
    for j in positions:
        if 0 <= j < len(right.antecedent) and right.antecedent[j] == left.succedent:
            if right.antecedent[:j] + left.antecedent + right.antecedent[j + 1:] == s.antecedent:
                return None
    return "not an instance of (cut)"


def _check_over_left2(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 3):
        return problem
    s = node.conclusion
    main, first, second = (p.conclusion for p in node.premises)
    pi, psi = first.antecedent, second.antecedent
    for i, f in enumerate(s.antecedent):
        if not (isinstance(f, Over) and isinstance(f.left, Under)):
            continue
        if f.left.left != first.succedent or f.right != second.succedent:
            continue
        start = i - len(pi)
        if start < 0 or s.antecedent[start:i] != pi or s.antecedent[i + 1:i + 1 + len(psi)] != psi:
            continue
        expected = Sequent(s.antecedent[:start] + (f.left.right,) + s.antecedent[i + 1 + len(psi):], s.succedent)
        if main == expected:
            return None
    return "not an instance of (/->)_2"


def _check_under_over_left2(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    f = s.succedent
    if not (isinstance(f, Over) and isinstance(f.left, Under)):
        return "succedent is not (D \\ E) / A"
    expected = Sequent((f.left.left,) + s.antecedent + (f.right,), f.left.right)
    if node.premises[0].conclusion != expected:
        return "premise must be D, Pi, A -> E"
    return None


def _check_prod_right2(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 3):
        return problem
    s = node.conclusion
    f = s.succedent
    if not (isinstance(f, Prod) and isinstance(f.left, Prod)):
        return "succedent is not (D * E) * B"
    parts = [p.conclusion for p in node.premises]
    if tuple(p.succedent for p in parts) != (f.left.left, f.left.right, f.right):
        return "premise succedents do not match D, E, B"
    if parts[0].antecedent + parts[1].antecedent + parts[2].antecedent != s.antecedent:
        return "antecedents do not concatenate to the conclusion"
    return None


def _check_prod_left2(node: ProofNode) -> Optional[str]:
    if problem := _arity(node, 1):
        return problem
    s = node.conclusion
    premise = node.premises[0].conclusion
    for i, f in enumerate(s.antecedent):
        if isinstance(f, Prod) and isinstance(f.left, Prod):
            parts = (f.left.left, f.left.right, f.right)
            if premise == Sequent(s.antecedent[:i] + parts + s.antecedent[i + 1:], s.succedent):
                return None
    return "not an instance of (*->)_2"


CHECKERS: dict[RuleId, Checker] = {
    RuleId.Ax: _check_ax,
    RuleId.UnderL: _check_under_left,
    RuleId.UnderR: _check_under_right,
    RuleId.OverL: _check_over_left,
    RuleId.OverR: _check_over_right,
    RuleId.ProdL: _check_prod_left,
    RuleId.ProdR: _check_prod_right,
    RuleId.NeckR: _unary_right(Shift),
    RuleId.NeckL: _unary_left(Shift),
    RuleId.NeckRot: _rotation(Shift),
    RuleId.CS: _rotation(None),
    RuleId.RevRev: _check_rev_rev,
    RuleId.RevRevL: _check_rev_rev_left,
    RuleId.RevRevR: _check_rev_rev_right,
    RuleId.BracR: _unary_right(Brac),
    RuleId.BracL: _unary_left(Brac),
    RuleId.BracRot: _rotation(Brac),
    RuleId.AxRevBrac: _check_ax_rev_brac,
    RuleId.Cut: _check_cut,
    RuleId.OverL2: _check_over_left2,
    RuleId.UnderOverL2: _check_under_over_left2,
    RuleId.ProdR2: _check_prod_right2,
    RuleId.ProdL2: _check_prod_left2,
}


def find_invalid_node(
    p: ProofNode, system: SystemId, *, allow_cut: bool = False
) -> Optional[tuple[tuple[int, ...], str]]:
    """Path (premise indices from the root) and reason of the first bad node."""
    allowed = SYSTEM_RULES[system] | ({RuleId.Cut} if allow_cut else frozenset())
    stack: list[tuple[tuple[int, ...], ProofNode]] = [((), p)]
    while stack:
        path, node = stack.pop()
        if node.rule not in allowed:
            return path, f"{node.rule.value} is not a rule of {system.value}"
        try:
            check_fragment(node.conclusion, system)
        except FragmentError as exc:
            return path, str(exc)
        reason = CHECKERS[node.rule](node)
        if reason is not None:
            return path, reason
        for i in reversed(range(len(node.premises))):
            stack.append((path + (i,), node.premises[i]))
    return None


def check_proof(p: ProofNode, system: SystemId, *, allow_cut: bool = False) -> bool:
    problem = find_invalid_node(p, system, allow_cut=allow_cut)
    if problem is not None:
        LOG.debug("invalid proof node at %s: %s", problem[0], problem[1])
    return problem is None


def cut_compose(left: ProofNode, right: ProofNode, position: int) -> ProofNode:
    ant = right.conclusion.antecedent
    if not 0 <= position < len(ant):
        raise ProofError(f"cut position {position} outside antecedent of length {len(ant)}")
    if ant[position] != left.conclusion.succedent:
        raise ProofError(
            f"cut formula mismatch: {left.conclusion.succedent} vs {ant[position]} at position {position}"
        )
    conclusion = Sequent(ant[:position] + left.conclusion.antecedent + ant[position + 1:],
                         right.conclusion.succedent)
    return ProofNode(conclusion, RuleId.Cut, (left, right), position)


# ----------------------------------------------------------------------
# JSON

def proof_to_dict(p: ProofNode) -> dict:
    out: dict = {"seq": print_sequent(p.conclusion), "rule": p.rule.value}
    if p.offset is not None:
        out["offset"] = p.offset
    out["premises"] = [proof_to_dict(q) for q in p.premises]
    return out


def proof_from_dict(data: dict) -> ProofNode:
    try:
        conclusion = parse_sequent(data["seq"], allow_reserved=True)
        rule = RuleId(data["rule"])
        offset = data.get("offset")
        premises = tuple(proof_from_dict(q) for q in data.get("premises", []))
    except (KeyError, TypeError, ValueError, FormulaSyntaxError) as exc:
        raise ProofError(f"malformed proof node: {exc}") from exc
    if offset is not None and not isinstance(offset, int):
        raise ProofError("offset must be an integer")
    return ProofNode(conclusion, rule, premises, offset)


def proof_to_json(p: ProofNode, indent: Optional[int] = 2) -> str:
    return json.dumps(proof_to_dict(p), indent=indent, ensure_ascii=False)


def proof_from_json(text: str) -> ProofNode:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProofError(f"proof file is not JSON: {exc}") from exc
    return proof_from_dict(data)
