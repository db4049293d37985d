"""
Formula- and grammar-level translations.

Fresh primitives come from a ``FreshSymbolPool`` and are namespaced with the
reserved ``__`` prefix, which the parser refuses in user text, so they never
clash with user primitives.
"""

from __future__ import annotations

import enum
import logging
from typing import TYPE_CHECKING, Iterable, Optional, Union

from necklace.errors import FragmentError, GrammarError, ReservedNameError
from necklace.formula import (
    RESERVED_PREFIX,
    Brac,
    Formula,
    Over,
    Polarity,
    Prim,
    Prod,
    Rev,
    Sequent,
    Shift,
    SystemId,
    Under,
    children,
    print_formula,
    size,
    subformulas,
)

if TYPE_CHECKING:
    from necklace.grammar import Grammar

LOG = logging.getLogger(__name__)


class FreshSymbolPool:
    """Primitives ``__l``, ``__r``, ``__q1``, ... absent from the given material."""

    def __init__(self, *items: Union[Formula, Sequent, Iterable[Formula]]) -> None:
        for f in _flatten(items):
            for g in subformulas(f):
                if isinstance(g, Prim) and g.name.startswith(RESERVED_PREFIX):
                    raise ReservedNameError(f"{g.name!r} is reserved for generated symbols",
                                            print_formula(f), 0)

    @property
    def l(self) -> Prim:
        return Prim(RESERVED_PREFIX + "l")

    @property
    def r(self) -> Prim:
        return Prim(RESERVED_PREFIX + "r")

    def q(self, n: int) -> Prim:
        if n < 1:
            raise ValueError("q symbols are numbered from 1")
        return Prim(f"{RESERVED_PREFIX}q{n}")


def _flatten(items) -> Iterable[Formula]:
    for item in items:
        if isinstance(item, Sequent):
            yield from item.formulas()
        elif isinstance(item, (Prim, Under, Over, Prod, Shift, Rev, Brac)):
            yield item
        else:
            yield from _flatten(item)


def _require_neck_fragment(f: Formula, what: str) -> None:
    if any(isinstance(g, (Rev, Brac)) for g in subformulas(f)):
        raise FragmentError(f"{what} needs a formula without ^r/^b, got {print_formula(f)}")


# ----------------------------------------------------------------------
# Box, evenization, unneck

def box(f: Formula, pool: FreshSymbolPool) -> Formula:
    l, r = pool.l, pool.r
    return Over(Under(l, Prod(Prod(l, f), r)), r)


def _tower(f: Formula, n: int, pool: FreshSymbolPool) -> Formula:
    for _ in range(n):
        f = Shift(box(f, pool))
    return f


def _replace_shifts(f: Formula, n: int, pool: FreshSymbolPool, tower_at: Polarity) -> Formula:
    _require_neck_fragment(f, "evenization")
    if size(f) > n:
        raise FragmentError(f"size {size(f)} of {print_formula(f)} exceeds N = {n}")

    def walk(g: Formula, pol: Polarity) -> Formula:
        if isinstance(g, Prim):
            return g
        if isinstance(g, Shift):
            inner = walk(g.inner, pol)
            return _tower(inner, n, pool) if pol is tower_at else box(inner, pool)
        if isinstance(g, Under):
            return Under(walk(g.left, pol.flipped()), walk(g.right, pol))
        if isinstance(g, Over):
            return Over(walk(g.left, pol), walk(g.right, pol.flipped()))
        return Prod(walk(g.left, pol), walk(g.right, pol))

    return walk(f, Polarity.EVEN)


def e_n(f: Formula, n: int, pool: FreshSymbolPool) -> Formula:
    """Even ``B^c`` become ``(Box c)^n`` towers, odd ones plain Box."""
    return _replace_shifts(f, n, pool, Polarity.EVEN)


def o_n(f: Formula, n: int, pool: FreshSymbolPool) -> Formula:
    """Odd ``B^c`` become towers, even ones plain Box."""
    return _replace_shifts(f, n, pool, Polarity.ODD)


def evenize_sequent(s: Sequent, n: int, pool: FreshSymbolPool) -> Sequent:
    return Sequent(tuple(o_n(a, n, pool) for a in s.antecedent), e_n(s.succedent, n, pool))


def unneck(f: Formula) -> Formula:
    _require_neck_fragment(f, "unneck")
    if isinstance(f, Prim):
        return f
    if isinstance(f, Shift):
        return unneck(f.inner)
    return type(f)(unneck(f.left), unneck(f.right))


# ----------------------------------------------------------------------
# embedding of the CS rule

def _require_plain(f: Formula) -> None:
    if any(isinstance(g, (Shift, Rev, Brac)) for g in subformulas(f)):
        raise FragmentError(f"{print_formula(f)} must be built from \\, / and * only")


def cal_a(f: Formula) -> Formula:
    _require_plain(f)
    return _cal_a(f)


def cal_s(f: Formula) -> Formula:
    _require_plain(f)
    return _cal_s(f)


def _cal_a(f: Formula) -> Formula:
    if isinstance(f, Prim):
        return f
    if isinstance(f, Under):
        return Under(_cal_s(f.left), _cal_a(f.right))
    if isinstance(f, Over):
        return Over(_cal_a(f.left), _cal_s(f.right))
    return Prod(_cal_a(f.left), _cal_a(f.right))


def _cal_s(f: Formula) -> Formula:
    if isinstance(f, Prim):
        return Shift(f)
    if isinstance(f, Under):
        return Shift(Under(_cal_a(f.left), _cal_s(f.right)))
    if isinstance(f, Over):
        return Shift(Over(_cal_s(f.left), _cal_a(f.right)))
    return Shift(Prod(_cal_s(f.left), _cal_s(f.right)))


def cs_embed_sequent(s: Sequent) -> Sequent:
    return Sequent(tuple(cal_a(a) for a in s.antecedent), cal_s(s.succedent))


def t_n(f: Formula, n: int, pool: FreshSymbolPool) -> Formula:
    if n < 0:
        raise ValueError("n must be a natural number")
    for k in range(1, n + 1):
        q = pool.q(k)
        f = Prod(q, Over(f, q))
    return f


# ----------------------------------------------------------------------
# kinds of sequents in the doubled calculus

class SequentKind(enum.Enum):
    PLAIN = "plain"
    FRAMED = "framed"
    BOXED = "boxed"
    UNIT = "unit"


def fold_boxes(f: Formula, pool: FreshSymbolPool) -> Optional[Formula]:
    """Replace each ``(l\\((l*X)*r))/r`` by ``X^c``; None if l or r occur elsewhere."""
    l, r = pool.l, pool.r

    def fold(g: Formula) -> Optional[Formula]:
        body = _box_body(g, l, r)
        if body is not None:
            inner = fold(body)
            return None if inner is None else Shift(inner)
        if g in (l, r):
            return None
        if isinstance(g, Prim):
            return g
        parts = [fold(c) for c in children(g)]
        if any(p is None for p in parts):
            return None
        return type(g)(*parts)

    return fold(f)


def _box_body(g: Formula, l: Prim, r: Prim) -> Optional[Formula]:
    if not (isinstance(g, Over) and g.right == r and isinstance(g.left, Under) and g.left.left == l):
        return None
    frame = g.left.right
    if isinstance(frame, Prod) and frame.right == r and isinstance(frame.left, Prod) and frame.left.left == l:
        return frame.left.right
    return None


def _framed(f: Formula, l: Prim, r: Prim) -> Optional[Formula]:
    if isinstance(f, Prod) and f.right == r and isinstance(f.left, Prod) and f.left.left == l:
        return f.left.right
    return None


def sequent_kind(s: Sequent, pool: FreshSymbolPool) -> Optional[SequentKind]:
    l, r = pool.l, pool.r
    ant = s.antecedent
    if len(ant) == 1 and ant[0] == s.succedent and ant[0] in (l, r):
        return SequentKind.UNIT
    goal = _framed(s.succedent, l, r)
    if goal is not None and fold_boxes(goal, pool) is not None:
        inner = _framed(ant[0], l, r) if len(ant) == 1 else None
        if inner is not None and fold_boxes(inner, pool) is not None:
            return SequentKind.BOXED
        if (len(ant) >= 3 and ant[0] == l and ant[-1] == r
                and all(fold_boxes(c, pool) is not None for c in ant[1:-1])):
            return SequentKind.FRAMED
    if all(fold_boxes(f, pool) is not None for f in s.formulas()):
        return SequentKind.PLAIN
    return None


# ----------------------------------------------------------------------
# grammars

def _toolbox_bound(g: "Grammar") -> int:
    return max([size(g.distinguished)] + [size(f) for f in g.toolbox()])


def evenize_grammar(g: "Grammar") -> "Grammar":
    if g.system is not SystemId.LNECK:
        raise GrammarError(f"evenization needs an Lneck grammar, got {g.system.value}")
    n = _toolbox_bound(g)
    pool = FreshSymbolPool(g.toolbox(), [g.distinguished])
    LOG.info("evenizing grammar with N = %d", n)
    return g.map(lambda f: o_n(f, n, pool), lambda f: e_n(f, n, pool), SystemId.LNECK)


def unneck_grammar(g: "Grammar") -> "Grammar":
    return g.map(unneck, unneck, SystemId.L)


def cs_embed_grammar(g: "Grammar") -> "Grammar":
    if g.system not in (SystemId.L, SystemId.LCS):
        raise GrammarError(f"CS embedding needs an L or LCS grammar, got {g.system.value}")
    return g.map(cal_a, cal_s, SystemId.LNECK)
