"""Formal-language interpretation of formulas and sequents."""

from __future__ import annotations

import enum
import logging
import random
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional

from necklace.automata import (
    Automaton,
    lang_concat,
    lang_cyclic_shift,
    lang_left_residual,
    lang_reverse,
    lang_right_residual,
    lang_union,
)
from necklace.errors import InterpretationError, StateLimitError, VacuousResidualWarning
from necklace.formula import Brac, Formula, Over, Prim, Prod, Rev, Sequent, Shift, Under, primitives

LOG = logging.getLogger(__name__)


class EpsilonMode(enum.Enum):
    FORBID = "forbid"
    ALLOW = "allow"


@dataclass
class Interpretation:
    assignment: Mapping[str, Automaton]
    epsilon_mode: EpsilonMode = EpsilonMode.FORBID
    alphabet: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        self.alphabet = tuple(sorted({a for m in self.assignment.values() for a in m.alphabet}))
        self.assignment = {name: m.over(self.alphabet) for name, m in self.assignment.items()}
        if self.epsilon_mode is EpsilonMode.FORBID:
            for name, m in self.assignment.items():
                if m.accepts(()):
                    raise InterpretationError(f"w({name}) contains the empty word")

    def __getitem__(self, name: str) -> Automaton:
        try:
            return self.assignment[name]
        except KeyError:
            raise InterpretationError(f"primitive {name!r} is not interpreted") from None

    def describe(self, max_len: int = 4) -> str:
        parts = []
        for name in sorted(self.assignment):
            words = sorted(self.assignment[name].words(max_len), key=lambda w: (len(w), w))
            parts.append(f"w({name}) = {{{', '.join(words)}{', ...' if self._longer(name, max_len) else ''}}}")
        return f"[{self.epsilon_mode.value}-eps] " + "; ".join(parts)

    def _longer(self, name: str, max_len: int) -> bool:
        return bool(self.assignment[name].words(max_len + 1) - self.assignment[name].words(max_len))


def interpret(f: Formula, m: Interpretation) -> Automaton:
    if isinstance(f, Prim):
        return m[f.name]
    if isinstance(f, Shift):
        return lang_cyclic_shift(interpret(f.inner, m))
    if isinstance(f, Rev):
        return lang_reverse(interpret(f.inner, m)).minimize()
    if isinstance(f, Brac):
        inner = interpret(f.inner, m)
        return lang_union(lang_cyclic_shift(inner), lang_cyclic_shift(lang_reverse(inner))).minimize()
    left, right = interpret(f.left, m), interpret(f.right, m)
    if isinstance(f, Prod):
        return lang_concat(left, right).minimize()
    if isinstance(f, Under):
        return lang_left_residual(left, right)
    if isinstance(f, Over):
        return lang_right_residual(left, right)
    raise TypeError(f"not a formula: {f!r}")


def antecedent_language(s: Sequent, m: Interpretation) -> Automaton:
    result = interpret(s.antecedent[0], m)
    for f in s.antecedent[1:]:
        result = lang_concat(result, interpret(f, m))
    return result


def holds(s: Sequent, m: Interpretation) -> bool:
    return interpret(s.succedent, m).includes(antecedent_language(s, m))


# ----------------------------------------------------------------------
# countermodels

@dataclass(frozen=True)
class SamplerConfig:
    max_states: int = 2
    alphabet: tuple[str, ...] = ("a", "b")
    samples: int = 500
    seed: int = 0
    epsilon_mode: EpsilonMode = EpsilonMode.FORBID
    density: float = 0.5

    def __post_init__(self) -> None:
        if self.max_states < 1 or not self.alphabet or self.samples < 0:
            raise ValueError("sampler needs at least one state, one letter and a nonnegative sample count")
        if not 0 <= self.density <= 1:
            raise ValueError(f"density {self.density} is not in [0, 1]")
        if self.epsilon_mode is EpsilonMode.FORBID and (self.max_states < 2 or self.density == 0):
            # state 0 never accepts in this mode
            raise ValueError("sampling without the empty word needs max_states >= 2 and density > 0")


def random_automaton(rng: random.Random, cfg: SamplerConfig) -> Automaton:
    """Nonempty language; state 0 is initial and, without epsilon, not accepting."""
    while True:
        n = rng.randint(1, cfg.max_states)
        delta = frozenset(
            (p, a, q) for p in range(n) for a in cfg.alphabet for q in range(n) if rng.random() < cfg.density
        )
        accepting = frozenset(
            q for q in range(n)
            if rng.random() < 0.5 and (q or cfg.epsilon_mode is EpsilonMode.ALLOW)
        )
        m = Automaton(cfg.alphabet, n, frozenset({0}), accepting, delta)
        if not m.is_empty():
            return m


def countermodel_search(s: Sequent, cfg: SamplerConfig = SamplerConfig()) -> Optional[Interpretation]:
    """First sampled interpretation falsifying ``s``; None never means valid."""
    rng = random.Random(cfg.seed)
    names = sorted(set().union(*(primitives(f) for f in s.formulas())))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousResidualWarning)
        for sample in range(cfg.samples):
            m = Interpretation({name: random_automaton(rng, cfg) for name in names}, cfg.epsilon_mode)
            try:
                if not holds(s, m):
                    LOG.debug("countermodel after %d samples", sample + 1)
                    return m
            except StateLimitError as exc:
                LOG.debug("sample %d skipped: %s", sample, exc)
    return None
