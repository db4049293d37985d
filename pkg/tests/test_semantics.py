import itertools
import random

import pytest

from necklace.automata import Automaton, load_automaton
from necklace.errors import InterpretationError, SearchLimitError
from necklace.formula import SystemId, parse_formula, parse_sequent
from necklace.search import SearchConfig, Searcher, enumerate_sequents
from necklace.semantics import (
    EpsilonMode,
    Interpretation,
    SamplerConfig,
    countermodel_search,
    holds,
    interpret,
    random_automaton,
)
from test_search import EXAMPLE_ONE

pytestmark = pytest.mark.filterwarnings("ignore::necklace.errors.VacuousResidualWarning")


def single(*ws, alphabet="abc"):
    return Automaton.from_words(ws, alphabet)


@pytest.fixture
def letters():
    return Interpretation({"p": single("a"), "q": single("b"), "r": single("c")})


class TestInterpret:
    def test_cyclic_shift(self):
        m = Interpretation({"p": single("ab")})
        assert interpret(parse_formula("p^c"), m).words(2) == {"ab", "ba"}

    def test_reversal_and_bracelet(self):
        m = Interpretation({"p": single("abc")})
        assert interpret(parse_formula("p^r"), m).words(3) == {"cba"}
        assert interpret(parse_formula("p^b"), m).words(3) == {"abc", "bca", "cab", "cba", "bac", "acb"}

    def test_alphabets_merged(self):
        m = Interpretation({"p": Automaton.from_words(["a"]), "q": Automaton.from_words(["b"])})
        assert m.alphabet == ("a", "b")
        assert interpret(parse_formula("p * q"), m).words(2) == {"ab"}

    def test_empty_word_forbidden_by_default(self):
        with pytest.raises(InterpretationError):
            Interpretation({"p": single("", "a")})
        m = Interpretation({"p": single("", "a")}, EpsilonMode.ALLOW)
        assert m["p"].accepts("")

    def test_uninterpreted_primitive(self, letters):
        with pytest.raises(InterpretationError):
            holds(parse_sequent("s -> s"), letters)

    def test_describe(self):
        m = Interpretation({"p": single("a", "ab")})
        assert m.describe() == "[forbid-eps] w(p) = {a, ab}"


SOUND_SYSTEMS = (SystemId.L, SystemId.LNECK, SystemId.LREV)


def _derivable(system, max_total, limit):
    def found():
        for s in enumerate_sequents(("p", "q"), max_total, system):
            try:
                if Searcher(SearchConfig(system)).derivable(s):
                    yield s
            except SearchLimitError:
                continue

    return list(itertools.islice(found(), limit))


class TestHolds:
    @pytest.mark.parametrize("text", EXAMPLE_ONE)
    def test_example_one_under_files(self, data_dir, text):
        m = Interpretation({"p": load_automaton(data_dir / "a.json"), "q": load_automaton(data_dir / "b.json")})
        assert holds(parse_sequent(text), m)

    def test_reordered_product_fails(self, letters):
        assert not holds(parse_sequent("r, q, p -> ((p^c * q^c) * r^c)^c"), letters)
        assert holds(parse_sequent("q, r, p -> ((p^c * q^c) * r^c)^c"), letters)

    def test_soundness_on_small_sequents(self):
        searcher = Searcher(SearchConfig(SystemId.LNECK))
        derivable = [s for s in enumerate_sequents(("p", "q"), 1, SystemId.LNECK) if searcher.derivable(s)]
        assert derivable
        for s in derivable:
            assert countermodel_search(s, SamplerConfig(samples=20, seed=3)) is None, str(s)

    @pytest.mark.slow
    def test_soundness_sweep(self):
        corpus = [s for system in SOUND_SYSTEMS for s in _derivable(system, 4, 100)]
        assert len(corpus) == 300
        rng, cfg = random.Random(11), SamplerConfig()
        for s in corpus:
            for _ in range(3):
                m = Interpretation({name: random_automaton(rng, cfg) for name in ("p", "q")})
                assert holds(s, m), f"{s} under {m.describe()}"


class TestCountermodels:
    def test_found_for_underivable(self):
        s = parse_sequent("p^c -> p")
        m = countermodel_search(s, SamplerConfig(seed=0))
        assert m is not None and not holds(s, m)

    def test_reproducible(self):
        s = parse_sequent("p^c -> p")
        first = countermodel_search(s, SamplerConfig(seed=7))
        second = countermodel_search(s, SamplerConfig(seed=7))
        assert first.assignment == second.assignment

    def test_none_for_identity(self):
        assert countermodel_search(parse_sequent("p -> p"), SamplerConfig(samples=50)) is None

    def test_sampler_validation(self):
        with pytest.raises(ValueError):
            SamplerConfig(max_states=0)
        with pytest.raises(ValueError):
            SamplerConfig(density=1.5)

    @pytest.mark.parametrize("overrides", [{"max_states": 1}, {"density": 0.0}])
    def test_sampler_needs_room_for_nonempty_words(self, overrides):
        with pytest.raises(ValueError):
            SamplerConfig(**overrides)

    def test_single_state_with_empty_word(self):
        cfg = SamplerConfig(max_states=1, samples=5, epsilon_mode=EpsilonMode.ALLOW)
        assert countermodel_search(parse_sequent("p^c -> p"), cfg) is None
