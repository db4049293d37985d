import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace.automata import (
    Automaton,
    automaton_from_dict,
    dump_automaton,
    lang_concat,
    lang_cyclic_shift,
    lang_left_residual,
    lang_reverse,
    lang_right_residual,
    lang_union,
    load_automaton,
)
from necklace.errors import AlphabetMismatchError, AutomatonError, StateLimitError, VacuousResidualWarning
from necklace.semantics import SamplerConfig, random_automaton


def words(*ws, alphabet="ab"):
    return Automaton.from_words(ws, alphabet)


class TestAutomaton:
    def test_trie(self):
        m = words("ab", "ba")
        assert m.accepts("ab") and not m.accepts("aa") and not m.accepts("abc")
        assert m.words(3) == {"ab", "ba"}

    def test_empty_word(self):
        assert words("").accepts("")

    def test_range_checked(self):
        with pytest.raises(AutomatonError):
            Automaton(("a",), 1, frozenset({0}), frozenset({1}), frozenset())
        with pytest.raises(AutomatonError):
            Automaton(("a",), 1, frozenset({0}), frozenset({0}), frozenset({(0, "b", 0)}))

    def test_determinize_and_minimize(self):
        m = lang_union(words("ab"), words("aab"))
        assert m.determinize().equivalent(m)
        assert m.minimize().equivalent(m)
        assert Automaton.universal("ab").minimize().states == 1

    def test_state_limit(self):
        with pytest.raises(StateLimitError):
            words("ab", "b").determinize(limit=1)

    def test_inclusion(self):
        assert Automaton.universal("ab").includes(words("ab"))
        assert not words("ab").includes(words("ba"))
        assert Automaton.empty("ab").is_empty()

    def test_trim(self):
        dead = Automaton(("a", "b"), 3, frozenset({0}), frozenset({1}), frozenset({(0, "a", 1), (0, "b", 2)}))
        trimmed = dead.trim()
        assert trimmed.states == 2 and trimmed.equivalent(dead)


class TestOperations:
    def test_concat(self):
        assert lang_concat(words("a"), words("b", "bb")).words(4) == {"ab", "abb"}

    def test_concat_with_empty_word(self):
        assert lang_concat(words("", "a"), words("b")).words(3) == {"b", "ab"}

    def test_reverse(self):
        assert lang_reverse(words("aab")).words(3) == {"baa"}

    def test_cyclic_shift(self):
        assert lang_cyclic_shift(words("abb")).words(3) == {"abb", "bba", "bab"}
        assert lang_cyclic_shift(words("a", "ab")).words(3) == {"a", "ab", "ba"}

    def test_left_residual(self):
        assert lang_left_residual(words("a"), words("ab", "aab")).words(4) == {"b", "ab"}

    def test_right_residual(self):
        assert lang_right_residual(words("ab", "bb"), words("b")).words(4) == {"a", "b"}

    def test_residual_by_every_word(self):
        assert lang_left_residual(words("a", "b"), words("ab", "bb", "aa")).words(3) == {"b"}

    def test_vacuous_residual_warns(self):
        with pytest.warns(VacuousResidualWarning):
            result = lang_left_residual(Automaton.empty("ab"), words("ab"))
        assert result.equivalent(Automaton.universal("ab"))

    def test_alphabets_must_agree(self):
        with pytest.raises(AlphabetMismatchError):
            lang_union(words("a", alphabet="a"), words("b", alphabet="b"))


class TestClosureLaws:
    SAMPLER = SamplerConfig(max_states=3)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_reversal_is_an_involution(self, seed):
        m = random_automaton(random.Random(seed), self.SAMPLER)
        assert lang_reverse(lang_reverse(m)).equivalent(m)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_cyclic_shift_is_idempotent(self, seed):
        once = lang_cyclic_shift(random_automaton(random.Random(seed), self.SAMPLER)).minimize()
        assert lang_cyclic_shift(once).equivalent(once)


class TestJson:
    def test_file_round_trip(self, tmp_path):
        m = lang_cyclic_shift(words("abb"))
        path = tmp_path / "m.json"
        path.write_text(dump_automaton(m), encoding="utf-8")
        assert load_automaton(path) == m

    def test_data_files(self, data_dir):
        assert load_automaton(data_dir / "a.json").words(3) == {"a"}

    @pytest.mark.parametrize("data", [{"alphabet": ["a"]}, {"alphabet": ["a"], "states": "x", "initial": [],
                                                            "accepting": [], "delta": []}])
    def test_malformed(self, data):
        with pytest.raises(AutomatonError):
            automaton_from_dict(data)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(AutomatonError):
            load_automaton(path)
