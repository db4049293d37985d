import pytest
from hypothesis import given

from necklace.errors import FragmentError, GrammarError, ReservedNameError
from necklace.formula import Prim, Shift, SystemId, is_even_cyclic, is_odd_cyclic, parse_formula, parse_sequent, print_formula, size
from necklace.grammar import enumerate_language, load_grammar
from necklace.search import SearchConfig, Searcher, derive, enumerate_sequents
from necklace.transforms import (
    FreshSymbolPool,
    SequentKind,
    box,
    cal_a,
    cal_s,
    cs_embed_grammar,
    cs_embed_sequent,
    e_n,
    evenize_grammar,
    evenize_sequent,
    fold_boxes,
    o_n,
    sequent_kind,
    t_n,
    unneck,
    unneck_grammar,
)
from strategies import NECK, formulas

pool = FreshSymbolPool()


def reserved(text):
    return parse_sequent(text, allow_reserved=True)


class TestBox:
    def test_shape(self):
        assert print_formula(box(Prim("p"), pool)) == "((__l \\ ((__l * p) * __r)) / __r)"
        assert size(box(Prim("p"), pool)) == 4

    def test_pool_rejects_reserved_input(self):
        with pytest.raises(ReservedNameError):
            FreshSymbolPool(parse_formula("__l * p", allow_reserved=True))
        with pytest.raises(ValueError):
            pool.q(0)

    def test_fold_boxes(self):
        p = Prim("p")
        assert fold_boxes(box(p, pool), pool) == Shift(p)
        assert fold_boxes(pool.l, pool) is None
        assert fold_boxes(parse_formula("p / q"), pool) == parse_formula("p / q")


def _evenization_agrees(max_total):
    config = SearchConfig(SystemId.LNECK)
    for s in enumerate_sequents(("p", "q"), max_total, SystemId.LNECK):
        mapped = evenize_sequent(s, 2, pool)
        assert (derive(s, config) is None) == (derive(mapped, config) is None), str(s)


class TestEvenization:
    def test_towers_and_boxes(self):
        f = parse_formula("p^c")
        assert e_n(f, 2, pool) == Shift(box(Shift(box(Prim("p"), pool)), pool))
        assert o_n(f, 2, pool) == box(Prim("p"), pool)

    def test_bound_enforced(self):
        with pytest.raises(FragmentError):
            e_n(parse_formula("p^c^c^c"), 2, pool)

    @given(formulas(("p", "q"), NECK, max_leaves=4))
    def test_even_and_odd_cyclic(self, f):
        n = size(f)
        assert is_even_cyclic(e_n(f, n, pool))
        assert is_odd_cyclic(o_n(f, n, pool))

    @pytest.mark.parametrize("text", ["p^c -> p^c", "q * p -> (p * q)^c", "p^c -> p"])
    def test_derivability_preserved(self, text):
        s = parse_sequent(text)
        searcher = Searcher(SearchConfig(SystemId.LNECK))
        assert searcher.derivable(evenize_sequent(s, 2, pool)) == searcher.derivable(s)

    def test_small_sequents_agree(self):
        _evenization_agrees(1)

    @pytest.mark.slow
    def test_all_sequents_up_to_size_two(self):
        _evenization_agrees(2)

    def test_unneck(self):
        assert print_formula(unneck(parse_formula("(p^c * q)^c"))) == "(p * q)"
        with pytest.raises(FragmentError):
            unneck(parse_formula("p^r"))


class TestCsEmbedding:
    def test_translations(self):
        assert print_formula(cal_s(parse_formula("p / q"))) == "(p^c / q)^c"
        assert print_formula(cal_a(parse_formula("q \\ p"))) == "(q^c \\ p)"
        assert cs_embed_sequent(parse_sequent("q, p -> p * q")) == parse_sequent("q, p -> (p^c * q^c)^c")

    def test_plain_input_required(self):
        with pytest.raises(FragmentError):
            cal_a(parse_formula("p^c"))

    def test_equivalence_instance(self):
        lcs, neck = Searcher(SearchConfig(SystemId.LCS)), Searcher(SearchConfig(SystemId.LNECK))
        s = parse_sequent("q, p / q -> p")
        assert lcs.derivable(s) and neck.derivable(cs_embed_sequent(s))

    def test_equivalence_on_small_sequents(self):
        lcs, neck = Searcher(SearchConfig(SystemId.LCS)), Searcher(SearchConfig(SystemId.LNECK))
        for s in enumerate_sequents(("p", "q"), 2, SystemId.L):
            assert lcs.derivable(s) == neck.derivable(cs_embed_sequent(s)), str(s)


class TestSequentKind:
    @pytest.mark.parametrize("text, kind", [
        ("__l -> __l", SequentKind.UNIT),
        ("__l, p, __r -> (__l * p) * __r", SequentKind.FRAMED),
        ("(__l * p) * __r -> (__l * q) * __r", SequentKind.BOXED),
        ("p, q -> p * q", SequentKind.PLAIN),
        ("__l, p -> p", None),
    ])
    def test_kinds(self, text, kind):
        assert sequent_kind(reserved(text), pool) is kind


def test_t_n():
    assert print_formula(t_n(Prim("p"), 2, pool)) == "(__q2 * ((__q1 * (p / __q1)) / __q2))"
    assert t_n(Prim("p"), 0, pool) == Prim("p")
    with pytest.raises(ValueError):
        t_n(Prim("p"), -1, pool)


class TestGrammars:
    def test_unneck_grammar(self, data_dir):
        assert unneck_grammar(load_grammar(data_dir / "abc_neck.gr")) == load_grammar(data_dir / "abc.gr")

    def test_cs_embedding_of_abc(self, data_dir):
        assert cs_embed_grammar(load_grammar(data_dir / "abc.gr")) == load_grammar(data_dir / "abc_neck.gr")

    def test_systems_checked(self, data_dir):
        with pytest.raises(GrammarError):
            evenize_grammar(load_grammar(data_dir / "abc.gr"))
        with pytest.raises(GrammarError):
            cs_embed_grammar(load_grammar(data_dir / "abc_neck.gr"))

    def test_evenized_grammar_is_even(self, data_dir):
        g = evenize_grammar(load_grammar(data_dir / "abc_neck.gr"))
        assert g.system is SystemId.LNECK
        assert all(is_odd_cyclic(f) for f in g.toolbox())
        assert is_even_cyclic(g.distinguished)


ROTATION_GRAMMARS = ["rot_over.gr", "rot_under.gr", "rot_odd.gr"]


def _sandwich(g, max_len):
    """Languages of the evenized grammar's unneck, itself, and its unneck under LCS."""
    even = evenize_grammar(g)
    plain = unneck_grammar(even)
    lower = enumerate_language(plain, max_len)
    middle = enumerate_language(even, max_len)
    upper = enumerate_language(plain.with_system(SystemId.LCS), max_len)
    assert lower <= middle <= upper
    return lower, middle, upper


class TestSandwich:
    @pytest.mark.parametrize("name", ROTATION_GRAMMARS)
    def test_short_words(self, data_dir, name):
        g = load_grammar(data_dir / name)
        lower, middle, upper = _sandwich(g, 3)
        assert lower == {"ab"}
        assert middle == upper == {"ab", "ba"}
        assert middle == enumerate_language(g, 3)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ROTATION_GRAMMARS)
    def test_words_up_to_five(self, data_dir, name):
        _sandwich(load_grammar(data_dir / name), 5)
