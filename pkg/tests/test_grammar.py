import itertools

import pytest

from necklace.errors import FragmentError, GrammarError, ShapeError
from necklace.formula import Shift, SystemId, parse_formula, parse_sequent
from necklace.grammar import (
    Grammar,
    RightLinearGrammar,
    dump_grammar,
    enumerate_language,
    import_right_linear,
    find_chain_order,
    load_grammar,
    load_right_linear,
    member,
    parse_grammar,
    perm_closure_oracle,
    reorder_chain,
    split_word,
)
from necklace.search import SearchConfig, derive
from necklace.transforms import cs_embed_grammar

PERMS_ABC = {"".join(p) for p in itertools.permutations("abc")}


@pytest.fixture
def rl(data_dir):
    return load_right_linear(data_dir / "rl_abc.txt")


class TestMembership:
    def test_witness(self, data_dir):
        g = load_grammar(data_dir / "abc.gr")
        witness = member(g, "abc")
        assert witness is not None
        assert witness.assignment[0] == parse_formula("(s / q) / p")
        assert witness.proof.conclusion.succedent == g.distinguished

    def test_non_members(self, data_dir):
        g = load_grammar(data_dir / "abc.gr")
        assert member(g, "acb") is None
        assert member(g, "ab") is None

    def test_word_checks(self, data_dir):
        g = load_grammar(data_dir / "abc.gr")
        with pytest.raises(GrammarError):
            member(g, "")
        with pytest.raises(GrammarError):
            member(g, "abd")

    def test_split_word(self):
        assert split_word("abc") == ("a", "b", "c")
        assert split_word("the dog") == ("the", "dog")


class TestLanguages:
    def test_abc(self, data_dir):
        assert enumerate_language(load_grammar(data_dir / "abc.gr"), 3) == {"abc"}

    def test_compressed_neck_lexicon_reaches_rotations(self, data_dir):
        assert enumerate_language(load_grammar(data_dir / "abc_neck.gr"), 3) == {"abc", "bca", "cab"}

    def test_permutation_closure(self, data_dir):
        assert enumerate_language(load_grammar(data_dir / "perm_abc.gr"), 3) == PERMS_ABC

    @pytest.mark.slow
    def test_permutation_closure_length_six(self, data_dir, rl):
        assert enumerate_language(load_grammar(data_dir / "perm_abc.gr"), 6) == perm_closure_oracle(rl, 6)


class TestRightLinear:
    def test_language(self, rl):
        assert rl.language(6) == {"abc", "abcabc"}
        assert rl.nonterminals == ("S", "P", "Q")
        assert perm_closure_oracle(rl, 3) == PERMS_ABC

    def test_import_matches_language(self, rl):
        assert enumerate_language(import_right_linear(rl), 4) == rl.language(4)

    @pytest.mark.slow
    def test_import_matches_language_length_six(self, rl):
        assert enumerate_language(import_right_linear(rl), 6) == rl.language(6)

    def test_embedded_import_dumps_data_file(self, data_dir, rl):
        text = (data_dir / "perm_abc.gr").read_text(encoding="utf-8")
        expected = "".join(line + "\n" for line in text.splitlines() if not line.startswith("#"))
        assert dump_grammar(cs_embed_grammar(import_right_linear(rl))) == expected

    @pytest.mark.parametrize("text", ["S -> a P", "start: S\nS -> a b c", "start: S\nS -> a P"])
    def test_malformed(self, text):
        with pytest.raises(GrammarError):
            RightLinearGrammar.from_text(text)


class TestFiles:
    def test_dump_parses_back(self, data_dir):
        g = load_grammar(data_dir / "abc_neck.gr")
        assert parse_grammar(dump_grammar(g)) == g

    @pytest.mark.parametrize("text", [
        "a : p",
        "start: s",
        "start: s\na b : p",
        "start: s\na : p /",
        "system: LX\nstart: s\na : p",
        "start: s\nno colon",
    ])
    def test_malformed(self, text):
        with pytest.raises(GrammarError):
            parse_grammar(text)

    def test_fragment_checked(self):
        with pytest.raises(FragmentError):
            parse_grammar("system: L\nstart: s\na : p^c")

    def test_alphabet_checked(self):
        with pytest.raises(GrammarError):
            Grammar((("a", parse_formula("p")),), parse_formula("p"), SystemId.L, ("b",))

    def test_map(self, data_dir):
        g = load_grammar(data_dir / "abc.gr").map(Shift, Shift, SystemId.LNECK)
        assert g.system is SystemId.LNECK and g.distinguished == parse_formula("s^c")


class TestDivisionChains:
    def test_chain_found(self):
        assert find_chain_order(parse_sequent("s / q, q / p, p -> s")) == (0, 1)
        s = parse_sequent("q / p, s / q, p -> s")
        sigma = find_chain_order(s)
        assert sigma == (1, 0)
        assert reorder_chain(s, sigma) == parse_sequent("s / q, q / p, p -> s")

    def test_no_chain(self):
        assert find_chain_order(parse_sequent("s / q, p -> s")) is None
        assert find_chain_order(parse_sequent("p -> p")) == ()

    def test_shape(self):
        with pytest.raises(ShapeError):
            find_chain_order(parse_sequent("p * q, p -> s"))
        with pytest.raises(ShapeError):
            find_chain_order(parse_sequent("p, q -> s * s"))


def _division_sequents():
    names = ("p", "q")
    divisions = [f"{a} / {b}" for a in names for b in names]
    for first, second in itertools.product(divisions, repeat=2):
        for last, goal in itertools.product(names, repeat=2):
            yield parse_sequent(f"{first}, {second}, {last} -> {goal}")


def test_cyclic_derivable_chains_reorder_into_lambek():
    lcs, lam = SearchConfig(SystemId.LCS), SearchConfig(SystemId.L)
    checked = 0
    for s in _division_sequents():
        if derive(s, lcs) is None:
            continue
        sigma = find_chain_order(s)
        assert sigma is not None, str(s)
        assert derive(reorder_chain(s, sigma), lam) is not None, str(s)
        checked += 1
    assert checked > 0
