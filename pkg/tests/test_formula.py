import pytest
from hypothesis import given, settings

from necklace.errors import FormulaSyntaxError, FragmentError, ReservedNameError
from necklace.formula import (
    Brac,
    Over,
    Polarity,
    Prim,
    Prod,
    Rev,
    Sequent,
    Shift,
    SystemId,
    Under,
    check_fragment,
    classify_parity,
    is_even_cyclic,
    is_odd_cyclic,
    mirror,
    parse_formula,
    parse_sequent,
    primitives,
    print_formula,
    print_sequent,
    product,
    size,
)
from strategies import NECK, REV_BRAC, formulas

p, q, r, s = Prim("p"), Prim("q"), Prim("r"), Prim("s")


class TestParse:
    def test_primitive(self):
        assert parse_formula("p") == p

    def test_postfix_binds_tightest(self):
        assert parse_formula("q \\ p^c") == Under(q, Shift(p))

    def test_product_is_left_associative(self):
        assert parse_formula("(p^c * q^c) * r^c") == Prod(Prod(Shift(p), Shift(q)), Shift(r))
        assert parse_formula("p * q * r") == Prod(Prod(p, q), r)

    def test_mixed_division_needs_parentheses(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("s / q / p")
        assert parse_formula("(s / q) / p") == Over(Over(s, q), p)

    def test_postfix_chain(self):
        assert parse_formula("p^r^b") == Brac(Rev(p))

    def test_error_offset_counts_utf8_bytes(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula("p\u00a0*\u00a0%")
        assert info.value.offset == 6

    def test_unexpected_end(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("(p * q")

    def test_reserved_names(self):
        with pytest.raises(ReservedNameError):
            parse_formula("__l * p")
        assert parse_formula("__l * p", allow_reserved=True) == Prod(Prim("__l"), p)

    def test_sequent(self):
        assert parse_sequent("r, q, p -> p * q") == Sequent((r, q, p), Prod(p, q))

    def test_empty_antecedent_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse_sequent("-> p")


class TestPrint:
    @pytest.mark.parametrize("formula, text", [
        (p, "p"),
        (Shift(Shift(p)), "(p^c)^c"),
        (Over(Shift(p), q), "(p^c / q)"),
        (Under(q, Shift(p)), "(q \\ p^c)"),
        (Shift(Prod(p, q)), "(p * q)^c"),
    ])
    def test_canonical_text(self, formula, text):
        assert print_formula(formula) == text

    def test_sequent_text(self):
        assert print_sequent(Sequent((q, p), Shift(Prod(p, q)))) == "q, p -> (p * q)^c"

    @given(formulas(("p", "q", "r"), NECK + REV_BRAC, max_leaves=6))
    @settings(max_examples=300)
    def test_round_trip(self, f):
        assert parse_formula(print_formula(f)) == f


class TestSize:
    def test_examples(self):
        assert size(p) == 0
        assert size(Shift(Prod(p, q))) == 2
        box = Over(Under(Prim("l"), Prod(Prod(Prim("l"), p), Prim("r"))), Prim("r"))
        assert size(box) == 4

    def test_total_size(self):
        assert parse_sequent("p, p \\ q -> q").total_size() == 2

    def test_product_and_primitives(self):
        assert product([p, q, r]) == Prod(Prod(p, q), r)
        assert primitives(parse_formula("(p / q^c) * p")) == {"p", "q"}
        with pytest.raises(ValueError):
            product([])


class TestPolarity:
    def test_division_flips_denominator(self):
        tags = {path: pol for path, _, pol in classify_parity(Under(q, Shift(p)))}
        assert tags[()] is Polarity.EVEN
        assert tags[(0,)] is Polarity.ODD
        assert tags[(1,)] is Polarity.EVEN

    def test_double_flip(self):
        f = Over(p, Under(Shift(q), r))
        tags = {path: pol for path, _, pol in classify_parity(f)}
        assert tags[(1,)] is Polarity.ODD
        assert tags[(1, 0)] is Polarity.EVEN

    @given(formulas(("p", "q"), NECK, max_leaves=6))
    def test_every_occurrence_tagged_once(self, f):
        paths = [path for path, _, _ in classify_parity(f)]
        assert len(paths) == len(set(paths)) == size(f) + sum(1 for _ in _leaves(f))

    def test_cyclic_predicates(self):
        assert is_even_cyclic(Shift(p)) and not is_odd_cyclic(Shift(p))
        assert not is_even_cyclic(Under(Shift(p), q)) and is_odd_cyclic(Under(Shift(p), q))
        assert is_even_cyclic(p) and is_odd_cyclic(p)

    def test_cyclic_predicates_reject_reversal(self):
        with pytest.raises(FragmentError):
            is_even_cyclic(Rev(p))


def _leaves(f):
    if isinstance(f, Prim):
        yield f
        return
    for child in (getattr(f, "inner", None), getattr(f, "left", None), getattr(f, "right", None)):
        if child is not None:
            yield from _leaves(child)


class TestFragments:
    def test_neck_only_in_lneck(self):
        check_fragment(parse_sequent("p^c -> p^c"), SystemId.LNECK)
        with pytest.raises(FragmentError):
            check_fragment(parse_sequent("p^c -> p^c"), SystemId.L)

    def test_brac_system_admits_reversal(self):
        check_fragment(parse_formula("p^r * q^b"), SystemId.LBRAC)
        with pytest.raises(FragmentError):
            check_fragment(parse_formula("p^r"), SystemId.LNECK)

    def test_system_parse(self):
        assert SystemId.parse("lneck") is SystemId.LNECK
        with pytest.raises(ValueError):
            SystemId.parse("LX")


class TestMirror:
    def test_mirror_swaps_divisions(self):
        assert mirror(parse_formula("(p \\ q) * r")) == parse_formula("r * (q / p)")

    @given(formulas(("p", "q"), NECK))
    def test_involution(self, f):
        assert mirror(mirror(f)) == f


class TestRotate:
    def test_rotate(self):
        seq = parse_sequent("p, q, r -> s")
        assert seq.rotate(1) == parse_sequent("q, r, p -> s")
        assert seq.rotate(3) == seq
