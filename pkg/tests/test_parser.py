import random
import time

import pytest
from hypothesis import given, settings, strategies as st

from corpus import class_config, random_formula
from rbb.parser import ParseError, parse, print_formula, print_reason
from rbb.syntax import (
    SIGMA,
    Adequate,
    Believes,
    Eq,
    ForAll,
    Letter,
    Not,
    Or,
    Supports,
    atom_term,
    conj,
    iff,
    impl,
)
from rbb.theory import TheoryConfig

CFG = TheoryConfig.from_name("QRBB", ("r", "s"), ("p", "q"))
SIGMA_CFG = TheoryConfig.from_name("RBBs", ("r", "s"), ("p", "q"))

P, Q = Letter("p"), Letter("q")
R, S = atom_term("r"), atom_term("s")


def test_supports_binds_tighter_than_implication():
    assert parse("r:p -> q", CFG) == impl(Supports(R, P), Q)


def test_negation_scopes_over_a_supports_atom():
    assert parse("~r:p", CFG) == Not(Supports(R, P))


def test_conjunction_binds_tighter_than_disjunction():
    assert parse("r:p | q & r", CFG) == Or(Supports(R, P), conj(Q, Adequate(R)))


def test_implication_associates_right():
    assert parse("p -> q -> p", CFG) == impl(P, impl(Q, P))


def test_belief_takes_the_smallest_argument():
    assert parse("B p & q", CFG) == conj(Believes(P), Q)


def test_bare_reason_is_an_adequacy_claim():
    assert parse("r", CFG) == Adequate(R)
    assert parse("B r", CFG) == Believes(Adequate(R))


def test_quantifier_scopes_to_the_right_edge():
    t = atom_term("t")
    want = ForAll("t", impl(Supports(t, P), Believes(Adequate(t))))
    assert parse("A t. t:p -> B t", CFG) == want


def test_nested_supports_print_without_parens():
    f = Supports(S, Supports(R, P))
    assert print_formula(f) == "s:r:p"
    assert parse("s:r:p", CFG) == f


def test_equality_tokens():
    assert parse("r = s", CFG) == Eq(R, S)
    assert parse("r != s", CFG) == Not(Eq(R, S))


def test_biconditional_round_trips():
    f = iff(P, Q)
    assert parse(print_formula(f), CFG) == f


def test_sigma_needs_a_sigma_theory():
    assert parse("B sigma", SIGMA_CFG) == Believes(Adequate(SIGMA))
    with pytest.raises(ParseError):
        parse("B sigma", CFG)


def test_quantifiers_need_a_quantified_theory():
    base = TheoryConfig.from_name("RBB", ("r", "s"), ("p", "q"))
    with pytest.raises(ParseError):
        parse("A t. t:p", base)


@pytest.mark.parametrize(
    "bad",
    ["", "p &", "(p", "r:", "x", "A p. q", "p = q", "B B", ")", "p q"],
)
def test_malformed_inputs_raise_parse_error(bad):
    with pytest.raises(ParseError):
        parse(bad, CFG)


def test_parse_error_carries_a_span():
    with pytest.raises(ParseError) as err:
        parse("p & x", CFG)
    assert "x" in str(err.value)


def test_print_reason_on_atoms():
    assert print_reason(R) == "r"
    assert print_reason(SIGMA) == "sigma"


_FUZZ_CFG = class_config("QRBBs")


@st.composite
def formulas(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_formula(random.Random(seed), _FUZZ_CFG, depth=4)


@given(formulas())
@settings(max_examples=300)
def test_round_trip_is_identity(f):
    assert parse(print_formula(f), _FUZZ_CFG) == f


@given(formulas())
@settings(max_examples=100)
def test_printing_is_stable(f):
    once = print_formula(f)
    assert print_formula(parse(once, _FUZZ_CFG)) == once


def test_round_trip_corpus_at_speed():
    # the acceptance run uses ten thousand; a quarter of that here keeps
    # the unit suite snappy while exercising the same generator
    rng = random.Random(2024)
    start = time.perf_counter()
    for _ in range(2500):
        f = random_formula(rng, _FUZZ_CFG, depth=4)
        assert parse(print_formula(f), _FUZZ_CFG) == f
    assert time.perf_counter() - start < 10.0
