import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wqslattice.errors import BudgetExceeded, MarketError, ParseError
from wqslattice.market import (
    Market,
    check_choice_consistency,
    is_substitutable,
    mask_of,
    responsive_ranking,
    satisfies_lad,
)
from wqslattice.marketfile import parse_market, serialize_market
from wqslattice.oracle import GeneratorConfig, generate_market

W = lambda *ix: mask_of(i - 1 for i in ix)  # noqa: E731  1-based worker numbers, as printed


def brute_substitutable(market, f):
    """Triple sweep over frozensets, straight from the definition."""
    n = market.n_workers
    ranking = [frozenset(i for i in range(n) if s >> i & 1) for s in market.firm_prefs[f]]

    def ch(s):
        return next((t for t in ranking if t <= s), frozenset())

    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    for w in range(n):
        for s in subsets:
            if w in s and w in ch(s):
                for sub in subsets:
                    if sub <= s and w not in ch(sub | {w}):
                        return False
    return True


def brute_lad(market, f):
    n = market.n_workers
    ranking = [frozenset(i for i in range(n) if s >> i & 1) for s in market.firm_prefs[f]]

    def ch(s):
        return next((t for t in ranking if t <= s), frozenset())

    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    return all(len(ch(a)) <= len(ch(b)) for a in subsets for b in subsets if a <= b)


def test_parse_example1(ex1):
    assert ex1.firms == ("f1", "f2")
    assert ex1.workers == ("w1", "w2", "w3", "w4")
    # 8 listed subsets plus the implicit empty set
    assert len(ex1.firm_prefs[1]) + 1 == 9
    assert ex1.worker_prefs[3] == (1,)


@pytest.mark.parametrize(
    "firm, available, chosen",
    [
        (0, W(1, 2, 3), W(3)),
        (0, W(1, 2), W(1, 2)),
        (1, W(2, 3, 4), W(2, 4)),
        (0, 0, 0),
        (1, 0, 0),
    ],
)
def test_choice_examples(ex1, firm, available, chosen):
    assert ex1.choice(firm, available) == chosen


def test_choice_is_subset_and_idempotent(ex1, ex2):
    for m in (ex1, ex2):
        for f in range(m.n_firms):
            for s in range(1 << m.n_workers):
                c = m.choice(f, s)
                assert c & ~s == 0
                assert m.choice(f, c) == c


def test_choice_scan_matches_table(ex1):
    # the linear scan path used for very large markets
    for f in range(ex1.n_firms):
        for s in range(16):
            scan = next((t for t in ex1.firm_prefs[f] if t & ~s == 0), 0)
            assert ex1.choice(f, s) == scan


def test_substitutability_verdicts(ex1, ex2):
    assert is_substitutable(ex1, 1).holds
    assert brute_substitutable(ex1, 1)
    assert is_substitutable(ex2, 0).holds
    assert brute_substitutable(ex2, 0)


def test_substitutability_witness():
    m = parse_market(
        "firms: f\nworkers: w1 w2 w3\npref w1: f\npref w2: f\npref w3: f\npref f: {w1 w2} {w3}\n"
    )
    verdict = is_substitutable(m, 0)
    assert not verdict
    assert not brute_substitutable(m, 0)
    # Ch({w1,w2}) = {w1,w2} but Ch({w1}) is empty
    assert verdict.witness == (0, W(1, 2), W(1))
    assert m.describe_witness(verdict.witness) == "(w1, S={w1,w2}, S'={w1})"


def test_lad_verdicts(ex1, ex2):
    verdict = satisfies_lad(ex1, 0)
    assert not verdict
    assert verdict.witness == (W(1, 2), W(1, 2, 3))
    assert satisfies_lad(ex1, 1).holds == brute_lad(ex1, 1)
    assert satisfies_lad(ex2, 0).holds
    assert brute_lad(ex2, 0)


def test_lad_holds_for_singletons_only():
    m = parse_market("firms: f\nworkers: a b c\npref a: f\npref b: f\npref c: f\npref f: {b} {c} {a}\n")
    assert satisfies_lad(m, 0).holds


def test_choice_consistency(ex1, ex2):
    assert ex1.choice(1, W(2) | W(3, 4)) == ex1.choice(1, ex1.choice(1, W(2)) | W(3, 4)) == W(2, 4)
    assert ex1.choice(0, 0) == 0
    assert check_choice_consistency(ex2, 0).holds
    for f in range(2):
        assert check_choice_consistency(ex1, f).holds


def test_consistency_fails_without_substitutability():
    m = parse_market(
        "firms: f\nworkers: w1 w2 w3\npref w1: f\npref w2: f\npref w3: f\npref f: {w1 w2} {w3}\n"
    )
    assert not check_choice_consistency(m, 0)


def test_budget_guard(ex1):
    small = ex1.with_budget(100)
    with pytest.raises(BudgetExceeded):
        is_substitutable(small, 0)
    with pytest.raises(BudgetExceeded):
        check_choice_consistency(small, 0)


def test_axiom_cache_is_write_once(ex1):
    first = ex1.axiom_status(0, "lad")
    assert ex1.axiom_status(0, "lad") is first


def test_responsive_ranking_wu_order():
    ranking = responsive_ranking([0, 1, 2, 3], 3)
    assert len(ranking) == 4 + 6 + 4
    assert ranking[:4] == (W(1, 2, 3), W(1, 2, 4), W(1, 2), W(1, 3, 4))
    assert ranking[-1] == W(4)


def test_responsive_choice_takes_best_quota(quota3):
    for s in range(16):
        members = [i for i in range(4) if s >> i & 1]
        assert quota3.choice(0, s) == mask_of(members[:3])


@pytest.mark.parametrize(
    "text, message",
    [
        ("workers: w1\npref w1:\n", "no firms declared"),
        ("firms:\nworkers: w1\n", "no firms declared"),
        ("firms: f\nworkers: w1\npref w1: f\npref f: {w1 w1}\n", "duplicate member"),
        ("firms: f\nworkers: w1\npref w1: f\npref f: {w2}\n", "unknown worker"),
        ("firms: f\nworkers: w1\npref w1: g\npref f: {w1}\n", "unknown firm"),
        ("firms: f\nworkers: w1\npref w1: f f\npref f: {w1}\n", "duplicate ranking entry"),
        ("firms: f\nworkers: w1\npref w1: f\npref f: {w1} {w1}\n", "duplicate ranking entry"),
        ("firms: f\nworkers: w1\npref w1: f\npref f: {}\n", "empty subset"),
        ("firms: f\nworkers: w1\npref x: f\n", "unknown agent"),
        ("firms: f\nworkers: w1\npref w1: f\n", "missing preference"),
        ("firms: f\nworkers: w1\npref w1: f\npref f: {w1\n", "unterminated"),
        ("firms: f\nworkers: w1\nbogus\n", "unknown directive"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_market(text)


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_market("firms: f\nworkers: w1\npref w1: f\npref f: {w1} {w9}\n")
    assert info.value.line == 4
    assert info.value.column == 15


def test_comments_and_blank_lines():
    m = parse_market("# hello\n\nfirms: f # trailing\nworkers: w1\npref w1: f\npref f: {w1}\n")
    assert m.firms == ("f",)


def test_market_rejects_bad_records():
    with pytest.raises(MarketError):
        Market(("f",), ("w",), ((0,),), ((0,),))
    with pytest.raises(MarketError):
        Market(("f",), ("f",), ((0,),), ((1,),))


def test_serialization_of_example1(ex1):
    text = serialize_market(ex1)
    assert "pref f1: {w3} {w1 w2} {w1} {w2}\n" in text
    assert parse_market(text) == ex1


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 5),
    st.integers(0, 2**32),
    st.sampled_from(["responsive", "free"]),
)
def test_round_trip(nf, nw, seed, mode):
    market = generate_market(GeneratorConfig(nf, min(nw, 4) if mode == "free" else nw, (1, 3), seed, mode))
    again = parse_market(serialize_market(market))
    assert again == market
    assert serialize_market(again) == serialize_market(market)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32))
def test_axiom_checks_agree_with_brute_force(nf, nw, seed):
    market = generate_market(GeneratorConfig(nf, nw, (1, 2), seed, "free"))
    for f in range(nf):
        assert is_substitutable(market, f).holds == brute_substitutable(market, f)
        assert satisfies_lad(market, f).holds == brute_lad(market, f)
        # consistency follows from substitutability
        assert check_choice_consistency(market, f).holds


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_random_rankings_axioms_agree(nw, seed):
    import random

    rng = random.Random(seed)
    ranking = tuple(rng.sample(range(1, 1 << nw), rng.randint(1, (1 << nw) - 1)))
    names = tuple(f"w{i}" for i in range(nw))
    market = Market(("f",), names, ((0,),) * nw, (ranking,))
    assert is_substitutable(market, 0).holds == brute_substitutable(market, 0)
    assert satisfies_lad(market, 0).holds == brute_lad(market, 0)
    if is_substitutable(market, 0):
        assert check_choice_consistency(market, 0).holds


def test_lad_chain_monotone(ex2):
    ch = ex2.choice_table(0)
    for a in range(8):
        for b in range(8):
            for c in range(8):
                if a & ~b == 0 and b & ~c == 0:
                    assert ch[a].bit_count() <= ch[b].bit_count() <= ch[c].bit_count()
