import pytest

from fointerp.classes import axiom, members, validate
from fointerp.decide import (PrefixError, bsr_bound, decide_pi2, decide_pi2_in_class,
                             relativize_to_class, search_counterexample)
from fointerp.semantics import evaluate
from fointerp.structures import Signature
from fointerp.syntax import Kind, PrefixClass, classify, parse, render

from corpus import SIG_AB, SIG_E, SIG_UE, prefix_sentence, random_rng
from oracles import naive_smallest_countermodel_size


@pytest.mark.parametrize("text, bound", [("forall x. exists y. x = y", 1),
                                         ("forall x y. exists z. (E(x,z) & E(z,y))", 2),
                                         ("forall x. E(x,x)", 1),
                                         ("exists x. E(x,x)", 1)])
def test_bsr_bound(text, bound):
    assert bsr_bound(parse(text)) == bound


def test_bsr_bound_rejects_high_prefix():
    with pytest.raises(PrefixError):
        bsr_bound(parse("exists x. forall y. exists z. (E(x,y) & E(y,z))"))


def test_decide_examples():
    assert decide_pi2(SIG_E, parse("forall x. exists y. x = y")).valid
    v = decide_pi2(SIG_E, parse("forall x. exists y. E(x,y)"))
    assert not v.valid and v.countermodel.size == 1 and not v.countermodel.relations["E"]
    v = decide_pi2(Signature(P=2), parse("forall x y. (P(x,y) -> P(y,x))"))
    assert v.outcome == "invalid" and v.countermodel.size == 2
    assert v.to_json()["countermodel"]["size"] == 2


def test_decide_rejects_bad_input():
    with pytest.raises(ValueError):
        decide_pi2(SIG_E, parse("E(x,x)"))
    with pytest.raises(PrefixError):
        decide_pi2(SIG_E, parse("exists x. forall y. exists z. E(x,z)"))


def _battery():
    rng = random_rng(2024)
    out = []
    # (signature, largest leading universal block) keeps every search within 12 slots
    for sig, pattern in [(SIG_E, "AE"), (SIG_E, "A"), (SIG_E, "E"), (SIG_UE, "AE"),
                         (SIG_AB, "AE"), (SIG_AB, "AAE"), (SIG_UE, "E")]:
        for _ in range(6):
            phi = prefix_sentence(rng, sig, pattern)
            out.append((sig, phi))
    return out


def _slots(sig, n):
    return sum(n ** a for a in sig.values())


def test_decider_agrees_with_naive_oracle():
    checked = 0
    for sig, phi in _battery():
        bound = bsr_bound(phi)
        if _slots(sig, bound) > 12:
            continue
        v = decide_pi2(sig, phi)
        oracle = naive_smallest_countermodel_size(sig, phi, bound)
        assert v.valid == (oracle is None), phi
        if not v.valid:
            assert v.countermodel.size == oracle <= bound
            assert not evaluate(v.countermodel, phi)
        checked += 1
    assert checked >= 30


def test_backtracking_matches_enumeration():
    rng = random_rng(8)
    for _ in range(25):
        phi = prefix_sentence(rng, SIG_E, "AE")
        assert decide_pi2(SIG_E, phi, cap=1).valid == decide_pi2(SIG_E, phi).valid


def test_relativize_examples():
    out = relativize_to_class(axiom("2eq"), parse("forall x y. (P(x,y) -> P(y,x))"))
    c = classify(out)
    assert c.kind is Kind.PI and c.k <= 2
    out = relativize_to_class(parse("exists x. U(x)"), parse("forall x. U(x)"))
    assert classify(out) == PrefixClass(Kind.PI, 1)
    assert render(out) == "forall x x_1. !U(x) | U(x_1)"


def test_relativize_needs_sentences():
    with pytest.raises(ValueError):
        relativize_to_class(parse("U(x)"), parse("forall x. U(x)"))


def test_relativize_rejects_high_axiom():
    with pytest.raises(PrefixError):
        relativize_to_class(parse("forall x. exists y. forall z. E(x,y) | E(y,z)"),
                            parse("forall x. E(x,x)"))


def test_in_class_examples():
    assert decide_pi2_in_class(axiom("2eq"), parse("forall x y. (P(x,y) -> P(y,x))")).valid
    v = decide_pi2_in_class(axiom("2eq"), parse("forall x. exists y. (P(x,y) & !(x = y))"))
    assert not v.valid and v.countermodel.size == 1 and validate("2eq", v.countermodel)
    assert decide_pi2_in_class(axiom("leq"), parse("forall x y. (x < y | y < x | x = y)")).valid


def test_search_examples():
    S = search_counterexample("2eq", parse("forall x y. P(x,y)"), 3)
    assert S.size == 2
    assert search_counterexample("2eq", axiom("2eq"), 3) is None
    assert search_counterexample("bigraph3", parse("exists x. L(x)"), 7) is None


CLASS_BATTERY = {
    "2eq": ["forall x y. (P(x,y) -> P(y,x))",
            "forall x. exists y. (P(x,y) & !(x = y))",
            "forall x y. (P(x,y) -> Q(x,y))",
            "forall x y. (P(x,y) & Q(x,y) -> x = y)",
            "forall x. exists y. (P(x,y) & Q(x,y))",
            "forall x y. exists z. (P(x,z) & Q(z,y))"],
    "leq": ["forall x y. (x < y | y < x | x = y)",
            "forall x. exists y. x < y",
            "forall x y. (x ~ y -> y ~ x)",
            "forall x y. exists z. (x < z | z < y)",
            "forall x y. (x < y -> !(x ~ y))",
            "forall x. exists y. (x ~ y & !(x = y))"],
}


@pytest.mark.parametrize("c", sorted(CLASS_BATTERY))
def test_in_class_decider_matches_bounded_class_search(c):
    for text in CLASS_BATTERY[c]:
        phi = parse(text)
        v = decide_pi2_in_class(axiom(c), phi)
        direct = search_counterexample(c, phi, v.bound)
        assert v.valid == (direct is None), text
        if not v.valid:
            assert validate(c, v.countermodel) and not evaluate(v.countermodel, phi)
            assert v.countermodel.size == direct.size


def test_search_returns_smallest_member():
    phi = parse("forall x y. (P(x,y) | Q(x,y))")
    S = search_counterexample("2eq", phi, 4)
    assert S.size == 2 and not evaluate(S, phi)
    assert all(evaluate(T, phi) for T in members("2eq", 1))


@pytest.mark.parametrize("c", sorted(CLASS_BATTERY))
def test_in_class_backtracking_matches_enumeration(c):
    for text in CLASS_BATTERY[c]:
        phi = parse(text)
        fast = decide_pi2_in_class(axiom(c), phi, cap=1)
        full = decide_pi2_in_class(axiom(c), phi)
        assert fast.valid == full.valid, text
        if not fast.valid:
            assert fast.countermodel.size == full.countermodel.size
            assert validate(c, fast.countermodel) and not evaluate(fast.countermodel, phi)


def test_backtracking_handles_transitivity_in_class():
    # the class axiom mixes both relations; per-conjunct checks keep this fast
    v = decide_pi2_in_class(axiom("leq"), parse("forall x y z. (x < y & y < z -> x < z)"), cap=12)
    assert v.valid and v.bound == 3
