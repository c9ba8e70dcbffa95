import itertools

import pytest

from fointerp.classes import gen_random, validate
from fointerp.constructions import (BIG2EQ_MARKERS, build, marker_formula, pbar, q_link_count,
                                    schema, schema_leq_as_printed, theta)
from fointerp.interpret import verify
from fointerp.samples import a2, bigraph, g0, g1
from fointerp.semantics import definable_set, evaluate
from fointerp.structures import FiniteStructure, Signature, from_partitions, isomorphism, partition_of
from fointerp.syntax import Exists, Kind, PrefixClass, classify, parse, variables

from oracles import is_equivalence, is_strict_total_order


@pytest.fixture(scope="module")
def b1():
    return build("big2eq", g1()).structure


def test_sizes():
    B0 = build("big2eq-param", g0()).structure
    assert B0.size == 2 + 2 + 3 * 4 + 4 == 20
    assert len(partition_of(B0, "P")) == 8 and len(partition_of(B0, "Q")) == 8
    assert build("big2eq", g1()).structure.size == 75
    assert build("2eq2leq-param", a2()).structure.size == 11


def test_parameters():
    w = build("big2eq-param", g0())
    assert set(w.params) == {"yL", "yR", "yP", "yN"}
    assert w.params["yL"] == w.structure["cL"]
    assert build("2eq2leq-param", a2()).params == {"y": build("2eq2leq-param", a2()).structure["a*"]}
    assert build("big2eq", g1()).params == {} and build("2eq2leq", a2()).params == {}


@pytest.mark.parametrize("kind, A", [("big2eq-param", g0()), ("big2eq", g1()),
                                     ("2eq2leq-param", a2()), ("2eq2leq", a2())])
def test_builds_land_in_target_class_with_full_marker_table(kind, A):
    w = build(kind, A)
    B = w.structure
    assert validate("leq" if kind.startswith("2eq") else "2eq", B)
    values = list(B.names.values())
    assert len(values) == len(set(values)) and set(values) == set(B.universe)
    assert w.embedding == list(A.universe)


def test_preconditions():
    with pytest.raises(ValueError, match="bigraph3"):
        build("big2eq", g0())
    with pytest.raises(ValueError, match="2eq"):
        build("2eq2leq", g0())
    with pytest.raises(ValueError):
        build("nope", g0())


def test_param_schema_is_existential():
    for f in schema("big2eq-param").all_formulas():
        assert classify(f) in (PrefixClass(Kind.SIGMA, 1), PrefixClass(Kind.BOTH, 0))


def test_leq_param_domain_formula():
    expected = parse("exists z0 z1 z2. (z0 ~ z1 & z1 ~ z2 & z0 < y & y < z1 & z1 < x & x < z2)")
    assert schema("2eq2leq-param").phi_u == expected


def test_leq_domain_formula_mentions_psi():
    phi_u = schema("2eq2leq").phi_u
    assert classify(phi_u) == PrefixClass(Kind.SIGMA, 1)
    assert {"x1", "x2", "x3"} <= variables(phi_u)
    assert schema("2eq2leq").phi_not_u is None


def test_pbar_includes_diagonal():
    assert len(pbar("P", ("a", "b")).parts) == 4


def test_theta_shape():
    phi = theta(5, 4, 4)
    assert classify(phi) == PrefixClass(Kind.BOTH, 0)
    with pytest.raises(ValueError):
        theta(2, 2, 3)
    with pytest.raises(ValueError):
        theta(0, 1, 1)


def test_theta_witness_in_b1(b1):
    xs = [b1[f"cL{k}"] for k in range(1, 5)] + [b1["l1"]]
    ys = [b1[f"cL{k}~"] for k in range(1, 5)]
    env = {f"x{i}": v for i, v in enumerate(xs, 1)} | {f"y{i}": v for i, v in enumerate(ys, 1)}
    assert evaluate(b1, theta(5, 4, 4), env)


def test_theta_771_has_no_witness_in_p_marker_classes(b1):
    rest = [f"x{i}" for i in range(2, 8)] + [f"y{i}" for i in range(1, 8)]
    phi = Exists(tuple(rest), theta(7, 7, 1))
    for k in range(1, 7):
        for name in (f"cP{k}", f"cP{k}~"):
            assert not evaluate(b1, phi, {"x1": b1[name]})


def test_link_counts(b1):
    for tag, (_, _, links) in BIG2EQ_MARKERS.items():
        assert q_link_count(b1, b1[f"c{tag}1"], b1[f"c{tag}1~"]) == links
    with pytest.raises(ValueError):
        q_link_count(b1, b1["cL1"], b1["cL2"])


def test_marker_sets(b1):
    assert definable_set(b1, marker_formula("PsiL"), "x") == {b1[f"l{i}"] for i in (1, 2, 3)}
    assert definable_set(b1, marker_formula("PsiR"), "x") == {b1[f"r{i}"] for i in (1, 2, 3)}
    cp = definable_set(b1, marker_formula("PsiP"), "x")
    assert cp == {b1[f"cP{k}{t}"] for k in range(1, 7) for t in ("", "~")} and len(cp) == 12
    cn = definable_set(b1, marker_formula("PsiN"), "x")
    assert cn == {b1[f"cN{k}{t}"] for k in range(1, 8) for t in ("", "~")} and len(cn) == 14


def test_leq_markers():
    B = build("2eq2leq", a2()).structure
    assert definable_set(B, marker_formula("Psi"), "x") == {B["c1"]}
    Bp = build("2eq2leq-param", a2()).structure
    assert definable_set(Bp, marker_formula("AStar"), "y") == {Bp["a*"]}


def test_marker_prefix_classes():
    for name in ("PsiL", "PsiR", "PsiP", "PsiN", "Psi"):
        assert classify(marker_formula(name)) == PrefixClass(Kind.SIGMA, 1)
    assert classify(marker_formula("AStar")) == PrefixClass(Kind.PI, 1)
    with pytest.raises(ValueError):
        marker_formula("PsiX")


def test_distinctness(b1):
    P, Q = b1.relations["P"], b1.relations["Q"]
    assert all(not ((a, b) in P and (a, b) in Q)
               for a, b in itertools.permutations(b1.universe, 2))


def test_order_shape_of_param_leq_build():
    A = a2()
    B = build("2eq2leq-param", A).structure
    lt = B.relations["<"]
    assert is_strict_total_order(B, "<") and is_equivalence(B, "~")
    star = B["a*"]
    below = [b for b in B.universe if (b, star) in lt]
    assert set(below) == {B["s0_1"], B["s0_2"]}
    assert partition_of(B, "~").count([star]) == 1
    n = len(partition_of(A, "P"))
    for a in A.universe:
        assert any((B[f"s1_{i}"], a) in lt and (a, B[f"s2_{i}"]) in lt for i in range(1, n + 1))


def test_printed_leq_schema_breaks_complement():
    A = gen_random("2eq", 2, size=5)
    assert verify(schema("2eq2leq"), A, build("2eq2leq", A)).ok
    rep = verify(schema_leq_as_printed(), A, build("2eq2leq", A))
    assert rep.failed == "complement"


@pytest.mark.parametrize("kind", ["2eq2leq-param", "2eq2leq"])
def test_single_element_two_eq(kind):
    A = from_partitions(Signature(P=2, Q=2), 1, {"P": [[0]], "Q": [[0]]})
    assert verify(schema(kind), A, build(kind, A)).ok


def _small_bigraphs():
    cells = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]
    for k in range(4):
        for es in itertools.combinations(cells, k):
            yield bigraph(3, 3, list(es))


def test_param_round_trip_on_all_sparse_3x3_graphs():
    for A in _small_bigraphs():
        assert verify(schema("big2eq-param"), A, build("big2eq-param", A)).ok


def test_round_trip_on_sparse_3x3_graphs_up_to_isomorphism():
    reps = []
    for A in _small_bigraphs():
        if not any(isomorphism(A, R) is not None for R in reps):
            reps.append(A)
    assert len(reps) < 20
    for A in reps:
        assert verify(schema("big2eq"), A, build("big2eq", A)).ok


@pytest.mark.parametrize("seed", range(8))
def test_leq_round_trips(seed):
    A = gen_random("2eq", seed, size=1 + seed % 6)
    for kind in ("2eq2leq-param", "2eq2leq"):
        assert verify(schema(kind), A, build(kind, A)).ok


def test_build_json_carries_names():
    B = build("big2eq-param", g0()).structure
    data = B.to_json()
    assert data["names"]["cL"] == B["cL"]
    assert FiniteStructure.from_json(data) == B
