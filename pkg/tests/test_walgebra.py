import pytest

from wgl.pyramid import Box, HalfInt, Partition
from wgl.quotient import ad_invariant_witness, reduce_mod_I, w_commutator, w_product
from wgl.uea import Algebra
from wgl.walgebra import (
    GeneratorBasis,
    LOperator,
    _generating_family,
    build_L,
    build_shifted_matrix,
    capelli_suite,
    conjecture_check,
    default_floor,
    family_generators,
    main_lemma_check,
    premet_check,
    relation_table_check,
    rho_det_identities,
    w_membership_check,
    yangian_check_L,
)


# ---------------------------------------------------------------------------
# the shifted matrix and L(z)


def test_shifted_matrix_structure():
    p = Partition((2, 1))
    A = build_shifted_matrix(p)
    alg = A.alg
    # diagonal: z + (projected letter) + shift value
    assert A.data[0][0].coeff(1) == alg.one()
    assert A.data[0][0].coeff(0) == alg.gen(Box(1, 1), Box(1, 1))
    assert A.data[1][1].coeff(0) == alg.gen(Box(1, 2), Box(1, 2)) - alg.one()
    assert A.data[2][2].coeff(0) == alg.gen(Box(2, 1), Box(2, 1))
    # a degree-1 letter is projected away, leaving only the unit F entry
    assert A.data[1][0].coeff(0) == alg.one()
    # half-integer-degree letters survive the projection
    assert A.data[2][0].coeff(0) == alg.gen(Box(1, 1), Box(2, 1))
    assert A.data[0][2].coeff(0) == alg.gen(Box(2, 1), Box(1, 1))


def test_default_floor_scales_with_largest_part():
    assert default_floor(Partition((2,))) == HalfInt.of(-8)
    assert default_floor(Partition((3, 1))) == HalfInt.of(-10)


def test_build_L_rank_one_closed_form():
    p = Partition((2,))
    alg = Algebra(p)
    e = lambda a, b: alg.gen(Box(1, a), Box(1, b))
    L = build_L(p)
    assert L.floor is None
    s = L.reduced.data[0][0]
    assert s.coeff(2) == alg.scalar(-1)
    assert s.coeff(1) == alg.one() - e(1, 1) - e(2, 2)
    assert s.coeff(0) == reduce_mod_I(e(1, 1) + e(2, 1) - e(1, 1) * e(2, 2))


def test_build_L_is_exact_polynomial_for_equal_parts():
    L = build_L(Partition((2, 2)))
    assert L.floor is None
    for i in range(2):
        for j in range(2):
            assert L.reduced.data[i][j].floor2 is None
            assert all(n2 >= 0 for n2 in L.reduced.data[i][j].exponents2())


def test_build_L_truncates_otherwise():
    L = build_L(Partition((2, 1)))
    assert L.floor == HalfInt.of(-8)
    assert L.reduced.data[0][0].floor2 == -16
    obj = L.to_json_obj()
    assert obj["partition"] == "2,1" and obj["floor"] == "-8"
    assert L.to_text().startswith("L(z) for partition 2,1")


def test_truncation_floor_does_not_change_the_coefficients():
    deep = build_L(Partition((2, 1)), -9)
    shallow = build_L(Partition((2, 1)), -8)
    assert deep.reduced.truncate2(-16).to_json_obj() == shallow.reduced.to_json_obj()


# ---------------------------------------------------------------------------
# the checks


def test_main_lemma_smallest_case():
    rep = main_lemma_check(Partition((2,)), -6)
    assert rep["pass"] and rep["floor"] == "-6" and rep["witnesses"] == []


def test_capelli_suite_small():
    rep = capelli_suite(2)
    assert rep["pass"] and rep["n"] == 2
    texts = [c["text"] for c in rep["coefficients"]]
    assert texts[0] == "-1 + e[(1,1),(1,1)] + e[(2,1),(2,1)]"
    assert all(c["central"] for c in rep["coefficients"])
    with pytest.raises(ValueError):
        capelli_suite(9)


def test_determinant_identities_low_rank():
    for n in (1, 2):
        rep = rho_det_identities(n)
        assert rep["pass"], rep["witnesses"]
        assert all(r["pass"] for r in rep["results"])


def test_membership_of_truncated_L():
    rep = w_membership_check(build_L(Partition((2, 1)), -8))
    assert rep["pass"] and rep["coefficients_checked"] > 0


def test_yangian_exact_for_single_row():
    rep = yangian_check_L(build_L(Partition((2,))))
    assert rep["pass"] and rep["floor"] is None
    assert rep["exact_commutator_zero"] is True


# ---------------------------------------------------------------------------
# generator families


def test_family_selection_by_shape():
    assert _generating_family(Partition((2,))) == "minimal"
    assert _generating_family(Partition((3,))) == "rectangular"
    assert _generating_family(Partition((2, 2))) == "rectangular"
    assert _generating_family(Partition((2, 1, 1))) == "minimal"
    assert _generating_family(Partition((3, 2))) is None
    with pytest.raises(ValueError):
        family_generators(Partition((3, 1)), "minimal")
    with pytest.raises(ValueError):
        family_generators(Partition((2, 2)), "principal")


def test_principal_family_top_generator_is_shifted_trace():
    for N in (2, 3):
        p = Partition((N,))
        alg = Algebra(p)
        g = family_generators(p, "principal")
        assert len(g.table) == N
        trace = alg.zero()
        for h in range(1, N + 1):
            trace = trace + alg.gen(Box(1, h), Box(1, h))
        want = reduce_mod_I(trace - alg.scalar(N * (N - 1) // 2))
        assert g.table[(1, 1, N - 1)] == want
        rep = relation_table_check(g)
        assert rep["pass"] and rep["generators"] == N


def test_minimal_family_generators_are_invariant():
    g = family_generators(Partition((2, 1)), "minimal")
    assert len(g.table) == 5
    for rep_elem in g.table.values():
        assert ad_invariant_witness(rep_elem) is None
    assert relation_table_check(g)["pass"]
    assert premet_check(g)["pass"]


def test_block_reconstruction_matches_direct_build():
    p = Partition((2,))
    rep = conjecture_check(p, family_generators(p, "minimal"))
    assert rep["pass"] and rep["floor"] is None


def test_generator_serialization():
    g = family_generators(Partition((2,)), "principal")
    obj = g.to_json_obj()
    assert obj["family"] == "principal" and obj["partition"] == "2"
    assert [tuple((e["i"], e["j"], e["k"])) for e in obj["generators"]] == [(1, 1, 0), (1, 1, 1)]
    assert "w[1,1;1] = -1 + e[(1,1),(1,1)] + e[(1,2),(1,2)]" in g.to_text()


# ---------------------------------------------------------------------------
# exact rewriting in terms of a generator family


@pytest.fixture(scope="module")
def minimal_basis():
    return GeneratorBasis(family_generators(Partition((2, 1)), "minimal"))


def test_generator_basis_units(minimal_basis):
    basis = minimal_basis
    # polynomials are keyed by the position of each generator in the basis
    for n, rep_elem in enumerate(basis.reps):
        assert basis.convert(rep_elem) == {(n,): 1}


def test_generator_basis_products_convert_to_label_products(minimal_basis):
    basis = minimal_basis
    for x, xrep in enumerate(basis.reps[:3]):
        for y, yrep in enumerate(basis.reps[:3]):
            assert basis.convert(w_product(xrep, yrep)) \
                == basis.poly_mul({(x,): 1}, {(y,): 1})


def test_generator_basis_commutators_match_quotient(minimal_basis):
    basis = minimal_basis
    for x, xrep in enumerate(basis.reps):
        for y, yrep in enumerate(basis.reps):
            direct = basis.convert(w_commutator(xrep, yrep))
            assert basis.poly_commutator({(x,): 1}, {(y,): 1}) == direct
