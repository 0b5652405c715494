import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wgl.pyramid import Box, HalfInt, Partition
from wgl.uea import Algebra, element_from_json, parse_element

from conftest import gl_algebra, gl_gen, random_element


def test_algebra_is_memoized_per_partition():
    assert Algebra(Partition((2, 1))) is Algebra(Partition((2, 1)))
    assert Algebra(Partition((2,))) is not Algebra(Partition((1, 1)))


def test_generator_commutation_relations(gl3):
    # [e_ab, e_cd] = delta_bc e_ad - delta_da e_cb, checked on all 81 pairs
    e = lambda i, j: gl_gen(gl3, i, j)
    for a in range(1, 4):
        for b in range(1, 4):
            for c in range(1, 4):
                for d in range(1, 4):
                    want = gl3.zero()
                    if b == c:
                        want = want + e(a, d)
                    if d == a:
                        want = want - e(c, b)
                    assert e(a, b).commutator(e(c, d)) == want


def test_normal_form_is_order_independent(gl2):
    e = lambda i, j: gl_gen(gl2, i, j)
    x = e(1, 2) * e(2, 1) * e(1, 1)
    y = e(1, 2) * (e(2, 1) * e(1, 1))
    assert x == y
    # same element entered in the opposite order differs by the commutators,
    # never by the normal form of the common part
    assert e(1, 2) * e(2, 1) - e(2, 1) * e(1, 2) == e(1, 1) - e(2, 2)


def test_scalar_arithmetic(gl2):
    x = gl_gen(gl2, 1, 2)
    assert x * 2 == x + x
    assert 3 * x - x == x.scale(2)
    assert x.scale(Fraction(1, 2)) + x.scale(Fraction(1, 2)) == x
    assert (x - x).is_zero()
    assert gl2.scalar(5).terms == {(): 5}
    assert gl2.one() * x == x == x * gl2.one()


def test_mixing_algebras_raises(gl2, gl3):
    with pytest.raises(ValueError):
        gl_gen(gl2, 1, 1) + gl_gen(gl3, 1, 1)


def test_element_builder_and_parse_round_trip():
    alg = Algebra(Partition((2, 1)))
    x = parse_element(alg, "2*e[(1,1),(1,2)] - 3 + e[(2,1),(1,1)]*e[(1,2),(2,1)]")
    y = (alg.gen(Box(1, 1), Box(1, 2)).scale(2) - alg.scalar(3)
         + alg.gen(Box(2, 1), Box(1, 1)) * alg.gen(Box(1, 2), Box(2, 1)))
    assert x == y
    assert parse_element(alg, x.to_text()) == x
    assert element_from_json(alg, x.to_json_obj()) == x


def test_json_shape(gl2):
    obj = (gl_gen(gl2, 1, 2).scale(Fraction(1, 3)) + gl2.one()).to_json_obj()
    assert isinstance(obj, list)
    assert {"coeff", "monomial"} == set(obj[0])
    def freeze(mono):
        return tuple((tuple(a), tuple(b)) for a, b in mono)

    coeffs = {freeze(t["monomial"]): t["coeff"] for t in obj}
    assert coeffs[()] == "1"
    assert coeffs[(((1, 1), (2, 1)),)] == "1/3"


def test_kazhdan_degree_values():
    alg = Algebra(Partition((2, 1)))
    # weight of a letter is 1 - grading degree; products add
    low = alg.gen(Box(1, 1), Box(1, 2))   # degree 1 -> weight 0
    assert low.kazhdan_degree() == HalfInt(0)
    f = alg.gen(Box(1, 2), Box(1, 1))     # degree -1 -> weight 2
    assert f.kazhdan_degree() == HalfInt(4)
    assert (f * f).kazhdan_degree() == HalfInt(8)
    assert alg.scalar(7).kazhdan_degree() == HalfInt(0)
    assert alg.zero().kazhdan_degree() is None
    half = alg.gen(Box(2, 1), Box(1, 1))  # degree -1/2 -> weight 3/2
    assert half.kazhdan_degree() == HalfInt(3)


def test_central_elements(gl2):
    e = lambda i, j: gl_gen(gl2, i, j)
    c1 = e(1, 1) + e(2, 2)
    c2 = e(1, 1) * e(1, 1) + e(1, 2) * e(2, 1) + e(2, 1) * e(1, 2) + e(2, 2) * e(2, 2)
    assert c1.is_central()
    assert c2.is_central()
    assert not e(1, 1).is_central()
    assert not (c1 + e(1, 2)).is_central()


def test_text_rendering_is_sorted_and_stable(gl2):
    x = gl_gen(gl2, 2, 1) - gl_gen(gl2, 1, 2).scale(2) + gl2.scalar(1)
    assert x.to_text() == "1 - 2*e[(1,1),(2,1)] + e[(2,1),(1,1)]"


# ---------------------------------------------------------------------------
# property tests


_SEEDS = st.integers(min_value=0, max_value=10_000)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(_SEEDS)
def test_product_is_associative_and_distributive(seed):
    alg = gl_algebra(2)
    rng = random.Random(seed)
    x = random_element(alg, rng)
    y = random_element(alg, rng)
    z = random_element(alg, rng)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


@settings(max_examples=60, deadline=None, derandomize=True)
@given(_SEEDS)
def test_commutator_satisfies_jacobi(seed):
    alg = Algebra(Partition((2, 1)))
    rng = random.Random(seed)
    x = random_element(alg, rng, max_deg=2)
    y = random_element(alg, rng, max_deg=2)
    z = random_element(alg, rng, max_deg=2)
    total = (x.commutator(y).commutator(z)
             + y.commutator(z).commutator(x)
             + z.commutator(x).commutator(y))
    assert total.is_zero()


@settings(max_examples=60, deadline=None, derandomize=True)
@given(_SEEDS)
def test_kazhdan_filtration_inequalities(seed):
    alg = Algebra(Partition((2, 1)))
    rng = random.Random(seed)
    x = random_element(alg, rng)
    y = random_element(alg, rng)
    dx, dy = x.kazhdan_degree(), y.kazhdan_degree()
    if dx is None or dy is None:
        return
    xy = x * y
    if not xy.is_zero():
        assert xy.kazhdan_degree() <= dx + dy
    br = x.commutator(y)
    if not br.is_zero():
        assert br.kazhdan_degree() <= dx + dy - 1
