import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import matsuo
from axial.algebra import (
    AlgebraMismatch,
    AlgebraTable,
    FusionViolation,
    NotCommutative,
    NotIdempotent,
    NotPrimitive,
    NotSemisimple,
    ad_matrix,
    basis_change,
    certify_axis,
    check_axis_identities,
    direct_sum,
    eigenspace,
    frobenius_form,
    is_axis,
    miyamoto_orbit,
    check_partial_associativity,
    subalgebra_closure,
)
from axial.linalg import identity, inverse, rank, transpose, vec_eq
from axial.matsuo import catalog_load
from axial.scalars import PrimeField, Rationals

Q = Rationals()


def vec(*xs):
    return tuple(Q(Fraction(x)) for x in xs)


def fusion_breaker(F):
    """a, x, y with a x = 0, a y = y/2 but x x = y: a 0-eigenvector squares into the 1/2-eigenspace."""
    return AlgebraTable.from_products(F, 3, {
        (0, 0): {0: 1},
        (0, 2): {2: F.half},
        (1, 1): {2: 1},
    })


def test_product_of_commuting_transpositions_is_zero():
    A, _, _ = matsuo("S4")
    tc = catalog_load("S4")
    i = tc.index[(1, 0, 2, 3)]
    j = tc.index[(0, 1, 3, 2)]
    assert all(Q.is_zero(c) for c in A.basis_product(i, j))


def test_matsuo_products_match_dense_oracle():
    for name, deg in (("S3", 3), ("S4", 4)):
        tc = catalog_load(name)
        assert list(tc.class_D) == oracles.transposition_class(deg)
        T = oracles.matsuo_dense(tc.class_D)
        A, _, _ = matsuo(name)
        for i, j in itertools.product(range(A.dim), repeat=2):
            assert A.basis_product(i, j) == tuple(Q(x) for x in T[i][j])


def test_s3_product_formula():
    A, _, _ = matsuo("S3")
    # (01)(02) = 1/4 ((01) + (02) - (12)); D is sorted so the third element is (12)
    assert A.basis_product(0, 1) == vec("1/4", "1/4", "-1/4")


def test_ad_of_zero_and_of_unit():
    A, _, _ = matsuo("S3")
    assert ad_matrix(A, vec(0, 0, 0)) == [vec(0, 0, 0)] * 3
    u = vec("2/3", "2/3", "2/3")  # the unit of M(S3)
    for j in range(3):
        assert A.mul_basis(u, j) == A.basis(j)
    assert ad_matrix(A, u) == identity(Q, 3)


def test_axis_eigenspaces_in_s3():
    A, recs, _ = matsuo("S3")
    d = recs[0].decomposition
    assert (len(d.basis_1), len(d.basis_0), len(d.basis_half)) == (1, 1, 1)
    assert rank(Q, d.basis_half + [vec(0, 1, -1)]) == 1
    assert set(oracles.eigenvalues(oracles.matsuo_dense(catalog_load("S3").class_D), [1, 0, 0])) == {
        1, 0, sympy.Rational(1, 2)}


def test_certify_rejects_non_axes():
    A, _, _ = matsuo("S4")
    with pytest.raises(NotPrimitive):
        certify_axis(A, (Q(0),) * A.dim)  # 0 is idempotent with trivial 1-eigenspace
    tc = catalog_load("S4")
    i, j = tc.index[(1, 0, 2, 3)], tc.index[(0, 1, 3, 2)]
    flat_sum = tuple(Q(1) if k in (i, j) else Q(0) for k in range(A.dim))
    with pytest.raises(NotPrimitive):
        certify_axis(A, flat_sum)
    with pytest.raises(NotIdempotent):
        certify_axis(A, tuple(Q(2) if k == 0 else Q(0) for k in range(A.dim)))
    assert not is_axis(A, flat_sum)


def test_fusion_violation_is_reported():
    with pytest.raises(FusionViolation) as info:
        certify_axis(fusion_breaker(Q), vec(1, 0, 0))
    assert {info.value.lam, info.value.mu} == {"0"}


def test_not_semisimple():
    # a^2 = a, a x = x/2 + y, a y = y/2: a Jordan block
    F = Q
    A = AlgebraTable.from_products(F, 3, {(0, 0): {0: 1}, (0, 1): {1: F.half, 2: 1}, (0, 2): {2: F.half}})
    with pytest.raises(NotSemisimple):
        certify_axis(A, vec(1, 0, 0))


def test_non_commutative_table_rejected():
    z = vec(0, 0)
    with pytest.raises(NotCommutative):
        AlgebraTable(Q, [[vec(1, 0), vec(0, 1)], [z, vec(0, 1)]])


def test_dimension_mismatch():
    A, _, _ = matsuo("S3")
    with pytest.raises(AlgebraMismatch):
        A.mul(vec(1, 0), vec(1, 0, 0))


def test_one_dimensional_algebra():
    A = AlgebraTable(Q, [[vec(1)]], axes=[vec(1)])
    rec = certify_axis(A, vec(1))
    assert rec.decomposition.basis_0 == [] and rec.decomposition.basis_half == []
    assert frobenius_form(A, [rec]).gram == ((Q(1),),)


def test_subalgebra_closure():
    A, recs, _ = matsuo("S4")
    tc = catalog_load("S4")
    i, j = tc.index[(1, 0, 2, 3)], tc.index[(0, 1, 3, 2)]
    assert len(subalgebra_closure(A, [A.basis(i), A.basis(j)])) == 2
    k = tc.index[(2, 1, 0, 3)]
    assert len(subalgebra_closure(A, [A.basis(i), A.basis(k)])) == 3
    assert len(subalgebra_closure(A, [A.basis(0)])) == 1


@pytest.mark.parametrize("name", ["S3", "S4", "W(D4)"])
def test_frobenius_values_match_oracle(name):
    A, recs, form = matsuo(name)
    tc = catalog_load(name)
    T = oracles.matsuo_dense(tc.class_D)
    rng = random.Random(0)
    for _ in range(10):
        i = rng.randrange(A.dim)
        x = [rng.randint(-3, 3) for _ in range(A.dim)]
        expected = oracles.projection_coefficient(T, i, x)
        assert form(A.basis(i), tuple(Q(c) for c in x)) == Q(str(expected))


@pytest.mark.parametrize("name,field", [("S4", "Q"), ("S4", "Fp:5"), ("W(D4)", "Fp:7"), ("S5", "Fp:3")])
def test_axis_identities_and_partial_associativity(name, field):
    A, recs, form = matsuo(name, field)
    for r in recs:
        assert check_axis_identities(A, r, form).ok
        assert check_partial_associativity(A, r).ok


def test_partial_associativity_fails_on_fusion_breaker():
    # the breaker is not an axis, but its 0-eigenvector x fails (x x) a = x (x a)
    A = fusion_breaker(Q)
    from axial.algebra import EigenDecomposition, AxisRecord

    d = EigenDecomposition(vec(1, 0, 0), [vec(1, 0, 0)], [vec(0, 1, 0)], [vec(0, 0, 1)])
    rec = AxisRecord(vec(1, 0, 0), d, False, algebra=A, _coords=identity(Q, 3))
    assert not check_partial_associativity(A, rec).ok


def test_miyamoto_orbit_of_one_axis_is_itself():
    A, recs, _ = matsuo("S4")
    assert miyamoto_orbit(A, recs[:1]) == [recs[0].element]
    assert len(miyamoto_orbit(A, recs[:2])) == 3  # (01),(02) generate the S3 on {0,1,2}


def test_direct_sum_keeps_axes():
    A, _, _ = matsuo("S3")
    B = direct_sum(A, A)
    assert B.dim == 6 and len(B.axes) == 6
    for a in B.axes:
        assert is_axis(B, a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_eigenspace_dimensions_survive_basis_change(seed):
    F = PrimeField(7)
    A, recs, _ = matsuo("S4", "Fp:7")
    rng = random.Random(seed)
    while True:
        P = [tuple(F.random(rng) for _ in range(A.dim)) for _ in range(A.dim)]
        if rank(F, P) == A.dim:
            break
    B = basis_change(A, P)
    Pinv = inverse(F, P)
    for r in recs[:2]:
        a = tuple(sum(Pinv[i][k] * r.element[k] for k in range(A.dim)) % 7 for i in range(A.dim))
        assert vec_eq(F, a, B.axes[A.axes.index(r.element)])
        rec = certify_axis(B, a)
        d0, d1 = r.decomposition, rec.decomposition
        assert [len(d0.basis_1), len(d0.basis_0), len(d0.basis_half)] == [
            len(d1.basis_1), len(d1.basis_0), len(d1.basis_half)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_form_is_tau_invariant_on_random_vectors(seed):
    A, recs, form = matsuo("S4", "Fp:5")
    F = A.field
    rng = random.Random(seed)
    x = tuple(F.random(rng) for _ in range(A.dim))
    y = tuple(F.random(rng) for _ in range(A.dim))
    r = recs[rng.randrange(len(recs))]
    assert form(r.apply_tau(x), r.apply_tau(y)) == form(x, y)
    # tau is an automorphism of order two
    assert r.apply_tau(A.mul(x, y)) == A.mul(r.apply_tau(x), r.apply_tau(y))
    assert r.apply_tau(r.apply_tau(x)) == x


def test_tau_is_the_matsuo_permutation():
    from axial.matsuo import miyamoto_permutation

    tc = catalog_load("S4")
    A, recs, _ = matsuo("S4")
    for i, r in enumerate(recs):
        perm = miyamoto_permutation(tc, i)
        cols = transpose(r.tau)
        for j in range(A.dim):
            assert cols[j] == A.basis(perm[j])


def test_eigenspace_accepts_plain_numbers():
    A, recs, _ = matsuo("S3")
    assert len(eigenspace(A, A.basis(0), Fraction(1, 2))) == 1
