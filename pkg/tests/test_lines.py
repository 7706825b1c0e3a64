import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import matsuo
from axial.algebra import certify_axis, frobenius_form
from axial.lines import (
    LineDimZeroOrOne,
    LineKind,
    SameAxis,
    ZeroParameter,
    baric_model,
    classify_line,
    family_member,
    flat_model,
    idempotent_family,
    is_primitive_in,
    miyamoto_action_closed_form,
    orbit_size,
    phi_c,
    toric_minpoly,
    toric_model,
)
from axial.linalg import vec_eq
from axial.matsuo import catalog_load
from axial.scalars import PrimeField, QuadraticExtension, Rationals, multiplicative_order

Q = Rationals()


def model_line(A):
    recs = [certify_axis(A, a) for a in A.axes]
    return classify_line(A, recs[0], recs[1], frobenius_form(A, recs))


def matsuo_line(name, field, d, e):
    A, recs, form = matsuo(name, field)
    tc = catalog_load(name)
    i, j = tc.index[d], tc.index[e]
    return classify_line(A, recs[i], recs[j], form, indices=(i, j))


def test_s3_line_over_q_is_toric_in_an_extension():
    line = matsuo_line("S3", "Q", (1, 0, 2), (2, 1, 0))
    assert line.kind == LineKind.TORIC and line.dim == 3
    assert line.gram_ab == Q("1/4")
    assert isinstance(line.field, QuadraticExtension) and line.extended
    assert multiplicative_order(line.field, line.mu, 100) == 3
    assert toric_minpoly(Q, Q("1/4")) == (1, 1)  # t^2 + t + 1


def test_other_root_gives_inverse_parameter():
    A, recs, form = matsuo("S3")
    l0 = classify_line(A, recs[0], recs[1], form, root=0)
    l1 = classify_line(A, recs[0], recs[1], form, root=1)
    K = l0.field
    assert K.eq(K.reduce(l0.mu * l1.mu), K.one)


def test_s3_over_f7_splits_without_extension():
    line = matsuo_line("S3", "Fp:7", (1, 0, 2), (2, 1, 0))
    assert line.kind == LineKind.TORIC and not line.extended
    assert multiplicative_order(line.field, line.mu, 10) == 3


def test_s3_over_f3_is_baric():
    # 1/4 = 1 in characteristic 3
    line = matsuo_line("S3", "Fp:3", (1, 0, 2), (2, 1, 0))
    assert line.kind.family == "baric"


def test_commuting_transpositions_give_flat2():
    line = matsuo_line("S4", "Q", (1, 0, 2, 3), (0, 1, 3, 2))
    assert line.kind == LineKind.FLAT2 and line.dim == 2
    with pytest.raises(LineDimZeroOrOne):
        idempotent_family(line)
    assert orbit_size(line).to_json() == 1


def test_same_axis_rejected():
    A, recs, form = matsuo("S3")
    with pytest.raises(SameAxis):
        classify_line(A, recs[0], recs[0], form)


def test_model_kinds():
    F = PrimeField(5)
    assert model_line(flat_model(F)).kind == LineKind.FLAT3
    assert model_line(baric_model(F)).kind == LineKind.BARIC3
    assert model_line(toric_model(F, 2)).kind == LineKind.TORIC


def test_toric_parameter_zero_rejected():
    line = model_line(toric_model(Q, 3))
    fam = idempotent_family(line)
    with pytest.raises(ZeroParameter):
        family_member(fam, Q(0))
    with pytest.raises(ZeroParameter):
        miyamoto_action_closed_form(LineKind.TORIC, Q(0), Q(1), Q)


MODELS = [flat_model, baric_model, lambda F: toric_model(F, 3)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(3)), st.fractions(min_value=-20, max_value=20, max_denominator=9))
def test_family_members_are_primitive_axes(m, lam):
    line = model_line(MODELS[m](Q))
    K = line.field
    lam = K.embed(Q(lam))
    if line.kind == LineKind.TORIC and K.is_zero(lam):
        return
    fam = idempotent_family(line)
    for which in fam.polys:
        x = family_member(fam, lam, which)
        assert is_primitive_in(line.algebra, line.basis, x)
        certify_axis(line.algebra, x)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(3)),
       st.fractions(min_value=-20, max_value=20, max_denominator=9).filter(bool),
       st.fractions(min_value=-20, max_value=20, max_denominator=9).filter(bool))
def test_miyamoto_closed_form_property(m, lam, mu):
    line = model_line(MODELS[m](Q))
    K = line.field
    A = line.algebra
    fam = idempotent_family(line)
    lam, mu = K.embed(Q(lam)), K.embed(Q(mu))
    for wl, wm in itertools.product(fam.polys, repeat=2):
        rec = certify_axis(A, family_member(fam, mu, wm))
        pred = miyamoto_action_closed_form(line.kind, lam, mu, K, cross=wl != wm)
        assert vec_eq(K, rec.apply_tau(family_member(fam, lam, wl)), family_member(fam, pred, wl))


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("m", range(3))
def test_family_is_complete_over_prime_fields(p, m):
    F = PrimeField(p)
    if m == 2 and p == 3:
        pytest.skip("no toric model with (a, b) outside {0, 1} over F_3")
    A = MODELS[m](F)
    line = model_line(A)
    if line.extended:
        pytest.skip("toric parameter outside the prime field")
    T = [[list(v) for v in row] for row in A.table]
    brute = {tuple(x) for x in oracles.brute_idempotents_mod_p(T, p)}
    primitive = {x for x in brute if is_primitive_in(A, line.basis, x)}
    fam = idempotent_family(line)
    params = [F(x) for x in range(p)]
    if line.kind == LineKind.TORIC:
        params = params[1:]
    members = {family_member(fam, lam, w) for lam in params for w in fam.polys}
    assert members == primitive


@pytest.mark.parametrize("F,mu,expected", [
    (PrimeField(5), 2, 4), (PrimeField(7), 3, 6), (PrimeField(7), 2, 3), (Rationals(), 3, "Infinite"),
])
def test_toric_orbit_is_the_order_of_mu(F, mu, expected):
    line = model_line(toric_model(F, mu))
    res = orbit_size(line)
    assert res.to_json() == expected
    assert not res.unproven


def test_flat_and_baric_orbits_follow_the_characteristic():
    for p in (3, 5, 7):
        for model in (flat_model, baric_model):
            assert orbit_size(model_line(model(PrimeField(p)))).to_json() == p
    assert orbit_size(model_line(baric_model(Q))).to_json() == "Infinite"


def test_phi_c_matches_tau_on_axes():
    A, recs, form = matsuo("S4", "Fp:5")
    for r in recs[:3]:
        for j in range(A.dim):
            assert phi_c(A, form, r.element, A.basis(j)) == r.apply_tau(A.basis(j))


def test_gram_values_on_lines():
    F = PrimeField(7)
    assert model_line(flat_model(F)).gram_ab == 0
    assert model_line(baric_model(F)).gram_ab == 1
    g = model_line(toric_model(Q, 3)).gram_ab
    # (a, b) = (mu + 1/mu + 2) / 4
    assert g == Q(Fraction(3 + Fraction(1, 3) + 2, 4))
