"""Bipartite and multipartite separable-preserver classification."""

import numpy as np
import pytest

from conftest import EXPECTED_GRID, legal_dims, random_multiform_setup, random_sep_form
from preservers import (
    CONJUGATE,
    LINEAR,
    HermitianOperator,
    MultiForm,
    SepForm,
    StructureError,
    apply,
    canonical_multi,
    canonical_sep,
    check_both_directions,
    classify_multi_preserver,
    classify_sep_preserver,
    doubling_obstruction_check,
    from_action,
    is_product_pure,
    make_superop,
    mc_verify_product,
    partial_transpose,
    pure_state,
    random_isometry,
    random_pure,
    slice_phi,
    superop_equal,
    swap_theta,
    tensor,
    trace_replacer,
)
from preservers.sep_analysis import _pattern_sample, _probe_pattern89, product_span_rank
from preservers.superop import conjugate_operator


def test_slice_phi_identity_form1_swap():
    rng = np.random.default_rng(0)
    ident = from_action((2, 3), (2, 3), lambda a: a)
    a = np.random.default_rng(1).standard_normal((2, 2))
    a = HermitianOperator(a + a.T, (2,))
    q = random_pure(3, rng).projection
    assert np.allclose(slice_phi(ident, a, q, 1).matrix, a.matrix, atol=1e-12)

    r1, r2 = random_pure(2, rng), random_pure(3, rng)
    f1 = canonical_sep(SepForm(1, r1=r1, r2=r2), (2, 3))
    for _ in range(5):
        p = random_pure(2, rng).projection
        qq = random_pure(3, rng).projection
        assert np.allclose(slice_phi(f1, p, qq, 1).matrix, r1.projection.matrix,
                           atol=1e-10)

    sw = from_action((2, 2), (2, 2), swap_theta)
    p = random_pure(2, rng).projection
    qq = random_pure(2, rng).projection
    assert np.allclose(slice_phi(sw, p, qq, 1).matrix, qq.matrix, atol=1e-10)


def test_round_trip_all_forms_with_grid():
    rng = np.random.default_rng(1)
    trials = 0
    for tag in range(1, 8):
        for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)]:
            if not legal_dims(tag, m, n):
                continue
            form = random_sep_form(tag, m, n, rng)
            op = canonical_sep(form, (m, n))
            c = classify_sep_preserver(op)
            assert c.kind == "form", (tag, m, n, c.kind)
            assert c.form.tag == tag
            assert c.grid == EXPECTED_GRID[tag]
            assert c.residual <= 1e-8
            rebuilt = canonical_sep(c.form, (m, n))
            assert superop_equal(op, rebuilt, 1e-8).equal
            trials += 1
    assert trials >= 20


def test_partial_transpose_classifies_form6_conjugate():
    op = from_action((2, 3), (2, 3), lambda a: partial_transpose(a, 1))
    c = classify_sep_preserver(op)
    assert c.kind == "form" and c.form.tag == 6
    assert c.form.u1.flag == CONJUGATE
    assert c.form.u2.flag == LINEAR
    assert check_both_directions(c)


def test_swap_classifies_form7():
    op = from_action((3, 3), (3, 3), swap_theta)
    c = classify_sep_preserver(op)
    assert c.kind == "form" and c.form.tag == 7
    assert c.form.u1.flag == LINEAR and c.form.u2.flag == LINEAR
    assert check_both_directions(c)


def test_trace_to_entangled_is_not_preserver():
    bell = pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2))
    op = trace_replacer(bell, (2, 2), (2, 2))
    c = classify_sep_preserver(op)
    assert c.kind == "not_preserver"
    p, q = c.witness
    img = apply(op, tensor(p.projection, q.projection))
    assert not is_product_pure(img)[0]


def test_claim_constancy_across_anchors():
    rng = np.random.default_rng(2)
    # slice letters must be identical for arbitrary anchor states
    from preservers.sep_analysis import _case_letter, _slice_superop
    from preservers import classify_pure_preserver

    for tag in (2, 5, 6):
        m, n = (2, 3) if tag != 2 else (3, 2)
        op = canonical_sep(random_sep_form(tag, m, n, rng), (m, n))
        letters = set()
        for _ in range(5):
            q = random_pure(n, rng)
            c1 = classify_pure_preserver(_slice_superop(op, q, 2, 1))
            c2 = classify_pure_preserver(_slice_superop(op, q, 2, 2))
            letters.add(_case_letter(c1, c2, primes=False))
        assert len(letters) == 1
        assert letters.pop() == EXPECTED_GRID[tag][0]


def test_doubling_obstruction():
    assert doubling_obstruction_check(2)
    assert doubling_obstruction_check(3)
    with pytest.raises(StructureError):
        doubling_obstruction_check(1)
    # pin the Frobenius gap by direct 4x4 expansion
    e0 = np.array([1.0, 0.0])
    e1 = np.array([0.0, 1.0])
    plus = (e0 + e1) / np.sqrt(2)
    minus = (e0 - e1) / np.sqrt(2)
    p = [np.outer(v, v) for v in (e0, e1, plus, minus)]
    gap = np.linalg.norm(np.kron(p[0], p[0]) + np.kron(p[1], p[1])
                         - np.kron(p[2], p[2]) - np.kron(p[3], p[3]))
    assert abs(gap - np.sqrt(2.0)) < 1e-12


def test_product_span_is_full():
    assert product_span_rank(2, 2) == 16


def test_check_both_directions_cases():
    rng = np.random.default_rng(3)
    c6 = classify_sep_preserver(canonical_sep(random_sep_form(6, 2, 2, rng), (2, 2)))
    assert check_both_directions(c6)
    c1 = classify_sep_preserver(canonical_sep(random_sep_form(1, 2, 2, rng), (2, 2)))
    assert not check_both_directions(c1)
    # rectangular factorwise conjugation is a valid construction whose
    # classification-side surjectivity test must fail
    from preservers.sep_analysis import FORM, SepClassification

    rect = SepClassification(
        FORM, form=SepForm(6, u1=random_isometry(3, 2, rng), u2=random_isometry(2, 2, rng)))
    assert not check_both_directions(rect)


def test_pattern89_probe_on_real_maps():
    rng = np.random.default_rng(4)
    r1 = random_pure(2, rng)
    u2 = random_isometry(2, 2, rng)
    f3 = canonical_sep(SepForm(3, r1=r1, u2=u2), (2, 2))
    # the sampled family checker validates images and predictions
    p, q = random_pure(2, rng), random_pure(2, rng)
    pred = conjugate_operator(u2, q.projection.matrix)
    sample, dev = _pattern_sample(f3, 9, r1, p, q, 1e-8, pred)
    assert sample is not None and dev <= 1e-9
    assert np.allclose(sample.moving.projection.matrix, pred, atol=1e-9)
    bad, _ = _pattern_sample(f3, 9, r1, p, q, 1e-8, np.eye(2) / 2)
    assert bad is None
    # wrong fixed factor is rejected
    other = random_pure(2, rng)
    bad2, _ = _pattern_sample(f3, 9, other, p, q, 1e-8)
    assert bad2 is None or np.allclose(other.projection.matrix,
                                       r1.projection.matrix, atol=1e-6)
    # the full probe requires conjugation slices in both directions, which a
    # constructive form cannot provide
    assert _probe_pattern89(f3, 9, r1, 1e-8, 0) is None


def test_fake_pattern9_map_rejected_with_witness():
    rng = np.random.default_rng(5)
    r1 = random_pure(2, rng)
    e00 = np.zeros((2, 2))
    e00[0, 0] = 1.0

    def fake(a):
        t = a.matrix.reshape(2, 2, 2, 2)
        tr_b = np.trace(t, axis1=1, axis2=3)
        tr_a = np.trace(t, axis1=0, axis2=2)
        tot = np.trace(a.matrix)
        bilinear = tr_b + tr_a - tot * e00
        return HermitianOperator(np.kron(r1.projection.matrix, bilinear), (2, 2))

    op = from_action((2, 2), (2, 2), fake)
    c = classify_sep_preserver(op)
    assert c.kind == "not_preserver"
    p, q = c.witness
    assert not is_product_pure(apply(op, tensor(p.projection, q.projection)))[0]


def test_perturbed_canonical_maps_get_witnesses():
    rng = np.random.default_rng(6)
    for tag in (1, 3, 6):
        base = canonical_sep(random_sep_form(tag, 2, 2, rng), (2, 2))
        noise = rng.standard_normal(base.coeff.shape)
        op = make_superop((2, 2), (2, 2), base.coeff + 1e-3 * noise)
        c = classify_sep_preserver(op)
        assert c.kind == "not_preserver", tag
        p, q = c.witness
        assert not is_product_pure(apply(op, tensor(p.projection, q.projection)), 1e-8)[0]


def test_sep_classifier_argument_errors():
    rng = np.random.default_rng(7)
    op = canonical_sep(random_sep_form(1, 2, 2, rng), (2, 2))
    with pytest.raises(StructureError):
        classify_sep_preserver(op, tol=-1.0)
    with pytest.raises(StructureError):
        classify_sep_preserver(trace_replacer(random_pure(2, rng), (2, 2), (2,)))


def test_soundness_mc_for_positive_classifications():
    rng = np.random.default_rng(8)
    for tag in (2, 6, 7):
        m, n = (2, 2)
        op = canonical_sep(random_sep_form(tag, m, n, rng), (m, n))
        c = classify_sep_preserver(op)
        assert c.kind == "form"
        assert mc_verify_product(op, 500, 3).passed


# ---------------------------------------------------------------------------
# multipartite

def test_multi_round_trip_permutation_and_flags():
    rng = np.random.default_rng(9)
    for _ in range(8):
        dims, perm, flags = random_multiform_setup(rng)
        isos = tuple(
            random_isometry(dims[j], dims[perm[j] - 1], rng, flags[j])
            for j in range(3)
        )
        op = canonical_multi(MultiForm(perm, isos), dims)
        c = classify_multi_preserver(op)
        assert c.kind == "multi_form", (dims, perm, c.kind, c.detail)
        assert c.form.perm == perm
        assert tuple(u.flag for u in c.form.isometries) == tuple(flags)
        assert c.residual <= 1e-8
        for j, u in enumerate(c.form.isometries):
            assert dims[c.form.perm[j] - 1] <= dims[j]


def test_multi_agrees_with_sep_on_forms_6_7():
    rng = np.random.default_rng(10)
    u1 = random_isometry(2, 2, rng, CONJUGATE)
    u2 = random_isometry(2, 2, rng)
    f6 = canonical_sep(SepForm(6, u1=u1, u2=u2), (2, 2))
    c = classify_multi_preserver(f6)
    assert c.kind == "multi_form" and c.form.perm == (1, 2)
    assert (c.form.isometries[0].flag, c.form.isometries[1].flag) == (CONJUGATE, LINEAR)

    f7 = canonical_sep(SepForm(7, u1=random_isometry(3, 3, rng),
                               u2=random_isometry(3, 3, rng)), (3, 3))
    c = classify_multi_preserver(f7)
    assert c.kind == "multi_form" and c.form.perm == (2, 1)


def test_multi_insufficient_richness_for_constant_maps():
    rng = np.random.default_rng(11)
    factors = [random_pure(2, rng) for _ in range(3)]
    target = pure_state(np.kron(np.kron(factors[0].vector, factors[1].vector),
                                factors[2].vector))
    op = trace_replacer(target, (2, 2, 2), (2, 2, 2))
    c = classify_multi_preserver(op)
    assert c.kind == "insufficient_richness"
    assert c.detail


def test_multi_entangled_target_is_not_preserver():
    rng = np.random.default_rng(12)
    op = trace_replacer(random_pure(8, rng), (2, 2, 2), (2, 2, 2))
    c = classify_multi_preserver(op)
    assert c.kind == "not_preserver"
    img = apply(op, tensor(tensor(c.witness[0].projection, c.witness[1].projection),
                           c.witness[2].projection))
    assert not is_product_pure(img)[0]


def test_multi_dim_one_factor_insufficient():
    rng = np.random.default_rng(13)
    isos = (random_isometry(2, 2, rng), random_isometry(1, 1, rng))
    op = canonical_multi(MultiForm((1, 2), isos), (2, 1))
    c = classify_multi_preserver(op)
    assert c.kind == "insufficient_richness"


def test_multi_perturbed_map_rejected():
    rng = np.random.default_rng(14)
    dims = (2, 2, 2)
    isos = tuple(random_isometry(2, 2, rng) for _ in range(3))
    base = canonical_multi(MultiForm((2, 3, 1), isos), dims)
    op = make_superop(dims, dims, base.coeff + 1e-3 * rng.standard_normal(base.coeff.shape))
    c = classify_multi_preserver(op)
    assert c.kind == "not_preserver"


def test_mc_verify_product_contract():
    rng = np.random.default_rng(15)
    good = canonical_sep(random_sep_form(6, 2, 3, rng), (2, 3))
    assert mc_verify_product(good, 300, 0).passed
    bell = pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2))
    bad = trace_replacer(bell, (2, 2), (2, 2))
    res = mc_verify_product(bad, 300, 0)
    assert not res.passed and res.samples == 1
    img = apply(bad, tensor(res.witness[0].projection, res.witness[1].projection))
    assert not is_product_pure(img)[0]


def test_dim_one_factors_allowed_everywhere():
    rng = np.random.default_rng(16)
    f3 = SepForm(3, r1=random_pure(1, rng), u2=random_isometry(3, 3, rng, CONJUGATE))
    c = classify_sep_preserver(canonical_sep(f3, (1, 3)))
    assert c.kind == "form" and c.form.tag == 3 and c.grid == ("a", "b′")

    f2 = SepForm(2, u1=random_isometry(2, 2, rng), r2=random_pure(1, rng))
    c = classify_sep_preserver(canonical_sep(f2, (2, 1)))
    assert c.kind == "form" and c.form.tag == 2 and c.grid == ("c", "a′")

    # on the 1x1 (x) 1x1 space the identity is the trace replacement onto the
    # unique state, and the classifier reports that deterministically
    from preservers import identity_superop

    c = classify_sep_preserver(identity_superop((1, 1)))
    assert c.kind == "form" and c.form.tag == 1


def test_multi_four_factors():
    rng = np.random.default_rng(17)
    dims = (2, 2, 2, 2)
    perm = (3, 1, 4, 2)
    flags = (LINEAR, CONJUGATE, LINEAR, CONJUGATE)
    isos = tuple(random_isometry(2, 2, rng, f) for f in flags)
    op = canonical_multi(MultiForm(perm, isos), dims)
    c = classify_multi_preserver(op)
    assert c.kind == "multi_form"
    assert c.form.perm == perm
    assert tuple(u.flag for u in c.form.isometries) == flags
    assert c.residual <= 1e-8


def test_convex_mixtures_of_forms_are_rejected():
    rng = np.random.default_rng(18)
    a = canonical_sep(random_sep_form(6, 2, 3, rng), (2, 3))
    b = canonical_sep(random_sep_form(6, 2, 3, rng), (2, 3))
    mix = make_superop((2, 3), (2, 3), 0.5 * a.coeff + 0.5 * b.coeff)
    c = classify_sep_preserver(mix)
    assert c.kind == "not_preserver"
    p, q = c.witness
    assert not is_product_pure(apply(mix, tensor(p.projection, q.projection)))[0]
