import pytest

from conftest import supersingular_suite
from oracles import twisted_gram_odd
from unitary_dieudonne import dieudonne_module as dmod
from unitary_dieudonne.dieudonne_module import (AXIOMS, UnitaryDM, chain_analysis,
                                                chain_conditions, chain_invariants,
                                                height_bound, is_superspecial, is_supersingular,
                                                lambda_and_height, lemma_chain,
                                                recommended_precision, truncation_congruent,
                                                validate)
from unitary_dieudonne.gallery import (build_deformed, build_even_direct, build_flip_10,
                                       build_odd, build_parallel, build_standard,
                                       default_context)
from unitary_dieudonne.lattice import Lattice
from unitary_dieudonne.padic_ring import PrecisionError, delta_element, make_context
from unitary_dieudonne.semilinear import Matrix


def odd(a, b, p=3):
    return build_odd(a, b, default_context(p, a, b))


def with_B(dm, rows):
    return UnitaryDM(dm.ctx, dm.a, dm.b, dm.A_F, Matrix(dm.ctx, rows), dm.labels, dm.meta)


def with_F(dm, rows):
    return UnitaryDM(dm.ctx, dm.a, dm.b, Matrix(dm.ctx, rows), dm.B, dm.labels, dm.meta)


# ----------------------------------------------------------------------
# validation


@pytest.mark.parametrize("name,dm", supersingular_suite(3, 4), ids=lambda x: x if isinstance(x, str) else "")
def test_suite_modules_validate(name, dm):
    rep = validate(dm)
    assert rep.ok, rep.messages
    assert list(rep.checks) == list(AXIOMS)
    assert chain_conditions(dm).ok


def test_verschiebung_is_derived():
    dm = odd(1, 2)
    n = 2 * dm.g
    p_id = Matrix.identity(dm.ctx, n).scale_p(1)
    assert (dm.A_F @ dm.A_V.frobenius(1)).equals_mod_prec(p_id)


def test_gram_matrix_matches_defining_formula():
    for a, b in [(1, 2), (0, 3), (2, 3)]:
        dm = odd(a, b)
        ctx = dm.ctx
        d = delta_element(ctx)
        gram = dm.pairing_context(0).gram
        expected = twisted_gram_odd(a, b, ctx.p)
        for i in range(dm.g):
            for j in range(dm.g):
                c = expected.get((i + 1, j + 1), 0)
                assert gram[i, j] == ctx.scale(c, d)


def test_scaled_pairing_fails_only_perfectness():
    dm = odd(1, 2)
    p = dm.ctx.p
    rows = [[dm.ctx.scale(p, x) for x in r] for r in dm.B.rows]
    assert validate(with_B(dm, rows)).failed == ["perfect"]


def test_delta_twisted_pairing_fails_only_compatibility():
    dm = odd(1, 2)
    d = delta_element(dm.ctx)
    rows = [[dm.ctx.mul(d, x) for x in r] for r in dm.B.rows]
    assert validate(with_B(dm, rows)).failed == ["pairing_compat"]


def test_symmetric_pairing_fails_only_alternation():
    # B = [[0, C], [-C^T, 0]] -> [[0, dC], [dC^T, 0]]; sigma(d) = -d keeps compatibility
    dm = odd(1, 2)
    ctx, g = dm.ctx, dm.g
    d = delta_element(ctx)
    rows = [[ctx.zero] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        for j in range(g, 2 * g):
            rows[i][j] = ctx.mul(d, dm.B[i, j])
            rows[j][i] = rows[i][j]
    assert validate(with_B(dm, rows)).failed == ["alternating"]


def test_swapped_signature_fails_only_lengths():
    dm = odd(1, 2)
    bad = UnitaryDM(dm.ctx, 2, 1, dm.A_F, dm.B, dm.labels, dm.meta)
    assert validate(bad).failed == ["signature_lengths"]


def test_isotropy_mutation():
    dm = build_parallel(1, default_context(3, 1, 1))
    ctx, g = dm.ctx, dm.g
    rows = [list(r) for r in dm.B.rows]
    three = ctx.element(3)
    for i, j in ((0, 1), (g, g + 1)):
        rows[i][j] = ctx.add(rows[i][j], three)
        rows[j][i] = ctx.sub(rows[j][i], three)
    assert validate(with_B(dm, rows)).failed == ["isotropic"]


def test_homogeneity_mutation():
    dm = odd(0, 1)
    rows = [list(r) for r in dm.A_F.rows]
    rows[0][0] = dm.ctx.element(3)
    assert validate(with_F(dm, rows)).failed == ["homogeneous"]


def test_verschiebung_failure_comes_with_length_failure():
    dm = odd(1, 2)
    rows = [[dm.ctx.scale(dm.ctx.p, x) for x in r] for r in dm.A_F.rows]
    failed = validate(with_F(dm, rows)).failed
    assert failed == ["frobenius_verschiebung", "pairing_compat", "signature_lengths"]


def test_malformed_shape_short_circuits():
    dm = odd(1, 2)
    bad = UnitaryDM(dm.ctx, 1, 2, dm.A_F, dm.B, (["x"], ["y"]), dm.meta)
    rep = validate(bad)
    assert rep.failed == list(AXIOMS)
    assert rep.messages["perfect"].startswith("skipped")


@pytest.mark.parametrize("ab", [(1, 1), (0, 2), (1, 3), (2, 2)])
def test_even_direct_recipe_fails_pairing(ab):
    dm = build_even_direct(*ab, default_context(3, *ab))
    rep = validate(dm)
    assert "pairing_compat" in rep.failed


def test_missing_wraparound_fails():
    dm = build_odd(1, 2, default_context(3, 1, 2), wraparound=False)
    assert not validate(dm).ok


# ----------------------------------------------------------------------
# chains


def test_chain_values_for_m12():
    dm = odd(1, 2)
    s0, s1 = chain_analysis(dm, 0), chain_analysis(dm, 1)
    assert (s0.c, s0.d) == ([1, 1, 0], [0, 1])
    assert (s1.c, s1.d) == ([2, 1, 1, 0], [1, 0, 1])
    assert s0.to_json()["c"] == [1, 1, 0] and s1.to_json()["g"] == [2, 1, 1, 0]
    rep = lambda_and_height(dm)
    assert rep.height == 1 and rep.iterations == (1, 2)
    assert all(chain_invariants(dm, s0).values())
    links = lemma_chain(dm, s0)
    assert links["p M^v <= M"] == 1


def test_chain_for_m01_is_trivial():
    dm = odd(0, 1)
    s0 = chain_analysis(dm, 0)
    assert s0.c == [0, 0] and s0.d == [0]
    assert is_superspecial(dm)
    assert lambda_and_height(dm).height == 0


@pytest.mark.parametrize("ab,height", [((1, 2), 1), ((2, 3), 2), ((3, 4), 3), ((0, 5), 0)])
def test_heights_of_basic_modules(ab, height):
    assert lambda_and_height(odd(*ab)).height == height


def test_parallel_heights():
    for a in (1, 2, 3):
        dm = build_parallel(a, default_context(3, a, a))
        assert lambda_and_height(dm).height == a - 1
    assert height_bound(2, 2) == 1 and height_bound(2, 5) == 2 and height_bound(3, 1) == 1


def test_flip_module():
    dm = build_flip_10(default_context(3, 1, 0))
    assert validate(dm).ok
    assert is_supersingular(dm).status == "yes"


def test_deformed_module_is_not_supersingular():
    dm = build_deformed(2, 3, 1, default_context(3, 2, 3))
    assert validate(dm).ok
    verdict = is_supersingular(dm)
    assert verdict.status == "no"
    assert verdict.certificate["kind"] == "chain_budget"
    assert verdict.to_json()["status"] == "no"
    with pytest.raises(dmod.NotStabilizedError):
        lambda_and_height(dm)


def test_precision_guard():
    ctx = make_context(3, 2, 4)
    dm = build_odd(2, 3, ctx)
    with pytest.raises(PrecisionError) as info:
        chain_analysis(dm, 0)
    assert info.value.recommended_precision == recommended_precision(2, 3)


def test_truncation_congruence():
    ctx = default_context(3, 2, 3)
    y, y1, y2 = build_odd(2, 3, ctx), build_deformed(2, 3, 1, ctx), build_deformed(2, 3, 2, ctx)
    assert truncation_congruent(y, y1, 1) and not truncation_congruent(y, y1, 2)
    assert truncation_congruent(y, y2, 2)
    with pytest.raises(ValueError):
        truncation_congruent(y, build_standard(1, 4, ctx), 1)


def test_dual_of_standard_lattice():
    dm = odd(1, 2)
    m = Lattice.standard(dm.ctx, dm.g)
    # F(M_0) = p M_1^v
    assert dm.f_image(0) == dm.dual(m, 1).scale(1)
    assert dm.f_image(1) == dm.dual(m, 0).scale(1)
