import pytest

from awfs_forge.arrows import ArrowObject, Square, verify_awfs
from awfs_forge.core import PresheafMap, eq_witness
from awfs_forge.fixtures import finmap, finset, graph, graph_map
from awfs_forge.lifting import (
    GeneratorDiagram,
    check_coalgebra_laws,
    check_lifting_function,
    enumerate_squares,
    oracle_lift,
)
from awfs_forge.soa import (
    GeneratedAwfs,
    MonicityViolation,
    NonConvergence,
    density_comonad,
    lifting_function_to_algebra,
    run_soa,
    step_one,
)

E01 = ArrowObject(finmap(0, 1, []))
F21 = ArrowObject(finmap(2, 1, [0, 0]))
ID1 = ArrowObject(finmap(1, 1, [0]))


def split_epi_gen(**kw):
    return run_soa(GeneratorDiagram.discrete({"j": E01}), **kw)


# -- density comonad ------------------------------------------------------------


def test_density_empty_generators():
    l0, counit = density_comonad(GeneratorDiagram.discrete({}), F21)
    assert l0.dom.total_size == 0 and l0.cod.total_size == 0
    counit.validate()


def test_density_split_epi_single_square():
    l0, counit = density_comonad(GeneratorDiagram.discrete({"j": E01}), F21)
    # one square (the single point of the codomain): L0 = the generator itself
    assert l0.dom.total_size == 0 and l0.cod.total_size == 1
    assert counit.v.components["*"].table == (0,)


def test_density_discrete_coend_is_coproduct():
    j2 = ArrowObject(finmap(0, 2, []))
    diagram = GeneratorDiagram.discrete({"a": E01, "b": j2})
    f = ArrowObject(finmap(0, 2, []))
    l0, counit = density_comonad(diagram, f)
    # squares: |cod f| copies of a, |cod f|^2 copies of b
    assert l0.cod.total_size == 2 * 1 + 4 * 2
    counit.validate()


def test_density_counit_commutes(fixg, fixg_gen):
    jv = fixg_gen.diagram.arrow_of["jv"]
    f = ArrowObject(fixg.maps["f_vp"])
    l0, counit = density_comonad(fixg_gen.diagram, f)
    counit.validate()


# -- step one --------------------------------------------------------------------


def test_step_one_empty_generators():
    fac = step_one(GeneratorDiagram.discrete({}), F21)
    assert fac.left == PresheafMap.identity(F21.dom)
    assert fac.right == F21.f


def test_step_one_split_epi():
    fac = step_one(GeneratorDiagram.discrete({"j": E01}), F21)
    assert fac.left.components["*"].table == (0, 1)
    assert fac.mid == finset(3)
    assert fac.right.components["*"].table == (0, 0, 0)


def test_step_one_divergent_generator_first_stage():
    jdiv = ArrowObject(finmap(1, 2, [0]))
    fac = step_one(GeneratorDiagram.discrete({"j": jdiv}), ID1)
    assert fac.left.components["*"].table == (0,)
    assert fac.mid == finset(2)
    assert fac.right.components["*"].table == (0, 0)


def test_step_one_matches_first_stage_of_run():
    gen = split_epi_gen()
    fac = step_one(gen.diagram, F21)
    rec = gen.record(F21)
    assert fac.mid == rec.stages[1]
    assert fac.right == rec.rmaps[1]


# -- run_soa ----------------------------------------------------------------------


def test_split_epi_converges_stage_one():
    gen = split_epi_gen()
    for m, n, table in [(2, 1, [0, 0]), (1, 1, [0]), (4, 2, [0, 1, 0, 1]), (0, 3, [])]:
        rec = gen.record(finmap(m, n, table))
        assert rec.converged
        assert len(rec.stages) == 2
        assert rec.mid() == finset(m + n)


def test_divergence_trace():
    gen = split_epi_gen()
    gen_div = run_soa(GeneratorDiagram.discrete({"j": ArrowObject(finmap(1, 2, [0]))}), max_steps=10)
    with pytest.raises(NonConvergence) as err:
        gen_div.record(ID1)
    assert err.value.trace == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]


def test_monicity_violation_on_noninjective_generator():
    with pytest.raises(MonicityViolation):
        run_soa(GeneratorDiagram.discrete({"j": F21}), variant="monic")


def test_graph_convergence_bound(fixg, fixg_gen):
    # new vertices sit strictly deeper along the acyclic target's order
    f = ArrowObject(fixg.maps["f_vp"])
    rec = fixg_gen.record(f)
    longest_path = 2  # the bundled path graph has two consecutive edges
    assert rec.converged and len(rec.stages) - 1 <= longest_path + 1


# -- free structures ---------------------------------------------------------------


def test_free_lifting_function_fill_is_attached_cell(fixm_gen):
    lf = fixm_gen.free_lifting_function(F21)
    rf = ArrowObject(fixm_gen.record(F21).right())
    sq = enumerate_squares(E01, rf)[0]
    assert lf.phi("j", sq).components["*"].table == (2,)


def test_degenerate_identity_generator():
    ide = ArrowObject(finmap(0, 0, []))
    gen = run_soa(GeneratorDiagram.discrete({"j": ide}))
    rec = gen.record(F21)
    assert rec.converged
    lf = gen.free_lifting_function(F21)
    assert check_lifting_function(gen.diagram, lf).passed


def test_graph_fills_minimal_stage_unique(fixg, fixg_gen):
    gen = fixg_gen
    f = ArrowObject(fixg.maps["f_vp"])
    lf = gen.free_lifting_function(f)
    assert check_lifting_function(gen.diagram, lf).passed
    rec = gen.record(f)
    rf = ArrowObject(rec.right())
    jv = gen.diagram.arrow_of["jv"]
    for sq in enumerate_squares(jv, rf):
        fill = lf.phi("jv", sq)
        fillers = oracle_lift(jv, rf, sq)
        assert any(fill == w for w in fillers)


def test_round_trip_equals_mu(fixm_gen):
    for arrow in (F21, ID1, ArrowObject(finmap(3, 2, [0, 0, 1]))):
        lf = fixm_gen.free_lifting_function(arrow)
        alg = lifting_function_to_algebra(fixm_gen, lf)
        assert eq_witness(alg.t, fixm_gen.mu(arrow)) is None


def test_split_epi_algebra_collapse(fixm_gen):
    from awfs_forge.lifting import LiftingFunction

    g31 = ArrowObject(finmap(3, 1, [0, 0, 0]))
    lf = LiftingFunction.tabulate(
        fixm_gen.diagram, g31, lambda jn, sq: finmap(1, 3, [0])
    )
    alg = lifting_function_to_algebra(fixm_gen, lf)
    assert alg.t.components["*"].table == (0, 1, 2, 0)


def test_empty_cell_arrow_algebra_is_identity(fixm_gen):
    ide = ArrowObject(finmap(0, 0, []))
    from awfs_forge.lifting import LiftingFunction

    lf = LiftingFunction.tabulate(fixm_gen.diagram, ide, lambda jn, sq: None)
    alg = lifting_function_to_algebra(fixm_gen, lf)
    assert alg.t == PresheafMap.identity(ide.dom)


def test_lambda_is_comonad_coalgebra(fixm_gen, fixg_gen):
    assert check_coalgebra_laws(fixm_gen.lam("j"), fixm_gen.as_awfs()).passed
    assert check_coalgebra_laws(fixg_gen.lam("jv"), fixg_gen.as_awfs()).passed


def test_delta_empty_generators_is_identity():
    gen = run_soa(GeneratorDiagram.discrete({}))
    assert gen.delta(F21) == PresheafMap.identity(F21.dom)


def test_delta_satisfies_laws(fixm_gen, fixg, fixg_gen):
    assert verify_awfs(fixm_gen.as_awfs(), [F21]).passed
    f = ArrowObject(fixg.maps["f_vp"])
    assert verify_awfs(fixg_gen.as_awfs(), [f]).passed


def test_underlying_wfs_sanity(fixm_gen):
    # Lf lifts against every constructed algebra; Rf carries a lifting function
    for arrow in (F21, ID1):
        rec = fixm_gen.record(arrow)
        larr = ArrowObject(rec.left())
        alg = fixm_gen.free_algebra(arrow)
        for sq in enumerate_squares(larr, alg.g):
            assert oracle_lift(larr, alg.g, sq)
        lf = fixm_gen.free_lifting_function(arrow)
        assert check_lifting_function(fixm_gen.diagram, lf).passed


def test_convergence_certificate(fixm_gen):
    from awfs_forge.soa import factor_through

    rec = fixm_gen.record(F21)
    rf = ArrowObject(rec.right())
    for jname in fixm_gen.diagram.objects():
        j = fixm_gen.diagram.arrow_of[jname]
        for sq in enumerate_squares(j, rf):
            assert factor_through(sq.u, rec.inclusions[-1]) is not None


# -- standard variant ---------------------------------------------------------------


def test_standard_variant_agrees_on_monic_fixtures(fixg):
    gen_m = split_epi_gen()
    gen_s = split_epi_gen(variant="standard")
    for m, n, table in [(2, 1, [0, 0]), (1, 1, [0]), (0, 1, []), (3, 2, [0, 0, 1])]:
        f = finmap(m, n, table)
        a, b = gen_m.factor(f), gen_s.factor(f)
        assert a.left == b.left and a.mid == b.mid and a.right == b.right
    JG = fixg.generators["J"]
    gm, gs = run_soa(JG), run_soa(JG, variant="standard")
    f = fixg.maps["f_vp"]
    a, b = gm.factor(f), gs.factor(f)
    assert a.left == b.left and a.mid == b.mid and a.right == b.right


def test_standard_variant_accepts_noninjective_generators():
    gen = run_soa(GeneratorDiagram.discrete({"j": F21}), variant="standard", max_steps=8)
    fac = gen.factor(ID1)
    assert fac.left.then(fac.right) == ID1.f


# -- nondiscrete shapes ----------------------------------------------------------------


def test_nondiscrete_coend_collapses_copies():
    from awfs_forge.core import FiniteCategory

    shape = FiniteCategory.walking_arrow()
    sq = Square(E01, E01, PresheafMap.identity(E01.dom), PresheafMap.identity(E01.cod))
    diagram = GeneratorDiagram(shape, {"0": E01, "1": E01}, {"a": sq})
    gen = run_soa(diagram)
    fac = gen.factor(F21)
    assert fac.mid == finset(3)  # two isomorphic copies identified by the coend
    assert verify_awfs(gen.as_awfs(), [F21]).passed
    lf = gen.free_lifting_function(F21)
    assert check_lifting_function(diagram, lf).passed
