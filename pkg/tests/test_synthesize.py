import pytest
from hypothesis import given

from relcoobs.automata import Generator, includes, language_equal, meet, trim, union, words
from relcoobs.context import AgentProfile, ControlContext, LanguagePair
from relcoobs.errors import NotRelativelyCoobservable
from relcoobs.fixtures import ALPHA, BETA, GAMMA, SIGMA, abc_plant, fig2, fig3, fig4, guideway
from relcoobs.oracle import oracle_sup_lower_bound, random_sublanguage, refined_recognizer
from relcoobs.synthesize import (
    algorithm1_sup_rel_coobs,
    algorithm2_sup_rcc,
    extract_local_supervisor,
    sup_conormal,
    sup_conormal_controllable,
    sup_normal,
    sup_rel_obs,
    supcon,
)
from relcoobs.verify import (
    check_conormal,
    check_controllable,
    check_lm_closed,
    check_normal,
    check_rel_coobservable,
    relobs_witnesses,
)

from conftest import instances, seeds

ABC_RESULT = {(ALPHA,), (BETA,), (GAMMA,)}


def marked(g, n=4):
    return set(words(g, n, marked_only=True))


@pytest.fixture(scope="module")
def gw():
    fx = guideway()
    rep = algorithm2_sup_rcc(fx.spec, fx.ctx)
    return fx, rep, sup_conormal_controllable(fx.spec, fx.ctx)


# -- supcon -------------------------------------------------------------------


def test_supcon_of_plant_is_plant():
    fx = guideway()
    assert language_equal(supcon(fx.ctx.plant, fx.ctx), fx.ctx.plant)


def test_supcon_guideway_keeps_vehicle_one_entry():
    fx = guideway()
    h = supcon(fx.spec, fx.ctx)
    assert not h.is_empty and h.defines(("21", "23", "20", "11"))
    assert check_controllable(h, fx.ctx) and check_lm_closed(h, fx.ctx)


def test_supcon_empty_when_uncontrollable_exit_unavoidable():
    plant = Generator.build("au", [(0, "a", 1), (1, "u", 2)], 0, [1, 2])
    ctx = ControlContext(plant, (AgentProfile("1", "au", {"a"}),))
    k = Generator.build("au", [(0, "a", 1)], 0, [1])
    assert supcon(k, ctx).is_empty


def test_supcon_restores_closedness():
    plant = Generator.build("ab", [(0, "a", 1), (1, "b", 2)], 0, [1, 2])
    ctx = ControlContext(plant, (AgentProfile("1", "ab", {"a", "b"}),))
    k = Generator.build("ab", [(0, "a", 1), (1, "b", 2)], 0, [2])
    assert marked(supcon(k, ctx)) == set()


# -- normality ----------------------------------------------------------------


def test_sup_normal_fig4_is_empty():
    fx = fig4()
    assert sup_normal(fx.spec, fx.ctx, "1").is_empty
    assert sup_conormal(fx.spec, fx.ctx).is_empty


@given(instances)
def test_sup_conormal_is_conormal_and_contained(inst):
    ctx, pair = inst
    n = sup_conormal(pair.spec, ctx)
    assert includes(pair.spec, n)
    assert check_conormal(n, ctx)
    for a in ctx.agents:
        assert check_normal(sup_normal(pair.spec, ctx, a.id), ctx, a.id)


def test_sup_conormal_controllable_full_observation_is_supcon():
    fx = guideway()
    ctx = ControlContext(fx.ctx.plant, tuple(
        AgentProfile(a.id, fx.ctx.alphabet, a.controllable) for a in fx.ctx.agents
    ))
    assert language_equal(sup_conormal_controllable(fx.spec, ctx), supcon(fx.spec, ctx))


# -- relative observability / Algorithm 1 -------------------------------------


def test_sup_rel_obs_fig2_channel_one():
    f = fig2()
    r = sup_rel_obs(f["K"], f["C"], f["ctx"], "1")
    assert marked(r) == ABC_RESULT | {(GAMMA, SIGMA)}


@pytest.mark.parametrize("fixture", [lambda: fig2(), fig3, fig4])
def test_algorithm1_fixtures(fixture):
    fx = fixture()
    if isinstance(fx, dict):
        k, c, ctx = fx["K"], fx["C"], fx["ctx"]
    else:
        k, c, ctx = fx.spec, fx.ambient, fx.ctx
    rep = algorithm1_sup_rel_coobs(k, c, ctx)
    assert marked(rep.result) == ABC_RESULT
    assert all(rep.recheck.values())
    assert language_equal(rep.result, oracle_sup_lower_bound(k, c, ctx))


def test_algorithm1_empty_input():
    f = fig2()
    empty = Generator.empty(f["K"].alphabet)
    rep = algorithm1_sup_rel_coobs(empty, f["C"], f["ctx"])
    assert rep.result.is_empty and rep.passes == 1


@given(instances)
def test_algorithm1_is_sound_and_idempotent(inst):
    ctx, pair = inst
    rep = algorithm1_sup_rel_coobs(pair.spec, pair.ambient, ctx)
    assert includes(pair.spec, rep.result)
    assert all(rep.recheck.values())
    again = algorithm1_sup_rel_coobs(rep.result, pair.ambient, ctx, recheck=False)
    assert again.passes == 1 and language_equal(again.result, rep.result)


@given(instances)
def test_algorithm1_contains_oracle(inst):
    ctx, pair = inst
    if refined_recognizer(pair.spec, pair.ambient, ctx).n_transitions > 10:
        return
    lower = oracle_sup_lower_bound(pair.spec, pair.ambient, ctx, budget=10)
    assert includes(algorithm1_sup_rel_coobs(pair.spec, pair.ambient, ctx, recheck=False).result, lower)


@given(instances)
def test_algorithm1_agent_order(inst):
    ctx, pair = inst
    a = algorithm1_sup_rel_coobs(pair.spec, pair.ambient, ctx, recheck=False).result
    b = algorithm1_sup_rel_coobs(pair.spec, pair.ambient, ctx.permuted([1, 0]), recheck=False).result
    assert language_equal(a, b)


@given(instances, seeds)
def test_union_of_outputs_is_relcoobs(inst, seed):
    ctx, pair = inst
    c = pair.effective_ambient
    k2 = random_sublanguage(c, seed)
    r1 = algorithm1_sup_rel_coobs(pair.spec, c, ctx, recheck=False).result
    r2 = algorithm1_sup_rel_coobs(k2, c, ctx, recheck=False).result
    assert check_rel_coobservable(LanguagePair(union(r1, r2), c), ctx)


@given(instances)
def test_sup_rel_obs_removes_only_necessary_strings(inst):
    ctx, pair = inst
    for a in ctx.agents:
        r = sup_rel_obs(pair.spec, pair.effective_ambient, ctx, a.id)
        assert not relobs_witnesses(r, pair.effective_ambient, ctx, a.id)
        assert includes(pair.spec, r)


# -- Algorithm 2 --------------------------------------------------------------


def test_algorithm2_full_observation_gives_plant():
    plant = abc_plant()
    ctx = ControlContext(plant, (AgentProfile("1", plant.alphabet, {SIGMA}),))
    rep = algorithm2_sup_rcc(plant, ctx)
    assert language_equal(rep.result, plant)


def test_algorithm2_empty_input():
    fx = fig3()
    rep = algorithm2_sup_rcc(Generator.empty(fx.ctx.alphabet), fx.ctx)
    assert rep.result.is_empty and rep.passes == 1


def test_guideway_rechecks(gw):
    _, rep, _ = gw
    assert not rep.result.is_empty
    assert all(rep.recheck.values()), rep.recheck


def test_guideway_relcoobs_strictly_beats_conormal(gw):
    fx, rep, n = gw
    r = rep.result
    assert not n.is_empty
    assert includes(r, n, "closed")
    back = includes(n, r, "closed")
    assert not back and r.defines(back.counterexample) and not n.defines(back.counterexample)
    assert r.defines(("21", "23", "20", "11")) and not n.defines(("21", "23", "20", "11"))
    assert fx.ctx.plant.defines(("21", "23", "20", "11", "13"))
    assert not r.defines(("21", "23", "20", "11", "13"))


def test_guideway_report_sizes(gw):
    _, rep, _ = gw
    sizes = [r.size for r in rep.iterations]
    assert sizes == sorted(sizes, reverse=True)
    assert rep.iterations[0].stage == "K" and rep.iterations[0].j == 0


@given(instances)
def test_algorithm2_postconditions(inst):
    ctx, pair = inst
    rep = algorithm2_sup_rcc(pair.spec, ctx)
    assert all(rep.recheck.values())
    assert includes(pair.spec, rep.result)
    again = algorithm2_sup_rcc(rep.result, ctx, recheck=False)
    assert again.passes == 1 and language_equal(again.result, rep.result)


# -- local supervisors --------------------------------------------------------


def test_guideway_local_supervisors_realize_the_result(gw):
    fx, rep, _ = gw
    ctx, r = fx.ctx, rep.result
    s1 = extract_local_supervisor(r, ctx, "1")
    s2 = extract_local_supervisor(r, ctx, "2")
    closed_loop = meet(meet(ctx.plant, s1), s2)
    assert language_equal(closed_loop, r, "closed")
    assert language_equal(trim(closed_loop), r)


def test_guideway_unobservable_event_selflooped_where_enabled(gw):
    fx, rep, _ = gw
    s1 = extract_local_supervisor(rep.result, fx.ctx, "1")
    looped = [q for q in s1.states() if s1.succ(q).get("13") == q]
    assert looped
    assert all(s1.succ(q).get("13", q) == q for q in s1.states())
    # after 21.23.20.11 vehicle 1 must wait in section 1
    q = s1.run(("21", "23", "20", "11"))
    assert q is not None and "13" not in s1.succ(q)


def test_full_observation_supervisor_is_the_result():
    fx = fig3()
    ctx = ControlContext(fx.ctx.plant, (AgentProfile("1", fx.ctx.alphabet, {SIGMA}),))
    r = algorithm2_sup_rcc(fx.spec, ctx).result
    assert language_equal(extract_local_supervisor(r, ctx, "1"), r)


def test_blind_agent_gets_single_state_supervisor():
    plant = Generator.build("s", [(0, "s", 0)], 0, [0])
    ctx = ControlContext(plant, (AgentProfile("1", (), {"s"}),))
    sup = extract_local_supervisor(plant, ctx, "1")
    assert sup.n_states == 1 and sup.succ(0) == {"s": 0}


def test_extract_rejects_non_relcoobs():
    fx = fig3()
    with pytest.raises(NotRelativelyCoobservable) as err:
        extract_local_supervisor(fx.spec, fx.ctx, "1")
    assert err.value.witness is not None
