import pytest
from hypothesis import given

from relcoobs import io
from relcoobs.automata import Generator, includes, is_trim, language_equal, words
from relcoobs.errors import BudgetExceeded
from relcoobs.fixtures import ALPHA, BETA, GAMMA, fig2, fig3, fig4
from relcoobs.oracle import (
    InstanceSpec,
    enumerate_subautomata,
    eval_conormal,
    eval_disj_coobservable,
    eval_relobs,
    oracle_sup_lower_bound,
    random_instance,
    refined_recognizer,
    write_instance,
)
from relcoobs.verify import check_rel_coobservable

from conftest import seeds


def test_chain_of_two_has_four_subautomata():
    g = Generator.build("ab", [(0, "a", 1), (1, "b", 2)], 0, [2])
    subs = list(enumerate_subautomata(g))
    assert len(subs) == 4
    assert sum(not s.is_empty for s in subs) == 1


def test_fig4_spec_has_eight_subautomata():
    subs = list(enumerate_subautomata(fig4().spec))
    assert len(subs) == 8
    assert {frozenset(words(s, 2, marked_only=True)) for s in subs} >= {frozenset({(ALPHA,), (BETA,), (GAMMA,)})}


def test_budget_is_enforced():
    g = Generator.build("a", [(i, "a", i + 1) for i in range(13)], 0, [13])
    with pytest.raises(BudgetExceeded):
        list(enumerate_subautomata(g))
    with pytest.raises(BudgetExceeded):
        list(enumerate_subautomata(g, budget=12))
    assert len(list(enumerate_subautomata(g, budget=13))) == 2**13


@pytest.mark.parametrize("make", [fig3, fig4])
def test_oracle_on_fixtures(make):
    fx = make()
    lower = oracle_sup_lower_bound(fx.spec, fx.ambient, fx.ctx)
    assert set(words(lower, 3, marked_only=True)) == {(ALPHA,), (BETA,), (GAMMA,)}


def test_oracle_on_fig2():
    f = fig2()
    lower = oracle_sup_lower_bound(f["K"], f["C"], f["ctx"])
    assert set(words(lower, 3, marked_only=True)) == {(ALPHA,), (BETA,), (GAMMA,)}


def test_refinement_preserves_language():
    f = fig2()
    assert language_equal(refined_recognizer(f["K"], f["C"], f["ctx"]), f["K"])


@given(seeds)
def test_oracle_output_passes(seed):
    ctx, pair = random_instance(InstanceSpec(seed=seed))
    try:
        lower = oracle_sup_lower_bound(pair.spec, pair.ambient, ctx, budget=8)
    except BudgetExceeded:
        return
    assert includes(pair.spec, lower)
    if not lower.is_empty:
        from relcoobs.context import LanguagePair

        assert check_rel_coobservable(LanguagePair(lower, pair.ambient), ctx)


def test_eval_relobs_finds_fig3_violation():
    fx = fig3()
    assert eval_relobs(fx.spec, fx.ambient, fx.ctx, "1", 3) == ((BETA,), (ALPHA,), "σ")
    assert eval_disj_coobservable(fx.spec, fx.ctx, 3)
    assert not eval_conormal(fig4().spec, fig4().ctx, 3)


def test_random_instance_is_reproducible():
    a = random_instance(InstanceSpec(seed=0))
    b = random_instance(InstanceSpec(seed=0))
    for x, y in [(a[0].plant, b[0].plant), (a[1].spec, b[1].spec), (a[1].ambient, b[1].ambient)]:
        assert io.dumps(io.automaton_to_dict(x)) == io.dumps(io.automaton_to_dict(y))
    assert io.agents_to_dict(a[0].agents) == io.agents_to_dict(b[0].agents)


def test_written_instance_is_byte_stable(tmp_path):
    ctx, pair = random_instance(InstanceSpec(seed=0))
    first = write_instance(ctx, pair, tmp_path / "a")
    second = write_instance(*random_instance(InstanceSpec(seed=0)), tmp_path / "b")
    for role in first:
        assert first[role].read_bytes() == second[role].read_bytes()


@given(seeds)
def test_random_instances_satisfy_invariants(seed):
    ctx, pair = random_instance(InstanceSpec(seed=seed, agent_count=2, max_states=5))
    assert is_trim(ctx.plant) and not ctx.plant.is_empty
    assert len(ctx.agents) == 2
    pair.validate(ctx)
    assert ctx.plant.n_states <= 5
