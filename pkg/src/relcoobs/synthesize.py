"""Supremal sublanguage computations and local supervisor extraction.

The partial-observation operators share one construction: the recognizer of
the current language is paired with an observer cell, i.e. the set of states a
tracker automaton may be in after any string with the same projection.  In the
refined recognizer every state determines which lookalikes exist, so a
violation found at a state is a violation for every string reaching it and can
be removed by deleting that state or transition.  Each round re-refines the
shrunken language and repeats until nothing is removed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from .automata import (
    Generator,
    delete_states,
    delete_transitions,
    language_equal,
    meet,
    minimize,
    trim,
    unobservable_reach,
)
from .context import AgentProfile, ControlContext, LanguagePair
from .errors import NotRelativelyCoobservable
from .verify import (
    OUT,
    Verdict,
    check_conj_coobservable,
    check_conormal,
    check_controllable,
    check_disj_coobservable,
    check_lm_closed,
    check_normal,
    check_rel_coobservable,
    relobs_witnesses,
)

log = logging.getLogger(__name__)

MAX_ROUNDS = 10_000


@dataclass(frozen=True)
class PassRecord:
    """Size of one intermediate generator.

    ``stage`` is ``"K"`` for the language entering outer pass ``j``, ``"K_ji"``
    for the result of the per-agent step ``i`` of that pass and ``"H"`` for the
    supremal controllable sublanguage computed in that pass.
    """

    stage: str
    j: int
    i: Optional[int]
    states: int
    transitions: int

    @property
    def size(self) -> int:
        return self.states + self.transitions

    def to_dict(self) -> dict:
        return {"stage": self.stage, "j": self.j, "i": self.i,
                "states": self.states, "transitions": self.transitions}


@dataclass(frozen=True)
class SynthesisReport:
    result: Generator
    iterations: tuple[PassRecord, ...]
    passes: int
    recheck: dict[str, Verdict] = field(default_factory=dict)

    def sizes(self, stage: str = "K") -> list[int]:
        return [r.size for r in self.iterations if r.stage == stage]

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "iterations": [r.to_dict() for r in self.iterations],
            "recheck": {k: v.holds for k, v in self.recheck.items()},
            "result": {"states": self.result.n_states,
                       "transitions": self.result.n_transitions,
                       "empty": self.result.is_empty},
        }


def _record(stage: str, j: int, i: Optional[int], g: Generator) -> PassRecord:
    return PassRecord(stage, j, i, g.n_states, g.n_transitions)


def _fixpoint(step: Callable[[Generator], Optional[Generator]], k: Generator, what: str) -> Generator:
    """Apply ``step`` until it reports no change (returns ``None``)."""
    for _ in range(MAX_ROUNDS):
        if k.is_empty:
            return k
        nxt = step(k)
        if nxt is None:
            return minimize(k)
        k = trim(nxt)
    raise RuntimeError(f"{what} did not converge within {MAX_ROUNDS} rounds")


def _observer_refinement(k: Generator, tracker: Generator, observable: frozenset[str]) -> Generator:
    """Pair each state of ``k`` with the tracker's observer cell.

    Labels of the result are ``(k-state, cell)`` with ``cell`` a frozenset of
    tracker states.  ``k``'s strings must all be tracked by ``tracker``.
    """

    def step(key, e):
        q, cell = key
        q2 = k.succ(q).get(e)
        if q2 is None:
            return None
        if e not in observable:
            return q2, cell
        nxt = {r for m in cell if (r := tracker.succ(m).get(e)) is not None}
        return q2, unobservable_reach(tracker, nxt, observable)

    return Generator.explore(
        k.alphabet,
        (k.initial, unobservable_reach(tracker, [tracker.initial], observable)),
        step,
        lambda key: key[0] in k.marked,
    )


def _spec_tracker(k: Generator, plant: Generator, ambient: Optional[Generator] = None) -> Generator:
    """Follow a string through (ambient, plant, K or OUT).

    With an ambient the string is confined to its closure; without one it
    ranges over L(plant).  Labels are ``(ambient-state, plant-state, K-state)``.
    """

    def kstep(q, e):
        if q == OUT:
            return OUT
        r = k.succ(q).get(e)
        return OUT if r is None else r

    if ambient is None:
        def step(key, e):
            g2 = plant.succ(key[1]).get(e)
            return None if g2 is None else (None, g2, kstep(key[2], e))

        start = (None, plant.initial, k.initial)
    else:
        def step(key, e):
            c2 = ambient.succ(key[0]).get(e)
            return None if c2 is None else (c2, plant.succ(key[1])[e], kstep(key[2], e))

        start = (ambient.initial, plant.initial, k.initial)
    return Generator.explore(plant.alphabet, start, step, lambda key: False)


# -- controllability ----------------------------------------------------------


def supcon(k: Generator, ctx: ControlContext) -> Generator:
    """Supremal controllable and L_m(G)-closed sublanguage of L_m(K)."""
    ctx.require_sublanguage(k)
    g = ctx.plant
    unc = ctx.uncontrollable
    t = trim(k)
    kmarked = t.marked

    def step(p: Generator) -> Optional[Generator]:
        bad = set()
        for x in p.states():
            qk, qg = p.labels[x]
            if qg in g.marked and qk not in kmarked:
                bad.add(x)
            elif any(u in g.succ(qg) and u not in p.succ(x) for u in unc):
                bad.add(x)
        return delete_states(p, bad) if bad else None

    return _fixpoint(step, trim(meet(t, g)), "supcon").relabel()


# -- normality ----------------------------------------------------------------


def sup_normal(k: Generator, ctx: ControlContext, agent) -> Generator:
    """Supremal sublanguage of L_m(K) whose closure is normal on ``agent``'s channel.

    Each round removes every string of K̄ having a prefix whose projection is
    also the projection of some string in L(G) ∖ K̄, then restores the marking
    of K and trims.
    """
    a = ctx.agent(agent)
    ctx.require_sublanguage(k)
    obs = a.observable

    def step(cur: Generator) -> Optional[Generator]:
        tracker = _spec_tracker(cur, ctx.plant)
        outside = {m for m in tracker.states() if tracker.labels[m][2] == OUT}
        refined = _observer_refinement(cur, tracker, obs)
        bad = {x for x in refined.states() if not outside.isdisjoint(refined.labels[x][1])}
        return delete_states(refined, bad) if bad else None

    return _fixpoint(step, trim(k), f"sup_normal[{a.id}]").relabel()


def sup_conormal(k: Generator, ctx: ControlContext) -> Generator:
    """Largest conormal sublanguage: cycle :func:`sup_normal` over agents to a fixpoint."""
    ctx.require_sublanguage(k)
    cur = minimize(k)
    for _ in range(MAX_ROUNDS):
        nxt = cur
        for a in ctx.agents:
            nxt = sup_normal(nxt, ctx, a.id)
        if language_equal(nxt, cur):
            return nxt
        cur = nxt
    raise RuntimeError("sup_conormal did not converge")


def sup_conormal_controllable(k: Generator, ctx: ControlContext, trace: Optional[list] = None) -> Generator:
    """Supremal conormal, controllable and L_m(G)-closed sublanguage."""
    ctx.require_sublanguage(k)
    cur = minimize(k)
    for j in range(MAX_ROUNDS):
        if trace is not None:
            trace.append(_record("K", j, None, cur))
        h = supcon(cur, ctx)
        if trace is not None:
            trace.append(_record("H", j, None, h))
        nxt = sup_conormal(h, ctx)
        if language_equal(nxt, cur):
            return nxt
        cur = nxt
    raise RuntimeError("sup_conormal_controllable did not converge")


# -- relative observability ---------------------------------------------------


def _relobs_round(k: Generator, c: Generator, ctx: ControlContext, a: AgentProfile) -> Optional[Generator]:
    tracker = _spec_tracker(k, ctx.plant, c)
    g = ctx.plant
    ctrl = a.controllable
    # events σ for which a tracked string s has sσ ∈ L(G) ∖ K̄
    exits = []
    for m in tracker.states():
        _, qg, qk = tracker.labels[m]
        exits.append(frozenset(
            e for e in ctrl if e in g.succ(qg) and (qk == OUT or e not in k.succ(qk))
        ))
    refined = _observer_refinement(k, tracker, a.observable)
    removed = set()
    for x in refined.states():
        qk, cell = refined.labels[x]
        enabled = ctrl.intersection(k.succ(qk))
        if not enabled:
            continue
        blocked = frozenset().union(*(exits[m] for m in cell))
        for e in enabled & blocked:
            removed.add((x, e))
    if not removed:
        return None
    log.debug("agent %s: pruning %d transitions", a.id, len(removed))
    return delete_transitions(refined, removed)


def sup_rel_obs(k: Generator, c: Generator, ctx: ControlContext, agent) -> Generator:
    """Supremal sublanguage of L_m(K) that is relatively observable (ambient C̄)
    on ``agent``'s channel.

    Every deleted transition ``s'σ`` has, in the current language, a lookalike
    ``s ∈ C̄`` with ``sσ ∈ L(G) ∖ K̄``; no relatively observable sublanguage can
    keep it, which makes the fixpoint supremal.
    """
    a = ctx.agent(agent)
    LanguagePair(k, c).validate(ctx)
    c = trim(c)
    return _fixpoint(lambda cur: _relobs_round(cur, c, ctx, a), trim(k), f"sup_rel_obs[{a.id}]").relabel()


def algorithm1_sup_rel_coobs(
    k: Generator,
    c: Optional[Generator],
    ctx: ControlContext,
    recheck: bool = True,
) -> SynthesisReport:
    """Supremal relatively coobservable sublanguage of L_m(K) for ambient C.

    Runs :func:`sup_rel_obs` for agents in order, keeping the same ambient,
    and repeats whole passes until a pass changes nothing.
    """
    c = k if c is None else c
    LanguagePair(k, c).validate(ctx)
    cur = minimize(k)
    records = [_record("K", 0, None, cur)]
    for j in range(MAX_ROUNDS):
        nxt = cur
        for i, a in enumerate(ctx.agents, start=1):
            nxt = sup_rel_obs(nxt, c, ctx, a.id)
            records.append(_record("K_ji", j, i, nxt))
        if language_equal(nxt, cur):
            break
        cur = nxt
        records.append(_record("K", j + 1, None, cur))
    else:
        raise RuntimeError("algorithm 1 did not converge")
    verdicts = {}
    if recheck:
        verdicts = {
            "relcoobs": check_rel_coobservable(LanguagePair(nxt, c), ctx),
            "coobs-conj": check_conj_coobservable(nxt, ctx),
            "coobs-disj": check_disj_coobservable(nxt, ctx),
        }
    return SynthesisReport(nxt, tuple(records), j + 1, verdicts)


def algorithm2_sup_rcc(k: Generator, ctx: ControlContext, recheck: bool = True) -> SynthesisReport:
    """Supremal relatively coobservable, controllable and L_m(G)-closed sublanguage.

    Alternates :func:`supcon` with Algorithm 1, the ambient of each Algorithm 1
    run being the controllable language just computed.
    """
    ctx.require_sublanguage(k)
    cur = minimize(k)
    records = [_record("K", 0, None, cur)]
    for j in range(MAX_ROUNDS):
        h = supcon(cur, ctx)
        records.append(_record("H", j, None, h))
        inner = algorithm1_sup_rel_coobs(h, h, ctx, recheck=False)
        nxt = inner.result
        records.extend(
            PassRecord(r.stage, j, r.i, r.states, r.transitions)
            for r in inner.iterations if r.stage == "K_ji"
        )
        if language_equal(nxt, cur):
            break
        cur = nxt
        records.append(_record("K", j + 1, None, cur))
    else:
        raise RuntimeError("algorithm 2 did not converge")
    verdicts = {}
    if recheck:
        verdicts = {
            "controllable": check_controllable(nxt, ctx),
            "lm-closed": check_lm_closed(nxt, ctx),
            "relcoobs": check_rel_coobservable(LanguagePair(nxt), ctx),
            "coobs-conj": check_conj_coobservable(nxt, ctx),
            "coobs-disj": check_disj_coobservable(nxt, ctx),
        }
    return SynthesisReport(nxt, tuple(records), j + 1, verdicts)


# -- local supervisors --------------------------------------------------------


def extract_local_supervisor(result: Generator, ctx: ControlContext, agent) -> Generator:
    """Agent ``agent``'s local supervisor for a synthesized language.

    The result is projected onto the agent's observable events; an
    unobservable event is then selflooped at an observer state when it is
    enabled there and the result never disables it at any of the cell's
    underlying states where the plant allows it.  The output is over the full
    alphabet.
    """
    a = ctx.agent(agent)
    ctx.require_sublanguage(result, "result")
    verdict = check_rel_coobservable(LanguagePair(result), ctx)
    if not verdict:
        raise NotRelativelyCoobservable(
            f"local decisions would conflict: {verdict.witness.describe()}", verdict.witness
        )
    g = ctx.plant
    obs = a.observable
    if result.is_empty:
        return Generator.empty(ctx.alphabet)
    p = meet(trim(result), g)

    def selfloop_ok(cell, e):
        enabled = False
        for x in cell:
            here = e in p.succ(x)
            if not here and e in g.succ(p.labels[x][1]):
                return False
            enabled = enabled or here
        return enabled

    def step(cell, e):
        if e not in obs:
            return cell if selfloop_ok(cell, e) else None
        nxt = {r for x in cell if (r := p.succ(x).get(e)) is not None}
        return unobservable_reach(p, nxt, obs) if nxt else None

    return Generator.explore(
        ctx.alphabet,
        unobservable_reach(p, [p.initial], obs),
        step,
        lambda cell: not cell.isdisjoint(p.marked),
    ).relabel()


SYNTH_ALGORITHMS = ("supcon", "sup-normal:<agent>", "sup-conormal", "sup-conormal-controllable",
                    "sup-relobs:<agent>", "sup-relcoobs", "sup-rcc")


def recheck_for(name: str, result: Generator, ctx: ControlContext, ambient: Optional[Generator]) -> dict[str, Verdict]:
    """The properties each synthesis operator guarantees on its output."""
    out: dict[str, Verdict] = {}
    if name in ("supcon", "sup-conormal-controllable", "sup-rcc"):
        out["controllable"] = check_controllable(result, ctx)
        out["lm-closed"] = check_lm_closed(result, ctx)
    if name in ("sup-conormal", "sup-conormal-controllable"):
        out["conormal"] = check_conormal(result, ctx)
    if name.startswith("sup-normal:"):
        out[name.replace("sup-", "")] = check_normal(result, ctx, name.split(":", 1)[1])
    if name.startswith("sup-relobs:"):
        found = relobs_witnesses(result, ambient, ctx, name.split(":", 1)[1])
        out[name.replace("sup-", "")] = Verdict(not found, found[0] if found else None)
    if name in ("sup-relcoobs", "sup-rcc", "sup-conormal", "sup-conormal-controllable"):
        amb = ambient if name == "sup-relcoobs" else None
        out["relcoobs"] = check_rel_coobservable(LanguagePair(result, amb), ctx)
        out["coobs-conj"] = check_conj_coobservable(result, ctx)
        out["coobs-disj"] = check_disj_coobservable(result, ctx)
    return out
