"""Brute-force oracles and random instances for desk-scale certification.

Nothing here reuses the product verifiers of :mod:`relcoobs.verify` or the
refinement loops of :mod:`relcoobs.synthesize` except where stated: the
string-level evaluators enumerate words and test the defining formulas
directly, and the supremality oracle enumerates subautomata.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterator, Optional

from .automata import Generator, Word, includes, minimize, project_word, trim, union, words
from .context import AgentProfile, ControlContext, LanguagePair
from .errors import BudgetExceeded
from .synthesize import _observer_refinement, _spec_tracker
from .verify import Witness, check_rel_coobservable

DEFAULT_BUDGET = 12


# -- subautomaton enumeration -------------------------------------------------


def _trimmed_subsets(g: Generator) -> Iterator[frozenset[int]]:
    """For every subset of ``g``'s transitions, the indices surviving trim."""
    trans = list(g.transitions())
    n = len(trans)
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            out = defaultdict(list)
            inc = defaultdict(list)
            for t in subset:
                q, _, r = trans[t]
                out[q].append((t, r))
                inc[r].append((t, q))
            reach, stack = {g.initial}, [g.initial]
            while stack:
                q = stack.pop()
                for _, r in out[q]:
                    if r not in reach:
                        reach.add(r)
                        stack.append(r)
            co = {q for q in g.marked if q in reach}
            stack = list(co)
            while stack:
                r = stack.pop()
                for _, q in inc[r]:
                    if q in reach and q not in co:
                        co.add(q)
                        stack.append(q)
            yield frozenset(t for t in subset if trans[t][0] in co and trans[t][2] in co) | (
                frozenset([-1]) if g.initial in co else frozenset()
            )


def _subautomaton(g: Generator, kept: frozenset[int]) -> Generator:
    if -1 not in kept:
        return Generator.empty(g.alphabet)
    trans = list(g.transitions())
    return Generator.build(
        g.alphabet, [trans[t] for t in kept if t >= 0], g.initial, g.marked
    )


def enumerate_subautomata(k: Generator, budget: int = DEFAULT_BUDGET) -> Iterator[Generator]:
    """Yield the trim form of every transition subset of ``k`` (one per subset)."""
    k = trim(k)
    if k.n_transitions > budget:
        raise BudgetExceeded(f"{k.n_transitions} transitions exceed the budget of {budget}")
    if k.is_empty:
        yield k
        return
    for kept in _trimmed_subsets(k):
        yield _subautomaton(k, kept)


def refined_recognizer(k: Generator, c: Generator, ctx: ControlContext) -> Generator:
    """Recognizer of L_m(K) split by every agent's observer cell over (C, G, K)."""
    k = trim(k)
    if k.is_empty:
        return k
    tracker = _spec_tracker(k, ctx.plant, trim(c))
    refined = k
    for a in ctx.agents:
        refined = _observer_refinement(refined, tracker, a.observable).relabel()
    return trim(refined)


def oracle_sup_lower_bound(
    k: Generator,
    c: Generator,
    ctx: ControlContext,
    budget: int = DEFAULT_BUDGET,
    refine: bool = True,
) -> Generator:
    """Union of all subautomaton languages of K that are relatively coobservable.

    The union is itself relatively coobservable and contained in the supremal
    element; it need not equal it, since the supremal language may not be
    carved out of the enumerated recognizer.
    """
    LanguagePair(k, c).validate(ctx)
    rec = refined_recognizer(k, c, ctx) if refine else trim(k)
    if rec.n_transitions > budget:
        raise BudgetExceeded(f"{rec.n_transitions} transitions exceed the budget of {budget}")
    if rec.is_empty:
        return rec
    acc = Generator.empty(k.alphabet)
    seen = set()
    for kept in _trimmed_subsets(rec):
        if kept in seen:
            continue
        seen.add(kept)
        cand = _subautomaton(rec, kept)
        if cand.is_empty or includes(acc, cand, "marked"):
            continue
        if check_rel_coobservable(LanguagePair(cand, c), ctx):
            acc = minimize(union(acc, cand))
    return acc


# -- string-level definitions -------------------------------------------------


class WordModel:
    """The languages of an instance evaluated on explicit words."""

    def __init__(self, k: Generator, ctx: ControlContext, c: Optional[Generator] = None):
        self.ctx = ctx
        self.k = trim(k)
        self.c = trim(k if c is None else c)
        self.g = ctx.plant

    def in_kbar(self, w) -> bool:
        return self.k.defines(w)

    def in_k(self, w) -> bool:
        return self.k.accepts(w)

    def in_cbar(self, w) -> bool:
        return self.c.defines(w)

    def in_l(self, w) -> bool:
        return self.g.defines(w)

    def in_lm(self, w) -> bool:
        return self.g.accepts(w)

    def exits(self, w, e) -> bool:
        """``we ∈ L(G) ∖ K̄``."""
        return self.in_l(w + (e,)) and not self.in_kbar(w + (e,))


def _by_projection(m: WordModel, strings, agent: AgentProfile, pred) -> dict[Word, set[str]]:
    table: dict[Word, set[str]] = defaultdict(set)
    for w in strings:
        if not m.in_kbar(w):
            continue
        for e in agent.controllable:
            if pred(w, e):
                table[project_word(w, agent.observable)].add(e)
    return table


def eval_relobs(k, c, ctx: ControlContext, agent, max_len: int) -> Optional[tuple[Word, Word, str]]:
    """Search words up to ``max_len`` for ``(s, s', σ)`` breaking relative observability."""
    m = WordModel(k, ctx, c)
    a = ctx.agent(agent)
    strings = list(words(m.g, max_len))
    enabling = defaultdict(dict)
    for w in strings:
        if m.in_kbar(w):
            for e in a.controllable:
                if m.in_kbar(w + (e,)):
                    enabling[project_word(w, a.observable)].setdefault(e, w)
    for s in strings:
        if not m.in_cbar(s):
            continue
        p = project_word(s, a.observable)
        for e in sorted(a.controllable):
            if e in enabling[p] and m.exits(s, e):
                return s, enabling[p][e], e
    return None


def eval_rel_coobservable(k, c, ctx: ControlContext, max_len: int) -> bool:
    return all(eval_relobs(k, c, ctx, a.id, max_len) is None for a in ctx.agents)


def eval_conj_coobservable(k, ctx: ControlContext, max_len: int) -> bool:
    m = WordModel(k, ctx)
    strings = list(words(m.g, max_len))
    enabling = {a.id: _by_projection(m, strings, a, lambda w, e: m.in_kbar(w + (e,))) for a in ctx.agents}
    for s in strings:
        if not m.in_kbar(s):
            continue
        for e in ctx.controllable:
            if m.exits(s, e) and all(
                e in enabling[a.id].get(project_word(s, a.observable), ()) for a in ctx.owners(e)
            ):
                return False
    return True


def eval_disj_coobservable(k, ctx: ControlContext, max_len: int) -> bool:
    m = WordModel(k, ctx)
    strings = list(words(m.g, max_len))
    disabling = {a.id: _by_projection(m, strings, a, m.exits) for a in ctx.agents}
    for s in strings:
        if not m.in_kbar(s):
            continue
        for e in ctx.controllable:
            if m.in_kbar(s + (e,)) and all(
                e in disabling[a.id].get(project_word(s, a.observable), ()) for a in ctx.owners(e)
            ):
                return False
    return True


def eval_normal(k, ctx: ControlContext, agent, max_len: int) -> bool:
    m = WordModel(k, ctx)
    a = ctx.agent(agent)
    strings = list(words(m.g, max_len))
    images = {project_word(w, a.observable) for w in strings if m.in_kbar(w)}
    return not any(
        not m.in_kbar(t) and project_word(t, a.observable) in images for t in strings
    )


def eval_conormal(k, ctx: ControlContext, max_len: int) -> bool:
    return all(eval_normal(k, ctx, a.id, max_len) for a in ctx.agents)


def eval_controllable(k, ctx: ControlContext, max_len: int) -> bool:
    m = WordModel(k, ctx)
    return not any(
        m.in_kbar(s) and m.exits(s, u)
        for s in words(m.g, max_len) for u in ctx.uncontrollable
    )


def eval_lm_closed(k, ctx: ControlContext, max_len: int) -> bool:
    m = WordModel(k, ctx)
    return not any(m.in_kbar(s) and m.in_lm(s) and not m.in_k(s) for s in words(m.g, max_len))


def replay(w: Witness, k: Generator, ctx: ControlContext, c: Optional[Generator] = None) -> bool:
    """Check directly on the witness strings that the claimed violation is real."""
    m = WordModel(k, ctx, c)
    s, e = tuple(w.s), w.event
    if w.condition == "controllability":
        return m.in_kbar(s) and e in ctx.uncontrollable and m.exits(s, e)
    if w.condition == "closedness":
        return m.in_kbar(s) and m.in_lm(s) and not m.in_k(s)
    if w.condition == "normality":
        a = ctx.agent(w.channel)
        sp = tuple(w.s_prime)
        return (
            m.exits(s, e) and m.in_kbar(sp)
            and project_word(s + (e,), a.observable) == project_word(sp, a.observable)
        )
    if w.condition == "relobs":
        a = ctx.agent(w.channel)
        sp = tuple(w.s_prime)
        return (
            e in a.controllable
            and project_word(s, a.observable) == project_word(sp, a.observable)
            and m.in_kbar(sp + (e,)) and m.in_cbar(s) and m.exits(s, e)
        )
    owners = ctx.owners(e)
    if not owners or set(w.lookalikes) != {a.id for a in owners}:
        return False
    same = all(
        project_word(s, a.observable) == project_word(tuple(w.lookalikes[a.id]), a.observable)
        for a in owners
    )
    if w.condition.startswith("coobs-"):
        return same and m.in_kbar(s) and m.exits(s, e) and all(
            m.in_kbar(tuple(w.lookalikes[a.id]) + (e,)) for a in owners
        )
    if w.condition.startswith("disj-"):
        return same and m.in_kbar(s + (e,)) and all(
            m.in_kbar(tuple(w.lookalikes[a.id])) and m.exits(tuple(w.lookalikes[a.id]), e)
            for a in owners
        )
    raise ValueError(f"unknown condition {w.condition!r}")


# -- random instances ---------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    max_states: int = 6
    max_events: int = 5
    agent_count: int = 2
    transition_density: float = 0.4
    marked_density: float = 0.3
    observable_density: float = 0.5
    controllable_density: float = 0.6
    keep_ambient: float = 0.9
    keep_spec: float = 0.85
    seed: int = 0


def _random_plant(rng: random.Random, spec: InstanceSpec, events: list[str]) -> Generator:
    while True:
        n = rng.randint(1, spec.max_states)
        table: dict[tuple[int, str], int] = {}
        # a random spanning tree keeps every state reachable
        for q in range(1, n):
            p = rng.randrange(q)
            free = [e for e in events if (p, e) not in table]
            if free:
                table[p, rng.choice(free)] = q
        for q in range(n):
            for e in events:
                if (q, e) not in table and rng.random() < spec.transition_density:
                    table[q, e] = rng.randrange(n)
        marked = [q for q in range(n) if rng.random() < spec.marked_density] or [n - 1]
        trans = [(q, e, r) for (q, e), r in sorted(table.items())]
        g = trim(Generator.build(events, trans, 0, marked))
        if not g.is_empty:
            return g.relabel()


def _pruned_copy(rng: random.Random, g: Generator, keep: float) -> Generator:
    for _ in range(20):
        trans = [t for t in g.transitions() if rng.random() < keep]
        marked = [q for q in g.marked if rng.random() < keep]
        out = trim(Generator.build(g.alphabet, trans, g.initial, marked))
        if not out.is_empty:
            return out.relabel()
    return g


def random_instance(spec: InstanceSpec) -> tuple[ControlContext, LanguagePair]:
    """A seeded instance with a nonblocking plant and K ⊆ C ⊆ L_m(G) by construction."""
    rng = random.Random(spec.seed)
    events = [f"e{i}" for i in range(rng.randint(1, spec.max_events))]
    plant = _random_plant(rng, spec, events)
    sigma = sorted(plant.alphabet)
    agents = []
    for i in range(spec.agent_count):
        obs = {e for e in sigma if rng.random() < spec.observable_density}
        ctrl = {e for e in sigma if rng.random() < spec.controllable_density}
        agents.append(AgentProfile(str(i + 1), obs, ctrl))
    ctx = ControlContext(plant, tuple(agents))
    ambient = _pruned_copy(rng, plant, spec.keep_ambient)
    k = _pruned_copy(rng, ambient, spec.keep_spec)
    return ctx, LanguagePair(k, ambient)


def random_sublanguage(g: Generator, seed: int, keep: float = 0.85) -> Generator:
    """A seeded subautomaton of ``g`` (transitions and markings dropped at random)."""
    return _pruned_copy(random.Random(seed), trim(g), keep)


def write_instance(ctx: ControlContext, pair: LanguagePair, directory) -> dict[str, Path]:
    """Write an instance as CLI input files; returns the paths by role."""
    from . import io

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "plant": directory / "plant.json",
        "spec": directory / "spec.json",
        "ambient": directory / "ambient.json",
        "agents": directory / "agents.json",
    }
    io.write_automaton(paths["plant"], ctx.plant)
    io.write_automaton(paths["spec"], pair.spec)
    io.write_automaton(paths["ambient"], pair.effective_ambient)
    io.write_agents(paths["agents"], ctx.agents)
    return paths
