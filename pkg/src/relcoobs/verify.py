"""Decision procedures with counterexample witnesses.

Every check explores a synchronized product of copies of the relevant
recognizers breadth-first.  Copy 0 follows the string ``s`` under test; the
other copies follow lookalike strings that an agent cannot tell apart from
``s``.  An event observable to agent ``i`` must be taken jointly by ``s`` and
agent ``i``'s lookalike; an unobservable one may be taken by either alone.
Because the search is breadth-first, reported witnesses are shortest in the
product.

All checks take the spec ``K`` as a generator whose marked behavior is K; its
prefix closure is read off the trim form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Optional

from .automata import Generator, Word, includes, trim
from .context import AgentProfile, ControlContext, LanguagePair
from .errors import LanguagePairError

OUT = -1  # the tracked string has left the closure of K

CONDITIONS = (
    "coobs-i", "coobs-ii", "coobs-iii", "relobs",
    "disj-i", "disj-ii", "disj-iii",
    "controllability", "closedness", "normality",
)


def fmt_word(word: Iterable[str]) -> str:
    word = tuple(word)
    return ".".join(word) if word else "ε"


@dataclass(frozen=True)
class Witness:
    """Certificate of a violated property.

    ``s`` is the string at which the decision goes wrong, ``event`` the event
    involved, ``s_prime``/``s_dprime`` the lookalikes seen through the first and
    second controlling agents.  ``lookalikes`` maps every involved agent id to
    its lookalike string.
    """

    condition: str
    s: Word
    event: Optional[str] = None
    s_prime: Optional[Word] = None
    s_dprime: Optional[Word] = None
    channel: Optional[str] = None
    lookalikes: dict = field(default_factory=dict, compare=False)

    def describe(self) -> str:
        parts = [f"s={fmt_word(self.s)}"]
        if self.s_prime is not None:
            parts.append(f"s'={fmt_word(self.s_prime)}")
        if self.s_dprime is not None:
            parts.append(f"s''={fmt_word(self.s_dprime)}")
        if self.event is not None:
            parts.append(f"σ={self.event}")
        if self.channel is not None:
            parts.append(f"channel={self.channel}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "s": list(self.s),
            "s_prime": None if self.s_prime is None else list(self.s_prime),
            "s_dprime": None if self.s_dprime is None else list(self.s_dprime),
            "event": self.event,
            "channel": self.channel,
            "lookalikes": {k: list(v) for k, v in self.lookalikes.items()},
        }


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[Witness] = None
    statistics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.holds != (self.witness is None):
            raise ValueError("a verdict holds exactly when it carries no witness")

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "statistics": dict(self.statistics),
        }


# -- product search -----------------------------------------------------------

Move = tuple[str, tuple[int, ...], Hashable]  # event, copies that moved, successor


class _Search:
    """Breadth-first exploration that can rebuild each copy's string."""

    def __init__(self, start: Hashable, moves: Callable[[Hashable], Iterable[Move]]):
        self.parent: dict = {start: None}
        self._queue = deque([start])
        self._moves = moves

    def __iter__(self) -> Iterator[Hashable]:
        while self._queue:
            key = self._queue.popleft()
            yield key
            for e, movers, nxt in self._moves(key):
                if nxt not in self.parent:
                    self.parent[nxt] = (key, e, movers)
                    self._queue.append(nxt)

    @property
    def explored(self) -> int:
        return len(self.parent)

    def words(self, key: Hashable, n_copies: int) -> list[Word]:
        out: list[list[str]] = [[] for _ in range(n_copies)]
        while self.parent[key] is not None:
            key, e, movers = self.parent[key]
            for c in movers:
                out[c].append(e)
        return [tuple(reversed(w)) for w in out]


def _require_spec(k: Generator, ctx: ControlContext) -> Generator:
    ctx.require_sublanguage(k)
    return trim(k)


def _step_out(g: Generator, q: int, e: str) -> int:
    if q == OUT:
        return OUT
    r = g.succ(q).get(e)
    return OUT if r is None else r


# -- controllability and closedness -------------------------------------------


def check_controllable(k: Generator, ctx: ControlContext) -> Verdict:
    """Uncontrollable plant continuations of K̄ stay in K̄."""
    k = _require_spec(k, ctx)
    if k.is_empty:
        return Verdict(True, statistics={"explored": 0})
    g = ctx.plant
    order = sorted(ctx.alphabet)
    unc = sorted(ctx.uncontrollable)

    def moves(key):
        q, p = key
        for e in order:
            q2 = k.succ(q).get(e)
            if q2 is not None:
                yield e, (0,), (q2, g.succ(p)[e])

    search = _Search((k.initial, g.initial), moves)
    for key in search:
        q, p = key
        for u in unc:
            if u in g.succ(p) and u not in k.succ(q):
                (s,) = search.words(key, 1)
                return Verdict(False, Witness("controllability", s, u), {"explored": search.explored})
    return Verdict(True, statistics={"explored": search.explored})


def check_lm_closed(k: Generator, ctx: ControlContext) -> Verdict:
    """Every string of K̄ that the plant marks is in K."""
    k = _require_spec(k, ctx)
    if k.is_empty:
        return Verdict(True, statistics={"explored": 0})
    g = ctx.plant
    order = sorted(ctx.alphabet)

    def moves(key):
        q, p = key
        for e in order:
            q2 = k.succ(q).get(e)
            if q2 is not None:
                yield e, (0,), (q2, g.succ(p)[e])

    search = _Search((k.initial, g.initial), moves)
    for key in search:
        q, p = key
        if p in g.marked and q not in k.marked:
            (s,) = search.words(key, 1)
            return Verdict(False, Witness("closedness", s), {"explored": search.explored})
    return Verdict(True, statistics={"explored": search.explored})


# -- relative observability ---------------------------------------------------


def relobs_witnesses(
    k: Generator,
    c: Generator,
    ctx: ControlContext,
    agent,
    exhaustive: bool = False,
) -> list[Witness]:
    """Violations of relative observability of K (ambient C) on one agent's channel.

    A violation is ``(s, s', σ)`` with σ controllable by the agent, s and s'
    indistinguishable to it, ``s'σ ∈ K̄``, ``s ∈ C̄``, ``sσ ∈ L(G)`` and
    ``sσ ∉ K̄``.  Without ``exhaustive`` only the first (shortest) violation is
    returned; otherwise one per reachable verifier state and event.
    """
    a = ctx.agent(agent)
    LanguagePair(k, c).validate(ctx)
    witnesses, _ = _relobs_search(trim(k), trim(c), ctx, a, exhaustive)
    return witnesses


def _relobs_search(k, c, ctx, a: AgentProfile, exhaustive: bool):
    if k.is_empty:
        return [], 0
    g = ctx.plant
    obs = a.observable
    order = sorted(ctx.alphabet)
    ctrl = sorted(a.controllable)

    # key = (c-state of s, plant state of s, K-state of s or OUT, K-state of s')
    def moves(key):
        qc, qg, qk, qs = key
        for e in order:
            c2 = c.succ(qc).get(e)
            s2 = k.succ(qs).get(e)
            if e in obs:
                if c2 is not None and s2 is not None:
                    yield e, (0, 1), (c2, g.succ(qg)[e], _step_out(k, qk, e), s2)
            else:
                if c2 is not None:
                    yield e, (0,), (c2, g.succ(qg)[e], _step_out(k, qk, e), qs)
                if s2 is not None:
                    yield e, (1,), (qc, qg, qk, s2)

    search = _Search((c.initial, g.initial, k.initial, k.initial), moves)
    found = []
    for key in search:
        qc, qg, qk, qs = key
        for sigma in ctrl:
            if (
                sigma in k.succ(qs)
                and sigma in g.succ(qg)
                and (qk == OUT or sigma not in k.succ(qk))
            ):
                s, sp = search.words(key, 2)
                found.append(Witness("relobs", s, sigma, s_prime=sp, channel=a.id, lookalikes={a.id: sp}))
                if not exhaustive:
                    return found, search.explored
    return found, search.explored


def check_rel_coobservable(pair: LanguagePair, ctx: ControlContext) -> Verdict:
    """Relative coobservability: relative observability on every agent's channel."""
    pair.validate(ctx)
    k, c = trim(pair.spec), trim(pair.effective_ambient)
    stats = {}
    for a in ctx.agents:
        found, explored = _relobs_search(k, c, ctx, a, exhaustive=False)
        stats[f"explored[{a.id}]"] = explored
        if found:
            return Verdict(False, found[0], stats)
    return Verdict(True, statistics=stats)


# -- conjunctive and disjunctive coobservability ------------------------------


def _condition_id(prefix: str, owners: tuple[AgentProfile, ...], ctx: ControlContext) -> str:
    if len(owners) > 1:
        return f"{prefix}-i"
    return f"{prefix}-ii" if owners[0] is ctx.agents[0] else f"{prefix}-iii"


def _lookalike_witness(condition, s, sigma, owners, words_by_agent) -> Witness:
    look = {a.id: words_by_agent[a.id] for a in owners}
    sp = look[owners[0].id]
    sdp = look[owners[1].id] if len(owners) > 1 else None
    channel = owners[0].id if len(owners) == 1 else None
    return Witness(condition, s, sigma, s_prime=sp, s_dprime=sdp, channel=channel, lookalikes=look)


def check_conj_coobservable(k: Generator, ctx: ControlContext) -> Verdict:
    """Conjunctive coobservability (enablement must be ratified by every controller).

    Violation: ``s ∈ K̄``, ``sσ ∈ L(G) ∖ K̄`` and, for every agent controlling σ,
    a lookalike ``s_i`` with ``s_iσ ∈ K̄``.  With two agents this is exactly the
    shared/private case split; with more agents the owner set of σ decides.
    """
    k = _require_spec(k, ctx)
    if k.is_empty:
        return Verdict(True, statistics={"explored": 0})
    g = ctx.plant
    agents = ctx.agents
    n = len(agents)
    order = sorted(ctx.alphabet)
    ctrl = [(sigma, ctx.owners(sigma)) for sigma in sorted(ctx.controllable)]
    index = {a.id: i for i, a in enumerate(agents)}

    # key = (plant state of s, K-state of s, K-state of each agent's lookalike)
    def moves(key):
        qg, qk, looks = key[0], key[1], key[2:]
        for e in order:
            k2 = k.succ(qk).get(e)
            if k2 is not None:
                nxt = list(looks)
                movers = [0]
                for i, a in enumerate(agents):
                    if e in a.observable:
                        r = k.succ(looks[i]).get(e)
                        if r is None:
                            break
                        nxt[i] = r
                        movers.append(i + 1)
                else:
                    yield e, tuple(movers), (g.succ(qg)[e], k2, *nxt)
            for i, a in enumerate(agents):
                if e not in a.observable:
                    r = k.succ(looks[i]).get(e)
                    if r is not None:
                        nxt = list(looks)
                        nxt[i] = r
                        yield e, (i + 1,), (qg, qk, *nxt)

    search = _Search((g.initial, k.initial) + (k.initial,) * n, moves)
    for key in search:
        qg, qk, looks = key[0], key[1], key[2:]
        for sigma, owners in ctrl:
            if sigma in g.succ(qg) and sigma not in k.succ(qk) and all(
                sigma in k.succ(looks[index[a.id]]) for a in owners
            ):
                ws = search.words(key, n + 1)
                by_agent = {a.id: ws[i + 1] for i, a in enumerate(agents)}
                w = _lookalike_witness(_condition_id("coobs", owners, ctx), ws[0], sigma, owners, by_agent)
                return Verdict(False, w, {"explored": search.explored})
    return Verdict(True, statistics={"explored": search.explored})


def check_disj_coobservable(k: Generator, ctx: ControlContext) -> Verdict:
    """Disjunctive coobservability (disablement must be ratified by every controller).

    Violation: ``s ∈ K̄`` with ``sσ ∈ K̄`` and, for every agent controlling σ, a
    lookalike ``s_i ∈ K̄`` with ``s_iσ ∈ L(G) ∖ K̄``.
    """
    k = _require_spec(k, ctx)
    if k.is_empty:
        return Verdict(True, statistics={"explored": 0})
    g = ctx.plant
    agents = ctx.agents
    n = len(agents)
    order = sorted(ctx.alphabet)
    ctrl = [(sigma, ctx.owners(sigma)) for sigma in sorted(ctx.controllable)]
    index = {a.id: i for i, a in enumerate(agents)}

    # key = (K-state of s, (plant state, K-state) of each agent's lookalike)
    def moves(key):
        qk, looks = key[0], key[1:]
        for e in order:
            k2 = k.succ(qk).get(e)
            if k2 is not None:
                nxt = list(looks)
                movers = [0]
                for i, a in enumerate(agents):
                    if e in a.observable:
                        pg, pk = looks[i]
                        r = k.succ(pk).get(e)
                        if r is None:
                            break
                        nxt[i] = (g.succ(pg)[e], r)
                        movers.append(i + 1)
                else:
                    yield e, tuple(movers), (k2, *nxt)
            for i, a in enumerate(agents):
                if e not in a.observable:
                    pg, pk = looks[i]
                    r = k.succ(pk).get(e)
                    if r is not None:
                        nxt = list(looks)
                        nxt[i] = (g.succ(pg)[e], r)
                        yield e, (i + 1,), (qk, *nxt)

    search = _Search((k.initial,) + ((g.initial, k.initial),) * n, moves)
    for key in search:
        qk, looks = key[0], key[1:]
        for sigma, owners in ctrl:
            if sigma not in k.succ(qk):
                continue
            if all(
                sigma in g.succ(looks[index[a.id]][0]) and sigma not in k.succ(looks[index[a.id]][1])
                for a in owners
            ):
                ws = search.words(key, n + 1)
                by_agent = {a.id: ws[i + 1] for i, a in enumerate(agents)}
                w = _lookalike_witness(_condition_id("disj", owners, ctx), ws[0], sigma, owners, by_agent)
                return Verdict(False, w, {"explored": search.explored})
    return Verdict(True, statistics={"explored": search.explored})


# -- normality ----------------------------------------------------------------


def _normal_search(k: Generator, ctx: ControlContext, a: AgentProfile) -> tuple[Optional[Witness], int]:
    if k.is_empty:
        return None, 0
    g = ctx.plant
    obs = a.observable
    order = sorted(ctx.alphabet)

    # key = (plant state of t, K-state of t, K-state of lookalike t'); t stays in K̄
    # until the step that leaves it, which is where a violation is reported.
    def moves(key):
        qg, qk, qs = key
        for e in order:
            k2 = k.succ(qk).get(e)
            s2 = k.succ(qs).get(e)
            if e in obs:
                if k2 is not None and s2 is not None:
                    yield e, (0, 1), (g.succ(qg)[e], k2, s2)
            else:
                if k2 is not None:
                    yield e, (0,), (g.succ(qg)[e], k2, qs)
                if s2 is not None:
                    yield e, (1,), (qg, qk, s2)

    search = _Search((g.initial, k.initial, k.initial), moves)
    for key in search:
        qg, qk, qs = key
        for e in order:
            if e in g.succ(qg) and e not in k.succ(qk):
                if e not in obs:
                    t, tp = search.words(key, 2)
                    return Witness("normality", t, e, s_prime=tp, channel=a.id), search.explored
                if e in k.succ(qs):
                    t, tp = search.words(key, 2)
                    return Witness("normality", t, e, s_prime=tp + (e,), channel=a.id), search.explored
    return None, search.explored


def check_normal(k: Generator, ctx: ControlContext, agent) -> Verdict:
    """Normality of K̄ w.r.t. L(G) and one agent's projection.

    Violation: ``sσ ∈ L(G) ∖ K̄`` whose projection equals that of some
    ``s' ∈ K̄`` (reported as ``s_prime``).
    """
    a = ctx.agent(agent)
    k = _require_spec(k, ctx)
    w, explored = _normal_search(k, ctx, a)
    return Verdict(w is None, w, {f"explored[{a.id}]": explored})


def check_conormal(k: Generator, ctx: ControlContext) -> Verdict:
    """Conormality: the union of the agents' inverse-projected closures, cut
    down to L(G), is K̄ itself; equivalently K̄ is normal on every channel."""
    k = _require_spec(k, ctx)
    stats = {}
    for a in ctx.agents:
        w, explored = _normal_search(k, ctx, a)
        stats[f"explored[{a.id}]"] = explored
        if w is not None:
            return Verdict(False, w, stats)
    return Verdict(True, statistics=stats)


def check_property(name: str, k: Generator, ctx: ControlContext, ambient: Optional[Generator] = None) -> Verdict:
    """Dispatch on a property name as used by the command line."""
    if name == "controllable":
        return check_controllable(k, ctx)
    if name == "lm-closed":
        return check_lm_closed(k, ctx)
    if name == "relcoobs":
        return check_rel_coobservable(LanguagePair(k, ambient), ctx)
    if name == "coobs-conj":
        return check_conj_coobservable(k, ctx)
    if name == "coobs-disj":
        return check_disj_coobservable(k, ctx)
    if name == "conormal":
        return check_conormal(k, ctx)
    kind, _, agent = name.partition(":")
    if kind == "relobs" and agent:
        found = relobs_witnesses(k, k if ambient is None else ambient, ctx, agent)
        return Verdict(not found, found[0] if found else None)
    if kind == "normal" and agent:
        return check_normal(k, ctx, agent)
    raise ValueError(f"unknown property {name!r}")


PROPERTIES = ("controllable", "lm-closed", "relobs:<agent>", "relcoobs",
              "coobs-conj", "coobs-disj", "normal:<agent>", "conormal")

__all__ = [
    "Witness", "Verdict", "check_controllable", "check_lm_closed", "relobs_witnesses",
    "check_rel_coobservable", "check_conj_coobservable", "check_disj_coobservable",
    "check_normal", "check_conormal", "check_property", "fmt_word", "LanguagePairError",
]
