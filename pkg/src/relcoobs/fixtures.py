"""Bundled example instances.

The three small examples share one plant over ``α, β, γ, σ``: from the initial
state 0 the plant branches on α/β/γ to states 1/2/3, and each branch may then
fire the controllable event σ (to states 4/5/6).  Every non-initial state is
marked.  The specs are subgraphs of this plant; states keep the plant's ids.

* FIG2: ``K1`` keeps βσ, ``K2`` keeps γσ.  Each is admissible if the two
  channels' consistency tests were OR-ed, but neither (nor their union) is
  relatively coobservable.
* FIG3: ``K`` keeps ασ and γσ but drops βσ.  Agent 1 confuses α with β, so
  relative coobservability fails, while disjunctive coobservability holds.
* FIG4: ``K`` drops σ everywhere.  Relatively coobservable (σ never enabled)
  but not conormal, because σ is unobservable to both agents.

The guideway instance has two vehicles, each a 6-state chain from station A
(state 0) to station B (state 5) through track sections 1-4.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Generator, delete_states, sync, trim
from .context import AgentProfile, ControlContext

ALPHA, BETA, GAMMA, SIGMA = "α", "β", "γ", "σ"
ABC = frozenset({ALPHA, BETA, GAMMA, SIGMA})

_BRANCHES = {ALPHA: (1, 4), BETA: (2, 5), GAMMA: (3, 6)}


@dataclass(frozen=True)
class Fixture:
    name: str
    ctx: ControlContext
    spec: Generator
    ambient: Generator
    description: str = ""


def abc_plant() -> Generator:
    trans = []
    for e, (mid, end) in _BRANCHES.items():
        trans += [(0, e, mid), (mid, SIGMA, end)]
    return Generator.build(ABC, trans, 0, marked=range(1, 7))


def abc_spec(with_sigma: set[str], marked: tuple[int, ...] = (1, 2, 3, 4, 5, 6)) -> Generator:
    """Subgraph of the ABC plant keeping σ only after the branches in ``with_sigma``."""
    trans = []
    for e, (mid, end) in _BRANCHES.items():
        trans.append((0, e, mid))
        if e in with_sigma:
            trans.append((mid, SIGMA, end))
    return Generator.build(ABC, trans, 0, marked=marked)


def abc_context() -> ControlContext:
    """Agent 1 sees γ and σ, agent 2 sees β and σ; both control σ."""
    return ControlContext(
        abc_plant(),
        (
            AgentProfile("1", {GAMMA, SIGMA}, {SIGMA}),
            AgentProfile("2", {BETA, SIGMA}, {SIGMA}),
        ),
    )


def fig4_context() -> ControlContext:
    """Both agents see α, β, γ but not σ; both control σ."""
    return ControlContext(
        abc_plant(),
        (
            AgentProfile("1", {ALPHA, BETA, GAMMA}, {SIGMA}),
            AgentProfile("2", {ALPHA, BETA, GAMMA}, {SIGMA}),
        ),
    )


def fig2() -> dict[str, Generator | ControlContext]:
    k1 = abc_spec({BETA})
    k2 = abc_spec({GAMMA})
    k = abc_spec({BETA, GAMMA})
    return {"ctx": abc_context(), "K1": k1, "K2": k2, "K": k, "C": k}


def fig3() -> Fixture:
    k = abc_spec({ALPHA, GAMMA})
    return Fixture(
        "fig3", abc_context(), k, k,
        "Disjunctively coobservable but not relatively coobservable: agent 1 "
        "cannot tell α from β, yet σ is allowed after α and forbidden after β.",
    )


def fig4() -> Fixture:
    k = abc_spec(set(), marked=(1, 2, 3))
    return Fixture(
        "fig4", fig4_context(), k, k,
        "Relatively coobservable but not conormal: σ is disabled after α, β "
        "and γ although no agent observes σ.",
    )


# -- guideway -----------------------------------------------------------------

VEHICLE_STEPS = ("1", "3", "0", "5", "2")  # event suffixes along the chain 0→1→…→5
VEHICLE_UNCONTROLLABLE = ("0", "2")


def vehicle(i: int) -> Generator:
    """Vehicle ``i``: station A (0), sections 1-4, station B (5, marked)."""
    events = [f"{i}{s}" for s in VEHICLE_STEPS]
    trans = [(q, e, q + 1) for q, e in enumerate(events)]
    return Generator.build(events, trans, 0, marked=[5])


def guideway_context() -> ControlContext:
    plant = sync(vehicle(1), vehicle(2))
    sigma = plant.alphabet
    return ControlContext(
        plant,
        (
            AgentProfile("1", sigma - {"13"}, {"11", "13", "23", "15"}),
            AgentProfile("2", sigma - {"23"}, {"21", "13", "23", "25"}),
        ),
    )


def mutual_exclusion_spec(ctx: ControlContext | None = None) -> Generator:
    """The plant with the four same-section states (j, j), j = 1..4, removed."""
    ctx = ctx or guideway_context()
    g = ctx.plant
    clash = {q for q in g.states() if g.labels[q][0] == g.labels[q][1] and 1 <= g.labels[q][0] <= 4}
    return trim(delete_states(g, clash))


def guideway() -> Fixture:
    ctx = guideway_context()
    k = mutual_exclusion_spec(ctx)
    return Fixture(
        "guideway", ctx, k, k,
        "Two vehicles share a four-section guideway; the specification forbids both "
        "vehicles occupying the same section.",
    )


def all_fixtures() -> dict[str, Fixture]:
    f2 = fig2()
    return {
        "fig2": Fixture("fig2", f2["ctx"], f2["K"], f2["C"], "Union K1 ∪ K2 of the two single-σ specs."),
        "fig2-k1": Fixture("fig2-k1", f2["ctx"], f2["K1"], f2["C"], "K1: σ allowed only after β; ambient K1 ∪ K2."),
        "fig2-k2": Fixture("fig2-k2", f2["ctx"], f2["K2"], f2["C"], "K2: σ allowed only after γ; ambient K1 ∪ K2."),
        "fig3": fig3(),
        "fig4": fig4(),
        "guideway": guideway(),
    }
