"""Agents, the decentralized control context, and (spec, ambient) pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .automata import Generator, includes, is_trim
from .errors import AlphabetMismatch, LanguagePairError, UnknownAgent


@dataclass(frozen=True)
class AgentProfile:
    """One local supervisor: the events it observes and the events it may disable."""

    id: str
    observable: frozenset[str]
    controllable: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "observable", frozenset(self.observable))
        object.__setattr__(self, "controllable", frozenset(self.controllable))


@dataclass(frozen=True)
class ControlContext:
    plant: Generator
    agents: tuple[AgentProfile, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))
        ids = [a.id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate agent ids: {ids}")
        sigma = self.plant.alphabet
        for a in self.agents:
            if not a.observable <= sigma or not a.controllable <= sigma:
                extra = sorted((a.observable | a.controllable) - sigma)
                raise AlphabetMismatch(f"agent {a.id} refers to events outside the plant: {extra}")
        if self.plant.is_empty or not is_trim(self.plant):
            raise ValueError("plant must be nonempty and nonblocking")

    @property
    def alphabet(self) -> frozenset[str]:
        return self.plant.alphabet

    @property
    def controllable(self) -> frozenset[str]:
        return frozenset().union(*(a.controllable for a in self.agents))

    @property
    def uncontrollable(self) -> frozenset[str]:
        return self.alphabet - self.controllable

    def owners(self, event: str) -> tuple[AgentProfile, ...]:
        """Agents that control ``event``, in agent order."""
        return tuple(a for a in self.agents if event in a.controllable)

    @property
    def shared_controllable(self) -> frozenset[str]:
        return frozenset(e for e in self.controllable if len(self.owners(e)) > 1)

    def agent(self, agent_id) -> AgentProfile:
        for a in self.agents:
            if a.id == str(agent_id):
                return a
        raise UnknownAgent(f"no agent with id {agent_id!r}; known: {[a.id for a in self.agents]}")

    def require_alphabet(self, *gens: Generator) -> None:
        for g in gens:
            if g.alphabet != self.alphabet:
                raise AlphabetMismatch(
                    f"generator alphabet {sorted(g.alphabet)} differs from plant alphabet {sorted(self.alphabet)}"
                )

    def require_sublanguage(self, k: Generator, what: str = "spec") -> None:
        self.require_alphabet(k)
        inc = includes(self.plant, k, "marked")
        if not inc:
            raise LanguagePairError(f"{what} is not contained in L_m(plant); e.g. {inc.counterexample}")

    def permuted(self, order: Iterable[int]) -> "ControlContext":
        return ControlContext(self.plant, tuple(self.agents[i] for i in order))


@dataclass(frozen=True)
class LanguagePair:
    """A specification K with its ambient language C (C defaults to K)."""

    spec: Generator
    ambient: Optional[Generator] = field(default=None)

    @property
    def effective_ambient(self) -> Generator:
        return self.spec if self.ambient is None else self.ambient

    def validate(self, ctx: ControlContext) -> None:
        """Raise :class:`LanguagePairError` unless L_m(K) ⊆ L_m(C) ⊆ L_m(plant)."""
        c = self.effective_ambient
        ctx.require_alphabet(self.spec, c)
        inc = includes(c, self.spec, "marked")
        if not inc:
            raise LanguagePairError(f"spec is not contained in ambient; e.g. {inc.counterexample}")
        ctx.require_sublanguage(c, "ambient")
