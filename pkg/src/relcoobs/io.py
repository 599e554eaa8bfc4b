"""JSON file formats for generators and agent profiles.

Automaton file::

    {"format_version": 1, "description": "...", "alphabet": [...],
     "states": [{"id": 0, "marked": false}, ...], "initial": 0,
     "transitions": [{"from": 0, "event": "a", "to": 1}, ...]}

State ids may be any JSON scalar; they are renumbered densely on parse.  An
empty generator has ``"initial": null`` and no states.  Agents file::

    {"format_version": 1,
     "agents": [{"id": "1", "observable": [...], "controllable": [...]}]}

The order of agents in the file is the order Algorithm 1 visits them.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Optional

from .automata import Generator
from .context import AgentProfile

FORMAT_VERSION = 1


class InputError(ValueError):
    """A file that does not parse or violates the format's invariants."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


def _check_version(data: Any, what: str) -> None:
    _require(isinstance(data, dict), f"{what}: top level must be an object")
    version = data.get("format_version", FORMAT_VERSION)
    _require(version == FORMAT_VERSION, f"{what}: unsupported format_version {version!r}")


def _events(value: Any, what: str) -> list[str]:
    _require(isinstance(value, list) and all(isinstance(e, str) for e in value),
             f"{what}: expected a list of event names")
    return value


def automaton_to_dict(g: Generator, description: Optional[str] = None) -> dict:
    out: dict[str, Any] = {"format_version": FORMAT_VERSION}
    if description:
        out["description"] = description
    out["alphabet"] = sorted(g.alphabet)
    out["states"] = [{"id": q, "marked": q in g.marked} for q in g.states()]
    out["initial"] = g.initial
    out["transitions"] = [{"from": q, "event": e, "to": r} for q, e, r in g.transitions()]
    return out


def automaton_from_dict(data: Any) -> Generator:
    _check_version(data, "automaton")
    alphabet = _events(data.get("alphabet"), "alphabet")
    _require(len(set(alphabet)) == len(alphabet), "alphabet: duplicate events")
    states = data.get("states", [])
    _require(isinstance(states, list), "states: expected a list")
    ids, marked = [], []
    for st in states:
        _require(isinstance(st, dict) and "id" in st, "states: each entry needs an id")
        sid = st["id"]
        _require(isinstance(sid, (str, int)) and not isinstance(sid, bool), f"state id {sid!r} must be a string or integer")
        _require(sid not in ids, f"duplicate state id {sid!r}")
        ids.append(sid)
        if st.get("marked", False):
            marked.append(sid)
    initial = data.get("initial")
    trans = data.get("transitions", [])
    _require(isinstance(trans, list), "transitions: expected a list")
    triples = []
    for t in trans:
        _require(isinstance(t, dict) and {"from", "event", "to"} <= set(t),
                 "transitions: each entry needs from, event and to")
        triples.append((t["from"], t["event"], t["to"]))
    if initial is None:
        _require(not triples, "a generator without an initial state cannot have transitions")
        return Generator.empty(alphabet)
    try:
        return Generator.build(alphabet, triples, initial, marked, states=ids)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def agents_to_dict(agents: Iterable[AgentProfile]) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "agents": [
            {"id": a.id, "observable": sorted(a.observable), "controllable": sorted(a.controllable)}
            for a in agents
        ],
    }


def agents_from_dict(data: Any) -> tuple[AgentProfile, ...]:
    _check_version(data, "agents")
    items = data.get("agents")
    _require(isinstance(items, list) and items, "agents: expected a nonempty list")
    out = []
    for item in items:
        _require(isinstance(item, dict) and "id" in item, "agents: each entry needs an id")
        out.append(AgentProfile(
            str(item["id"]),
            _events(item.get("observable", []), f"agent {item['id']} observable"),
            _events(item.get("controllable", []), f"agent {item['id']} controllable"),
        ))
    return tuple(out)


def dumps(data: dict) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def _load(path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc


def read_automaton(path) -> Generator:
    try:
        return automaton_from_dict(_load(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_agents(path) -> tuple[AgentProfile, ...]:
    try:
        return agents_from_dict(_load(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_automaton(path, g: Generator, description: Optional[str] = None) -> None:
    Path(path).write_text(dumps(automaton_to_dict(g, description)), encoding="utf-8")


def write_agents(path, agents: Iterable[AgentProfile]) -> None:
    Path(path).write_text(dumps(agents_to_dict(agents)), encoding="utf-8")
