"""Command-line entry point.

Exit codes: 0 when the property holds or the command succeeded, 1 when a
property fails (a witness is printed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import io
from .automata import Generator, includes, project
from .context import ControlContext, LanguagePair
from .errors import NotRelativelyCoobservable
from .fixtures import all_fixtures
from .oracle import InstanceSpec, random_instance, write_instance
from .synthesize import (
    PassRecord,
    SYNTH_ALGORITHMS,
    algorithm1_sup_rel_coobs,
    algorithm2_sup_rcc,
    extract_local_supervisor,
    recheck_for,
    sup_conormal,
    sup_conormal_controllable,
    sup_normal,
    sup_rel_obs,
    supcon,
)
from .verify import PROPERTIES, check_property, fmt_word

SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "exit_code"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["check", "synth", "extract", "project", "compare", "fixtures", "random"]},
        "exit_code": {"enum": [0, 1, 2]},
        "error": {"type": "string"},
        "property": {"type": "string"},
        "algorithm": {"type": "string"},
        "holds": {"type": "boolean"},
        "witness": {
            "type": ["object", "null"],
            "required": ["condition", "s", "event"],
            "properties": {
                "condition": {"type": "string"},
                "s": {"type": "array", "items": {"type": "string"}},
                "event": {"type": ["string", "null"]},
                "channel": {"type": ["string", "null"]},
            },
        },
        "statistics": {"type": "object"},
        "result": {
            "type": "object",
            "required": ["states", "transitions", "empty"],
            "properties": {
                "states": {"type": "integer", "minimum": 0},
                "transitions": {"type": "integer", "minimum": 0},
                "empty": {"type": "boolean"},
            },
        },
        "passes": {"type": ["integer", "null"]},
        "iterations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["stage", "j", "states", "transitions"],
            },
        },
        "recheck": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "seconds": {"type": "number", "minimum": 0},
        "output": {"type": "string"},
    },
}


class _Fail(Exception):
    """Input error surfaced as exit code 2."""


def _context(args) -> ControlContext:
    return ControlContext(io.read_automaton(args.plant), io.read_agents(args.agents))


def _ambient(args) -> Optional[Generator]:
    return io.read_automaton(args.ambient) if getattr(args, "ambient", None) else None


def _emit(args, report: dict, lines: list[str]) -> int:
    report = {"schema_version": SCHEMA_VERSION, **report}
    if getattr(args, "json", False):
        print(json.dumps(report, ensure_ascii=False, indent=2))
    else:
        for line in lines:
            print(line)
    return report["exit_code"]


# -- check --------------------------------------------------------------------


def cmd_check(args) -> int:
    ctx = _context(args)
    k = io.read_automaton(args.spec)
    amb = _ambient(args)
    LanguagePair(k, amb).validate(ctx)
    verdict = check_property(args.property, k, ctx, amb)
    code = 0 if verdict.holds else 1
    lines = [f"{args.property}: {'HOLDS' if verdict.holds else 'FAILS'}"]
    if verdict.witness is not None:
        w = verdict.witness
        lines.append(f"witness ({w.condition}): {w.describe()}")
        for aid, word in sorted(w.lookalikes.items()):
            lines.append(f"  lookalike[{aid}] = {fmt_word(word)}")
    report = {"command": "check", "exit_code": code, "property": args.property, **verdict.to_dict()}
    return _emit(args, report, lines)


# -- synth --------------------------------------------------------------------


def _synthesize(name: str, k: Generator, ctx: ControlContext, amb: Optional[Generator]):
    """Run ``name``; returns (result, pass records, pass count or None)."""
    kind, _, agent = name.partition(":")
    if name == "supcon":
        return supcon(k, ctx), (), None
    if kind == "sup-normal" and agent:
        return sup_normal(k, ctx, agent), (), None
    if name == "sup-conormal":
        return sup_conormal(k, ctx), (), None
    if name == "sup-conormal-controllable":
        trace: list[PassRecord] = []
        res = sup_conormal_controllable(k, ctx, trace)
        return res, tuple(trace), sum(r.stage == "K" for r in trace)
    if kind == "sup-relobs" and agent:
        return sup_rel_obs(k, k if amb is None else amb, ctx, agent), (), None
    if name == "sup-relcoobs":
        rep = algorithm1_sup_rel_coobs(k, amb, ctx, recheck=False)
        return rep.result, rep.iterations, rep.passes
    if name == "sup-rcc":
        rep = algorithm2_sup_rcc(k, ctx, recheck=False)
        return rep.result, rep.iterations, rep.passes
    raise _Fail(f"unknown algorithm {name!r}; choose from {', '.join(SYNTH_ALGORITHMS)}")


def cmd_synth(args) -> int:
    ctx = _context(args)
    k = io.read_automaton(args.spec)
    amb = _ambient(args)
    LanguagePair(k, amb).validate(ctx)
    t0 = time.perf_counter()
    result, records, passes = _synthesize(args.algorithm, k, ctx, amb)
    seconds = time.perf_counter() - t0
    verdicts = recheck_for(args.algorithm, result, ctx, k if amb is None else amb)
    io.write_automaton(args.out, result, f"{args.algorithm} result")
    code = 0 if all(v.holds for v in verdicts.values()) else 1
    lines = []
    if result.is_empty:
        lines.append("EMPTY RESULT: no nonempty sublanguage satisfies the requirements")
    lines.append(f"{args.algorithm}: {result.n_states} states, {result.n_transitions} transitions"
                 + (f", {passes} passes" if passes is not None else "") + f" ({seconds:.3f} s)")
    if args.trace:
        for r in records:
            step = f"j={r.j}" + (f" i={r.i}" if r.i is not None else "")
            lines.append(f"  {r.stage:<4} {step:<10} states={r.states} transitions={r.transitions}")
    for name, v in verdicts.items():
        lines.append(f"recheck {name}: {v.holds}" + ("" if v.holds else f" ({v.witness.describe()})"))
    lines.append(f"wrote {args.out}")
    report = {
        "command": "synth",
        "exit_code": code,
        "algorithm": args.algorithm,
        "result": {"states": result.n_states, "transitions": result.n_transitions, "empty": result.is_empty},
        "passes": passes,
        "iterations": [r.to_dict() for r in records],
        "recheck": {n: v.holds for n, v in verdicts.items()},
        "seconds": seconds,
        "output": str(args.out),
    }
    return _emit(args, report, lines)


# -- extract / project / compare ----------------------------------------------


def cmd_extract(args) -> int:
    ctx = _context(args)
    result = io.read_automaton(args.result)
    ctx.agent(args.agent)
    try:
        sup = extract_local_supervisor(result, ctx, args.agent)
    except NotRelativelyCoobservable as exc:
        report = {"command": "extract", "exit_code": 1, "error": str(exc),
                  "witness": exc.witness.to_dict() if exc.witness else None}
        return _emit(args, report, [f"cannot extract: {exc}"])
    io.write_automaton(args.out, sup, f"local supervisor of agent {args.agent}")
    report = {"command": "extract", "exit_code": 0, "output": str(args.out),
              "result": {"states": sup.n_states, "transitions": sup.n_transitions, "empty": sup.is_empty}}
    return _emit(args, report, [f"supervisor {args.agent}: {sup.n_states} states, "
                                f"{sup.n_transitions} transitions; wrote {args.out}"])


def cmd_project(args) -> int:
    g = io.read_automaton(args.input)
    keep = frozenset(args.keep)
    unknown = sorted(keep - g.alphabet)
    if unknown:
        raise _Fail(f"unknown events: {unknown}")
    out = project(g, keep).relabel()
    io.write_automaton(args.out, out, f"projection onto {sorted(keep)}")
    report = {"command": "project", "exit_code": 0, "output": str(args.out),
              "result": {"states": out.n_states, "transitions": out.n_transitions, "empty": out.is_empty}}
    return _emit(args, report, [f"projection: {out.n_states} states, {out.n_transitions} transitions; "
                                f"wrote {args.out}"])


def cmd_compare(args) -> int:
    left = io.read_automaton(args.left)
    right = io.read_automaton(args.right)
    fwd = includes(right, left, args.mode)
    back = includes(left, right, args.mode)
    lines = [f"left ⊆ right ({args.mode}): {fwd.holds}"
             + ("" if fwd.holds else f", e.g. {fmt_word(fwd.counterexample)} only in left")]
    if fwd.holds:
        lines.append("strict inclusion" if not back.holds else "languages are equal")
        if not back.holds:
            lines.append(f"separating string: {fmt_word(back.counterexample)}")
    report = {
        "command": "compare", "exit_code": 0 if fwd.holds else 1, "holds": fwd.holds,
        "statistics": {
            "mode": args.mode,
            "strict": fwd.holds and not back.holds,
            "left_only": None if fwd.holds else list(fwd.counterexample),
            "right_only": None if back.holds else list(back.counterexample),
        },
    }
    return _emit(args, report, lines)


# -- fixtures / random --------------------------------------------------------


def cmd_fixtures(args) -> int:
    out = Path(args.outdir)
    written = []
    for name, fx in all_fixtures().items():
        d = out / name
        d.mkdir(parents=True, exist_ok=True)
        io.write_automaton(d / "plant.json", fx.ctx.plant, f"{name}: plant")
        io.write_automaton(d / "spec.json", fx.spec, f"{name}: {fx.description}")
        io.write_automaton(d / "ambient.json", fx.ambient, f"{name}: ambient")
        io.write_agents(d / "agents.json", fx.ctx.agents)
        written.append(str(d))
    return _emit(args, {"command": "fixtures", "exit_code": 0, "output": str(out)},
                 [f"wrote {w}" for w in written])


def cmd_random(args) -> int:
    spec = InstanceSpec(max_states=args.max_states, max_events=args.max_events,
                        agent_count=args.agents_count, seed=args.seed)
    ctx, pair = random_instance(spec)
    write_instance(ctx, pair, args.out)
    return _emit(args, {"command": "random", "exit_code": 0, "output": str(args.out)},
                 [f"seed {args.seed}: plant {ctx.plant.n_states} states; wrote {args.out}"])


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relcoobs", description="Decentralized supervisory control toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def instance_args(sp, spec=True):
        sp.add_argument("--plant", required=True, help="plant automaton file")
        if spec:
            sp.add_argument("--spec", required=True, help="specification automaton file")
        sp.add_argument("--agents", required=True, help="agents file")
        sp.add_argument("--json", action="store_true", help="print a JSON report")

    c = sub.add_parser("check", help="decide a property of a specification")
    c.add_argument("property", help=" | ".join(PROPERTIES))
    instance_args(c)
    c.add_argument("--ambient", help="ambient automaton file (defaults to the specification)")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("synth", help="compute a supremal sublanguage")
    s.add_argument("algorithm", help=" | ".join(SYNTH_ALGORITHMS))
    instance_args(s)
    s.add_argument("--ambient", help="ambient automaton file (defaults to the specification)")
    s.add_argument("--out", required=True, help="where to write the result")
    s.add_argument("--trace", action="store_true", help="print per-pass sizes")
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("extract", help="derive an agent's local supervisor from a result")
    e.add_argument("--result", required=True)
    instance_args(e, spec=False)
    e.add_argument("--agent", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_extract)

    pr = sub.add_parser("project", help="natural projection of an automaton")
    pr.add_argument("--input", required=True)
    pr.add_argument("--keep", nargs="*", default=[], help="events to keep")
    pr.add_argument("--out", required=True)
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(func=cmd_project)

    cm = sub.add_parser("compare", help="test language inclusion of LEFT in RIGHT")
    cm.add_argument("left")
    cm.add_argument("right")
    cm.add_argument("--mode", choices=("closed", "marked"), default="closed")
    cm.add_argument("--json", action="store_true")
    cm.set_defaults(func=cmd_compare)

    f = sub.add_parser("fixtures", help="write the bundled instances as files")
    f.add_argument("outdir")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_fixtures)

    r = sub.add_parser("random", help="write a seeded random instance")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-states", type=int, default=InstanceSpec.max_states)
    r.add_argument("--max-events", type=int, default=InstanceSpec.max_events)
    r.add_argument("--agents-count", type=int, default=InstanceSpec.agent_count)
    r.add_argument("--out", required=True)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_random)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (_Fail, ValueError, OSError) as exc:
        if getattr(args, "json", False):
            print(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command,
                              "exit_code": 2, "error": str(exc)}, ensure_ascii=False))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
