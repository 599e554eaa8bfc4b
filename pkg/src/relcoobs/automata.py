"""Deterministic partial finite-state generators and regular-language operations.

A :class:`Generator` is immutable.  Every constructor canonicalizes it: states
are dense integers numbered in breadth-first order from the initial state
(events visited in sorted order), so unreachable states never exist and two
constructions of the same reachable structure compare equal.  The empty
language is the generator with no states and ``initial is None``.

Words are tuples of event names.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import AlphabetMismatch

Word = tuple[str, ...]

_BOTTOM = -1  # "outside the closure" marker used by product trackers


@dataclass(frozen=True)
class Generator:
    alphabet: frozenset[str]
    delta: tuple[tuple[tuple[str, int], ...], ...]
    initial: Optional[int]
    marked: frozenset[int]
    labels: tuple = field(default=(), compare=False, repr=False)
    _succ: tuple = field(default=(), init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_succ", tuple(dict(row) for row in self.delta))

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, alphabet: Iterable[str] = ()) -> "Generator":
        return cls(frozenset(alphabet), (), None, frozenset())

    @classmethod
    def explore(
        cls,
        alphabet: Iterable[str],
        start: Hashable,
        step: Callable[[Hashable, str], Optional[Hashable]],
        is_marked: Callable[[Hashable], bool],
        events: Optional[Sequence[str]] = None,
    ) -> "Generator":
        """Breadth-first construction from an implicit transition function.

        ``step(key, event)`` returns the successor key or ``None``.  Keys end up
        in ``labels``.  ``events`` restricts which events are tried (defaults to
        the whole alphabet); ``start=None`` yields the empty generator.
        """
        alphabet = frozenset(alphabet)
        if start is None:
            return cls.empty(alphabet)
        order = sorted(alphabet if events is None else events)
        index = {start: 0}
        keys = [start]
        rows: list[tuple[tuple[str, int], ...]] = []
        queue = deque([start])
        while queue:
            key = queue.popleft()
            row = []
            for e in order:
                nxt = step(key, e)
                if nxt is None:
                    continue
                j = index.get(nxt)
                if j is None:
                    j = index[nxt] = len(keys)
                    keys.append(nxt)
                    queue.append(nxt)
                row.append((e, j))
            rows.append(tuple(row))
        marked = frozenset(i for i, k in enumerate(keys) if is_marked(k))
        return cls(alphabet, tuple(rows), 0, marked, tuple(keys))

    @classmethod
    def build(
        cls,
        alphabet: Iterable[str],
        transitions: Iterable[tuple[Hashable, str, Hashable]],
        initial: Hashable,
        marked: Iterable[Hashable] = (),
        states: Optional[Iterable[Hashable]] = None,
    ) -> "Generator":
        """Build from explicit ``(source, event, target)`` triples.

        Raises ``ValueError`` on nondeterminism or references to unknown
        states/events.  Unreachable states are dropped.
        """
        alphabet = frozenset(alphabet)
        table: dict[Hashable, dict[str, Hashable]] = {}
        known = None if states is None else set(states)
        for src, e, dst in transitions:
            if e not in alphabet:
                raise ValueError(f"event {e!r} not in alphabet")
            if known is not None and (src not in known or dst not in known):
                raise ValueError(f"transition {src!r} -{e}-> {dst!r} uses an undeclared state")
            row = table.setdefault(src, {})
            if e in row and row[e] != dst:
                raise ValueError(f"nondeterministic: {src!r} has two {e!r}-successors")
            row[e] = dst
        marked = set(marked)
        if known is not None:
            if initial is not None and initial not in known:
                raise ValueError(f"initial state {initial!r} not declared")
            if not marked <= known:
                raise ValueError("marked states must be declared states")
        return cls.explore(
            alphabet,
            initial,
            lambda q, e: table.get(q, {}).get(e),
            lambda q: q in marked,
        )

    # -- queries ------------------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def n_transitions(self) -> int:
        return sum(len(row) for row in self.delta)

    @property
    def size(self) -> int:
        return self.n_states + self.n_transitions

    @property
    def is_empty(self) -> bool:
        return self.initial is None

    def states(self) -> range:
        return range(len(self.delta))

    def succ(self, q: int) -> Mapping[str, int]:
        return self._succ[q]

    def step(self, q: Optional[int], e: str) -> Optional[int]:
        if q is None or q == _BOTTOM:
            return None
        return self._succ[q].get(e)

    def transitions(self) -> Iterator[tuple[int, str, int]]:
        for q, row in enumerate(self.delta):
            for e, r in row:
                yield q, e, r

    def run(self, word: Iterable[str]) -> Optional[int]:
        q = self.initial
        for e in word:
            if q is None:
                return None
            q = self._succ[q].get(e)
        return q

    def defines(self, word: Iterable[str]) -> bool:
        """Membership in the closed behavior."""
        return self.run(word) is not None

    def accepts(self, word: Iterable[str]) -> bool:
        """Membership in the marked behavior."""
        q = self.run(word)
        return q is not None and q in self.marked

    def with_alphabet(self, alphabet: Iterable[str]) -> "Generator":
        alphabet = frozenset(alphabet)
        if not self.alphabet <= alphabet:
            raise AlphabetMismatch("new alphabet must contain the old one")
        return Generator(alphabet, self.delta, self.initial, self.marked, self.labels)

    def relabel(self) -> "Generator":
        """Drop the origin-label side table (labels become the dense ids)."""
        return Generator(self.alphabet, self.delta, self.initial, self.marked, tuple(self.states()))

    def __repr__(self) -> str:
        return (
            f"Generator(states={self.n_states}, transitions={self.n_transitions}, "
            f"marked={len(self.marked)}, alphabet={sorted(self.alphabet)})"
        )


# -- helpers over words -------------------------------------------------------


def project_word(word: Iterable[str], observable: Iterable[str]) -> Word:
    """Natural projection of a single word: erase events outside ``observable``."""
    observable = frozenset(observable)
    return tuple(e for e in word if e in observable)


def words(g: Generator, max_len: int, marked_only: bool = False) -> Iterator[Word]:
    """Enumerate the closed (or marked) behavior of ``g`` up to ``max_len``, shortest first."""
    if g.is_empty:
        return
    layer = [((), g.initial)]
    for depth in range(max_len + 1):
        nxt = []
        for w, q in layer:
            if not marked_only or q in g.marked:
                yield w
            if depth < max_len:
                for e, r in g.delta[q]:
                    nxt.append((w + (e,), r))
        layer = nxt


# -- structural operations ----------------------------------------------------


def _inherit_labels(new: Generator, origin: Generator) -> Generator:
    # ``new`` was explored over ``origin``'s state ids; map its labels back.
    if not origin.labels or new.is_empty:
        return new
    return Generator(
        new.alphabet, new.delta, new.initial, new.marked,
        tuple(origin.labels[k] for k in new.labels),
    )


def _restrict(g: Generator, keep: set[int]) -> Generator:
    if g.is_empty or g.initial not in keep:
        return Generator.empty(g.alphabet)

    def step(q, e):
        r = g.succ(q).get(e)
        return r if r in keep else None

    return _inherit_labels(
        Generator.explore(g.alphabet, g.initial, step, lambda q: q in g.marked), g
    )


def coreachable(g: Generator) -> set[int]:
    """States from which some marked state can be reached."""
    preds: list[list[int]] = [[] for _ in g.states()]
    for q, _, r in g.transitions():
        preds[r].append(q)
    seen = set(g.marked)
    stack = list(seen)
    while stack:
        r = stack.pop()
        for q in preds[r]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def trim(g: Generator) -> Generator:
    """Keep states that are reachable and coreachable; the marked behavior is unchanged."""
    if g.is_empty:
        return g
    live = coreachable(g)
    if len(live) == g.n_states:
        return g
    return _restrict(g, live)


def is_trim(g: Generator) -> bool:
    return g.is_empty or len(coreachable(g)) == g.n_states


def delete_transitions(g: Generator, removed: set[tuple[int, str]]) -> Generator:
    """Drop the given ``(state, event)`` transitions, then prune unreachable states."""
    if g.is_empty or not removed:
        return g
    out = Generator.explore(
        g.alphabet,
        g.initial,
        lambda q, e: None if (q, e) in removed else g.succ(q).get(e),
        lambda q: q in g.marked,
    )
    return _inherit_labels(out, g)


def delete_states(g: Generator, removed: set[int]) -> Generator:
    return _restrict(g, set(g.states()) - set(removed))


def sync(g1: Generator, g2: Generator) -> Generator:
    """Synchronous product: shared events move jointly, private events interleave."""
    alphabet = g1.alphabet | g2.alphabet
    if g1.is_empty or g2.is_empty:
        return Generator.empty(alphabet)
    only1 = g1.alphabet - g2.alphabet
    only2 = g2.alphabet - g1.alphabet

    def step(key, e):
        a, b = key
        if e in only1:
            a2 = g1.succ(a).get(e)
            return None if a2 is None else (a2, b)
        if e in only2:
            b2 = g2.succ(b).get(e)
            return None if b2 is None else (a, b2)
        a2, b2 = g1.succ(a).get(e), g2.succ(b).get(e)
        return None if a2 is None or b2 is None else (a2, b2)

    return Generator.explore(
        alphabet,
        (g1.initial, g2.initial),
        step,
        lambda k: k[0] in g1.marked and k[1] in g2.marked,
    )


def meet(g1: Generator, g2: Generator) -> Generator:
    """Product over a common alphabet: L_m = L_m(g1) ∩ L_m(g2), L = L(g1) ∩ L(g2)."""
    if g1.alphabet != g2.alphabet:
        raise AlphabetMismatch(
            f"meet needs equal alphabets, got {sorted(g1.alphabet)} and {sorted(g2.alphabet)}"
        )
    return sync(g1, g2)


def union(g1: Generator, g2: Generator) -> Generator:
    """Deterministic recognizer of L_m(g1) ∪ L_m(g2) (closed behavior L(g1) ∪ L(g2))."""
    alphabet = g1.alphabet | g2.alphabet
    if g1.is_empty:
        return g2.with_alphabet(alphabet)
    if g2.is_empty:
        return g1.with_alphabet(alphabet)

    def step(key, e):
        a, b = g1.step(key[0], e), g2.step(key[1], e)
        if a is None and b is None:
            return None
        return (_BOTTOM if a is None else a, _BOTTOM if b is None else b)

    return Generator.explore(
        alphabet,
        (g1.initial, g2.initial),
        step,
        lambda k: k[0] in g1.marked or k[1] in g2.marked,
    )


def unobservable_reach(g: Generator, cell: Iterable[int], observable: frozenset[str]) -> frozenset[int]:
    seen = set(cell)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for e, r in g.delta[q]:
            if e not in observable and r not in seen:
                seen.add(r)
                stack.append(r)
    return frozenset(seen)


def project(g: Generator, observable: Iterable[str]) -> Generator:
    """Natural projection onto ``observable`` by erasure plus subset construction.

    L(result) = P(L(g)) and L_m(result) = P(L_m(g)); the result's alphabet is
    ``observable``.
    """
    observable = frozenset(observable)
    if not observable <= g.alphabet:
        raise AlphabetMismatch(f"observable events {sorted(observable - g.alphabet)} not in alphabet")
    if g.is_empty:
        return Generator.empty(observable)

    def step(cell, e):
        nxt = {r for q in cell if (r := g.succ(q).get(e)) is not None}
        return unobservable_reach(g, nxt, observable) if nxt else None

    return Generator.explore(
        observable,
        unobservable_reach(g, [g.initial], observable),
        step,
        lambda cell: not cell.isdisjoint(g.marked),
    )


def inverse_project_selfloop(g: Generator, silent: Iterable[str]) -> Generator:
    """Inverse projection: selfloop every ``silent`` event at every state."""
    silent = frozenset(silent)
    if silent & g.alphabet:
        raise AlphabetMismatch(f"silent events {sorted(silent & g.alphabet)} already in alphabet")
    rows = tuple(
        tuple(sorted(row + tuple((e, q) for e in silent)))
        for q, row in enumerate(g.delta)
    )
    return Generator(g.alphabet | silent, rows, g.initial, g.marked, g.labels)


def closure(g: Generator) -> Generator:
    """Recognizer whose marked language is the prefix closure of L_m(g)."""
    t = trim(g)
    return Generator(t.alphabet, t.delta, t.initial, frozenset(t.states()), t.labels)


def minimize(g: Generator) -> Generator:
    """Minimal trim recognizer of L_m(g) (partition refinement on the trim form)."""
    t = trim(g)
    if t.is_empty:
        return t
    block = [1 if q in t.marked else 0 for q in t.states()]
    n_blocks = len(set(block))
    while True:
        sigs: dict[tuple, int] = {}
        new = []
        for q in t.states():
            sig = (block[q], tuple((e, block[r]) for e, r in t.delta[q]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == n_blocks:
            break
        block, n_blocks = new, len(sigs)
    block = new
    rep: dict[int, int] = {}
    for q in t.states():
        rep.setdefault(block[q], q)
    return Generator.explore(
        t.alphabet,
        block[t.initial],
        lambda b, e: (lambda r: None if r is None else block[r])(t.succ(rep[b]).get(e)),
        lambda b: rep[b] in t.marked,
    )


# -- language comparison ------------------------------------------------------


@dataclass(frozen=True)
class Inclusion:
    """Outcome of an inclusion test; truthy iff the inclusion holds."""

    holds: bool
    counterexample: Optional[Word] = None

    def __bool__(self) -> bool:
        return self.holds


def includes(g1: Generator, g2: Generator, mode: str = "marked") -> Inclusion:
    """Decide L(g2) ⊆ L(g1) (``mode="closed"``) or L_m(g2) ⊆ L_m(g1) (``"marked"``).

    On failure the counterexample is a shortest word of the difference.
    Events missing from one alphabet are simply undefined there.
    """
    if mode not in ("closed", "marked"):
        raise ValueError(f"mode must be 'closed' or 'marked', not {mode!r}")
    if g2.is_empty:
        return Inclusion(True)
    order = sorted(g1.alphabet | g2.alphabet)
    start = (g2.initial, _BOTTOM if g1.is_empty else g1.initial)
    parent: dict[tuple[int, int], Optional[tuple[tuple[int, int], str]]] = {start: None}
    queue = deque([start])

    def path(key):
        out = []
        while parent[key] is not None:
            key, e = parent[key]
            out.append(e)
        return tuple(reversed(out))

    while queue:
        key = queue.popleft()
        q2, q1 = key
        if mode == "closed" and q1 == _BOTTOM:
            return Inclusion(False, path(key))
        if mode == "marked" and q2 in g2.marked and (q1 == _BOTTOM or q1 not in g1.marked):
            return Inclusion(False, path(key))
        for e in order:
            r2 = g2.succ(q2).get(e)
            if r2 is None:
                continue
            r1 = g1.step(q1, e)
            nxt = (r2, _BOTTOM if r1 is None else r1)
            if nxt not in parent:
                parent[nxt] = (key, e)
                queue.append(nxt)
    return Inclusion(True)


def language_equal(g1: Generator, g2: Generator, mode: str = "marked") -> bool:
    return bool(includes(g1, g2, mode)) and bool(includes(g2, g1, mode))
