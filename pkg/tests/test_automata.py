import pytest
from hypothesis import given
from hypothesis import strategies as st

from relcoobs.automata import (
    Generator,
    closure,
    delete_states,
    includes,
    inverse_project_selfloop,
    is_trim,
    language_equal,
    meet,
    minimize,
    project,
    project_word,
    sync,
    trim,
    union,
    words,
)
from relcoobs.errors import AlphabetMismatch
from relcoobs.fixtures import vehicle

from conftest import EVENTS, generators

DEPTH = 5


def marked_words(g, n=DEPTH):
    return set(words(g, n, marked_only=True))


def closed_words(g, n=DEPTH):
    return set(words(g, n))


def chain(events, marked_last=True):
    trans = [(i, e, i + 1) for i, e in enumerate(events)]
    return Generator.build(set(events), trans, 0, [len(events)] if marked_last else [])


# -- construction -------------------------------------------------------------


def test_build_rejects_nondeterminism():
    with pytest.raises(ValueError, match="nondeterministic"):
        Generator.build("ab", [(0, "a", 1), (0, "a", 2)], 0, [1])


def test_build_rejects_unknown_event():
    with pytest.raises(ValueError, match="not in alphabet"):
        Generator.build("a", [(0, "b", 1)], 0)


def test_build_rejects_undeclared_state():
    with pytest.raises(ValueError, match="undeclared"):
        Generator.build("a", [(0, "a", 7)], 0, states=[0, 1])


def test_build_drops_unreachable_states():
    g = Generator.build("ab", [(0, "a", 1), (5, "b", 6)], 0, [1, 6])
    assert g.n_states == 2 and g.n_transitions == 1


def test_empty_generator():
    g = Generator.empty("ab")
    assert g.is_empty and not g.defines(()) and not g.accepts(())
    assert list(words(g, 3)) == []


def test_event_names_are_strings():
    g = Generator.build(["13", "1"], [(0, "13", 1)], 0, [1])
    assert g.accepts(("13",)) and not g.defines(("1", "3"))


# -- products -----------------------------------------------------------------


def test_vehicle_product_size():
    g = sync(vehicle(1), vehicle(2))
    assert (g.n_states, g.n_transitions) == (36, 60)
    assert is_trim(g)


def test_sync_interleaves_private_events():
    g = sync(chain("a"), chain("b"))
    assert marked_words(g) == {("a", "b"), ("b", "a")}


def test_sync_shared_event_synchronizes():
    g = sync(chain("ab"), chain("cb"))
    assert marked_words(g) == {("a", "c", "b"), ("c", "a", "b")}


def test_meet_requires_equal_alphabets():
    with pytest.raises(AlphabetMismatch):
        meet(chain("a"), chain("b"))


@given(generators(), generators())
def test_meet_is_intersection(g1, g2):
    m = meet(g1, g2)
    assert marked_words(m) == marked_words(g1) & marked_words(g2)
    assert closed_words(m) == closed_words(g1) & closed_words(g2)


@given(generators(), generators())
def test_union_is_union(g1, g2):
    u = union(g1, g2)
    assert marked_words(u) == marked_words(g1) | marked_words(g2)
    assert closed_words(u) == closed_words(g1) | closed_words(g2)


# -- trim / minimize ----------------------------------------------------------


@given(generators())
def test_trim_preserves_marked_language(g):
    t = trim(g)
    assert is_trim(t)
    assert marked_words(t) == marked_words(g)
    assert closed_words(t) <= closed_words(g)
    # nonblocking: every defined word extends to a marked one
    assert all(any(m[: len(w)] == w for m in marked_words(t, DEPTH + t.n_states)) for w in closed_words(t, 3))


@given(generators())
def test_minimize_preserves_language_and_is_minimal(g):
    m = minimize(g)
    assert language_equal(m, g) and language_equal(m, trim(g), "closed")
    assert m.n_states <= trim(g).n_states
    assert minimize(m).n_states == m.n_states


def test_closure_marks_every_prefix():
    c = closure(chain("ab"))
    assert marked_words(c) == {(), ("a",), ("a", "b")}


def test_delete_states_removes_paths():
    g = delete_states(chain("ab"), {1})
    assert closed_words(g) == {()}


# -- inclusion ----------------------------------------------------------------


@given(generators(), generators(), st.sampled_from(["marked", "closed"]))
def test_inclusion_agrees_with_words(g1, g2, mode):
    inc = includes(g1, g2, mode)
    ref = marked_words if mode == "marked" else closed_words
    if inc:
        assert ref(g2) <= ref(g1)
    else:
        w = inc.counterexample
        member = (lambda g: g.accepts(w)) if mode == "marked" else (lambda g: g.defines(w))
        assert member(g2) and not member(g1)


def test_inclusion_counterexample_is_shortest():
    inc = includes(chain("ab"), union(chain("ab"), chain("c")))
    assert not inc and inc.counterexample == ("c",)


def test_language_equal_ignores_representation():
    loop = Generator.build("a", [(0, "a", 0)], 0, [0])
    unrolled = Generator.build("a", [(0, "a", 1), (1, "a", 0)], 0, [0, 1])
    assert language_equal(loop, unrolled)


# -- projection ---------------------------------------------------------------


def test_project_full_alphabet_is_identity():
    g = vehicle(1)
    assert language_equal(project(g, g.alphabet), g)


def test_project_onto_nothing_keeps_only_epsilon():
    p = project(vehicle(1), ())
    assert p.n_states == 1 and p.n_transitions == 0 and p.accepts(())


def test_project_vehicle_hides_section_event():
    g = vehicle(1)
    p = project(g, g.alphabet - {"13"})
    assert language_equal(p, chain(["11", "10", "15", "12"]).with_alphabet(g.alphabet - {"13"}))


def test_project_rejects_foreign_events():
    with pytest.raises(ValueError):
        project(vehicle(1), {"99"})


@given(generators(), st.sets(st.sampled_from(EVENTS)))
def test_projection_image_of_words(g, keep):
    p = project(g, keep)
    t = trim(g)
    for w in words(t, 4):
        assert p.defines(project_word(w, keep))
    for w in marked_words(g, 4):
        assert p.accepts(project_word(w, keep))


@given(generators(events=("a", "b")))
def test_inverse_projection_selfloops_new_events(g):
    h = inverse_project_selfloop(g, {"c"})
    for w in words(Generator.build("abc", [(0, e, 0) for e in "abc"], 0, [0]), 4):
        assert h.defines(w) == g.defines(project_word(w, "ab"))
        assert h.accepts(w) == g.accepts(project_word(w, "ab"))


def test_inverse_projection_rejects_overlap():
    with pytest.raises(ValueError):
        inverse_project_selfloop(chain("a"), {"a"})
