import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from relcoobs.automata import Generator
from relcoobs.oracle import InstanceSpec, random_instance

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EVENTS = ("a", "b", "c")


@st.composite
def generators(draw, events=EVENTS, max_states=5):
    """Small deterministic generators over ``events`` (possibly blocking or empty)."""
    n = draw(st.integers(1, max_states))
    trans = []
    for q in range(n):
        for e in events:
            target = draw(st.none() | st.integers(0, n - 1))
            if target is not None:
                trans.append((q, e, target))
    marked = draw(st.sets(st.integers(0, n - 1)))
    return Generator.build(events, trans, 0, marked)


seeds = st.integers(0, 2**32 - 1)
instances = seeds.map(lambda s: random_instance(InstanceSpec(seed=s)))
