import math

import numpy as np
import pytest
from hypothesis import strategies as st

from eprbias.gaussian import apply_beamsplitter, apply_squeezer, vacuum_state

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, title, ok, detail=""):
        _ACCEPTANCE.append((number, title, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


gains = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)
etas = st.floats(min_value=0.02, max_value=0.98, allow_nan=False)


@st.composite
def pure_networks(draw, modes=None):
    """Vacuum pushed through a random sequence of squeezers and beamsplitters."""
    m = modes or draw(st.integers(min_value=2, max_value=4))
    state = vacuum_state(m)
    for _ in range(draw(st.integers(min_value=1, max_value=6))):
        if draw(st.booleans()):
            state = apply_squeezer(state, draw(st.integers(0, m - 1)), draw(gains))
        else:
            a = draw(st.integers(0, m - 1))
            b = draw(st.integers(0, m - 1).filter(lambda x: x != a))
            state = apply_beamsplitter(state, a, b, draw(etas))
    return state


def random_pure_state(rng: np.random.Generator, modes: int, depth: int = 6):
    state = vacuum_state(modes)
    for _ in range(depth):
        state = apply_squeezer(state, int(rng.integers(modes)), math.exp(rng.uniform(-2, 2)))
        a, b = rng.choice(modes, size=2, replace=False)
        state = apply_beamsplitter(state, int(a), int(b), float(rng.uniform(0.05, 0.95)))
    return state
