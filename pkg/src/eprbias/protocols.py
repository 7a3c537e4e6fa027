"""Entangled resources built from squeezed inputs, and local-OPA symmetrization.

Inputs are parameterised by their quadrature variances.  A pure input has
``V+ V- = 1`` and is made by squeezing vacuum with gain ``V+``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidArgument
from .gaussian import (
    EQ_TOL,
    GaussianState,
    SymplecticOp,
    apply_squeezer,
    beamsplitter_op,
    phase_flip_op,
    squeezer_op,
    vacuum_state,
)

# GHZ output quadratures as combinations of the three inputs (rows: GHZ1..3)
GHZ_COEFFICIENTS = np.array(
    [
        [math.sqrt(1 / 3), -math.sqrt(2 / 3), 0.0],
        [math.sqrt(1 / 3), math.sqrt(1 / 6), math.sqrt(1 / 2)],
        [math.sqrt(1 / 3), math.sqrt(1 / 6), -math.sqrt(1 / 2)],
    ]
)
GHZ_COEFFICIENTS.setflags(write=False)


def _positive(name: str, value: float) -> float:
    v = float(value)
    if not math.isfinite(v) or v <= 0:
        raise InvalidArgument(f"{name} must be finite and > 0, got {value!r}")
    return v


def _check_pure(label: str, v_plus: float, v_minus: float) -> None:
    _positive(f"{label} V+", v_plus)
    _positive(f"{label} V-", v_minus)
    if abs(v_plus * v_minus - 1.0) > EQ_TOL:
        raise InvalidArgument(f"input {label} is not minimum uncertainty: V+ V- = {v_plus * v_minus!r}")


@dataclass(frozen=True)
class EprRecipe:
    """Two pure squeezed inputs mixed on a 50/50 beamsplitter."""

    v1_plus: float
    v1_minus: float
    v2_plus: float
    v2_minus: float

    def __post_init__(self):
        _check_pure("1", self.v1_plus, self.v1_minus)
        _check_pure("2", self.v2_plus, self.v2_minus)

    @classmethod
    def from_amplitude(cls, v1_plus: float, v2_plus: float) -> "EprRecipe":
        v1, v2 = _positive("v1_plus", v1_plus), _positive("v2_plus", v2_plus)
        return cls(v1, 1.0 / v1, v2, 1.0 / v2)

    @classmethod
    def single_squeezer(cls, s: float) -> "EprRecipe":
        """Input 1 amplitude-squeezed to ``s``, input 2 vacuum."""
        return cls.from_amplitude(s, 1.0)

    @classmethod
    def two_squeezer(cls, s: float) -> "EprRecipe":
        """Orthogonal, equal squeezing: ``V1+ = V2- = s``."""
        return cls.from_amplitude(s, 1.0 / _positive("s", s))

    @property
    def gains(self) -> tuple[float, float]:
        """Squeezer gains applied to vacuum to prepare each input."""
        return self.v1_plus, self.v2_plus

    def product_closed_form(self) -> float:
        return 4.0 / (2.0 + self.v1_plus * self.v2_minus + self.v1_minus * self.v2_plus)

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "EprRecipe":
        if "v1_minus" not in data:
            return cls.from_amplitude(data["v1_plus"], data["v2_plus"])
        return cls(*(float(data[k]) for k in ("v1_plus", "v1_minus", "v2_plus", "v2_minus")))

    @classmethod
    def from_json(cls, text: str) -> "EprRecipe":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GhzRecipe:
    """Three pure squeezed inputs combined on the GHZ beamsplitter network."""

    v1_plus: float
    v1_minus: float
    v2_plus: float
    v2_minus: float
    v3_plus: float
    v3_minus: float

    def __post_init__(self):
        _check_pure("1", self.v1_plus, self.v1_minus)
        _check_pure("2", self.v2_plus, self.v2_minus)
        _check_pure("3", self.v3_plus, self.v3_minus)

    @property
    def coefficients(self) -> np.ndarray:
        return GHZ_COEFFICIENTS

    @classmethod
    def from_amplitude(cls, v1_plus: float, v2_plus: float, v3_plus: float) -> "GhzRecipe":
        vs = [_positive(n, v) for n, v in (("v1_plus", v1_plus), ("v2_plus", v2_plus), ("v3_plus", v3_plus))]
        return cls(vs[0], 1 / vs[0], vs[1], 1 / vs[1], vs[2], 1 / vs[2])

    @classmethod
    def single_squeezer(cls, s: float) -> "GhzRecipe":
        return cls.from_amplitude(s, 1.0, 1.0)

    @classmethod
    def equal_squeezing(cls, v: float) -> "GhzRecipe":
        """``V1+ = V2- = V3- = v``: beam 1 squeezed orthogonally to beams 2, 3."""
        v = _positive("v", v)
        return cls.from_amplitude(v, 1 / v, 1 / v)

    @classmethod
    def maximal(cls, v: float) -> "GhzRecipe":
        """Beams 2, 3 phase-squeezed to ``v``; beam 1 set for unbiased GHZ noise."""
        v = _positive("v", v)
        return cls.from_amplitude(1.0 / ghz_maximal_input_variance(v), 1 / v, 1 / v)

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "GhzRecipe":
        if "v1_minus" not in data:
            return cls.from_amplitude(data["v1_plus"], data["v2_plus"], data["v3_plus"])
        keys = ("v1_plus", "v1_minus", "v2_plus", "v2_minus", "v3_plus", "v3_minus")
        return cls(*(float(data[k]) for k in keys))

    @classmethod
    def from_json(cls, text: str) -> "GhzRecipe":
        return cls.from_dict(json.loads(text))


def make_epr_pair(recipe: EprRecipe) -> GaussianState:
    """Mode 0 is EPR1 (sum port), mode 1 is EPR2 (difference port)."""
    s1, s2 = recipe.gains
    op = squeezer_op(2, 0, s1).then(squeezer_op(2, 1, s2)).then(beamsplitter_op(2, 0, 1, 0.5))
    return op.apply(vacuum_state(2))


def symmetrizing_gain(v1_minus: float, v2_plus: float) -> float:
    """OPA gain that makes pure EPR entanglement unbiased: ``sqrt(V1- / V2+)``."""
    return math.sqrt(_positive("v1_minus", v1_minus) / _positive("v2_plus", v2_plus))


def symmetrize_epr(
    state: GaussianState, mode_a: int, mode_b: int, gain: float, gain_b: float | None = None
) -> GaussianState:
    """Apply a local OPA to each EPR beam.

    The named protocol uses the same gain on both beams; ``gain_b`` overrides
    the second one.
    """
    out = apply_squeezer(state, mode_a, gain)
    return apply_squeezer(out, mode_b, gain if gain_b is None else gain_b)


def ghz_network() -> SymplecticOp:
    """Passive three-mode network realising :data:`GHZ_COEFFICIENTS`.

    A 1:2 split of inputs 1 and 2 (input 2 phase-flipped) puts GHZ1 on mode 0
    and ``sqrt(2/3) X1 + sqrt(1/3) X2`` on mode 1, which a 50/50 splitter with
    input 3 turns into GHZ2 and GHZ3.
    """
    return (
        phase_flip_op(3, 1)
        .then(beamsplitter_op(3, 0, 1, 1 / 3))
        .then(beamsplitter_op(3, 1, 2, 0.5))
    )


def make_ghz_triple(recipe: GhzRecipe) -> GaussianState:
    prep = (
        squeezer_op(3, 0, recipe.v1_plus)
        .then(squeezer_op(3, 1, recipe.v2_plus))
        .then(squeezer_op(3, 2, recipe.v3_plus))
    )
    return prep.then(ghz_network()).apply(vacuum_state(3))


def ghz_maximal_input_variance(v23: float) -> float:
    """``(1 - v^2 + sqrt(1 - v^2 + v^4)) / v`` for the beam-1 variance of a maximal GHZ state.

    With ``v`` the phase variance of beams 2 and 3 the result is beam 1's
    phase (anti-squeezed) variance; see :meth:`GhzRecipe.maximal`.
    """
    v = _positive("v23", v23)
    return (1.0 - v * v + math.sqrt(1.0 - v * v + v**4)) / v


def ghz_symmetrizing_gain(v1_plus: float, v1_minus: float) -> float:
    """Gain ``(1/sqrt 3) * sqrt((V1- + 2)/(V1+ + 2))`` for the single-squeezer GHZ OPAs.

    Kept as the reference expression.  It leaves ``V_cv3+ = V_cv3-/3``, so
    it does not balance the noise; :func:`ghz_balancing_gain` (the same
    expression without the ``1/sqrt 3``) does.
    """
    vp, vm = _positive("v1_plus", v1_plus), _positive("v1_minus", v1_minus)
    return math.sqrt((vm + 2.0) / (vp + 2.0)) / math.sqrt(3.0)


def ghz_balancing_gain(v1_plus: float, v1_minus: float) -> float:
    """Gain that equalises ``V_cv3+`` and ``V_cv3-`` of a single-squeezer GHZ state.

    For ``V1+ = s`` split three ways with vacuum, ``V_cv3+ = 3s/(1+2s)`` and
    ``V_cv3- = 3/(s+2)``; an OPA gain ``G`` on every beam multiplies the first
    by ``G`` and divides the second by ``G``.
    """
    vp, vm = _positive("v1_plus", v1_plus), _positive("v1_minus", v1_minus)
    return math.sqrt((vm + 2.0) / (vp + 2.0))


def symmetrize_ghz(state: GaussianState, gain: float) -> GaussianState:
    for m in range(state.mode_count):
        state = apply_squeezer(state, m, gain)
    return state


def ghz_inputs(state: GaussianState) -> GaussianState:
    """Undo the (orthogonal) GHZ network, recovering the input-beam state."""
    if state.mode_count != 3:
        raise InvalidArgument("GHZ states have three modes")
    n = ghz_network().matrix
    return GaussianState(n.T @ state.mean, n.T @ state.cov @ n)


def is_maximal_ghz(state: GaussianState, tol: float = 1e-9) -> bool:
    """True if ``state`` is the GHZ network fed by a maximal-GHZ set of inputs.

    That means three uncorrelated pure inputs, beams 2 and 3 identical, and
    ``V1+ = f(V2+)`` with ``f`` = :func:`ghz_maximal_input_variance`
    (equivalently ``V1- = f(V2-)``).
    """
    inputs = ghz_inputs(state).cov
    if np.abs(inputs - np.diag(np.diag(inputs))).max() > tol:
        return False
    d = np.diag(inputs)
    if any(abs(d[2 * m] * d[2 * m + 1] - 1.0) > tol for m in range(3)):
        return False
    if abs(d[2] - d[4]) > tol or abs(d[3] - d[5]) > tol:
        return False
    return bool(abs(d[0] - ghz_maximal_input_variance(d[2])) <= tol)
