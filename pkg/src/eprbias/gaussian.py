"""Multimode Gaussian states in quadrature form.

Conventions used throughout the package:

* The quadrature vector is interleaved per mode,
  ``(X1+, X1-, X2+, X2-, ...)``, where ``X+`` is the amplitude and ``X-`` the
  phase quadrature.
* Variances are normalised so that the vacuum has ``V+ = V- = 1`` and the
  uncertainty relation reads ``V+ V- >= 1``.  To convert to the common
  ``hbar/2`` convention divide the covariance by two (``hbar = 1``).
* With ``a = (X+ + i X-) / 2`` this means ``X+ = a + a^dag`` and
  ``X- = -i (a - a^dag)``.

States are immutable; every operation returns a new :class:`GaussianState`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateMeasurement, InvalidArgument, InvalidState

Quadrature = Literal["plus", "minus"]
QUADRATURES: tuple[Quadrature, Quadrature] = ("plus", "minus")

EQ_TOL = 1e-12
PHYS_TOL = 1e-9


def quad_offset(quadrature: str) -> int:
    if quadrature in ("plus", "+"):
        return 0
    if quadrature in ("minus", "-"):
        return 1
    raise InvalidArgument(f"unknown quadrature {quadrature!r}; use 'plus' or 'minus'")


def quad_index(mode: int, quadrature: str) -> int:
    """Position of ``(mode, quadrature)`` in the interleaved quadrature vector."""
    return 2 * mode + quad_offset(quadrature)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix of an ``M``-mode Gaussian state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        n = mean.shape[0]
        if n == 0 or n % 2:
            raise InvalidArgument("mean must have length 2*mode_count >= 2")
        if cov.shape != (n, n):
            raise InvalidArgument(f"cov must be {n}x{n}, got {cov.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidArgument("state contains non-finite entries")
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen(0.5 * (cov + cov.T)))

    @property
    def mode_count(self) -> int:
        return self.mean.shape[0] // 2

    def _check_mode(self, mode: int) -> int:
        if not isinstance(mode, (int, np.integer)) or not 0 <= mode < self.mode_count:
            raise InvalidArgument(f"mode {mode!r} out of range for {self.mode_count}-mode state")
        return int(mode)

    def mode_cov(self, mode: int) -> np.ndarray:
        """2x2 covariance block of a single mode."""
        i = 2 * self._check_mode(mode)
        return self.cov[i:i + 2, i:i + 2]

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        """Marginal state on ``modes`` (in the given order)."""
        idx = []
        for m in modes:
            m = self._check_mode(m)
            idx += [2 * m, 2 * m + 1]
        return GaussianState(self.mean[idx], self.cov[np.ix_(idx, idx)])

    def purity_det(self) -> float:
        """``det(cov)``; equals 1 for pure states in this normalisation."""
        return float(np.linalg.det(self.cov))

    def is_pure(self, tol: float = PHYS_TOL) -> bool:
        return abs(self.purity_det() - 1.0) <= tol

    def marginals_physical(self, tol: float = PHYS_TOL) -> bool:
        """Every single-mode block obeys ``V+ V- - C^2 >= 1``."""
        for m in range(self.mode_count):
            b = self.mode_cov(m)
            if b[0, 0] * b[1, 1] - b[0, 1] ** 2 < 1.0 - tol:
                return False
        return True

    def is_physical(self, tol: float = PHYS_TOL) -> bool:
        """Full uncertainty principle ``cov + i*Omega >= 0``."""
        eig = np.linalg.eigvalsh(self.cov + 1j * symplectic_form(self.mode_count))
        return bool(eig.min() >= -tol) and self.marginals_physical(tol)

    def to_dict(self) -> dict:
        return {
            "mode_count": self.mode_count,
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianState":
        m = int(data["mode_count"])
        mean = np.asarray(data["mean"], dtype=float)
        cov = np.asarray(data["cov"], dtype=float).reshape(2 * m, 2 * m)
        if mean.shape != (2 * m,):
            raise InvalidArgument("mean length does not match mode_count")
        return cls(mean, cov)

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        return cls.from_dict(json.loads(text))


def symplectic_form(mode_count: int) -> np.ndarray:
    return np.kron(np.eye(mode_count), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Linear map ``x -> S x`` on the interleaved quadrature vector."""

    matrix: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise InvalidArgument("symplectic matrix must be square with even size")
        object.__setattr__(self, "matrix", _frozen(s))

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0] // 2

    def is_symplectic(self, tol: float = PHYS_TOL) -> bool:
        om = symplectic_form(self.mode_count)
        return bool(np.allclose(self.matrix @ om @ self.matrix.T, om, atol=tol, rtol=0))

    def then(self, other: "SymplecticOp") -> "SymplecticOp":
        """Composition: apply ``self`` first, then ``other``."""
        return SymplecticOp(other.matrix @ self.matrix)

    def apply(self, state: GaussianState) -> GaussianState:
        if state.mode_count != self.mode_count:
            raise InvalidArgument("operator and state have different mode counts")
        s = self.matrix
        return GaussianState(s @ state.mean, s @ state.cov @ s.T)


def _check_gain(gain: float) -> float:
    g = float(gain)
    if not math.isfinite(g) or g <= 0:
        raise InvalidArgument(f"gain must be finite and > 0, got {gain!r}")
    return g


def _check_index(mode: int, mode_count: int) -> int:
    if not isinstance(mode, (int, np.integer)) or not 0 <= mode < mode_count:
        raise InvalidArgument(f"mode {mode!r} out of range for {mode_count} modes")
    return int(mode)


def squeezer_op(mode_count: int, mode: int, gain: float) -> SymplecticOp:
    """Degenerate OPA on ``mode``: ``X+ -> sqrt(G) X+``, ``X- -> X- / sqrt(G)``."""
    g = _check_gain(gain)
    mode = _check_index(mode, mode_count)
    s = np.eye(2 * mode_count)
    s[2 * mode, 2 * mode] = math.sqrt(g)
    s[2 * mode + 1, 2 * mode + 1] = 1.0 / math.sqrt(g)
    return SymplecticOp(s)


def beamsplitter_op(mode_count: int, mode_a: int, mode_b: int, transmissivity: float) -> SymplecticOp:
    """Beamsplitter acting identically on both quadratures.

    ``out_a = sqrt(eta) in_a + sqrt(1-eta) in_b`` and
    ``out_b = sqrt(1-eta) in_a - sqrt(eta) in_b``.  At ``eta = 1/2`` this is
    the usual sum/difference pair used to make EPR beams.
    """
    mode_a = _check_index(mode_a, mode_count)
    mode_b = _check_index(mode_b, mode_count)
    if mode_a == mode_b:
        raise InvalidArgument("beamsplitter needs two distinct modes")
    eta = float(transmissivity)
    if not 0.0 < eta < 1.0:
        raise InvalidArgument(f"transmissivity must lie in (0, 1), got {transmissivity!r}")
    t, r = math.sqrt(eta), math.sqrt(1.0 - eta)
    s = np.eye(2 * mode_count)
    for q in (0, 1):
        a, b = 2 * mode_a + q, 2 * mode_b + q
        s[a, a], s[a, b] = t, r
        s[b, a], s[b, b] = r, -t
    return SymplecticOp(s)


def phase_flip_op(mode_count: int, mode: int) -> SymplecticOp:
    """Half-wave phase shift on ``mode``: ``X+- -> -X+-``."""
    mode = _check_index(mode, mode_count)
    s = np.eye(2 * mode_count)
    s[2 * mode, 2 * mode] = s[2 * mode + 1, 2 * mode + 1] = -1.0
    return SymplecticOp(s)


def vacuum_state(mode_count: int) -> GaussianState:
    if not isinstance(mode_count, (int, np.integer)) or mode_count < 1:
        raise InvalidArgument(f"mode_count must be a positive integer, got {mode_count!r}")
    return GaussianState(np.zeros(2 * mode_count), np.eye(2 * mode_count))


def squeezed_vacuum(v_plus: float) -> GaussianState:
    """Single-mode minimum-uncertainty state with amplitude variance ``v_plus``."""
    return apply_squeezer(vacuum_state(1), 0, v_plus)


def direct_sum(*states: GaussianState) -> GaussianState:
    """Uncorrelated joint state, modes concatenated in argument order."""
    if not states:
        raise InvalidArgument("need at least one state")
    mean = np.concatenate([s.mean for s in states])
    n = mean.shape[0]
    cov = np.zeros((n, n))
    i = 0
    for s in states:
        k = s.mean.shape[0]
        cov[i:i + k, i:i + k] = s.cov
        i += k
    return GaussianState(mean, cov)


def apply_squeezer(state: GaussianState, mode: int, gain: float) -> GaussianState:
    return squeezer_op(state.mode_count, mode, gain).apply(state)


def apply_beamsplitter(state: GaussianState, mode_a: int, mode_b: int, transmissivity: float) -> GaussianState:
    return beamsplitter_op(state.mode_count, mode_a, mode_b, transmissivity).apply(state)


def apply_phase_flip(state: GaussianState, mode: int) -> GaussianState:
    return phase_flip_op(state.mode_count, mode).apply(state)


def displace(state: GaussianState, mode: int, quadrature: str, amount: float) -> GaussianState:
    """Shift the mean of one quadrature (an amplitude or phase modulator)."""
    i = quad_index(state._check_mode(mode), quadrature)
    mean = state.mean.copy()
    mean[i] += float(amount)
    return GaussianState(mean, state.cov)


def quadrature_variance(state: GaussianState, mode: int, quadrature: str) -> float:
    i = quad_index(state._check_mode(mode), quadrature)
    return float(state.cov[i, i])


def correlation(state: GaussianState, mode_a: int, quad_a: str, mode_b: int, quad_b: str) -> float:
    """``<dX_a dX_b>`` between two quadratures."""
    i = quad_index(state._check_mode(mode_a), quad_a)
    j = quad_index(state._check_mode(mode_b), quad_b)
    return float(state.cov[i, j])


def sideband_photon_number(state: GaussianState, mode: int) -> float:
    """Mean sideband photon number ``(V+ + V-)/2 - 1``."""
    b = state.mode_cov(mode)
    n = 0.5 * (b[0, 0] + b[1, 1]) - 1.0
    if -EQ_TOL <= n < 0.0:
        n = 0.0
    return float(n)


def homodyne_condition(
    state: GaussianState,
    mode: int,
    quadrature: str,
    outcome: float | None = None,
    rng: np.random.Generator | int | None = None,
) -> tuple[GaussianState | None, float]:
    """Measure one quadrature of ``mode`` and condition the remaining modes.

    The measured mode is removed.  If ``outcome`` is None it is drawn from the
    marginal distribution using ``rng`` (a Generator or a seed).

    Returns:
        ``(remaining_state, outcome)``; ``remaining_state`` is None when the
        measured mode was the only one.
    """
    mode = state._check_mode(mode)
    k = quad_index(mode, quadrature)
    var = state.cov[k, k]
    if var <= EQ_TOL:
        raise DegenerateMeasurement(f"measured variance {var:.3g} is not positive")
    if outcome is None:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        outcome = float(gen.normal(state.mean[k], math.sqrt(var)))
    outcome = float(outcome)
    if state.mode_count == 1:
        return None, outcome
    keep = [i for i in range(2 * state.mode_count) if i not in (2 * mode, 2 * mode + 1)]
    cross = state.cov[keep, k]
    mean = state.mean[keep] + cross * (outcome - state.mean[k]) / var
    cov = state.cov[np.ix_(keep, keep)] - np.outer(cross, cross) / var
    return GaussianState(mean, cov), outcome


def check_physical(state: GaussianState, tol: float = PHYS_TOL) -> GaussianState:
    """Return ``state`` unchanged or raise :class:`InvalidState`."""
    if not state.is_physical(tol):
        raise InvalidState("covariance violates the uncertainty principle")
    return state
