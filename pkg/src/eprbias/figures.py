"""Datasets behind the entanglement and fidelity curves, plus JSON reports.

Every value is computed through the covariance pipeline and compared with
the matching closed form before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .metrics import epr_product, ghz_product, is_unbiased
from .protocols import (
    EprRecipe,
    GhzRecipe,
    ghz_balancing_gain,
    ghz_network,
    ghz_symmetrizing_gain,
    make_epr_pair,
    make_ghz_triple,
    symmetrize_epr,
    symmetrize_ghz,
    symmetrizing_gain,
    is_maximal_ghz,
)
from .teleport import (
    coherent_fidelity,
    coherent_signal,
    max_coherent_fidelity,
    simulate_teleporter,
    squeezed_signal,
    squeezed_signal_fidelity,
)

CROSS_CHECK_TOL = 1e-9


class CrossCheckError(AssertionError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    lo: float
    hi: float
    steps: int
    unit_interval: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise InvalidArgument("range needs lo < hi")
        if self.steps < 2:
            raise InvalidArgument("range needs at least 2 steps")
        if self.unit_interval and not (0.0 < self.lo and self.hi <= 1.0):
            raise InvalidArgument("squeezed variances must lie in (0, 1]")

    @classmethod
    def parse(cls, text: str, unit_interval: bool = True) -> "SweepConfig":
        try:
            lo, hi, n = text.split(":")
            return cls(float(lo), float(hi), int(n), unit_interval)
        except ValueError as exc:
            if isinstance(exc, InvalidArgument):
                raise
            raise InvalidArgument(f"bad range {text!r}; expected lo:hi:n") from None

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def _check(name, pipeline, closed, x):
    if abs(pipeline - closed) > CROSS_CHECK_TOL:
        raise CrossCheckError(f"{name} at {x}: pipeline {pipeline!r} vs closed form {closed!r}")
    return pipeline


def fig1_rows(config: SweepConfig) -> list[dict]:
    """EPR product versus squeezed variance for two- and one-squeezer entanglement."""
    rows = []
    for s in config.points():
        two, one = EprRecipe.two_squeezer(s), EprRecipe.single_squeezer(s)
        p2 = epr_product(make_epr_pair(two), 0, 1).product
        p1 = epr_product(make_epr_pair(one), 0, 1).product
        rows.append({
            "s": float(s),
            "product_two_beams": _check("two-beam product", p2, two.product_closed_form(), s),
            "product_one_beam": _check("one-beam product", p1, one.product_closed_form(), s),
        })
    return rows


def fig3_rows(config: SweepConfig) -> list[dict]:
    """Coherent-signal fidelity with single-squeezer entanglement, without and with the OPAs."""
    rows = []
    sig = coherent_signal()
    for s in config.points():
        recipe = EprRecipe.single_squeezer(s)
        res = make_epr_pair(recipe)
        g = symmetrizing_gain(recipe.v1_minus, recipe.v2_plus)
        f0 = simulate_teleporter(res, sig, 1.0)[1].fidelity
        f1 = simulate_teleporter(res, sig, g)[1].fidelity
        rows.append({
            "s": float(s),
            "F_no_opa": _check("F without OPA", f0, coherent_fidelity(s, 1.0, 1.0).fidelity, s),
            "F_opa": _check("F with OPA", f1, max_coherent_fidelity(s, 1.0)[1], s),
        })
    return rows


def fig4_rows(config: SweepConfig, v_sqz: float = 0.1) -> list[dict]:
    """Squeezed-signal fidelity with unbiased entanglement, gain 1 versus gain ``v_sqz``."""
    rows = []
    sig = squeezed_signal(v_sqz)
    for v in config.points():
        res = make_epr_pair(EprRecipe.two_squeezer(v))
        f0 = simulate_teleporter(res, sig, 1.0)[1].fidelity
        f1 = simulate_teleporter(res, sig, v_sqz)[1].fidelity
        rows.append({
            "v": float(v),
            "F_no_opa": _check("F without OPA", f0, squeezed_signal_fidelity(v, v, 1.0, v_sqz).fidelity, v),
            "F_opa": _check("F with OPA", f1, squeezed_signal_fidelity(v, v, v_sqz, v_sqz).fidelity, v),
        })
    return rows


def epr_report(recipe: EprRecipe, gain: float | None = None) -> dict:
    state = make_epr_pair(recipe)
    g = symmetrizing_gain(recipe.v1_minus, recipe.v2_plus) if gain is None else gain
    after = symmetrize_epr(state, 0, 1, g)
    return {
        "recipe": recipe.__dict__,
        "gain": g,
        "before": epr_product(state, 0, 1).to_dict(),
        "after": epr_product(after, 0, 1).to_dict(),
    }


def _ghz_block(state) -> dict:
    reports = [ghz_product(state, t, *[m for m in range(3) if m != t]) for t in range(3)]
    return {
        "targets": [r.to_dict() for r in reports],
        "unbiased": all(is_unbiased(r) for r in reports),
        "maximal": is_maximal_ghz(state),
    }


def ghz_report(recipe: GhzRecipe, gain: float | None = None) -> dict:
    state = make_ghz_triple(recipe)
    g = ghz_symmetrizing_gain(recipe.v1_plus, recipe.v1_minus) if gain is None else gain
    gb = ghz_balancing_gain(recipe.v1_plus, recipe.v1_minus)
    return {
        "recipe": recipe.__dict__,
        "network": ghz_network().matrix[::2, ::2].tolist(),
        "gain": g,
        "balancing_gain": gb,
        "before": _ghz_block(state),
        "after": _ghz_block(symmetrize_ghz(state, g)),
        "after_balanced": _ghz_block(symmetrize_ghz(state, gb)),
    }
