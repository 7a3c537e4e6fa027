"""Conditional variances, EPR/GHZ criteria and the photon-resource measure.

All conditional variances are Schur complements of the covariance
restricted to one quadrature: the residual variance of the target after the
best linear estimate from the conditioning beams.  The bipartite case reduces
to ``V_b - <dX_b dX_a>^2 / V_a``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateConditioner, InvalidArgument
from .gaussian import (
    EQ_TOL,
    PHYS_TOL,
    GaussianState,
    quad_index,
    quadrature_variance,
    sideband_photon_number,
)


@dataclass(frozen=True)
class EprReport:
    vcv_plus: float
    vcv_minus: float
    product: float
    entangled: bool
    n_epr_a: float
    n_epr_b: float
    n_maximal: float
    lambda_: float | None
    # inference in the other direction (a from b) and the worse of the two
    product_reverse: float
    product_max: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        return d


@dataclass(frozen=True)
class GhzReport:
    target: int
    vcv3_plus: float
    vcv3_minus: float
    product: float
    violation: bool
    # the three-beam expression with the opposite sign on the triple
    # correlation term; kept for comparison only
    vcv3_plus_alt: float
    vcv3_minus_alt: float
    product_alt: float

    def to_dict(self) -> dict:
        return asdict(self)


def conditional_variance(
    state: GaussianState, target: int, conditioners: Iterable[int], quadrature: str
) -> float:
    """Residual variance of ``target``'s quadrature given the same quadrature of ``conditioners``."""
    conditioners = [state._check_mode(c) for c in conditioners]
    target = state._check_mode(target)
    if target in conditioners:
        raise InvalidArgument("target mode cannot also be a conditioner")
    if len(set(conditioners)) != len(conditioners):
        raise InvalidArgument("conditioner modes must be distinct")
    t = quad_index(target, quadrature)
    v_t = state.cov[t, t]
    if not conditioners:
        return float(v_t)
    c = [quad_index(m, quadrature) for m in conditioners]
    block = state.cov[np.ix_(c, c)]
    if np.linalg.det(block) <= EQ_TOL:
        raise DegenerateConditioner("conditioning covariance block is singular")
    cross = state.cov[t, c]
    return float(v_t - cross @ np.linalg.solve(block, cross))


def minimal_photon_number(vcv_plus: float, vcv_minus: float) -> float:
    """Fewest sideband photons per beam compatible with ``vcv_plus * vcv_minus``.

    Reached by unbiased pure entanglement, where ``V_EPR = 1/V_cv`` in both
    quadratures.
    """
    if vcv_plus <= 0 or vcv_minus <= 0:
        raise InvalidArgument("conditional variances must be positive")
    return 1.0 / math.sqrt(vcv_plus * vcv_minus) - 1.0


def photon_number_from_inference(vcv_plus: float, vcv_minus: float) -> float:
    """Photons per beam of a pure state with the given conditional variances."""
    if vcv_plus <= 0 or vcv_minus <= 0:
        raise InvalidArgument("conditional variances must be positive")
    return 0.5 * (1.0 / vcv_plus + 1.0 / vcv_minus) - 1.0


def _epr_pair(state: GaussianState, a: int, b: int) -> tuple[float, float]:
    return (
        conditional_variance(state, b, [a], "plus"),
        conditional_variance(state, b, [a], "minus"),
    )


def maximality_lambda(state: GaussianState, mode_a: int, mode_b: int) -> float | None:
    """Ratio of the minimal photon number to the photons actually present.

    Returns None when the beams carry no photons (the 0/0 case).
    """
    return _lambda(state, mode_a, mode_b, *_epr_pair(state, mode_a, mode_b))


def _lambda(state, a, b, vp, vm):
    n_epr = 0.5 * (sideband_photon_number(state, a) + sideband_photon_number(state, b))
    if n_epr <= EQ_TOL:
        return None
    return minimal_photon_number(vp, vm) / n_epr


def epr_product(state: GaussianState, mode_a: int, mode_b: int) -> EprReport:
    """EPR report for beam ``b`` inferred from beam ``a``."""
    if state._check_mode(mode_a) == state._check_mode(mode_b):
        raise InvalidArgument("EPR beams must be distinct modes")
    vp, vm = _epr_pair(state, mode_a, mode_b)
    rp, rm = _epr_pair(state, mode_b, mode_a)
    product = vp * vm
    return EprReport(
        vcv_plus=vp,
        vcv_minus=vm,
        product=product,
        entangled=product < 1.0,
        n_epr_a=sideband_photon_number(state, mode_a),
        n_epr_b=sideband_photon_number(state, mode_b),
        n_maximal=minimal_photon_number(vp, vm),
        lambda_=_lambda(state, mode_a, mode_b, vp, vm),
        product_reverse=rp * rm,
        product_max=max(product, rp * rm),
    )


def inferred_variance_gap(state: GaussianState, mode_a: int, mode_b: int) -> float:
    """Largest deviation from ``V_b^(+-) = 1 / V_cv^(-+)``; zero for pure pairs."""
    vp, vm = _epr_pair(state, mode_a, mode_b)
    return max(
        abs(quadrature_variance(state, mode_b, "plus") - 1.0 / vm),
        abs(quadrature_variance(state, mode_b, "minus") - 1.0 / vp),
    )


def three_beam_conditional_variance_alt(
    state: GaussianState, target: int, other_a: int, other_b: int, quadrature: str
) -> float:
    """Explicit three-beam formula with the triple-correlation term subtracted.

    Differs from the Schur complement (:func:`conditional_variance`) by the
    sign of ``2 C_ab C_ac C_bc / D``; the two agree whenever any of the three
    cross-correlations vanishes.
    """
    a, b, c = (quad_index(state._check_mode(m), quadrature) for m in (target, other_a, other_b))
    s = state.cov
    d = s[b, b] * s[c, c] - s[b, c] ** 2
    if d <= EQ_TOL:
        raise DegenerateConditioner("conditioning covariance block is singular")
    c_ab, c_ac, c_bc = s[a, b], s[a, c], s[b, c]
    return float(s[a, a] - (s[b, b] * c_ac**2 + s[c, c] * c_ab**2) / d - 2.0 * c_ab * c_ac * c_bc / d)


def ghz_product(state: GaussianState, target: int, other_a: int, other_b: int) -> GhzReport:
    modes = [state._check_mode(m) for m in (target, other_a, other_b)]
    if len(set(modes)) != 3:
        raise InvalidArgument("GHZ analysis needs three distinct modes")
    vp = conditional_variance(state, target, [other_a, other_b], "plus")
    vm = conditional_variance(state, target, [other_a, other_b], "minus")
    ap = three_beam_conditional_variance_alt(state, target, other_a, other_b, "plus")
    am = three_beam_conditional_variance_alt(state, target, other_a, other_b, "minus")
    return GhzReport(
        target=int(target),
        vcv3_plus=vp,
        vcv3_minus=vm,
        product=vp * vm,
        violation=vp * vm < 1.0,
        vcv3_plus_alt=ap,
        vcv3_minus_alt=am,
        product_alt=ap * am,
    )


def is_unbiased(report: EprReport | GhzReport, tol: float = PHYS_TOL) -> bool:
    if isinstance(report, GhzReport):
        return abs(report.vcv3_plus - report.vcv3_minus) <= tol
    return abs(report.vcv_plus - report.vcv_minus) <= tol
