"""End-to-end oracle cross-checks used by ``eprbias verify``."""

from __future__ import annotations

import numpy as np

from .gaussian import squeezed_vacuum
from .metrics import conditional_variance
from .oracles.fock import (
    fock_beamsplitter,
    fock_quadrature_covariance,
    fock_squeezed_vacuum,
    fock_vacuum,
)
from .oracles.montecarlo import estimate_mode_conditional_variance, sample_quadratures
from .protocols import (
    EprRecipe,
    GhzRecipe,
    make_epr_pair,
    make_ghz_triple,
    symmetrize_epr,
    symmetrizing_gain,
)

FOCK_GAINS = (0.8, 0.9, 1.0, 1.1, 1.25)
FIRST_ORDER_TOL = 1e-10


def _check(name, value, expected, tol, relative=False):
    err = abs(value - expected)
    if relative:
        err /= abs(expected)
    return {
        "name": name,
        "value": float(value),
        "expected": float(expected),
        "error": float(err),
        "tol": float(tol),
        "pass": bool(err <= tol),
    }


def monte_carlo_checks(seed: int, n_samples: int, tol: float) -> list[dict]:
    sym = EprRecipe.single_squeezer(0.5)
    cases = [
        ("epr single s=0.5", make_epr_pair(sym), 1, [0]),
        ("epr two s=0.5", make_epr_pair(EprRecipe.two_squeezer(0.5)), 1, [0]),
        ("epr single s=0.5 symmetrized",
         symmetrize_epr(make_epr_pair(sym), 0, 1, symmetrizing_gain(sym.v1_minus, sym.v2_plus)), 1, [0]),
        ("ghz single s=0.5", make_ghz_triple(GhzRecipe.single_squeezer(0.5)), 0, [1, 2]),
        ("ghz equal v=0.5", make_ghz_triple(GhzRecipe.equal_squeezing(0.5)), 0, [1, 2]),
    ]
    seeds = np.random.SeedSequence(seed).generate_state(len(cases))
    out = []
    for (label, state, target, conds), s in zip(cases, seeds):
        samples = sample_quadratures(state, n_samples, int(s))
        for q in ("plus", "minus"):
            est = estimate_mode_conditional_variance(samples, target, conds, q)
            exact = conditional_variance(state, target, conds, q)
            out.append(_check(f"mc {label} Vcv{'+' if q == 'plus' else '-'}", est, exact, tol, relative=True))
    return out


def fock_checks(tol: float, cutoff: int) -> list[dict]:
    out = []
    for g in FOCK_GAINS:
        sq = fock_squeezed_vacuum(g, cutoff)
        _, cov = fock_quadrature_covariance(sq)
        out.append(_check(f"fock squeezed G={g}", np.abs(cov - squeezed_vacuum(g).cov).max(), 0.0, tol))

        one = fock_beamsplitter((sq, fock_vacuum(cutoff)), 0.5)
        _, cov = fock_quadrature_covariance(one)
        ref = make_epr_pair(EprRecipe.single_squeezer(g)).cov
        out.append(_check(f"fock single-squeezer epr G={g}", np.abs(cov - ref).max(), 0.0, tol))

        two = fock_beamsplitter((sq, fock_squeezed_vacuum(1.0 / g, cutoff)), 0.5)
        _, cov = fock_quadrature_covariance(two)
        ref = make_epr_pair(EprRecipe.two_squeezer(g)).cov
        out.append(_check(f"fock two-squeezer epr G={g}", np.abs(cov - ref).max(), 0.0, tol))
        unseparated = max(abs(two[2, 0]), abs(two[0, 2]))
        out.append(_check(f"fock two-squeezer |20>,|02> G={g}", unseparated, 0.0, FIRST_ORDER_TOL))
        parity_in = sq.parity() * fock_squeezed_vacuum(1.0 / g, cutoff).parity()
        out.append(_check(f"fock parity G={g}", two.parity(), parity_in, 1e-12))
    return out


def run_verification(
    seed: int = 12345, n_samples: int = 1_000_000, mc_tol: float = 0.01, fock_tol: float = 1e-5, cutoff: int = 12
) -> dict:
    checks = monte_carlo_checks(seed, n_samples, mc_tol) + fock_checks(fock_tol, cutoff)
    return {
        "seed": seed,
        "n_samples": n_samples,
        "checks": checks,
        "failed": [c["name"] for c in checks if not c["pass"]],
        "pass": all(c["pass"] for c in checks),
    }
