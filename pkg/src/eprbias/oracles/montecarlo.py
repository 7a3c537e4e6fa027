"""Sampled quadrature fluctuations and regression estimates of conditional variances.

Random numbers come from numpy's counter-based ``Philox`` bit generator.
Shards get child seeds from ``SeedSequence(seed).spawn(shards)``, so a
sharded draw is reproducible for a fixed ``(seed, shards)`` regardless of
the order in which shards are evaluated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DegenerateConditioner, InvalidArgument, InvalidState
from ..gaussian import GaussianState, quad_index

# Relative standard error of a variance estimate is about sqrt(2/n); checks
# allow RATE_K of those on top of the usual 3-sigma band.
RATE_K = 2.0


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    data: np.ndarray
    columns: tuple[str, ...]
    seed: int

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    def column(self, key: int | str) -> int:
        if isinstance(key, str):
            try:
                return self.columns.index(key)
            except ValueError:
                raise InvalidArgument(f"unknown column {key!r}") from None
        if not 0 <= key < len(self.columns):
            raise InvalidArgument(f"column {key} out of range")
        return int(key)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.columns)
            for row in self.data:
                w.writerow([f"{x:.17g}" for x in row])


def column_label(mode: int, quadrature: str) -> str:
    return f"X{mode}{'+' if quadrature in ('plus', '+') else '-'}"


def _labels(mode_count: int) -> tuple[str, ...]:
    return tuple(column_label(m, q) for m in range(mode_count) for q in ("plus", "minus"))


def sample_quadratures(state: GaussianState, n_samples: int, seed: int, shards: int = 1) -> SampleMatrix:
    """Draw ``n_samples`` i.i.d. quadrature vectors from the state's distribution."""
    if n_samples < 2:
        raise InvalidArgument("need at least two samples")
    if shards < 1 or shards > n_samples:
        raise InvalidArgument("shards must be between 1 and n_samples")
    w, v = np.linalg.eigh(state.cov)
    if w.min() < -1e-12 * max(1.0, w.max()):
        raise InvalidState("covariance is not positive semi-definite")
    root = v * np.sqrt(np.clip(w, 0.0, None))
    sizes = [n_samples // shards + (i < n_samples % shards) for i in range(shards)]
    children = np.random.SeedSequence(seed).spawn(shards)
    blocks = []
    for size, child in zip(sizes, children):
        gen = np.random.Generator(np.random.Philox(child))
        z = gen.standard_normal((size, state.cov.shape[0]))
        blocks.append(state.mean + z @ root.T)
    data = np.vstack(blocks)
    data.setflags(write=False)
    return SampleMatrix(data, _labels(state.mode_count), int(seed))


def estimate_conditional_variance(
    samples: SampleMatrix, target: int | str, conditioners: Sequence[int | str]
) -> float:
    """Residual variance of least-squares regression of ``target`` on ``conditioners``.

    An intercept is always fitted; the residual variance uses
    ``n - len(conditioners) - 1`` degrees of freedom.
    """
    t = samples.column(target)
    cs = [samples.column(c) for c in conditioners]
    if t in cs:
        raise InvalidArgument("target column cannot be a conditioner")
    n, p = samples.n_samples, len(cs)
    if n <= p + 1:
        raise InvalidArgument("not enough samples for this many conditioners")
    y = samples.data[:, t]
    x = np.column_stack([np.ones(n)] + [samples.data[:, c] for c in cs])
    coef, _, rank, sv = np.linalg.lstsq(x, y, rcond=None)
    if rank < p + 1 or sv[-1] <= 1e-10 * sv[0]:
        raise DegenerateConditioner("regressors are rank deficient")
    resid = y - x @ coef
    return float(resid @ resid / (n - p - 1))


def estimate_mode_conditional_variance(
    samples: SampleMatrix, target: int, conditioners: Sequence[int], quadrature: str
) -> float:
    """Same as :func:`estimate_conditional_variance` but addressed by mode."""
    return estimate_conditional_variance(
        samples, quad_index(target, quadrature), [quad_index(c, quadrature) for c in conditioners]
    )


def relative_tolerance(n_samples: int, k: float = RATE_K) -> float:
    """Allowed relative error ``3 * sqrt(2/n) * k`` for a variance estimate."""
    return 3.0 * np.sqrt(2.0 / n_samples) * k
