"""Truncated photon-number representation of one- and two-mode states.

Independent of the covariance engine: states are amplitude arrays and
quadrature moments come from ladder-operator matrices, so agreement between
the two is a genuine cross-check at weak squeezing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CutoffTooSmall, InvalidArgument

DEFAULT_CUTOFF = 12
MAX_LEAKAGE = 1e-6


@dataclass(frozen=True, eq=False)
class FockVector:
    """Amplitudes over ``|n>`` (1 mode) or ``|n, m>`` (2 modes), ``n, m <= cutoff``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim not in (1, 2) or len(set(a.shape)) != 1:
            raise InvalidArgument("amplitudes must be a vector or a square matrix")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def mode_count(self) -> int:
        return self.amplitudes.ndim

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    @property
    def leakage(self) -> float:
        """Probability lost to truncation, ``1 - <psi|psi>``."""
        return 1.0 - self.norm**2

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= 1e-12

    def normalized(self) -> "FockVector":
        return FockVector(self.amplitudes / self.norm)

    def __getitem__(self, index):
        return complex(self.amplitudes[index])

    def tensor(self, other: "FockVector") -> "FockVector":
        if self.mode_count != 1 or other.mode_count != 1:
            raise InvalidArgument("tensor product is defined for single-mode vectors")
        if self.cutoff != other.cutoff:
            raise InvalidArgument("cutoffs differ")
        return FockVector(np.outer(self.amplitudes, other.amplitudes))

    def parity(self) -> float:
        """Expectation of ``(-1)^(total photon number)``."""
        p = np.abs(self.amplitudes) ** 2
        if self.mode_count == 1:
            sign = (-1.0) ** np.arange(p.shape[0])
        else:
            n = np.arange(p.shape[0])
            sign = (-1.0) ** np.add.outer(n, n)
        return float(np.sum(sign * p))


def fock_squeezed_vacuum(gain: float, cutoff: int = DEFAULT_CUTOFF) -> FockVector:
    """Squeezed vacuum with quadrature variances ``(gain, 1/gain)``.

    ``c_2n = (-tanh r)^n sqrt((2n)!) / (2^n n! sqrt(cosh r))`` with
    ``r = -ln(gain)/2``; odd amplitudes vanish.  For weak squeezing this is
    ``|0> + xi |2>`` with ``xi = -tanh(r)/sqrt2``.
    """
    g = float(gain)
    if not math.isfinite(g) or g <= 0:
        raise InvalidArgument(f"gain must be finite and > 0, got {gain!r}")
    if cutoff < 4 or cutoff % 2:
        raise InvalidArgument("cutoff must be even and >= 4")
    r = -0.5 * math.log(g)
    t = math.tanh(r)
    amps = np.zeros(cutoff + 1)
    for n in range(cutoff // 2 + 1):
        log_mag = 0.5 * math.lgamma(2 * n + 1) - n * math.log(2) - math.lgamma(n + 1)
        amps[2 * n] = (-t) ** n * math.exp(log_mag) if n else 1.0
    return FockVector(amps / math.sqrt(math.cosh(r)))


def fock_vacuum(cutoff: int = DEFAULT_CUTOFF, modes: int = 1) -> FockVector:
    a = np.zeros((cutoff + 1,) * modes)
    a[(0,) * modes] = 1.0
    return FockVector(a)


def fock_beamsplitter(
    state: FockVector | tuple[FockVector, FockVector],
    transmissivity: float,
    max_leakage: float = MAX_LEAKAGE,
) -> FockVector:
    """Exact beamsplitter unitary on a truncated two-mode state.

    Same convention as the covariance engine: creation operators map as
    ``a0^dag -> t a0^dag + r a1^dag`` and ``a1^dag -> r a0^dag - t a1^dag``
    with ``t = sqrt(eta)``, ``r = sqrt(1 - eta)``.  Output components beyond
    the cutoff are dropped and counted as leakage.
    """
    if isinstance(state, tuple):
        state = state[0].tensor(state[1])
    if state.mode_count != 2:
        raise InvalidArgument("beamsplitter needs a two-mode state")
    eta = float(transmissivity)
    if not 0.0 < eta < 1.0:
        raise InvalidArgument("transmissivity must lie in (0, 1)")
    t, r = math.sqrt(eta), math.sqrt(1.0 - eta)
    c = state.cutoff
    psi = state.amplitudes
    out = np.zeros_like(psi)
    lf = [math.lgamma(k + 1) for k in range(2 * c + 1)]
    for n in range(c + 1):
        for m in range(c + 1):
            amp = psi[n, m]
            if amp == 0:
                continue
            norm = -0.5 * (lf[n] + lf[m])
            for k in range(n + 1):
                ck = math.comb(n, k) * t**k * r ** (n - k)
                for l in range(m + 1):
                    p, q = k + l, n + m - k - l
                    if p > c or q > c:
                        continue
                    coef = ck * math.comb(m, l) * r**l * (-t) ** (m - l)
                    out[p, q] += amp * coef * math.exp(norm + 0.5 * (lf[p] + lf[q]))
    result = FockVector(out)
    if result.leakage > max_leakage:
        raise CutoffTooSmall(f"truncation leakage {result.leakage:.3g} exceeds {max_leakage:.3g}")
    return result


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def fock_quadrature_covariance(
    state: FockVector, max_leakage: float = MAX_LEAKAGE
) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature mean and covariance, interleaved ``(X0+, X0-, X1+, X1-)``.

    Operators act on a space padded by two levels so that second moments of
    the truncated vector are exact.
    """
    if state.leakage > max_leakage:
        raise CutoffTooSmall(f"truncation leakage {state.leakage:.3g} exceeds {max_leakage:.3g}")
    psi = state.normalized().amplitudes
    dim = state.cutoff + 3
    pad = [(0, 2)] * state.mode_count
    psi = np.pad(psi, pad).reshape(-1)
    a = _ladder(dim)
    xp = a + a.T
    xm = -1j * (a - a.T)
    eye = np.eye(dim)
    ops = []
    for mode in range(state.mode_count):
        for x in (xp, xm):
            if state.mode_count == 1:
                ops.append(x)
            else:
                ops.append(np.kron(x, eye) if mode == 0 else np.kron(eye, x))
    vecs = [op @ psi for op in ops]
    mean = np.array([np.vdot(psi, v).real for v in vecs])
    k = len(ops)
    cov = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            cov[i, j] = np.vdot(vecs[i], vecs[j]).real - mean[i] * mean[j]
    return mean, 0.5 * (cov + cov.T)
