"""Unity-gain continuous-variable teleportation with local OPAs.

Closed-form fidelities are expressed through the squeezed variances of the
two inputs that made the entanglement: ``v1_plus`` (amplitude variance of
input 1) and ``v2_minus`` (phase variance of input 2).

Simulated layout (modes of the internal 3-mode state)::

    0  signal  --\\
                  50/50 --> port u (= (sig + A)/sqrt2): measure X+
    1  A (OPA) --/      --> port w (= (sig - A)/sqrt2): measure X-
    2  B (OPA) --> AM += sqrt2 * x_u,  PM += sqrt2 * x_w  --> output

With this choice ``out+ = sig+ + (A+ + B+)`` and ``out- = sig- - (A- - B-)``,
so the amplitude anti-correlation and phase correlation of the resource
cancel and the coherent amplitude is transferred with unity gain.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidArgument
from .gaussian import (
    GaussianState,
    apply_beamsplitter,
    direct_sum,
    displace,
    homodyne_condition,
    squeezed_vacuum,
    vacuum_state,
)
from .protocols import symmetrize_epr

FEEDFORWARD_UNITY = math.sqrt(2.0)


@dataclass(frozen=True)
class TeleportReport:
    v_out_plus: float
    v_out_minus: float
    fidelity: float
    parametric_gain: float
    feedforward_unity: bool
    beats_classical: bool
    v_sig_plus: float = 1.0
    v_sig_minus: float = 1.0

    def to_dict(self) -> dict:
        return asdict(self)


def _nonneg(name, x):
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise InvalidArgument(f"{name} must be finite and >= 0, got {x!r}")
    return x


def _pos(name, x):
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise InvalidArgument(f"{name} must be finite and > 0, got {x!r}")
    return x


def fidelity_from_output(
    v_out_plus: float, v_out_minus: float, v_sig_plus: float = 1.0, v_sig_minus: float = 1.0
) -> float:
    """Overlap of a pure Gaussian signal with a unity-gain output of equal mean.

    ``2 / sqrt((V_out+ + V_sig+)(V_out- + V_sig-))``; with the default
    coherent signal this is ``2 / sqrt((V_out+ + 1)(V_out- + 1))``.
    """
    a = _pos("v_out_plus", v_out_plus) + _pos("v_sig_plus", v_sig_plus)
    b = _pos("v_out_minus", v_out_minus) + _pos("v_sig_minus", v_sig_minus)
    return 2.0 / math.sqrt(a * b)


def _report(vp, vm, gain, v_sig_plus=1.0, v_sig_minus=1.0) -> TeleportReport:
    f = fidelity_from_output(vp, vm, v_sig_plus, v_sig_minus)
    return TeleportReport(vp, vm, f, gain, True, f > 0.5, v_sig_plus, v_sig_minus)


def coherent_fidelity(v1_plus: float, v2_minus: float, gain: float) -> TeleportReport:
    """Coherent-state teleportation through OPAs of gain ``gain``."""
    return squeezed_signal_fidelity(v1_plus, v2_minus, gain, 1.0)


def max_coherent_fidelity(v1_plus: float, v2_minus: float) -> tuple[float, float]:
    """Best gain and fidelity ``1/(sqrt(V1+ V2-) + 1)``.

    The gain minimises ``G V1+ + V2-/G``, i.e. ``G = sqrt(V2-/V1+)``.  When
    ``v1_plus`` is zero the optimum is unbounded and ``math.inf`` is returned
    as the gain (the fidelity limit is still finite).
    """
    v1, v2 = _nonneg("v1_plus", v1_plus), _nonneg("v2_minus", v2_minus)
    f_max = 1.0 / (math.sqrt(v1 * v2) + 1.0)
    if v1 == 0.0:
        return (math.inf if v2 > 0 else 1.0), f_max
    return math.sqrt(v2 / v1), f_max


def squeezed_signal_fidelity(v1_plus: float, v2_minus: float, gain: float, v_sqz: float) -> TeleportReport:
    """Teleportation of an amplitude-squeezed signal (``V+ = v_sqz``) with known orientation."""
    v1, v2 = _nonneg("v1_plus", v1_plus), _nonneg("v2_minus", v2_minus)
    g, vs = _pos("gain", gain), _pos("v_sqz", v_sqz)
    vp = 2.0 * g * v1 + vs
    vm = 2.0 / g * v2 + 1.0 / vs
    rep = _report(vp, vm, g, vs, 1.0 / vs)
    closed = 1.0 / math.sqrt(v1 * v2 + g * v1 / vs + v2 * vs / g + 1.0)
    assert math.isclose(rep.fidelity, closed, rel_tol=1e-12, abs_tol=1e-15), (rep.fidelity, closed)
    return rep


def optimal_squeezed_signal_gain(v1_plus: float, v2_minus: float, v_sqz: float) -> float:
    """``G = V_sqz * sqrt(V2- / V1+)``."""
    v1, v2 = _pos("v1_plus", v1_plus), _nonneg("v2_minus", v2_minus)
    return _pos("v_sqz", v_sqz) * math.sqrt(v2 / v1)


def resource_input_variances(resource: GaussianState, mode_a: int = 0, mode_b: int = 1) -> tuple[float, float]:
    """Map a two-mode resource back to effective ``(V1+, V2-)``.

    These are half the variances of ``A+ + B+`` and ``A- - B-``, the noise
    the teleporter adds; for resources from :func:`make_epr_pair` they are
    exactly the input squeezed variances.
    """
    ia, ib = 2 * resource._check_mode(mode_a), 2 * resource._check_mode(mode_b)
    c = resource.cov
    v_sum = c[ia, ia] + c[ib, ib] + 2 * c[ia, ib]
    v_diff = c[ia + 1, ia + 1] + c[ib + 1, ib + 1] - 2 * c[ia + 1, ib + 1]
    return 0.5 * v_sum, 0.5 * v_diff


def _prepare(resource: GaussianState, signal: GaussianState, gain: float, gain_b: float | None) -> GaussianState:
    if resource.mode_count != 2:
        raise InvalidArgument("resource must be a two-mode state")
    if signal.mode_count != 1:
        raise InvalidArgument("signal must be a single-mode state")
    res = symmetrize_epr(resource, 0, 1, gain, gain_b)
    joint = direct_sum(signal, res)  # modes: signal, A, B
    return apply_beamsplitter(joint, 0, 1, 0.5)  # mode 0 -> u, mode 1 -> w


def simulate_teleporter(
    resource: GaussianState,
    signal: GaussianState,
    parametric_gain: float = 1.0,
    feedforward_gains: tuple[float, float] | None = None,
    gain_b: float | None = None,
) -> tuple[GaussianState, TeleportReport]:
    """Outcome-averaged output of the teleporter.

    Feedforward is a linear map on the joint quadratures: Bob's ``X+`` gains
    ``g+ * x_u+`` and ``X-`` gains ``g- * x_w-``; the measured ports are then
    discarded.  ``feedforward_gains`` defaults to the unity-gain value
    ``(sqrt2, sqrt2)``.

    Returns:
        The single-mode output state and a report whose fidelity compares it
        to ``signal``.
    """
    g = _pos("parametric_gain", parametric_gain)
    gp, gm = feedforward_gains or (FEEDFORWARD_UNITY, FEEDFORWARD_UNITY)
    joint = _prepare(resource, signal, g, gain_b)
    # rows: output X+, X- ; columns: u+, u-, w+, w-, B+, B-
    t = np.zeros((2, 6))
    t[0, 4] = t[1, 5] = 1.0
    t[0, 0] = gp
    t[1, 3] = gm
    out = GaussianState(t @ joint.mean, t @ joint.cov @ t.T)
    vs_p, vs_m = signal.cov[0, 0], signal.cov[1, 1]
    total = out.cov + signal.cov
    d = out.mean - signal.mean
    f = 2.0 / math.sqrt(np.linalg.det(total)) * math.exp(-0.5 * d @ np.linalg.solve(total, d))
    unity = math.isclose(gp, FEEDFORWARD_UNITY) and math.isclose(gm, FEEDFORWARD_UNITY)
    rep = TeleportReport(
        float(out.cov[0, 0]), float(out.cov[1, 1]), float(f), g, unity, f > 0.5, float(vs_p), float(vs_m)
    )
    return out, rep


def teleport_shot(
    resource: GaussianState,
    signal: GaussianState,
    parametric_gain: float = 1.0,
    rng: np.random.Generator | int | None = None,
) -> tuple[GaussianState, tuple[float, float]]:
    """One run of the teleporter with sampled homodyne outcomes.

    Returns Bob's conditional output state after unity-gain displacement and
    the two outcomes ``(x_u+, x_w-)``.
    """
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    joint = _prepare(resource, signal, _pos("parametric_gain", parametric_gain), None)
    # joint modes are (u, w, B); after the first measurement they are (w, B)
    after_u, x_u = homodyne_condition(joint, 0, "plus", rng=gen)
    after_w, x_w = homodyne_condition(after_u, 0, "minus", rng=gen)
    out = displace(after_w, 0, "plus", FEEDFORWARD_UNITY * x_u)
    out = displace(out, 0, "minus", FEEDFORWARD_UNITY * x_w)
    return out, (x_u, x_w)


def coherent_signal(x_plus: float = 0.0, x_minus: float = 0.0) -> GaussianState:
    s = displace(vacuum_state(1), 0, "plus", x_plus)
    return displace(s, 0, "minus", x_minus)


def squeezed_signal(v_sqz: float, x_plus: float = 0.0, x_minus: float = 0.0) -> GaussianState:
    s = displace(squeezed_vacuum(v_sqz), 0, "plus", x_plus)
    return displace(s, 0, "minus", x_minus)


def fidelity_sweep(v1_plus, v2_minus, gains, v_sqz: float = 1.0) -> list[dict]:
    """Rows ``{v1_plus, v2_minus, gain, v_sqz, fidelity}`` in input order."""
    return [
        {
            "v1_plus": float(v1_plus),
            "v2_minus": float(v2_minus),
            "gain": float(g),
            "v_sqz": float(v_sqz),
            "fidelity": squeezed_signal_fidelity(v1_plus, v2_minus, g, v_sqz).fidelity,
        }
        for g in gains
    ]
