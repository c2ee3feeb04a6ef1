"""Effective two-spin model, analytic propagator, and SWAP calibration.

Conventions (validated against exact diagonalization, see tests):
the zero-manifold projection of H_tot in the logical order
(psi_1S, psi_1A, psi_2A, psi_2S) is

    t sz(x)sz + u sx(x)sx - v sy(x)sy,   t = eps_S,
                                         u = 2 eta^2 K+,
                                         v = 2 eta^2 K-,

with the Z2 junction K1 = K4 = K+, K2 = K3 = K-. The symmetric channel
couples (1S, 2S) with g_S = u + v; the anti-symmetric channel couples
(1A, 2A) with g_A = u - v. The C4 point K+ = K- gives g = 4K eta^2.
The SWAP sweet point follows as K-0 = eps_S / (2 eta^2 (4k - 1)),
K+0 = 3 K-0, T_SWAP = pi / (8 eta^2 K-0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import dynamics
from .errors import CalibrationFailed, ConfigError, ManifoldLeakage
from .model import ChainSpec, JunctionSpec, SystemSpec, build_total_hamiltonian, central_site
from .spectral import (
    EdgeManifold,
    bulk_gap,
    edge_amplitude_eta,
    edge_energy,
    extract_edge_doublet,
)

__all__ = [
    "SpinModelParams",
    "SweetPoint",
    "spin_params",
    "coupling_g",
    "project_effective",
    "analytic_propagator",
    "transfer_time",
    "sweet_point",
    "recalibrate_for_disorder",
]


@dataclass(frozen=True)
class SpinModelParams:
    """(t, u, v) of H_eff = t sz(x)sz + u sx(x)sx - v sy(x)sy."""

    t: float
    u: float
    v: float


@dataclass(frozen=True)
class SweetPoint:
    """A calibrated SWAP operating point.

    k_plus/k_minus are the Z2 seed couplings; junction carries the final
    (possibly asymmetric, after disorder recalibration) settings actually
    used; t_swap the gate time; fidelity the average gate fidelity at the
    returned point.
    """

    k_minus: float
    k_plus: float
    k_index: int
    t_swap: float
    fidelity: float
    junction: JunctionSpec

    def as_junction(self) -> JunctionSpec:
        return self.junction


def spin_params(
    j1: float, j2: float, n_cells: int, k_plus: float, k_minus: float
) -> SpinModelParams:
    """Closed-form effective parameters t = eps_S, u = 2 eta^2 K+, v = 2 eta^2 K-."""
    eta2 = edge_amplitude_eta(j1, j2, n_cells) ** 2
    return SpinModelParams(
        t=edge_energy(j1, j2, n_cells), u=2.0 * eta2 * k_plus, v=2.0 * eta2 * k_minus
    )


def coupling_g(j1: float, j2: float, n_cells: int, k: float) -> float:
    """C4 edge-transfer coupling g = 4 K eta^2 (half the symmetric-manifold splitting)."""
    return 4.0 * k * edge_amplitude_eta(j1, j2, n_cells) ** 2


def project_effective(h_total: np.ndarray, manifold: EdgeManifold) -> np.ndarray:
    """First-order projection H_eff[a,b] = <state_a|H_tot|state_b>."""
    if bulk_gap(h_total, 4) <= 0:
        raise ManifoldLeakage("edge manifold not separated from the bulk")
    return manifold.states.T @ h_total @ manifold.states


def analytic_propagator(params: SpinModelParams, time: float) -> np.ndarray:
    """Eq. (6) propagator in the logical order (uu, ud, du, dd).

    The Pi block {uu, dd} has eigenvalues E_S(+/-) = t +/- (u + v) on
    (|uu> +/- |dd>)/sqrt(2); the Sigma block {ud, du} has
    E_A(+/-) = -t +/- (u - v) on (|ud> +/- |du>)/sqrt(2). The blocks never
    mix.
    """
    t, u, v = params.t, params.u, params.v
    u_pi = np.exp(-1j * (t + (u + v)) * time)
    u_pi_m = np.exp(-1j * (t - (u + v)) * time)
    u_sig = np.exp(-1j * (-t + (u - v)) * time)
    u_sig_m = np.exp(-1j * (-t - (u - v)) * time)
    prop = np.zeros((4, 4), dtype=complex)
    # Pi block on indices (0, 3).
    prop[0, 0] = prop[3, 3] = 0.5 * (u_pi + u_pi_m)
    prop[0, 3] = prop[3, 0] = 0.5 * (u_pi - u_pi_m)
    # Sigma block on indices (1, 2).
    prop[1, 1] = prop[2, 2] = 0.5 * (u_sig + u_sig_m)
    prop[1, 2] = prop[2, 1] = 0.5 * (u_sig - u_sig_m)
    return prop


def transfer_time(g: float) -> float:
    """Half-Rabi transfer time T_t = pi / (2 g)."""
    if g <= 0:
        raise ConfigError(f"coupling g must be positive, got {g}")
    return np.pi / (2.0 * g)


def _seed(k_index: int, eps_s: float, eta2: float) -> tuple[float, float, float]:
    """Analytic sweet-point seed (K-0, K+0, T_SWAP)."""
    if k_index < 1:
        raise ConfigError(f"k_index must be >= 1, got {k_index}")
    k_minus = abs(eps_s) / (2.0 * eta2 * (4 * k_index - 1))
    return k_minus, 3.0 * k_minus, np.pi / (8.0 * eta2 * k_minus)


def _system(j1: float, j2: float, n_cells: int, junction: JunctionSpec) -> SystemSpec:
    chain = ChainSpec(n_cells=n_cells, j1=j1, j2=j2)
    return SystemSpec(chain1=chain, chain2=chain, junction=junction)


def _z2_hamiltonian_factory(h_total_zero_junction: np.ndarray):
    """Return H(k1, k2, k3, k4) built on top of fixed chain blocks."""
    h0 = h_total_zero_junction
    n = h0.shape[0] // 2
    s = central_site(n // 2)

    def build(k1: float, k2: float, k3: float, k4: float) -> np.ndarray:
        h = h0.copy()
        for a, b, k in (
            (s, n + s, k1),
            (s + 1, n + s, k2),
            (s, n + s + 1, k3),
            (s + 1, n + s + 1, k4),
        ):
            h[a, b] += k
            h[b, a] += k
        return h

    return build


def _refine(
    build_h,
    reference: np.ndarray,
    x0: tuple[float, float, float, float, float],
    maxfev: int,
) -> tuple[np.ndarray, float]:
    """Nelder-Mead ascent of F(K1..K4, T); returns (x, fidelity)."""
    target = dynamics.swap_gate()

    def cost(x: np.ndarray) -> float:
        h = build_h(*np.abs(x[:4]))
        return -dynamics._fidelity_curve(h, reference, np.array([x[4]]), target)[0]

    res = minimize(
        cost,
        x0,
        method="Nelder-Mead",
        options={"maxfev": maxfev, "xatol": 1e-10, "fatol": 1e-12},
    )
    return np.abs(res.x), -res.fun


def sweet_point(
    k_index: int, j1: float, j2: float, n_cells: int, min_fidelity: float = 0.99
) -> SweetPoint:
    """Analytic seed plus local fidelity refinement over (K+, K-, T).

    The refinement maximizes the average SWAP fidelity in a +/-10% box
    around the analytic seed with a derivative-free simplex (<= 500
    evaluations); the landscape is smooth there and the refined point
    absorbs higher-order corrections to the first-order seed.
    """
    eps_s = edge_energy(j1, j2, n_cells)
    eta2 = edge_amplitude_eta(j1, j2, n_cells) ** 2
    km0, kp0, t0 = _seed(k_index, eps_s, eta2)

    h0 = build_total_hamiltonian(_system(j1, j2, n_cells, JunctionSpec.c4(0.0)))
    build_h = _z2_hamiltonian_factory(h0)
    reference = _logical_reference(h0)
    target = dynamics.swap_gate()

    lo = np.array([kp0, km0, t0]) * 0.9
    hi = np.array([kp0, km0, t0]) * 1.1

    def cost(x: np.ndarray) -> float:
        x = np.clip(x, lo, hi)
        h = build_h(x[0], x[1], x[1], x[0])
        return -dynamics._fidelity_curve(h, reference, np.array([x[2]]), target)[0]

    res = minimize(
        cost,
        [kp0, km0, t0],
        method="Nelder-Mead",
        options={"maxfev": 500, "xatol": 1e-10, "fatol": 1e-12},
    )
    kp, km, t_swap = np.clip(res.x, lo, hi)
    fidelity = -res.fun
    if fidelity <= min_fidelity:
        raise CalibrationFailed(
            f"sweet-point refinement reached F = {fidelity:.6f} <= {min_fidelity} "
            f"(k={k_index}, j1={j1}, N={n_cells}; seed K-={km0:.4g}, K+={kp0:.4g}, T={t0:.4g})"
        )
    return SweetPoint(
        k_minus=km,
        k_plus=kp,
        k_index=k_index,
        t_swap=t_swap,
        fidelity=fidelity,
        junction=JunctionSpec.z2(kp, km),
    )


def _logical_reference(h_total: np.ndarray) -> np.ndarray:
    """Embedded per-chain doublets in logical order (1S, 1A, 2A, 2S)."""
    n = h_total.shape[0] // 2
    d1 = extract_edge_doublet(h_total[:n, :n])
    d2 = extract_edge_doublet(h_total[n:, n:])
    ref = np.zeros((2 * n, 4))
    ref[:n, 0] = d1.psi_s
    ref[:n, 1] = d1.psi_a
    ref[n:, 2] = d2.psi_a
    ref[n:, 3] = d2.psi_s
    return ref


def recalibrate_for_disorder(
    h_total_disordered: np.ndarray, k_index: int, escalation_seed: int = 0
) -> SweetPoint:
    """Per-instance junction recalibration under bond disorder.

    Seeds from the numerically extracted doublet energy t_bar and
    central-site amplitude eta_num of the disordered chains, then runs a
    deterministic multi-start search: scaled Z2 seed patterns s*(K+,K-,K-,K+)
    and s*(K-,K+,K+,K-) for s in {1,2,3,4}, each with a dense gate-time
    scan followed by a Nelder-Mead polish over (K1..K4, T); if the best
    fidelity is still below 0.992, 20 additional seeded random starts in
    [0.05, 1]^4 are tried. Large coupling scales are required because
    independent per-chain disorder detunes the two edge doublets and full
    transfer needs g_S to dominate |t1 - t2|.
    """
    h0 = h_total_disordered.copy()
    n = h0.shape[0] // 2
    s = central_site(n // 2)
    # Strip any existing junction so the factory starts from bare chains.
    for a, b in ((s, n + s), (s + 1, n + s), (s, n + s + 1), (s + 1, n + s + 1)):
        h0[a, b] = h0[b, a] = 0.0
    build_h = _z2_hamiltonian_factory(h0)

    d1 = extract_edge_doublet(h0[:n, :n])
    d2 = extract_edge_doublet(h0[n:, n:])
    t_bar = 0.5 * (abs(d1.eps_s) + abs(d2.eps_s))
    eta2_num = abs(d1.psi_s[s] * d2.psi_s[s])
    km, kp, t0 = _seed(k_index, t_bar, eta2_num)

    reference = _logical_reference(h0)
    target = dynamics.swap_gate()
    times = np.linspace(0.2 * t0, 2.2 * t0, 6000)

    best_x: np.ndarray | None = None
    best_f = -np.inf

    def try_start(k: tuple[float, float, float, float]) -> None:
        nonlocal best_x, best_f
        h = build_h(*k)
        curve = dynamics._fidelity_curve(h, reference, times, target)
        t_star = times[int(np.argmax(curve))]
        x, f = _refine(build_h, reference, (*k, t_star), maxfev=1500)
        if f > best_f:
            best_f, best_x = f, x

    for scale in (1.0, 2.0, 3.0, 4.0):
        for pattern in ((kp, km, km, kp), (km, kp, kp, km)):
            try_start(tuple(scale * k for k in pattern))
            if best_f > 0.997:
                break
        if best_f > 0.997:
            break
    if best_f <= 0.992:
        rng = np.random.default_rng(escalation_seed)
        for _ in range(20):
            try_start(tuple(rng.uniform(0.05, 1.0, 4)))
            if best_f > 0.995:
                break

    assert best_x is not None
    k1, k2, k3, k4 = best_x[:4]
    return SweetPoint(
        k_minus=km,
        k_plus=kp,
        k_index=k_index,
        t_swap=float(best_x[4]),
        fidelity=float(best_f),
        junction=JunctionSpec(k1, k2, k3, k4),
    )
