"""Unitary propagation, fidelity metrics, sweeps, and disorder ensembles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import CalibrationFailed, ConfigError, NoEdgeSolution
from .model import (
    ChainSpec,
    JunctionSpec,
    SystemSpec,
    build_total_hamiltonian,
    draw_bond_disorder,
)
from .spectral import EdgeManifold, edge_amplitude_eta, edge_energy, extract_edge_manifold

__all__ = [
    "EnsembleReport",
    "swap_gate",
    "evolve_unitary",
    "state_fidelity",
    "average_gate_fidelity",
    "swap_fidelity_map",
    "gate_time_sweep",
    "disorder_ensemble",
]

_HERMITICITY_TOL = 1e-10


def swap_gate() -> np.ndarray:
    """SWAP in the logical order (uu, ud, du, dd)."""
    return np.eye(4)[[0, 2, 1, 3]]


def _check_hermitian(h: np.ndarray) -> None:
    if not np.allclose(h, h.conj().T, atol=_HERMITICITY_TOL):
        raise ConfigError("Hamiltonian must be Hermitian")


def evolve_unitary(h: np.ndarray, psi0: np.ndarray, time: float | np.ndarray) -> np.ndarray:
    """psi(t) = exp(-iHt) psi0 by spectral decomposition.

    time may be a scalar (returns one state) or an array (returns states
    as columns, one per time).
    """
    _check_hermitian(h)
    energies, vectors = np.linalg.eigh(h)
    coeff = vectors.conj().T @ psi0
    times = np.atleast_1d(np.asarray(time, dtype=float))
    states = vectors @ (np.exp(-1j * np.outer(energies, times)) * coeff[:, None])
    return states[:, 0] if np.isscalar(time) else states


def state_fidelity(psi: np.ndarray, target: np.ndarray) -> float:
    """|<target|psi>|^2."""
    return float(np.abs(np.vdot(target, psi)) ** 2)


def _logical_basis(reference: np.ndarray, vectors: np.ndarray,
                   order: np.ndarray) -> np.ndarray:
    """Project reference logical states onto the exact near-zero manifold.

    vectors/order come from a prior eigendecomposition of h_total; the
    four smallest-|E| eigenvectors are the true zero manifold. Projection
    plus symmetric (Loewdin) orthonormalization keeps the logical labels
    while removing any leakage component.
    """
    p = vectors[:, order[:4]]
    projected = p @ (p.T @ reference)
    overlap = projected.T @ projected
    w, q = np.linalg.eigh(overlap)
    return projected @ (q @ np.diag(np.clip(w, 1e-300, None) ** -0.5) @ q.T)


def _fidelity_curve(
    h_total: np.ndarray, reference: np.ndarray, times: np.ndarray, target: np.ndarray
) -> np.ndarray:
    """Average gate fidelity vs time, vectorized over the time grid.

    reference holds the four logical states as columns (order 1S, 1A, 2A,
    2S); they are re-projected onto the exact zero manifold of h_total
    before scoring (see _logical_basis).
    """
    energies, vectors = np.linalg.eigh(h_total)
    order = np.argsort(np.abs(energies))
    basis = _logical_basis(reference, vectors, order)
    w = basis.T @ vectors
    phases = np.exp(-1j * np.outer(times, energies))
    evolved = (w[None, :, :] * phases[:, None, :]) @ w.T
    m = np.einsum("ab,tbc->tac", target.conj().T, evolved)
    tr2 = np.abs(np.trace(m, axis1=1, axis2=2)) ** 2
    mm = np.einsum("tab,tab->t", m, m.conj()).real
    return (tr2 + mm) / 20.0


def average_gate_fidelity(
    h_total: np.ndarray, manifold: EdgeManifold, gate_time: float, target: np.ndarray
) -> float:
    """Haar-average gate fidelity (|Tr M|^2 + Tr(M M+)) / (d(d+1)), d = 4.

    M is the full propagator restricted to the logical manifold; leakage
    out of the manifold penalizes through Tr(M M+) < d.
    """
    return float(
        _fidelity_curve(h_total, manifold.states, np.array([gate_time]), target)[0]
    )


def swap_fidelity_map(
    j1: float,
    j2: float,
    n_cells: int,
    n_grid: int = 40,
    k_max: float = 0.1,
    t_cap: float = 1500.0,
    n_times: int = 3000,
    threads: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Best achievable SWAP fidelity on a (K-, K+) grid (Fig. 3b style).

    Each grid point is the maximum of the average-gate-fidelity curve
    over gate times in (0, t_cap]. The sign of each chain's psi_A is a
    gauge choice (it flips under chain inversion, which also exchanges
    K+ and K-), so the gate is scored against SWAP in both gauges; this
    makes the map exactly symmetric under K+ <-> K-. Returns
    (k_values, map) with map[i, j] at K- = k_values[i], K+ = k_values[j].
    """
    from .effective import _logical_reference, _z2_hamiltonian_factory

    if n_grid < 2 or k_max <= 0 or t_cap <= 0:
        raise ConfigError("swap_fidelity_map needs n_grid >= 2, k_max > 0, t_cap > 0")
    ks = np.linspace(0.0, k_max, n_grid)
    chain = ChainSpec(n_cells=n_cells, j1=j1, j2=j2)
    h0 = build_total_hamiltonian(
        SystemSpec(chain1=chain, chain2=chain, junction=JunctionSpec.c4(0.0))
    )
    reference = _logical_reference(h0)
    build = _z2_hamiltonian_factory(h0)
    times = np.linspace(1.0, t_cap, n_times)
    gauge = np.diag([1.0, 1.0, -1.0, 1.0])
    targets = (swap_gate(), gauge @ swap_gate() @ gauge)

    def best(h: np.ndarray) -> float:
        return max(_fidelity_curve(h, reference, times, t).max() for t in targets)

    def row(i: int) -> np.ndarray:
        km = ks[i]
        return np.array([best(build(kp, km, km, kp)) for kp in ks])

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(n_grid)))
    else:
        rows = [row(i) for i in range(n_grid)]
    return ks, np.vstack(rows)


def _optimal_j1(k_index: int, k_minus: float, j2: float, n_cells: int) -> float:
    """j1 on the sweet line: eps_S(j1) / (2 eta^2(j1)) = (4k - 1) K-.

    This picks the J1 that gives the highest fidelity analytically: the
    commensurability condition selects the chain for which the seed is
    exact.
    """
    target = (4 * k_index - 1) * k_minus

    def f(j1: float) -> float:
        return abs(edge_energy(j1, j2, n_cells)) / (
            2.0 * edge_amplitude_eta(j1, j2, n_cells) ** 2
        ) - target

    lo, hi = 1e-3 * j2, (n_cells / (n_cells + 1) - 1e-9) * j2
    if f(lo) * f(hi) > 0:
        raise NoEdgeSolution(
            f"no j1 on the sweet line for K- = {k_minus:.4g}, k = {k_index}, N = {n_cells}"
        )
    return brentq(f, lo, hi, xtol=1e-14)


def gate_time_sweep(
    j2_values: list[float],
    k_plus_range: list[float],
    n_cells: int,
    k_index: int = 2,
) -> list[dict]:
    """Gate time and fidelity along the sweet line K- = K+/3 (Fig. 3c).

    For each (j2, K+): solve for the optimal j1, then refine the gate
    time by a dense scan plus simplex polish around pi / (8 eta^2 K-).
    Returns rows {j2, k_plus, j1_opt, t_swap, fidelity, calibration_failed}.
    """
    target = swap_gate()
    rows = []
    for j2 in j2_values:
        for k_plus in k_plus_range:
            k_minus = k_plus / 3.0
            row = {"j2": j2, "k_plus": k_plus, "j1_opt": np.nan, "t_swap": np.nan,
                   "fidelity": np.nan, "calibration_failed": False}
            try:
                j1 = _optimal_j1(k_index, k_minus / j2, 1.0, n_cells) * j2
                eta2 = edge_amplitude_eta(j1, j2, n_cells) ** 2
                t0 = np.pi / (8.0 * eta2 * k_minus)
                chain = ChainSpec(n_cells=n_cells, j1=j1, j2=j2)
                system = SystemSpec(chain1=chain, chain2=chain,
                                    junction=JunctionSpec.z2(k_plus, k_minus))
                h = build_total_hamiltonian(system)
                manifold = extract_edge_manifold(h)
                times = np.linspace(0.9 * t0, 1.1 * t0, 3000)
                curve = _fidelity_curve(h, manifold.states, times, target)
                i = int(np.argmax(curve))
                res = minimize(
                    lambda x: -_fidelity_curve(h, manifold.states, np.array([x[0]]), target)[0],
                    [times[i]],
                    method="Nelder-Mead",
                    options={"maxfev": 200, "xatol": 1e-9},
                )
                row.update(j1_opt=j1, t_swap=float(res.x[0]), fidelity=float(-res.fun))
            except (NoEdgeSolution, CalibrationFailed):
                row["calibration_failed"] = True
            rows.append(row)
    return rows


@dataclass(frozen=True)
class EnsembleReport:
    """Aggregate of a disorder ensemble run."""

    n_instances: int
    mean_fidelity: float
    std_fidelity: float
    per_instance: tuple[tuple[int, float], ...]
    flagged: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for _, f in self.per_instance:
            if not 0.0 <= f <= 1.0 + 1e-12:
                raise ConfigError(f"fidelity {f} outside [0, 1]")


def disorder_ensemble(
    base: SystemSpec,
    delta: float,
    n_instances: int,
    seed: int,
    recalibrate: bool,
    k_index: int = 2,
    clean_gate_time: float | None = None,
) -> EnsembleReport:
    """Disorder ensemble of SWAP fidelities (Fig. 3d).

    Per instance: draw independent bond disorder for each chain, then
    either recalibrate the junction (recalibrate=True) or evaluate the
    clean operating point carried by `base` + clean_gate_time on the
    disordered Hamiltonian. Fully reproducible from (seed, n_instances):
    instance generators are spawned from a single SeedSequence and
    results are aggregated in instance order.
    """
    from .effective import recalibrate_for_disorder, sweet_point

    if delta < 0:
        raise ConfigError(f"delta must be >= 0, got {delta}")
    if clean_gate_time is None:
        clean = sweet_point(k_index, base.chain1.j1, base.chain1.j2, base.n_cells)
        base = SystemSpec(chain1=base.chain1, chain2=base.chain2, junction=clean.junction)
        clean_gate_time = clean.t_swap

    target = swap_gate()
    children = np.random.SeedSequence(seed).spawn(n_instances)
    results: list[tuple[int, float]] = []
    flagged: list[int] = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        chain1 = ChainSpec(
            n_cells=base.n_cells, j1=base.chain1.j1, j2=base.chain1.j2,
            bond_disorder=draw_bond_disorder(base.n_cells, delta, rng),
        )
        chain2 = ChainSpec(
            n_cells=base.n_cells, j1=base.chain2.j1, j2=base.chain2.j2,
            bond_disorder=draw_bond_disorder(base.n_cells, delta, rng),
        )
        system = SystemSpec(chain1=chain1, chain2=chain2, junction=base.junction)
        h = build_total_hamiltonian(system)
        if recalibrate:
            try:
                point = recalibrate_for_disorder(h, k_index, escalation_seed=i)
                h_cal = build_total_hamiltonian(
                    SystemSpec(chain1=chain1, chain2=chain2, junction=point.junction)
                )
                manifold = extract_edge_manifold(h_cal)
                fid = average_gate_fidelity(h_cal, manifold, point.t_swap, target)
            except CalibrationFailed:
                flagged.append(i)
                manifold = extract_edge_manifold(h)
                fid = average_gate_fidelity(h, manifold, clean_gate_time, target)
        else:
            manifold = extract_edge_manifold(h)
            fid = average_gate_fidelity(h, manifold, clean_gate_time, target)
        results.append((i, float(fid)))

    values = np.array([f for _, f in results])
    return EnsembleReport(
        n_instances=n_instances,
        mean_fidelity=float(values.mean()),
        std_fidelity=float(values.std()),
        per_instance=tuple(results),
        flagged=tuple(flagged),
    )
