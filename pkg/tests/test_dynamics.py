"""Unitary dynamics, gate fidelity, sweeps, ensembles."""

import numpy as np
import pytest
from scipy.linalg import expm

from xssh import (
    ChainSpec,
    ConfigError,
    JunctionSpec,
    SystemSpec,
    average_gate_fidelity,
    build_total_hamiltonian,
    disorder_ensemble,
    evolve_unitary,
    extract_edge_manifold,
    gate_time_sweep,
    state_fidelity,
    swap_fidelity_map,
    swap_gate,
    sweet_point,
)


def _calibrated_system():
    point = sweet_point(2, 0.51, 1.0, 5)
    chain = ChainSpec(n_cells=5, j1=0.51)
    system = SystemSpec(chain1=chain, chain2=chain, junction=point.junction)
    return point, system, build_total_hamiltonian(system)


def test_swap_gate_is_the_two_qubit_swap():
    gate = swap_gate()
    np.testing.assert_allclose(gate @ gate, np.eye(4))
    # ud <-> du, uu and dd fixed.
    np.testing.assert_allclose(gate @ np.eye(4)[1], np.eye(4)[2])
    np.testing.assert_allclose(gate @ np.eye(4)[0], np.eye(4)[0])


def test_evolve_unitary_matches_expm():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(8, 8))
    h = (a + a.T) / 2
    psi0 = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi0 /= np.linalg.norm(psi0)
    for t in (0.0, 0.7, 5.3):
        oracle = expm(-1j * h * t) @ psi0
        np.testing.assert_allclose(evolve_unitary(h, psi0, t), oracle, atol=1e-10)
    # Array form returns one column per time, norm-preserving.
    times = np.linspace(0.0, 10.0, 7)
    states = evolve_unitary(h, psi0, times)
    assert states.shape == (8, 7)
    np.testing.assert_allclose(np.linalg.norm(states, axis=0), np.ones(7), atol=1e-12)


def test_evolve_unitary_rejects_non_hermitian():
    with pytest.raises(ConfigError):
        evolve_unitary(np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([1.0, 0.0]), 1.0)


def test_state_fidelity():
    psi = np.array([1.0, 0.0])
    assert state_fidelity(psi, psi) == pytest.approx(1.0)
    assert state_fidelity(psi, np.array([0.0, 1.0])) == pytest.approx(0.0)


def test_average_gate_fidelity_against_haar_monte_carlo():
    """F_bar formula vs direct Haar averaging over 10^4 logical states."""
    point, _, h = _calibrated_system()
    manifold = extract_edge_manifold(h)
    target = swap_gate()
    gate_time = 0.37 * point.t_swap  # away from the sweet time, F well below 1
    f_formula = average_gate_fidelity(h, manifold, gate_time, target)

    rng = np.random.default_rng(99)
    samples = 10_000
    coeffs = rng.normal(size=(samples, 4)) + 1j * rng.normal(size=(samples, 4))
    coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
    energies, vectors = np.linalg.eigh(h)
    prop = (vectors * np.exp(-1j * energies * gate_time)) @ vectors.conj().T
    evolved = prop @ (manifold.states @ coeffs.T)
    ideal = manifold.states @ (target @ coeffs.T)
    f_mc = float(np.mean(np.abs(np.sum(ideal.conj() * evolved, axis=0)) ** 2))
    assert abs(f_formula - f_mc) < 1e-3


def test_swap_dynamics_at_sweet_point():
    point, _, h = _calibrated_system()
    manifold = extract_edge_manifold(h)
    assert average_gate_fidelity(h, manifold, point.t_swap, swap_gate()) > 0.999


def test_swap_fidelity_map_symmetry_small_grid():
    _, fid = swap_fidelity_map(0.51, 1.0, 3, n_grid=8, k_max=0.1, t_cap=400.0, n_times=800)
    assert fid.shape == (8, 8)
    assert np.max(np.abs(fid - fid.T)) < 0.05
    assert np.all(fid <= 1.0 + 1e-9)


def test_gate_time_sweep_monotone():
    rows = gate_time_sweep([1.0], [0.1, 0.2, 0.3], 3)
    t_swap = [r["t_swap"] for r in rows]
    assert t_swap[0] > t_swap[1] > t_swap[2]
    assert all(r["fidelity"] > 0.99 for r in rows)
    assert all(not r["calibration_failed"] for r in rows)
    assert all(0 < r["j1_opt"] < 1 for r in rows)


def test_disorder_ensemble_deterministic_and_contrasted():
    point, system, _ = _calibrated_system()
    delta = 0.5 * point.k_minus
    kwargs = dict(
        base=system, delta=delta, n_instances=6, seed=42,
        recalibrate=False, k_index=2, clean_gate_time=point.t_swap,
    )
    report_a = disorder_ensemble(**kwargs)
    report_b = disorder_ensemble(**kwargs)
    assert report_a.per_instance == report_b.per_instance
    assert report_a.n_instances == 6
    assert 0.0 < report_a.mean_fidelity <= 1.0
    recal = disorder_ensemble(**{**kwargs, "recalibrate": True})
    assert recal.mean_fidelity > report_a.mean_fidelity
