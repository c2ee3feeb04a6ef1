"""Collective dissipation: kernel values, master equation, concurrence."""

import numpy as np
import pytest

from xssh import (
    ChainSpec,
    ConfigError,
    DissipationKernel,
    SectoredDensityMatrix,
    bell_transfer_protocol,
    build_chain_hamiltonian,
    build_kernel,
    build_layout,
    collective_modes,
    concurrence_edge_pair,
    evolve_master,
    evolve_master_trajectory,
    extract_edge_doublet,
    fit_decay_rate,
    JunctionSpec,
    remote_entanglement_protocol,
    SystemSpec,
    wootters_concurrence,
)
from xssh.open_system import reduced_edge_state


def test_layout_spacings():
    layout = build_layout(5)
    d = np.diff(layout.positions)
    assert d[0] == pytest.approx(0.75)
    assert d[-1] == pytest.approx(0.75)
    np.testing.assert_allclose(d[1:-1], 0.5)
    # Edge-to-edge distance is an integer number of wavelengths.
    span = layout.positions[-1] - layout.positions[0]
    assert span == pytest.approx(round(span))


def test_kernel_trig_values():
    gamma0 = 0.04
    kernel = build_kernel(build_layout(3), gamma0)
    # d = 0.75 lambda: cos(2 pi d) = 0, sin(2 pi d) = -1.
    assert kernel.gamma[0, 1] == pytest.approx(0.0, abs=1e-15)
    assert kernel.g[0, 1] == pytest.approx(-gamma0 / 2)
    # d = 0.5 lambda: cos = -1, sin = 0.
    assert kernel.gamma[1, 2] == pytest.approx(-gamma0)
    assert kernel.g[1, 2] == pytest.approx(0.0, abs=1e-15)
    assert np.all(np.diag(kernel.gamma) == gamma0)
    assert np.all(np.diag(kernel.g) == 0.0)


def test_kernel_rejects_non_psd_gamma():
    with pytest.raises(ConfigError):
        DissipationKernel(
            g=np.zeros((2, 2)),
            gamma=np.array([[0.0, 0.1], [0.1, 0.0]]),
            gamma0=0.1,
        )


def test_collective_mode_rates():
    gamma0 = 0.035
    n_cells = 5
    modes = collective_modes(build_kernel(build_layout(n_cells), gamma0))
    rates = sorted(r for r, _ in modes if r > 1e-10 * gamma0)
    assert len(rates) == 2
    assert rates[0] == pytest.approx(2 * gamma0, abs=1e-10 * gamma0)
    assert rates[1] == pytest.approx((2 * n_cells - 2) * gamma0, abs=1e-10 * gamma0)


def test_single_atom_exponential_decay():
    gamma0 = 0.3
    kernel = DissipationKernel(g=np.zeros((1, 1)), gamma=np.array([[gamma0]]), gamma0=gamma0)
    times = np.linspace(0.0, 8.0, 33)
    traj = evolve_master_trajectory(
        SectoredDensityMatrix.from_pure(np.array([1.0])), np.zeros((1, 1)), kernel, times
    )
    for t, state in zip(times, traj):
        assert state.rho_ee[0, 0].real == pytest.approx(np.exp(-gamma0 * t), abs=1e-6)
        assert state.trace_total == pytest.approx(1.0, abs=1e-9)


def test_evolve_master_endpoint_matches_trajectory():
    chain = ChainSpec(n_cells=3, j1=0.3)
    h = build_chain_hamiltonian(chain)
    kernel = build_kernel(build_layout(3), 0.05)
    psi0 = np.zeros(6)
    psi0[0] = 1.0
    rho0 = SectoredDensityMatrix.from_pure(psi0)
    end = evolve_master(rho0, h, kernel, 40.0)
    traj = evolve_master_trajectory(rho0, h, kernel, np.array([0.0, 40.0]))
    np.testing.assert_allclose(end.rho_ee, traj[-1].rho_ee, atol=1e-9)
    assert end.p_ground == pytest.approx(traj[-1].p_ground, abs=1e-9)


def test_fit_decay_rate_recovers_exponential():
    times = np.linspace(0.0, 20.0, 200)
    rate = 0.17
    assert fit_decay_rate(times, np.exp(-rate * times)) == pytest.approx(rate, rel=1e-6)


def test_wootters_oracles():
    bell = np.zeros((4, 4))
    bell[1, 1] = bell[2, 2] = 0.5
    bell[1, 2] = bell[2, 1] = 0.5
    assert wootters_concurrence(bell) == pytest.approx(1.0)
    product = np.diag([1.0, 0.0, 0.0, 0.0])
    assert wootters_concurrence(product) == pytest.approx(0.0)
    # Werner state rho = p |Bell><Bell| + (1-p) I/4: C = max(0, (3p-1)/2).
    for p in (0.2, 0.5, 0.9):
        werner = p * bell + (1 - p) * np.eye(4) / 4
        assert wootters_concurrence(werner) == pytest.approx(max(0.0, (3 * p - 1) / 2))


def test_concurrence_shortcut_matches_wootters():
    chain = ChainSpec(n_cells=3, j1=0.3)
    h = build_chain_hamiltonian(chain)
    kernel = build_kernel(build_layout(3), 0.05)
    psi0 = np.zeros(6)
    psi0[0] = 1.0
    times = np.linspace(0.0, 60.0, 7)
    for state in evolve_master_trajectory(
        SectoredDensityMatrix.from_pure(psi0), h, kernel, times
    ):
        shortcut = concurrence_edge_pair(state)
        full = wootters_concurrence(reduced_edge_state(state))
        # wootters goes through a non-Hermitian eigensolve, good to ~1e-8
        assert shortcut == pytest.approx(full, abs=1e-7)


def test_remote_entanglement_trajectory_contract():
    traj = remote_entanglement_protocol(ChainSpec(n_cells=3, j1=0.25), 0.05, t_max=60.0,
                                        n_times=50)
    assert traj["concurrence"][0] == 0.0
    assert np.all(traj["p_ground"] >= -1e-12)
    assert np.all(np.diff(traj["p_ground"]) >= -1e-10)  # ground population only grows
    total = traj["pop_S"] + traj["pop_A"] + traj["p_ground"]
    assert np.all(total <= 1.0 + 1e-9)
    assert traj["concurrence"].max() > 0.1


def test_bell_transfer_moves_population_to_chain_two():
    chain = ChainSpec(n_cells=3, j1=0.25)
    system = SystemSpec(chain1=chain, chain2=chain, junction=JunctionSpec.z2(0.5, 0.0))
    traj = bell_transfer_protocol(system, 0.035, t_max=120.0, n_times=160)
    assert traj["bell_1"][0] > 0.8
    assert traj["bell_2"][0] < 1e-6
    # Peak arrival population relative to what was launched.
    assert traj["bell_2"].max() / traj["bell_1"][0] > 0.85
