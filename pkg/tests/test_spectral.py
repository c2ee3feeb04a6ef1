"""Edge-state formulas against exact diagonalization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xssh import (
    ChainSpec,
    JunctionSpec,
    NoEdgeSolution,
    SystemSpec,
    build_chain_hamiltonian,
    build_total_hamiltonian,
    central_site,
    edge_amplitude_eta,
    edge_energy,
    extract_edge_doublet,
    extract_edge_manifold,
    ipr,
    parity,
    solve_lambda,
)


@settings(max_examples=40, deadline=None)
@given(n_cells=st.sampled_from([3, 5, 7]), j1=st.floats(0.1, 0.7))
def test_edge_energy_matches_diagonalization(n_cells, j1):
    analytic = edge_energy(j1, 1.0, n_cells)
    energies = np.linalg.eigvalsh(build_chain_hamiltonian(ChainSpec(n_cells=n_cells, j1=j1)))
    numeric = energies[np.argmin(np.abs(energies - analytic))]
    assert abs(analytic - numeric) < 1e-9


def test_solve_lambda_residual():
    for n_cells, j1 in ((3, 0.3), (5, 0.51), (7, 0.2)):
        lam = solve_lambda(j1, 1.0, n_cells)
        residual = np.sinh(n_cells * lam) / np.sinh((n_cells + 1) * lam) - j1
        assert abs(residual) < 1e-9


def test_solve_lambda_requires_localized_regime():
    # The localized-edge solution exists only for j1/j2 < N/(N+1).
    with pytest.raises(NoEdgeSolution):
        solve_lambda(0.95, 1.0, 5)


def test_edge_energy_sign_alternates_with_parity_of_n():
    assert edge_energy(0.4, 1.0, 3) > 0  # (-1)^(N+1) with N odd
    assert edge_energy(0.4, 1.0, 5) > 0
    h4 = build_chain_hamiltonian(ChainSpec(n_cells=4, j1=0.4))
    doublet_energy = np.sort(np.abs(np.linalg.eigvalsh(h4)))[0]
    assert abs(abs(edge_energy(0.4, 1.0, 4)) - doublet_energy) < 1e-9
    assert edge_energy(0.4, 1.0, 4) < 0


def test_eta_is_central_amplitude_of_psi_s():
    for n_cells, j1 in ((3, 0.3), (5, 0.4), (7, 0.25)):
        h = build_chain_hamiltonian(ChainSpec(n_cells=n_cells, j1=j1))
        doublet = extract_edge_doublet(h)
        s = central_site(n_cells)
        eta = edge_amplitude_eta(j1, 1.0, n_cells)
        assert abs(abs(doublet.psi_s[s]) - eta) < 1e-10


def test_doublet_properties():
    h = build_chain_hamiltonian(ChainSpec(n_cells=5, j1=0.4))
    doublet = extract_edge_doublet(h)
    eps = edge_energy(0.4, 1.0, 5)
    # Energies are -/+ eps_S and states are H-eigenvectors.
    np.testing.assert_allclose(h @ doublet.psi_s, doublet.eps_s * doublet.psi_s, atol=1e-10)
    np.testing.assert_allclose(h @ doublet.psi_a, -doublet.eps_s * doublet.psi_a, atol=1e-10)
    assert abs(doublet.eps_s - eps) < 1e-10
    # psi_S is inversion-even, psi_A inversion-odd.
    assert parity(doublet.psi_s) == pytest.approx(1.0, abs=1e-10)
    assert parity(doublet.psi_a) == pytest.approx(-1.0, abs=1e-10)


def test_parity_normalization():
    # A single-site excitation has zero inversion expectation.
    e0 = np.zeros(10)
    e0[0] = 1.0
    assert parity(e0) == pytest.approx(0.0, abs=1e-15)
    even = np.zeros(10)
    even[0] = even[-1] = 1 / np.sqrt(2)
    assert parity(even) == pytest.approx(1.0)
    odd = even.copy()
    odd[-1] *= -1
    assert parity(odd) == pytest.approx(-1.0)


def test_ipr_limits():
    localized = np.zeros(8)
    localized[3] = 1.0
    assert ipr(localized) == pytest.approx(1.0)
    uniform = np.full(8, 1 / np.sqrt(8))
    assert ipr(uniform) == pytest.approx(1 / 8)


def test_manifold_orthonormal_and_ordered():
    chain = ChainSpec(n_cells=5, j1=0.51)
    system = SystemSpec(chain1=chain, chain2=chain, junction=JunctionSpec.c4(0.05))
    h = build_total_hamiltonian(system)
    manifold = extract_edge_manifold(h)
    assert manifold.labels == ("uu", "ud", "du", "dd")
    gram = manifold.states.T @ manifold.states
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)
    # Column order (1S, 1A, 2A, 2S): chains 1 and 2 carry the weight.
    weights_chain1 = np.sum(manifold.states[:10] ** 2, axis=0)
    assert weights_chain1[0] > 0.9 and weights_chain1[1] > 0.9
    assert weights_chain1[2] < 0.1 and weights_chain1[3] < 0.1
