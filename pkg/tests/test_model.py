"""Hamiltonian builders: term-by-term oracles and structural properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xssh import (
    ChainSpec,
    ConfigError,
    JunctionSpec,
    SiteIndex,
    SystemSpec,
    build_chain_hamiltonian,
    build_junction_hamiltonian,
    build_total_hamiltonian,
    central_site,
    draw_bond_disorder,
)


def test_site_index_flatten_contract():
    # mu = (chain - 1) * 2N + 2 (cell - 1) + (0 for A, 1 for B), N = 3.
    assert SiteIndex(1, 1, "A").flatten(3) == 0
    assert SiteIndex(1, 1, "B").flatten(3) == 1
    assert SiteIndex(1, 3, "B").flatten(3) == 5
    assert SiteIndex(2, 1, "A").flatten(3) == 6
    assert SiteIndex(2, 3, "B").flatten(3) == 11


def test_site_index_validation():
    with pytest.raises(ConfigError):
        SiteIndex(3, 1, "A")
    with pytest.raises(ConfigError):
        SiteIndex(1, 0, "A")
    with pytest.raises(ConfigError):
        SiteIndex(1, 1, "C")


@pytest.mark.parametrize("n_cells, expected", [(1, 0), (3, 2), (5, 4), (7, 6)])
def test_central_site(n_cells, expected):
    assert central_site(n_cells) == expected


def test_chain_hamiltonian_term_by_term():
    # N = 2, J1 = 0.3, J2 = 1: bonds A1-B1 (J1), B1-A2 (J2), A2-B2 (J1).
    h = build_chain_hamiltonian(ChainSpec(n_cells=2, j1=0.3))
    expected = np.array(
        [
            [0.0, 0.3, 0.0, 0.0],
            [0.3, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.3],
            [0.0, 0.0, 0.3, 0.0],
        ]
    )
    np.testing.assert_allclose(h, expected, atol=0.0)


def test_chain_hamiltonian_with_bond_disorder():
    bonds = (0.01, -0.02, 0.03)
    h = build_chain_hamiltonian(ChainSpec(n_cells=2, j1=0.3, bond_disorder=bonds))
    assert h[0, 1] == 0.3 + 0.01
    assert h[1, 2] == 1.0 - 0.02
    assert h[2, 3] == 0.3 + 0.03
    np.testing.assert_allclose(h, h.T)


def test_chain_spec_rejects_bad_input():
    with pytest.raises(ConfigError):
        ChainSpec(n_cells=0, j1=0.3)
    with pytest.raises(ConfigError):
        ChainSpec(n_cells=3, j1=-0.1)
    with pytest.raises(ConfigError):
        ChainSpec(n_cells=3, j1=0.3, bond_disorder=(0.0,) * 4)  # needs 2N - 1 = 5
    with pytest.raises(ConfigError):
        # J1 + delta <= 0 makes a bond non-positive.
        build_chain_hamiltonian(ChainSpec(n_cells=3, j1=0.1, bond_disorder=(-0.1,) * 5))


def test_junction_term_by_term():
    # Eq.-(2) pattern at the central cell: s = central A site of each chain.
    n_cells = 3
    s = central_site(n_cells)
    k = (0.11, 0.22, 0.33, 0.44)
    chain = ChainSpec(n_cells=n_cells, j1=0.4)
    system = SystemSpec(chain1=chain, chain2=chain, junction=JunctionSpec(*k))
    hj = build_junction_hamiltonian(system)
    n = 2 * n_cells
    expected_pairs = {
        (s, n + s): k[0],          # K1: (1, s) - (2, s)
        (s + 1, n + s): k[1],      # K2: (1, s+1) - (2, s)
        (s, n + s + 1): k[2],      # K3: (1, s) - (2, s+1)
        (s + 1, n + s + 1): k[3],  # K4: (1, s+1) - (2, s+1)
    }
    for (i, j), value in expected_pairs.items():
        assert hj[i, j] == value
        assert hj[j, i] == value
    assert np.count_nonzero(hj) == 8


def test_total_hamiltonian_block_structure():
    chain = ChainSpec(n_cells=3, j1=0.4)
    system = SystemSpec(chain1=chain, chain2=chain, junction=JunctionSpec.c4(0.07))
    h = build_total_hamiltonian(system)
    n = 6
    np.testing.assert_allclose(h[:n, :n], build_chain_hamiltonian(chain))
    np.testing.assert_allclose(h[n:, n:], build_chain_hamiltonian(chain))
    np.testing.assert_allclose(h, h.T)


def test_junction_factories():
    assert JunctionSpec.c4(0.07).as_tuple() == (0.07, 0.07, 0.07, 0.07)
    assert JunctionSpec.z2(0.3, 0.1).as_tuple() == (0.3, 0.1, 0.1, 0.3)
    with pytest.raises(ConfigError):
        JunctionSpec(-0.1, 0.0, 0.0, 0.0)


def test_system_spec_requires_equal_odd_cells():
    with pytest.raises(ConfigError):
        SystemSpec(
            chain1=ChainSpec(n_cells=3, j1=0.4),
            chain2=ChainSpec(n_cells=5, j1=0.4),
            junction=JunctionSpec.c4(0.07),
        )
    even = ChainSpec(n_cells=4, j1=0.4)
    with pytest.raises(ConfigError):
        SystemSpec(chain1=even, chain2=even, junction=JunctionSpec.c4(0.07))


def test_draw_bond_disorder_shape_and_range():
    rng = np.random.default_rng(0)
    bonds = draw_bond_disorder(5, 0.05, rng)
    assert len(bonds) == 9
    assert all(abs(b) <= 0.05 for b in bonds)


@settings(max_examples=25, deadline=None)
@given(
    n_cells=st.sampled_from([3, 5]),
    j1=st.floats(0.15, 0.6),
    seed=st.integers(0, 10_000),
)
def test_chiral_symmetry_spectrum(n_cells, j1, seed):
    """Bond disorder preserves chiral symmetry: the spectrum is exactly +/-."""
    rng = np.random.default_rng(seed)
    bonds = draw_bond_disorder(n_cells, 0.1 * j1, rng)
    h = build_chain_hamiltonian(ChainSpec(n_cells=n_cells, j1=j1, bond_disorder=bonds))
    energies = np.sort(np.linalg.eigvalsh(h))
    np.testing.assert_allclose(energies, -energies[::-1], atol=1e-12)
