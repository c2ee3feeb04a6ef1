"""System specifications and single-excitation Hamiltonian builders.

Units: hbar = 1 and J2 = 1 set the energy scale; times are in units of
1/J2. The rotating frame at the atomic frequency is used throughout, so
the bare-energy term contributes zero diagonal in the single-excitation
sector.

Site ordering contract (zero-based flattened index):

    mu = (chain - 1) * 2N + 2 * (cell - 1) + (0 if sublattice A else 1)

This ordering is the bit-exact contract for all matrices and output files.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

__all__ = [
    "ChainSpec",
    "JunctionSpec",
    "SystemSpec",
    "SiteIndex",
    "central_site",
    "build_chain_hamiltonian",
    "build_junction_hamiltonian",
    "build_total_hamiltonian",
    "draw_bond_disorder",
]


@dataclass(frozen=True)
class ChainSpec:
    """One SSH chain: N unit cells (2N sites) with staggered hoppings.

    j1 is the intra-cell hopping, j2 the inter-cell hopping (the global
    energy unit, normally 1). bond_disorder holds one additive offset per
    nearest-neighbor bond, ordered (intra_1, inter_1, intra_2, ..., intra_N),
    length 2N - 1.
    """

    n_cells: int
    j1: float
    j2: float = 1.0
    bond_disorder: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n_cells < 1:
            raise ConfigError(f"n_cells must be >= 1, got {self.n_cells}")
        if self.j1 <= 0 or self.j2 <= 0:
            raise ConfigError(f"hoppings must be positive, got j1={self.j1}, j2={self.j2}")
        if not self.bond_disorder:
            object.__setattr__(self, "bond_disorder", (0.0,) * (2 * self.n_cells - 1))
        if len(self.bond_disorder) != 2 * self.n_cells - 1:
            raise ConfigError(
                f"bond_disorder must have 2N-1 = {2 * self.n_cells - 1} entries, "
                f"got {len(self.bond_disorder)}"
            )

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells


@dataclass(frozen=True)
class JunctionSpec:
    """The four tunable couplings of the central junction (Eq. 2)."""

    k1: float
    k2: float
    k3: float
    k4: float

    def __post_init__(self) -> None:
        for name in ("k1", "k2", "k3", "k4"):
            if getattr(self, name) < 0:
                raise ConfigError(f"junction coupling {name} must be >= 0")

    @classmethod
    def c4(cls, k: float) -> "JunctionSpec":
        """All four couplings equal (C4-symmetric configuration)."""
        return cls(k, k, k, k)

    @classmethod
    def z2(cls, k_plus: float, k_minus: float) -> "JunctionSpec":
        """Z2-symmetric configuration: like-sublattice bonds carry K+.

        K1 (s-s) and K4 ((s+1)-(s+1)) take k_plus; the cross bonds K2, K3
        take k_minus. This is the assignment that opens both the
        symmetric (g_S) and anti-symmetric (g_A) channels.
        """
        return cls(k_plus, k_minus, k_minus, k_plus)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.k1, self.k2, self.k3, self.k4)


@dataclass(frozen=True)
class SystemSpec:
    """Two crossed SSH chains joined at their central cells."""

    chain1: ChainSpec
    chain2: ChainSpec
    junction: JunctionSpec

    def __post_init__(self) -> None:
        if self.chain1.n_cells != self.chain2.n_cells:
            raise ConfigError("the two chains must have the same cell count")
        if self.chain1.n_cells % 2 == 0:
            raise ConfigError("n_cells must be odd so the central cell is unique")

    @property
    def n_cells(self) -> int:
        return self.chain1.n_cells

    @property
    def n_sites(self) -> int:
        return 4 * self.n_cells


@dataclass(frozen=True)
class SiteIndex:
    """A (chain, cell, sublattice) site label with the flattening contract."""

    chain: int
    cell: int
    sublattice: str

    def __post_init__(self) -> None:
        if self.chain not in (1, 2):
            raise ConfigError("chain must be 1 or 2")
        if self.cell < 1:
            raise ConfigError("cell must be >= 1")
        if self.sublattice not in ("A", "B"):
            raise ConfigError("sublattice must be 'A' or 'B'")

    def flatten(self, n_cells: int) -> int:
        if self.cell > n_cells:
            raise ConfigError(f"cell {self.cell} exceeds n_cells={n_cells}")
        return (
            (self.chain - 1) * 2 * n_cells
            + 2 * (self.cell - 1)
            + (0 if self.sublattice == "A" else 1)
        )


def central_site(n_cells: int) -> int:
    """Zero-based index of the central A site s within one chain.

    The junction attaches at sites s = ((N+1)/2, A) and s + 1 = ((N+1)/2, B).
    """
    return 2 * ((n_cells + 1) // 2 - 1)


def build_chain_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Tight-binding SSH Hamiltonian of one chain, 2N x 2N, zero diagonal."""
    n = spec.n_sites
    h = np.zeros((n, n))
    bond = 0
    for cell in range(spec.n_cells):
        a = 2 * cell
        j = spec.j1 + spec.bond_disorder[bond]
        if j <= 0:
            raise ConfigError(
                f"effective intra-cell bond {bond} is {j} <= 0; disorder leaves the SSH class"
            )
        h[a, a + 1] = h[a + 1, a] = j
        bond += 1
        if cell < spec.n_cells - 1:
            j = spec.j2 + spec.bond_disorder[bond]
            if j <= 0:
                raise ConfigError(
                    f"effective inter-cell bond {bond} is {j} <= 0; disorder leaves the SSH class"
                )
            h[a + 1, a + 2] = h[a + 2, a + 1] = j
            bond += 1
    return h


def build_junction_hamiltonian(system: SystemSpec) -> np.ndarray:
    """Junction Hamiltonian of Eq. (2): 4N x 4N with exactly 8 nonzeros.

    K1 links (1,s)-(2,s), K2 links (1,s+1)-(2,s), K3 links (1,s)-(2,s+1),
    K4 links (1,s+1)-(2,s+1), where s is the central A site of each chain.
    """
    n = 2 * system.n_cells
    s = central_site(system.n_cells)
    k1, k2, k3, k4 = system.junction.as_tuple()
    h = np.zeros((2 * n, 2 * n))
    for a, b, k in (
        (s, n + s, k1),
        (s + 1, n + s, k2),
        (s, n + s + 1, k3),
        (s + 1, n + s + 1, k4),
    ):
        h[a, b] += k
        h[b, a] += k
    return h


def build_total_hamiltonian(system: SystemSpec) -> np.ndarray:
    """H_tot = H_XSSH (block-diagonal chains) + H_I (junction)."""
    n = 2 * system.n_cells
    h = build_junction_hamiltonian(system)
    h[:n, :n] += build_chain_hamiltonian(system.chain1)
    h[n:, n:] += build_chain_hamiltonian(system.chain2)
    return h


def draw_bond_disorder(
    n_cells: int, delta: float, rng: np.random.Generator
) -> tuple[float, ...]:
    """One uniform draw in [-delta, delta] per bond (2N - 1 bonds)."""
    if delta < 0:
        raise ConfigError(f"disorder strength must be >= 0, got {delta}")
    return tuple(rng.uniform(-delta, delta, 2 * n_cells - 1))
