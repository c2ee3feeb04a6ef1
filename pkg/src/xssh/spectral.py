"""Edge-state spectral analysis.

Solves the edge-localization equation, evaluates the closed-form edge
energy and amplitude, extracts parity-classified edge doublets from chain
Hamiltonians and the four-state logical manifold from the crossed-chain
Hamiltonian, and provides parity/IPR diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ManifoldLeakage, NoEdgeSolution, ZeroManifoldAmbiguous
from .model import central_site

__all__ = [
    "EdgeDoublet",
    "EdgeManifold",
    "solve_lambda",
    "edge_energy",
    "edge_amplitude_eta",
    "extract_edge_doublet",
    "extract_edge_manifold",
    "parity",
    "ipr",
    "bulk_gap",
]

_DEGENERACY_FLOOR = 1e-12


@dataclass(frozen=True)
class EdgeDoublet:
    """The hybridized edge pair of one chain.

    psi_s / psi_a are the symmetric (inversion-even) and anti-symmetric
    (inversion-odd) near-zero eigenstates with energies +eps_s / -eps_s.
    lam is the localization exponent when the chain is clean (NaN for
    disordered chains, where the closed form does not apply).
    """

    psi_s: np.ndarray
    psi_a: np.ndarray
    eps_s: float
    lam: float


@dataclass(frozen=True)
class EdgeManifold:
    """The four-dimensional logical subspace of the crossed system.

    states columns are ordered (psi_1S, psi_1A, psi_2A, psi_2S), i.e.
    the logical encoding (uu, ud, du, dd). They are exact linear
    combinations of the four near-zero eigenvectors of H_tot, rotated to
    match the embedded per-chain doublets (projection + symmetric Loewdin
    orthonormalization), so the span is the true zero-energy manifold.
    """

    states: np.ndarray  # shape (4N, 4), columns in logical order
    energies: np.ndarray  # diagonal of the projected H_tot, length 4
    labels: tuple[str, str, str, str] = ("uu", "ud", "du", "dd")


def solve_lambda(j1: float, j2: float, n_cells: int) -> float:
    """Root of sinh(N*lam)/sinh((N+1)*lam) = j1/j2 on lam in (1e-9, 50].

    The left side decreases strictly from N/(N+1) (lam -> 0+) to 0, so a
    unique positive root exists iff j1/j2 < N/(N+1).
    """
    n = n_cells
    ratio = j1 / j2
    if ratio >= n / (n + 1):
        raise NoEdgeSolution(
            f"j1/j2 = {ratio:.6g} >= N/(N+1) = {n / (n + 1):.6g}: "
            "edge doublet merges with the bulk"
        )

    def f(lam: float) -> float:
        # sinh(N lam)/sinh((N+1) lam), written via exp to stay finite at
        # large lam where both sinh overflow.
        return np.exp(-lam) * np.expm1(-2 * n * lam) / np.expm1(-2 * (n + 1) * lam) - ratio

    return brentq(f, 1e-9, 50.0, xtol=1e-15, rtol=1e-15, maxiter=200)


def edge_energy(j1: float, j2: float, n_cells: int) -> float:
    """Closed-form doublet energy eps_S = (-1)^(N+1) J2 sinh(lam)/sinh((N+1)lam).

    Exact for the finite clean chain (agrees with diagonalization to
    machine precision).
    """
    lam = solve_lambda(j1, j2, n_cells)
    n = n_cells
    return (-1) ** (n + 1) * j2 * np.sinh(lam) / np.sinh((n + 1) * lam)


def edge_amplitude_eta(j1: float, j2: float, n_cells: int) -> float:
    """Central-site amplitude of the hybridized edge state psi_S.

    eta = sinh((N+1)lam/2) / sqrt(2 sum_{i=1..N} sinh^2((N+1-i)lam)).
    This equals |<s|psi_S>| exactly. Note the un-hybridized edge mode
    psi_L/R has central amplitude sqrt(2)*eta; the physical junction
    coupling is g = 4*K*eta^2 in terms of this eta (see coupling_g).
    """
    lam = solve_lambda(j1, j2, n_cells)
    n = n_cells
    i = np.arange(1, n + 1)
    norm = np.sqrt(2.0 * np.sum(np.sinh((n + 1 - i) * lam) ** 2))
    return np.sinh((n + 1) * lam / 2.0) / norm


def bulk_gap(h_chain_or_total: np.ndarray, n_edge: int) -> float:
    """Gap between the n_edge near-zero states and the bulk band edge."""
    energies = np.sort(np.abs(np.linalg.eigvalsh(h_chain_or_total)))
    return energies[n_edge] - energies[n_edge - 1]


def _near_zero_states(h: np.ndarray, count: int, window: float | None):
    """Eigen-pairs inside the near-zero window, with ambiguity checks."""
    energies, vectors = np.linalg.eigh(h)
    order = np.argsort(np.abs(energies))
    if window is None:
        # Half the smallest bulk |E|: bulk starts at the (count+1)-th
        # smallest |E|.
        window = 0.5 * np.abs(energies[order[count]])
    inside = np.abs(energies) < window
    if inside.sum() != count:
        raise ZeroManifoldAmbiguous(
            f"expected {count} states with |E| < {window:.4g}, found {int(inside.sum())}"
        )
    sel = order[:count]
    return energies[sel], vectors[:, sel]


def extract_edge_doublet(
    h_chain: np.ndarray, window: float | None = None, lam: float = np.nan
) -> EdgeDoublet:
    """Parity-purified near-zero doublet of a single chain.

    Each of the two near-zero eigenvectors is projected onto the even/odd
    subspace of the inversion operator (site j <-> 2N+1-j) and
    renormalized; the sign convention makes the amplitude on site 1 (left
    edge, sublattice A) positive. Works for exactly degenerate doublets,
    where the eigensolver returns arbitrary mixtures.
    """
    n = h_chain.shape[0]
    energies, vectors = _near_zero_states(h_chain, 2, window)

    if np.all(np.abs(energies) < _DEGENERACY_FLOOR):
        # Degenerate null space: build parity eigenstates from inversion
        # projectors of an arbitrary orthonormal basis.
        basis = vectors
        even = basis + basis[::-1, :]
        odd = basis - basis[::-1, :]
        psi_s = even[:, np.argmax(np.linalg.norm(even, axis=0))]
        psi_a = odd[:, np.argmax(np.linalg.norm(odd, axis=0))]
        eps_s = 0.0
    else:
        # Classify by inversion expectation; disorder breaks inversion so
        # purify by projection.
        inv_expect = [vectors[::-1, i] @ vectors[:, i] for i in range(2)]
        i_even = int(np.argmax(inv_expect))
        psi_s = vectors[:, i_even] + vectors[::-1, i_even]
        psi_a = vectors[:, 1 - i_even] - vectors[::-1, 1 - i_even]
        eps_s = float(energies[i_even])

    psi_s = psi_s / np.linalg.norm(psi_s)
    psi_a = psi_a / np.linalg.norm(psi_a)
    if psi_s[0] < 0:
        psi_s = -psi_s
    if psi_a[0] < 0:
        psi_a = -psi_a
    assert n == psi_s.size
    return EdgeDoublet(psi_s=psi_s, psi_a=psi_a, eps_s=eps_s, lam=lam)


def extract_edge_manifold(h_total: np.ndarray, window: float | None = None) -> EdgeManifold:
    """Logical manifold (psi_1S, psi_1A, psi_2A, psi_2S) of the crossed system.

    The four near-zero eigenvectors of h_total are rotated to match the
    per-chain doublets of the diagonal blocks: embed each doublet, project
    onto the exact near-zero eigenspace, and Loewdin-orthonormalize. The
    result spans the true zero-energy manifold exactly while carrying the
    per-chain logical labels.
    """
    n = h_total.shape[0] // 2
    _, vectors = _near_zero_states(h_total, 4, window)

    d1 = extract_edge_doublet(h_total[:n, :n])
    d2 = extract_edge_doublet(h_total[n:, n:])
    reference = np.zeros((2 * n, 4))
    reference[:n, 0] = d1.psi_s
    reference[:n, 1] = d1.psi_a
    reference[n:, 2] = d2.psi_a
    reference[n:, 3] = d2.psi_s

    projected = vectors @ (vectors.T @ reference)
    overlap = projected.T @ projected
    w, q = np.linalg.eigh(overlap)
    if w.min() < 1e-8:
        raise ManifoldLeakage(
            f"embedded doublets nearly orthogonal to the zero manifold "
            f"(smallest overlap eigenvalue {w.min():.3g})"
        )
    states = projected @ (q @ np.diag(w**-0.5) @ q.T)
    energies = np.einsum("ia,ij,jb->ab", states, h_total, states).diagonal().copy()
    return EdgeManifold(states=states, energies=energies)


def parity(psi: np.ndarray) -> float:
    """Inversion parity P = (1/2) sum_j |psi_j + psi_(2N+1-j)|^2 - 1 in [-1, 1].

    Equals <psi|I|psi> for normalized psi, so inversion-even states give
    +1 and inversion-odd states give -1.
    """
    return float(0.5 * np.sum(np.abs(psi + psi[::-1]) ** 2) - 1.0)


def ipr(psi: np.ndarray) -> float:
    """Inverse participation ratio sum_i |psi_i|^4."""
    p = np.abs(psi) ** 2
    return float(np.sum(p**2))
