"""Crossed-SSH edge-state simulation toolkit.

Single-excitation physics of two Su-Schrieffer-Heeger chains coupled at
their centers: Hamiltonian builders, edge-doublet spectral analysis, the
effective two-spin model with SWAP sweet-point calibration, unitary and
disorder-ensemble dynamics, and collective-dissipation (waveguide)
protocols, all behind a config-driven command line.
"""

from .dynamics import (
    EnsembleReport,
    average_gate_fidelity,
    disorder_ensemble,
    evolve_unitary,
    gate_time_sweep,
    state_fidelity,
    swap_fidelity_map,
    swap_gate,
)
from .effective import (
    SpinModelParams,
    SweetPoint,
    analytic_propagator,
    coupling_g,
    recalibrate_for_disorder,
    spin_params,
    sweet_point,
    transfer_time,
)
from .errors import (
    CalibrationFailed,
    ConfigError,
    IntegratorStall,
    ManifoldLeakage,
    NoEdgeSolution,
    XsshError,
    ZeroManifoldAmbiguous,
)
from .model import (
    ChainSpec,
    JunctionSpec,
    SiteIndex,
    SystemSpec,
    build_chain_hamiltonian,
    build_junction_hamiltonian,
    build_total_hamiltonian,
    central_site,
    draw_bond_disorder,
)
from .open_system import (
    AtomLayout,
    DissipationKernel,
    SectoredDensityMatrix,
    bell_transfer_protocol,
    build_kernel,
    build_layout,
    collective_modes,
    concurrence_edge_pair,
    edge_trajectory,
    effective_edge_decay,
    evolve_master,
    evolve_master_trajectory,
    fit_decay_rate,
    remote_entanglement_protocol,
    wootters_concurrence,
)
from .spectral import (
    EdgeDoublet,
    EdgeManifold,
    bulk_gap,
    edge_amplitude_eta,
    edge_energy,
    extract_edge_doublet,
    extract_edge_manifold,
    ipr,
    parity,
    solve_lambda,
)

__version__ = "1.0.0"

__all__ = [
    "AtomLayout",
    "CalibrationFailed",
    "ChainSpec",
    "ConfigError",
    "DissipationKernel",
    "EdgeDoublet",
    "EdgeManifold",
    "EnsembleReport",
    "IntegratorStall",
    "JunctionSpec",
    "ManifoldLeakage",
    "NoEdgeSolution",
    "SectoredDensityMatrix",
    "SiteIndex",
    "SpinModelParams",
    "SweetPoint",
    "SystemSpec",
    "XsshError",
    "ZeroManifoldAmbiguous",
    "analytic_propagator",
    "average_gate_fidelity",
    "bell_transfer_protocol",
    "build_chain_hamiltonian",
    "build_junction_hamiltonian",
    "build_kernel",
    "build_layout",
    "build_total_hamiltonian",
    "bulk_gap",
    "central_site",
    "collective_modes",
    "concurrence_edge_pair",
    "coupling_g",
    "disorder_ensemble",
    "draw_bond_disorder",
    "edge_amplitude_eta",
    "edge_energy",
    "edge_trajectory",
    "effective_edge_decay",
    "evolve_master",
    "evolve_master_trajectory",
    "evolve_unitary",
    "extract_edge_doublet",
    "extract_edge_manifold",
    "fit_decay_rate",
    "gate_time_sweep",
    "ipr",
    "parity",
    "recalibrate_for_disorder",
    "remote_entanglement_protocol",
    "solve_lambda",
    "spin_params",
    "state_fidelity",
    "swap_fidelity_map",
    "swap_gate",
    "sweet_point",
    "transfer_time",
    "wootters_concurrence",
]
