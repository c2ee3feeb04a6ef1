"""Config-driven command line: one subcommand per scenario plus `repro`.

Every scenario writes a CSV (UTF-8, LF, 17 significant digits) and a
sidecar JSON metadata file that echoes the fully resolved configuration
plus a SHA-256 content hash of the data file. The metadata file is
itself a valid `--config` input, so any run can be reproduced
bit-exactly from its own sidecar.

Exit codes: 0 success, 2 configuration error, 3 numerical failure. On
failure a machine-readable JSON error record is printed to stderr.
"""

from __future__ import annotations

import functools
import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import click
import numpy as np

from . import acceptance, dynamics, effective, open_system, spectral
from .errors import ConfigError, XsshError
from .model import (
    ChainSpec,
    JunctionSpec,
    SystemSpec,
    build_chain_hamiltonian,
    build_total_hamiltonian,
    draw_bond_disorder,
)

_SYSTEM_KEYS = {"n_cells", "j1", "j2", "k", "disorder"}
_DISORDER_KEYS = {"delta", "seed"}
_META_ONLY_KEYS = {"content_sha256", "data_file", "summary"}


# ---------------------------------------------------------------------------
# Config plumbing


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a JSON object")
    for key in _META_ONLY_KEYS:
        data.pop(key, None)
    return data


def _check_scenario(config: dict[str, Any], scenario: str) -> None:
    declared = config.get("scenario")
    if declared is not None and declared != scenario:
        raise ConfigError(f"scenario: config declares {declared!r} but command is {scenario!r}")


def _resolve_system(config: dict[str, Any], defaults: dict[str, Any]) -> dict[str, Any]:
    raw = config.get("system", {})
    if not isinstance(raw, dict):
        raise ConfigError("system: must be a JSON object")
    unknown = set(raw) - _SYSTEM_KEYS
    if unknown:
        raise ConfigError(f"system: unknown keys {sorted(unknown)}")
    merged = {**defaults, **raw}
    disorder = {"delta": 0.0, "seed": 0, **merged.get("disorder", {})}
    if set(disorder) - _DISORDER_KEYS:
        raise ConfigError(f"system.disorder: unknown keys {sorted(set(disorder) - _DISORDER_KEYS)}")

    n_cells = merged["n_cells"]
    if not isinstance(n_cells, int) or n_cells < 1 or n_cells % 2 == 0:
        raise ConfigError(f"system.n_cells: must be an odd positive integer, got {n_cells!r}")
    for name in ("j1", "j2"):
        value = merged[name]
        if not isinstance(value, (int, float)) or value <= 0:
            raise ConfigError(f"system.{name}: must be a positive number, got {value!r}")
    k = merged["k"]
    if not (isinstance(k, (list, tuple)) and len(k) == 4):
        raise ConfigError(f"system.k: must be a list of 4 junction strengths, got {k!r}")
    if any(not isinstance(v, (int, float)) or v < 0 for v in k):
        raise ConfigError(f"system.k: entries must be non-negative numbers, got {k!r}")
    if not isinstance(disorder["delta"], (int, float)) or disorder["delta"] < 0:
        raise ConfigError(f"system.disorder.delta: must be >= 0, got {disorder['delta']!r}")
    if not isinstance(disorder["seed"], int):
        raise ConfigError(f"system.disorder.seed: must be an integer, got {disorder['seed']!r}")
    return {
        "n_cells": n_cells,
        "j1": float(merged["j1"]),
        "j2": float(merged["j2"]),
        "k": [float(v) for v in k],
        "disorder": {"delta": float(disorder["delta"]), "seed": disorder["seed"]},
    }


def _build_chains(system: dict[str, Any]) -> tuple[ChainSpec, ChainSpec]:
    """Both chains, with independent disorder draws from the config seed."""
    delta = system["disorder"]["delta"]
    kwargs: dict[str, Any] = dict(
        n_cells=system["n_cells"], j1=system["j1"], j2=system["j2"]
    )
    if delta == 0.0:
        chain = ChainSpec(**kwargs)
        return chain, chain
    rng = np.random.default_rng(system["disorder"]["seed"])
    bonds_1 = draw_bond_disorder(system["n_cells"], delta, rng)
    bonds_2 = draw_bond_disorder(system["n_cells"], delta, rng)
    return ChainSpec(**kwargs, bond_disorder=bonds_1), ChainSpec(**kwargs, bond_disorder=bonds_2)


def _build_system(system: dict[str, Any]) -> SystemSpec:
    chain1, chain2 = _build_chains(system)
    return SystemSpec(chain1=chain1, chain2=chain2, junction=JunctionSpec(*system["k"]))


def _param(config: dict[str, Any], name: str, default: Any, kind: type | tuple = (int, float),
           positive: bool = False) -> Any:
    value = config.get(name, default)
    if value is None:
        return None
    if kind is int and isinstance(value, bool):
        raise ConfigError(f"{name}: must be an integer, got {value!r}")
    if not isinstance(value, kind):
        raise ConfigError(f"{name}: wrong type, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{name}: must be > 0, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# Output plumbing


def _fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def _write_outputs(
    out_dir: str,
    scenario: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    resolved: dict[str, Any],
    summary: dict[str, Any] | None = None,
) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{scenario}.csv"
    _write_csv(csv_path, header, rows)
    digest = hashlib.sha256(csv_path.read_bytes()).hexdigest()
    metadata = {
        "scenario": scenario,
        **resolved,
        "output_path": str(csv_path),
        "data_file": csv_path.name,
        "content_sha256": digest,
    }
    if summary is not None:
        metadata["summary"] = summary
    meta_path = out / f"{scenario}.json"
    meta_path.write_bytes(
        (json.dumps(metadata, indent=2, sort_keys=False) + "\n").encode("utf-8")
    )
    click.echo(f"wrote {csv_path} ({digest[:12]})")
    return csv_path


def _scenario_command(func: Callable) -> Callable:
    """Common flags + error-record handling shared by every scenario."""

    @click.option("--config", "config_path", type=click.Path(), default=None,
                  help="JSON ScenarioConfig file.")
    @click.option("--out", "out_dir", default="out", show_default=True,
                  help="Output directory.")
    @click.option("--seed", type=int, default=None, help="Override the config seed.")
    @click.option("--instances", type=int, default=None,
                  help="Override the ensemble instance count.")
    @click.option("--threads", type=int, default=1, show_default=True,
                  help="Worker threads for sweep scenarios.")
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            func(*args, **kwargs)
        except ConfigError as exc:
            _emit_error(exc)
            sys.exit(2)
        except XsshError as exc:
            _emit_error(exc)
            sys.exit(3)

    return wrapper


def _emit_error(exc: XsshError) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    click.echo(json.dumps(record), err=True)


@click.group()
@click.version_option(package_name="xssh")
def main() -> None:
    """Crossed-SSH edge-state simulations: spectra, gates, dissipation."""


# ---------------------------------------------------------------------------
# Scenarios


@main.command()
@_scenario_command
def spectrum(config_path, out_dir, seed, instances, threads) -> None:
    """Per-eigenstate diagnostics of one chain (Fig. 2a style)."""
    config = _load_config(config_path)
    _check_scenario(config, "spectrum")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.4, "j2": 1.0, "k": [0.0] * 4})
    if seed is not None:
        system["disorder"]["seed"] = seed
    chain, _ = _build_chains(system)
    h = build_chain_hamiltonian(chain)
    energies, vectors = np.linalg.eigh(h)
    edge_indices = set(np.argsort(np.abs(energies))[:2])
    rows = [
        (
            i,
            energies[i],
            spectral.parity(vectors[:, i]),
            spectral.ipr(vectors[:, i]),
            i in edge_indices,
        )
        for i in range(len(energies))
    ]
    _write_outputs(
        out_dir, "spectrum", ("index", "energy", "parity", "ipr", "is_edge"), rows,
        {"system": system},
    )


def _population_rows(
    evolved: np.ndarray, manifold: spectral.EdgeManifold,
    times: np.ndarray, fidelity: np.ndarray,
) -> list[tuple[float, ...]]:
    pops = np.abs(evolved @ manifold.states.conj()) ** 2
    return [
        (t, p[0], p[1], p[2], p[3], f) for t, p, f in zip(times, pops, fidelity)
    ]


@main.command()
@_scenario_command
def transfer(config_path, out_dir, seed, instances, threads) -> None:
    """Edge-state transfer through the C4 junction (Fig. 2e)."""
    config = _load_config(config_path)
    _check_scenario(config, "transfer")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.4, "j2": 1.0, "k": [0.07] * 4})
    k_mean = float(np.mean(system["k"]))
    g = effective.coupling_g(system["j1"], system["j2"], system["n_cells"], k_mean)
    t_transfer = effective.transfer_time(g)
    t_max = _param(config, "t_max", 2.0 * t_transfer, positive=True)
    n_times = _param(config, "n_times", 400, int, positive=True)

    h = build_total_hamiltonian(_build_system(system))
    manifold = spectral.extract_edge_manifold(h)
    psi0 = manifold.states[:, 0]  # psi_1S
    times = np.linspace(0.0, float(t_max), n_times)
    evolved = dynamics.evolve_unitary(h, psi0.astype(complex), times).T
    fidelity = np.abs(evolved @ manifold.states[:, 3].conj()) ** 2  # vs psi_2S
    rows = _population_rows(evolved, manifold, times, fidelity)
    _write_outputs(
        out_dir, "transfer",
        ("time", "pop_1S", "pop_1A", "pop_2A", "pop_2S", "fidelity"), rows,
        {"system": system, "t_max": float(t_max), "n_times": n_times},
        summary={"transfer_time": t_transfer, "coupling_g": g},
    )


@main.command()
@_scenario_command
def swap(config_path, out_dir, seed, instances, threads) -> None:
    """Calibrated SWAP dynamics at a sweet point (Fig. 3a)."""
    config = _load_config(config_path)
    _check_scenario(config, "swap")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.51, "j2": 1.0, "k": [0.0] * 4})
    k_index = _param(config, "k_index", 2, int, positive=True)
    point = effective.sweet_point(k_index, system["j1"], system["j2"], system["n_cells"])
    system["k"] = list(point.junction.as_tuple())
    t_max = _param(config, "t_max", 1.5 * point.t_swap, positive=True)
    n_times = _param(config, "n_times", 600, int, positive=True)

    h = build_total_hamiltonian(_build_system(system))
    manifold = spectral.extract_edge_manifold(h)
    times = np.linspace(0.0, float(t_max), n_times)
    fidelity = dynamics._fidelity_curve(h, manifold.states, times, dynamics.swap_gate())
    evolved = dynamics.evolve_unitary(h, manifold.states[:, 3].astype(complex), times).T
    rows = _population_rows(evolved, manifold, times, fidelity)
    _write_outputs(
        out_dir, "swap",
        ("time", "pop_1S", "pop_1A", "pop_2A", "pop_2S", "fidelity"), rows,
        {"system": system, "k_index": k_index, "t_max": float(t_max), "n_times": n_times},
        summary={
            "k_minus": point.k_minus, "k_plus": point.k_plus,
            "t_swap": point.t_swap, "fidelity": point.fidelity,
        },
    )


@main.command(name="swap-map")
@_scenario_command
def swap_map(config_path, out_dir, seed, instances, threads) -> None:
    """SWAP fidelity over the (K-, K+) plane (Fig. 3b)."""
    config = _load_config(config_path)
    _check_scenario(config, "swap-map")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.51, "j2": 1.0, "k": [0.0] * 4})
    n_grid = _param(config, "n_grid", 40, int, positive=True)
    k_max = _param(config, "k_max", 0.1, positive=True)
    t_cap = _param(config, "t_cap", 1500.0, positive=True)
    ks, fid = dynamics.swap_fidelity_map(
        system["j1"], system["j2"], system["n_cells"],
        n_grid=n_grid, k_max=float(k_max), t_cap=float(t_cap), threads=max(1, threads),
    )
    rows = [
        (ks[i], ks[j], fid[i, j]) for i in range(n_grid) for j in range(n_grid)
    ]
    _write_outputs(
        out_dir, "swap-map", ("k_minus", "k_plus", "fidelity"), rows,
        {"system": system, "n_grid": n_grid, "k_max": float(k_max), "t_cap": float(t_cap)},
    )


@main.command()
@_scenario_command
def calibrate(config_path, out_dir, seed, instances, threads) -> None:
    """Refine the k-th SWAP sweet point; emits a summary JSON."""
    config = _load_config(config_path)
    _check_scenario(config, "calibrate")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.51, "j2": 1.0, "k": [0.0] * 4})
    k_index = _param(config, "k_index", 2, int, positive=True)
    point = effective.sweet_point(k_index, system["j1"], system["j2"], system["n_cells"])
    result = {
        "k_minus": point.k_minus,
        "k_plus": point.k_plus,
        "t_swap": point.t_swap,
        "fidelity": point.fidelity,
    }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data_path = out / "calibrate.result.json"
    data_path.write_bytes((json.dumps(result, indent=2) + "\n").encode("utf-8"))
    digest = hashlib.sha256(data_path.read_bytes()).hexdigest()
    metadata = {
        "scenario": "calibrate",
        "system": system,
        "k_index": k_index,
        "output_path": str(data_path),
        "data_file": data_path.name,
        "content_sha256": digest,
        "summary": result,
    }
    (out / "calibrate.json").write_bytes(
        (json.dumps(metadata, indent=2) + "\n").encode("utf-8")
    )
    click.echo(f"wrote {data_path} ({digest[:12]})")


@main.command()
@_scenario_command
def disorder(config_path, out_dir, seed, instances, threads) -> None:
    """Disorder ensembles, recalibrated vs not (Fig. 3d)."""
    config = _load_config(config_path)
    _check_scenario(config, "disorder")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.51, "j2": 1.0, "k": [0.0] * 4})
    k_index = _param(config, "k_index", 2, int, positive=True)
    n_instances = instances if instances is not None else _param(
        config, "n_instances", 100, int, positive=True)
    run_seed = seed if seed is not None else _param(config, "seed", 7, int)
    fractions = config.get("delta_fractions", [0.25, 0.5, 1.0])
    if not (isinstance(fractions, list) and fractions
            and all(isinstance(f, (int, float)) and f > 0 for f in fractions)):
        raise ConfigError(f"delta_fractions: must be a list of positive numbers, got {fractions!r}")

    point = effective.sweet_point(k_index, system["j1"], system["j2"], system["n_cells"])
    system["k"] = list(point.junction.as_tuple())
    base = _build_system({**system, "disorder": {"delta": 0.0, "seed": 0}})
    rows = []
    for fraction in fractions:
        delta = float(fraction) * point.k_minus
        for recal in (True, False):
            report = dynamics.disorder_ensemble(
                base, delta, n_instances, seed=run_seed, recalibrate=recal,
                k_index=k_index, clean_gate_time=point.t_swap,
            )
            rows.append((delta, report.mean_fidelity, report.std_fidelity, recal))
    _write_outputs(
        out_dir, "disorder", ("delta", "mean", "std", "recalibrated"), rows,
        {
            "system": system, "k_index": k_index, "n_instances": n_instances,
            "seed": run_seed, "delta_fractions": [float(f) for f in fractions],
        },
        summary={"k_minus": point.k_minus, "t_swap": point.t_swap},
    )


def _trajectory_rows(traj: dict[str, np.ndarray], columns: Sequence[str]) -> list[tuple]:
    return list(zip(*(traj[c] for c in columns)))


_DISSIPATIVE_COLUMNS = ("time", "pop_S", "pop_A", "p_ground", "bell_plus", "bell_minus",
                        "concurrence")


@main.command()
@_scenario_command
def dissipative(config_path, out_dir, seed, instances, threads) -> None:
    """Super/subradiant decay of one chain in a waveguide (Fig. 4b)."""
    config = _load_config(config_path)
    _check_scenario(config, "dissipative")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.25, "j2": 1.0, "k": [0.0] * 4})
    gamma0 = _param(config, "gamma0", 0.035, positive=True)
    t_max = _param(config, "t_max", 3.0 / float(gamma0), positive=True)
    n_times = _param(config, "n_times", 400, int, positive=True)
    initial = _param(config, "initial", "psi_s", str)
    chain, _ = _build_chains(system)
    traj = open_system.edge_trajectory(
        chain, float(gamma0), float(t_max), n_times, initial=initial
    )
    _write_outputs(
        out_dir, "dissipative", _DISSIPATIVE_COLUMNS,
        _trajectory_rows(traj, _DISSIPATIVE_COLUMNS),
        {
            "system": system, "gamma0": float(gamma0), "t_max": float(t_max),
            "n_times": n_times, "initial": initial,
        },
    )


@main.command()
@_scenario_command
def entangle(config_path, out_dir, seed, instances, threads) -> None:
    """Remote edge-atom entanglement by pumping atom 1 (Fig. 4d)."""
    config = _load_config(config_path)
    _check_scenario(config, "entangle")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.25, "j2": 1.0, "k": [0.0] * 4})
    gamma0 = _param(config, "gamma0", 0.035, positive=True)
    t_max = _param(config, "t_max", 10.0 / float(gamma0), positive=True)
    n_times = _param(config, "n_times", 400, int, positive=True)
    chain, _ = _build_chains(system)
    traj = open_system.remote_entanglement_protocol(chain, float(gamma0), float(t_max), n_times)
    _write_outputs(
        out_dir, "entangle", _DISSIPATIVE_COLUMNS,
        _trajectory_rows(traj, _DISSIPATIVE_COLUMNS),
        {"system": system, "gamma0": float(gamma0), "t_max": float(t_max), "n_times": n_times},
        summary={"max_concurrence": float(traj["concurrence"].max())},
    )


@main.command(name="bell-transfer")
@_scenario_command
def bell_transfer(config_path, out_dir, seed, instances, threads) -> None:
    """Transfer the subradiant Bell-like state between chains."""
    config = _load_config(config_path)
    _check_scenario(config, "bell-transfer")
    system = _resolve_system(
        config, {"n_cells": 3, "j1": 0.25, "j2": 1.0, "k": [0.5, 0.0, 0.0, 0.5]}
    )
    gamma0 = _param(config, "gamma0", 0.035, positive=True)
    k = system["k"]
    k_plus, k_minus = 0.5 * (k[0] + k[3]), 0.5 * (k[1] + k[2])
    params = effective.spin_params(
        system["j1"], system["j2"], system["n_cells"], k_plus, k_minus
    )
    g_a = params.u - params.v
    if g_a <= 0:
        raise ConfigError("bell-transfer: junction must open the g_A channel (K+ > K-)")
    t_max = _param(config, "t_max", 2.0 * np.pi / (2.0 * g_a), positive=True)
    n_times = _param(config, "n_times", 400, int, positive=True)
    spec = _build_system(system)
    traj = open_system.bell_transfer_protocol(spec, float(gamma0), float(t_max), n_times)
    columns = ("time", "bell_1", "bell_2", "pop_A1", "pop_A2",
               "concurrence_1", "concurrence_2", "p_ground")
    _write_outputs(
        out_dir, "bell-transfer", columns, _trajectory_rows(traj, columns),
        {"system": system, "gamma0": float(gamma0), "t_max": float(t_max), "n_times": n_times},
        summary={
            "peak_transfer_ratio": float(
                (traj["bell_2"] / traj["bell_1"][0]).max()
            ),
        },
    )


@main.command(name="gate-sweep")
@_scenario_command
def gate_sweep(config_path, out_dir, seed, instances, threads) -> None:
    """T_SWAP and fidelity along the sweet line vs K+ (Fig. 3c)."""
    config = _load_config(config_path)
    _check_scenario(config, "gate-sweep")
    system = _resolve_system(config, {"n_cells": 5, "j1": 0.51, "j2": 1.0, "k": [0.0] * 4})
    k_index = _param(config, "k_index", 2, int, positive=True)
    k_plus = config.get("k_plus", list(np.geomspace(0.05, 0.3, 6)))
    if not (isinstance(k_plus, list) and k_plus
            and all(isinstance(v, (int, float)) and v > 0 for v in k_plus)):
        raise ConfigError(f"k_plus: must be a list of positive numbers, got {k_plus!r}")
    j2_values = config.get("j2_values", [system["j2"]])
    if not (isinstance(j2_values, list) and j2_values
            and all(isinstance(v, (int, float)) and v > 0 for v in j2_values)):
        raise ConfigError(f"j2_values: must be a list of positive numbers, got {j2_values!r}")
    rows_raw = dynamics.gate_time_sweep(
        [float(v) for v in j2_values], [float(v) for v in k_plus],
        system["n_cells"], k_index=k_index,
    )
    rows = [
        (r["j2"], r["k_plus"], r["j1_opt"], r["t_swap"], r["fidelity"], r["calibration_failed"])
        for r in rows_raw
    ]
    _write_outputs(
        out_dir, "gate-sweep",
        ("j2", "k_plus", "j1_opt", "t_swap", "fidelity", "calibration_failed"), rows,
        {
            "system": system, "k_index": k_index,
            "k_plus": [float(v) for v in k_plus], "j2_values": [float(v) for v in j2_values],
        },
    )


@main.command()
def repro() -> None:
    """Run the full acceptance suite and print the pass/fail table."""
    results = acceptance.run_all()
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += not r.passed
        click.echo(f"[{status}] {r.name:<{width}}  {r.detail}")
    click.echo(f"{len(results) - failures}/{len(results)} criteria passed")
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
