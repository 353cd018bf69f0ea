"""Sweep drivers behind the service and CLI.

Each driver maps a validated RunConfig onto a list of simulation points,
dispatches them to a thread pool, and assembles CSV text. Rows are buffered
and emitted in input order so the worker count never changes the output.
All floats are written with 12 significant digits; identical configs
produce byte-identical files.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chain import TrapConfig, two_ion_modes
from .gatesim import (SimulationRequest, phase_space_trajectory, populations,
                      simulate_gate, simulate_sector)
from .pulses import Ideal, NonRWA, PulseArea, rotation_fidelity, xi_for_rotation_infidelity
from .schemes import KICK_PATTERNS, build_scheme


class ConfigError(ValueError):
    """Invalid run configuration (usage error, exit code 2)."""


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) if not isinstance(v, str) else v for v in row)
              for row in rows]
    return "\n".join(lines) + "\n"


def _monotone(grid) -> bool:
    return len(grid) > 0 and all(b > a for a, b in zip(grid, grid[1:]))


@dataclass(frozen=True)
class RunConfig:
    """Validated sweep/run configuration (parsed from a JSON document)."""

    trap: TrapConfig
    schemes: tuple  # ((kind, n), ...)
    tau_fs: tuple = ()
    phi_samples: int = 16
    xi: tuple = ()
    initial: tuple = ((0, 0),)
    dim: int | None = None
    threads: int = 1
    error_model: object = field(default_factory=Ideal)

    @staticmethod
    def from_json(text: str) -> "RunConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return RunConfig.from_dict(doc)

    @staticmethod
    def from_dict(doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")
        trap = TrapConfig().override(**doc.get("trap", {}))

        schemes = doc.get("schemes")
        if schemes is None and "kind" in doc:
            schemes = [{"kind": doc["kind"], "n": doc.get("n", 1)}]
        if not schemes:
            raise ConfigError("config needs a scheme list or kind/n")
        parsed = []
        for s in schemes:
            kind, n = s["kind"], int(s["n"])
            if kind not in KICK_PATTERNS:
                raise ConfigError(f"unknown scheme kind {kind!r}")
            if n < 1:
                raise ConfigError(f"scheme strength n must be >= 1, got {n}")
            parsed.append((kind, n))

        tau_fs = tuple(float(t) for t in doc.get("tau_fs", ()))
        if tau_fs and not _monotone(tau_fs):
            raise ConfigError("tau_fs grid must be non-empty and strictly increasing")

        phi_samples = int(doc.get("phi_samples", 16))
        # A single sample means "one data row, no statistics"; anything
        # between 2 and 7 is too few points for a meaningful std.
        if phi_samples != 1 and phi_samples < 8:
            raise ConfigError("phi_samples must be 1 or >= 8")

        xi = doc.get("xi", ())
        if "rotation_infidelity" in doc:
            if xi:
                raise ConfigError("give either xi or rotation_infidelity, not both")
            rot = tuple(float(r) for r in doc["rotation_infidelity"])
            if not _monotone(rot):
                raise ConfigError("rotation_infidelity grid must be strictly increasing")
            xi = tuple(xi_for_rotation_infidelity(r) for r in rot)
        else:
            xi = tuple(float(x) for x in xi)
            if xi and not _monotone(xi):
                raise ConfigError("xi grid must be non-empty and strictly increasing")

        initial = tuple(tuple(int(v) for v in pair) for pair in doc.get("initial", [(0, 0)]))
        for pair in initial:
            if len(pair) != 2 or min(pair) < 0:
                raise ConfigError(f"initial state must be [n_c, n_r] with n >= 0, got {pair}")

        dim = doc.get("dim")
        if dim is not None:
            dim = int(dim)
            if dim < 2:
                raise ConfigError("dim override must be >= 2")

        threads = int(doc.get("threads", 1))
        if threads < 1:
            raise ConfigError("threads must be >= 1")

        model = _parse_model(doc.get("model"), trap)
        return RunConfig(trap=trap, schemes=tuple(parsed), tau_fs=tau_fs,
                         phi_samples=phi_samples, xi=xi, initial=initial,
                         dim=dim, threads=threads, error_model=model)


def _parse_model(spec, trap: TrapConfig):
    if spec is None:
        return Ideal()
    name = spec.get("name") if isinstance(spec, dict) else spec
    if name == "ideal":
        return Ideal()
    if name == "nonrwa":
        return NonRWA(tau=float(spec["tau_fs"]) * 1e-15, phi=float(spec.get("phi", 0.0)),
                      omega_at=float(spec.get("omega_at", trap.omega_at)))
    if name == "pulse_area":
        return PulseArea(xi=float(spec["xi"]))
    raise ConfigError(f"unknown error model {name!r}")


def _pool_map(fn, items, threads):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _solved(config: RunConfig):
    modes = two_ion_modes(config.trap)
    return modes, {key: build_scheme(key[0], key[1], modes) for key in config.schemes}


DURATION_HEADER = ("scheme", "n", "tau_fs", "phi", "fidelity", "mean", "std")


def sweep_duration(config: RunConfig) -> str:
    """Fidelity vs pulse duration, phi-resolved, with per-tau mean/std columns."""
    if not config.tau_fs:
        raise ConfigError("duration sweep needs a tau_fs grid")
    _, schemes = _solved(config)
    n_init = config.initial[0]
    phis = [2 * np.pi * k / config.phi_samples for k in range(config.phi_samples)]

    points = [(key, tau, phi) for key in config.schemes
              for tau in config.tau_fs for phi in phis]

    def run(point):
        key, tau, phi = point
        model = NonRWA(tau=tau * 1e-15, phi=phi, omega_at=config.trap.omega_at)
        report = simulate_gate(SimulationRequest(
            scheme=schemes[key], trap=config.trap, error_model=model,
            n_init=n_init, dim=config.dim))
        return report.fidelity

    fids = _pool_map(run, points, config.threads)
    rows = []
    per_tau = {}
    for (key, tau, phi), f in zip(points, fids):
        per_tau.setdefault((key, tau), []).append(f)
    for (key, tau, phi), f in zip(points, fids):
        group = per_tau[(key, tau)]
        rows.append((key[0], key[1], tau, phi, f, np.mean(group), np.std(group)))
    return _csv(DURATION_HEADER, rows)


XI_HEADER = ("scheme", "n", "xi", "rotation_infidelity", "n_c", "n_r",
             "fidelity", "occ_mean", "occ_std")


def sweep_xi(config: RunConfig) -> str:
    """Fidelity and mode-occupation statistics over a pulse-area grid."""
    if not config.xi:
        raise ConfigError("xi sweep needs a xi or rotation_infidelity grid")
    _, schemes = _solved(config)
    points = [(key, xi, init) for key in config.schemes
              for xi in config.xi for init in config.initial]

    def run(point):
        key, xi, init = point
        model = Ideal() if xi == 1.0 else PulseArea(xi=xi)
        report = simulate_gate(SimulationRequest(
            scheme=schemes[key], trap=config.trap, error_model=model,
            n_init=init, dim=config.dim))
        return report

    reports = _pool_map(run, points, config.threads)
    rows = [(key[0], key[1], xi, 1.0 - rotation_fidelity(xi), init[0], init[1],
             rep.fidelity, rep.occ_mean, rep.occ_std)
            for (key, xi, init), rep in zip(points, reports)]
    return _csv(XI_HEADER, rows)


POPULATIONS_HEADER = ("xi", "internal_state", "n", "probability")


def sweep_populations(config: RunConfig) -> str:
    """Internal-state/number-state distributions after the gate, per xi.

    Follows the |ee> x |n_c> preparation on the COM mode: a single
    same-sector run started from ee.
    """
    if not config.xi:
        raise ConfigError("populations sweep needs a xi grid")
    modes, schemes = _solved(config)
    key = config.schemes[0]
    n0 = config.initial[0][0]

    def run(xi):
        model = Ideal() if xi == 1.0 else PulseArea(xi=xi)
        req = SimulationRequest(scheme=schemes[key], trap=config.trap,
                                error_model=model, n_init=config.initial[0],
                                dim=config.dim)
        result = simulate_sector(req, "same", modes[0], internal_state="ee", n0=n0)
        return populations(result)

    dists = _pool_map(run, config.xi, config.threads)
    rows = []
    for xi, dist in zip(config.xi, dists):
        for state in ("ee", "eg", "ge", "gg"):
            for n, p in enumerate(dist[state]):
                rows.append((xi, state, n, p))
    return _csv(POPULATIONS_HEADER, rows)


TRAJECTORY_HEADER = ("event_index", "re", "im")
SNAPSHOT_HEADER = ("model", "event_index", "internal_state", "n", "probability")

# Snapshot models matching the three-panel gate portrait: ideal pulses,
# a 5% systematic area deficit, and a 5 fs finite-duration pulse.
SNAPSHOT_MODELS = (("ideal", None),
                   ("pulse_area", 0.95),
                   ("nonrwa", (5e-15, 3 * np.pi / 5)))


def trajectory_outputs(config: RunConfig) -> tuple[str, str]:
    """(trajectory CSV, snapshots CSV) for the configured scheme."""
    modes, schemes = _solved(config)
    key = config.schemes[0]
    scheme = schemes[key]
    n0 = config.initial[0][0]

    alphas = phase_space_trajectory(scheme, modes[0], 0.0)
    traj_rows = [(i, a.real, a.imag) for i, a in enumerate(alphas)]

    snap_rows = []
    for label, params in SNAPSHOT_MODELS:
        if label == "ideal":
            model = Ideal()
        elif label == "pulse_area":
            model = PulseArea(xi=params)
        else:
            model = NonRWA(tau=params[0], phi=params[1], omega_at=config.trap.omega_at)
        req = SimulationRequest(scheme=scheme, trap=config.trap, error_model=model,
                                n_init=config.initial[0], dim=config.dim, snapshot=True)
        result = simulate_sector(req, "same", modes[0], internal_state="ee", n0=n0)
        for event_index, psi in enumerate(result.snapshots):
            probs = np.abs(psi) ** 2
            for s, state in enumerate(("gg", "ge", "eg", "ee")):
                for n, p in enumerate(probs[s]):
                    if p > 1e-12:
                        snap_rows.append((label, event_index, state, n, p))
    return _csv(TRAJECTORY_HEADER, traj_rows), _csv(SNAPSHOT_HEADER, snap_rows)
