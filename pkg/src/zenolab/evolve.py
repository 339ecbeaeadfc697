"""Strang-split spectral evolution under H = p̂²/2m − i·V0·θ(−x̂)·f(x̂).

The complex potential is diagonal in position, so its step factor is an
exact pointwise decay e^{−V0·f·θ·dt/ħ}; the kinetic factors are exact phase
multiplications in momentum space. The scheme is unconditionally stable and
second order in dt.

Survival N(t) = ⟨ψ(t)|ψ(t)⟩ and the absorber functional ∫_{x<0} f|ψ|²dx are
recorded at every step; full states only at ``record_stride`` to keep memory
bounded.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass, field

from .qcore import (
    AbsorbingPotential,
    PhysicalConstants,
    SpatialGrid,
    WaveFunction,
    momentum_spectrum,
    point_weights,
)
from .series import TimeSeries
from . import stepper

__all__ = [
    "EvolutionConfig",
    "EvolutionResult",
    "ReflectionEstimate",
    "evolve",
    "arrival_density_from_norm",
    "arrival_density_from_potential",
    "reflection_probability",
    "ConfigError",
    "BoundaryLeakError",
]


class ConfigError(ValueError):
    pass


class BoundaryLeakError(RuntimeError):
    """Packet mass reached the grid boundary; the run is unreliable."""


# Absorption per step must stay representable; e^{-20} is far below any
# tolerance used downstream.
MAX_STEP_ABSORPTION = 20.0


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float
    t_max: float
    potential: AbsorbingPotential
    constants: PhysicalConstants = PhysicalConstants()
    record_stride: int = 0
    boundary_guard_fraction: float = 0.01
    boundary_guard_tol: float = 1e-6
    # 0.0 is the production convention theta(0)=0; kernel-verification runs
    # use 0.5 to centre the absorber edge on the source point.
    absorber_edge_weight: float = 0.0
    # Band-limited delta columns occupy the whole grid band by design; their
    # accuracy is controlled by self-convergence instead of this check.
    bandwidth_check: bool = True

    def __post_init__(self):
        if not (self.dt > 0):
            raise ConfigError("dt must be > 0")
        if not (self.t_max >= self.dt):
            raise ConfigError("t_max must be >= dt")
        if self.record_stride < 0:
            raise ConfigError("record_stride must be >= 0")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    def validate_on(self, psi0: WaveFunction):
        grid = psi0.grid
        hbar, m = self.constants.hbar, self.constants.mass
        a = self.dt * self.potential.V0 * self.potential.max_f(grid) / hbar
        if a > MAX_STEP_ABSORPTION:
            raise ConfigError(
                f"dt*V0*max(f)/hbar = {a:.2f} exceeds {MAX_STEP_ABSORPTION}; reduce dt"
            )
        # dt must temporally resolve the occupied bandwidth of the state
        # (mean |k| plus 8 sigma of the momentum density); the grid Nyquist
        # mode itself is unpopulated for admissible packets.
        if self.bandwidth_check:
            k_occ = occupied_bandwidth(psi0)
            phase = self.dt * hbar * k_occ**2 / (2.0 * m)
            if phase >= np.pi:
                raise ConfigError(
                    f"dt does not resolve the state's bandwidth: "
                    f"dt*hbar*k_occ^2/(2m) = {phase:.3f} >= pi (k_occ = {k_occ:.2f})"
                )


def occupied_bandwidth(psi: WaveFunction) -> float:
    """Mean |k| + 8·sigma_k of the momentum density (tail-safe estimate)."""
    g = psi.grid
    phi2 = np.abs(momentum_spectrum(psi)) ** 2
    w = phi2 / np.sum(phi2)
    mean_abs = float(np.sum(np.abs(g.k) * w))
    mean = float(np.sum(g.k * w))
    sigma = float(np.sqrt(max(np.sum((g.k - mean) ** 2 * w), 0.0)))
    return mean_abs + 8.0 * sigma


@dataclass(frozen=True)
class EvolutionResult:
    config: EvolutionConfig
    survival: TimeSeries
    absorbed: TimeSeries | None
    probe: TimeSeries | None
    state_times: tuple
    states: tuple
    final: WaveFunction

    def arrival_density_from_potential(self) -> TimeSeries:
        """Π(t) = (2V0/ħ)·∫_{x<0} f|ψ|²dx at full dt resolution."""
        if self.absorbed is None:
            raise ValueError("evolution was run without the absorber functional")
        factor = 2.0 * self.config.potential.V0 / self.config.constants.hbar
        return self.absorbed.map(lambda v: factor * v)


def evolve(psi0: WaveFunction, cfg: EvolutionConfig, probe_x: float | None = None,
           want_absorbed: bool = True) -> EvolutionResult:
    """Propagate psi0 for n = round(t_max/dt) Strang steps.

    probe_x, if given, records the band-limited value ψ(probe_x, t) at every
    step (used for propagator columns). States are sampled every
    ``record_stride`` steps (0 disables intermediate sampling).
    """
    if psi0.representation != "position":
        raise ValueError("evolve needs a position-representation state")
    cfg.validate_on(psi0)
    grid = psi0.grid
    hbar, m = cfg.constants.hbar, cfg.constants.mass

    shape = cfg.potential.shape_on(grid, cfg.absorber_edge_weight)
    decay = np.exp(-cfg.potential.V0 * shape * cfg.dt / hbar)
    ekh = np.exp(-1j * hbar * grid.k**2 * cfg.dt / (4.0 * m))
    absorb_w = shape if want_absorbed else None
    probe_k = point_weights(grid, probe_x) if probe_x is not None else None

    out = stepper.strang_evolve(
        np.asarray(psi0.amplitudes), ekh, decay, grid.dx,
        cfg.n_steps, cfg.record_stride, absorb_w, probe_k,
    )

    survival = TimeSeries(0.0, cfg.dt, out["survival"])
    absorbed = TimeSeries(0.0, cfg.dt, out["absorbed"]) if want_absorbed else None
    probe = TimeSeries(0.0, cfg.dt, out["probe"]) if probe_x is not None else None
    final = WaveFunction(grid, out["final"], "position")

    _check_boundary_mass(final, cfg)
    states = tuple(WaveFunction(grid, s, "position") for s in out["states"])
    state_times = tuple(cfg.dt * int(j) for j in out["state_steps"])
    return EvolutionResult(cfg, survival, absorbed, probe, state_times, states, final)


def _check_boundary_mass(psi: WaveFunction, cfg: EvolutionConfig):
    g = psi.grid
    guard = max(2, int(cfg.boundary_guard_fraction * g.n_points))
    dens = np.abs(psi.amplitudes) ** 2
    mass = float((np.sum(dens[:guard]) + np.sum(dens[-guard:])) * g.dx)
    if mass > cfg.boundary_guard_tol:
        raise BoundaryLeakError(
            f"boundary mass {mass:.3e} exceeds {cfg.boundary_guard_tol:.1e} "
            f"at t = {cfg.t_max:g}; widen the grid or shorten t_max"
        )


def arrival_density_from_norm(survival: TimeSeries) -> TimeSeries:
    """Π(t) = −dN/dt by centered differences (second-order one-sided ends)."""
    if len(survival) < 3:
        raise ValueError("need at least 3 survival samples")
    if survival.is_complex:
        raise ValueError("survival must be real")
    pi = -np.gradient(survival.values, survival.dt, edge_order=2)
    return TimeSeries(survival.t0, survival.dt, pi)


def arrival_density_from_potential(states, potential: AbsorbingPotential,
                                   constants: PhysicalConstants = PhysicalConstants()) -> TimeSeries:
    """Π(t_j) = (2V0/ħ)·∫_{x<0} f|ψ(t_j)|²dx over uniformly sampled states.

    ``states`` is a sequence of (time, WaveFunction) on a common grid.
    """
    states = list(states)
    if len(states) < 2:
        raise ValueError("need at least 2 sampled states")
    times = np.array([t for t, _ in states])
    dts = np.diff(times)
    if not np.allclose(dts, dts[0], rtol=1e-9, atol=0.0):
        raise ValueError("states must be uniformly sampled in time")
    grid = states[0][1].grid
    shape = potential.shape_on(grid)
    vals = np.empty(len(states))
    for i, (_, wf) in enumerate(states):
        if wf.grid is not grid and (wf.grid.n_points != grid.n_points or wf.grid.dx != grid.dx):
            raise ValueError("states live on different grids")
        vals[i] = np.sum(shape * np.abs(wf.amplitudes) ** 2).real * grid.dx
    factor = 2.0 * potential.V0 / constants.hbar
    return TimeSeries(times[0], float(dts[0]), factor * vals)


@dataclass(frozen=True)
class ReflectionEstimate:
    n_infinity: float
    residual: float
    certified: bool
    window: float


def reflection_probability(survival: TimeSeries, plateau_tol: float = 1e-8,
                           window: float | None = None) -> ReflectionEstimate:
    """N(∞) estimate: N(t_max) with the trailing-window drift as error bar.

    The estimate is certified only if N varies less than ``plateau_tol``
    over the trailing window; otherwise the caller should extend t_max.
    """
    if survival.is_complex:
        raise ValueError("survival must be real")
    span = survival.dt * (len(survival) - 1)
    if window is None:
        window = max(0.05 * span, 10 * survival.dt)
    n_tail = max(2, min(len(survival), int(round(window / survival.dt)) + 1))
    tail = survival.values[-n_tail:]
    n_inf = float(survival.values[-1])
    residual = float(np.max(np.abs(tail - n_inf)))
    return ReflectionEstimate(n_inf, residual, residual < plateau_tol, window)
