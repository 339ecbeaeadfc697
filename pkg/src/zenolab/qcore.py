"""Grids, states, absorbing potentials, and spectral observables.

Everything here is immutable after construction; the arrays handed out are
read-only views so states can be shared freely across threads and sweep
workers.

Conventions, fixed once for the whole package:

* grid:  x_j = x_min + j·dx with dx = (x_max − x_min)/n (endpoint-exclusive,
  periodic under the discrete Fourier transform),
* momentum rep:  φ(k) = (1/√2π) ∫ ψ(x) e^{−ikx} dx, discretized on the
  conjugate fftfreq grid, so Parseval holds exactly for the lattice sums,
* the step mask θ(−x) counts the point at x = 0 as NOT absorbed,
* point values at arbitrary x (notably x = 0, which is generally off
  lattice) come from band-limited interpolation, never nearest-neighbour.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass, field

__all__ = [
    "PhysicalConstants",
    "SpatialGrid",
    "WaveFunction",
    "GaussianPacketSpec",
    "Profile",
    "AbsorbingPotential",
    "PROFILE_FAMILIES",
    "make_profile",
    "make_gaussian",
    "spectral_transform",
    "observables",
    "Observables",
    "band_limited_delta",
    "point_weights",
    "derivative_weights",
    "value_at",
    "momentum_spectrum",
    "PacketConstructionError",
    "RepresentationError",
]


class PacketConstructionError(ValueError):
    """Raised when a packet cannot satisfy its tail-tolerance contract."""


class RepresentationError(ValueError):
    """Raised when an operation receives the wrong representation tag."""


def _freeze(arr):
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform 1D grid straddling x = 0, with its conjugate momentum grid."""

    x_min: float
    x_max: float
    n_points: int
    dx: float = field(init=False)
    index_origin: int = field(init=False)

    def __post_init__(self):
        if not (self.x_min < 0.0 < self.x_max):
            raise ValueError("grid must straddle x = 0")
        if self.n_points < 16 or self.n_points % 2 != 0:
            raise ValueError("n_points must be even and >= 16")
        dx = (self.x_max - self.x_min) / self.n_points
        object.__setattr__(self, "dx", dx)
        x = self.x_min + dx * np.arange(self.n_points)
        k = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=dx)
        object.__setattr__(self, "_x", _freeze(x))
        object.__setattr__(self, "_k", _freeze(k))
        object.__setattr__(self, "index_origin", int(np.argmin(np.abs(x))))

    @property
    def x(self):
        return self._x

    @property
    def k(self):
        return self._k

    @property
    def dk(self):
        return 2.0 * np.pi / (self.n_points * self.dx)

    @property
    def k_max(self):
        return np.pi / self.dx

    @property
    def origin_on_lattice(self):
        return abs(self._x[self.index_origin]) < 1e-9 * self.dx

    def negative_mask(self, edge_weight: float = 0.0):
        """θ(−x) sampled on the lattice.

        A point exactly at x = 0 gets ``edge_weight`` (0 by convention for
        production evolution; 0.5 centres the absorber edge for kernel
        verification runs).
        """
        mask = (self._x < 0.0).astype(float)
        if self.origin_on_lattice:
            mask[self.index_origin] = edge_weight
        return mask


@dataclass(frozen=True)
class WaveFunction:
    grid: SpatialGrid
    amplitudes: np.ndarray
    representation: str = "position"

    def __post_init__(self):
        if self.representation not in ("position", "momentum"):
            raise ValueError(f"unknown representation {self.representation!r}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise ValueError("amplitude array does not match the grid")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("non-finite amplitudes")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    def norm_squared(self) -> float:
        w = self.grid.dx if self.representation == "position" else self.grid.dk
        return float(np.sum(np.abs(self.amplitudes) ** 2) * w)


# --- absorber profiles -------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Positive shape factor f(x) for the absorber on x < 0."""

    family: str
    params: tuple
    key: str

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "constant":
            (a,) = self.params
            return np.full_like(x, a)
        if self.family == "exponential":
            a, alpha = self.params
            return a * np.exp(alpha * x)
        if self.family == "lorentzian":
            a, width = self.params
            return a / (1.0 + (x / width) ** 2)
        if self.family == "tabulated":
            xs, fs = self.params
            return np.interp(x, xs, fs)
        raise ValueError(f"unknown profile family {self.family!r}")


def _make_constant(amplitude=1.0):
    amplitude = float(amplitude)
    if amplitude <= 0:
        raise ValueError("constant profile needs amplitude > 0")
    return Profile("constant", (amplitude,), f"constant(a={amplitude:g})")


def _make_exponential(amplitude=1.0, alpha=1.0):
    amplitude, alpha = float(amplitude), float(alpha)
    if amplitude <= 0:
        raise ValueError("exponential profile needs amplitude > 0")
    return Profile("exponential", (amplitude, alpha), f"exponential(a={amplitude:g},alpha={alpha:g})")


def _make_lorentzian(amplitude=1.0, width=1.0):
    amplitude, width = float(amplitude), float(width)
    if amplitude <= 0 or width <= 0:
        raise ValueError("lorentzian profile needs amplitude, width > 0")
    return Profile("lorentzian", (amplitude, width), f"lorentzian(a={amplitude:g},w={width:g})")


def _make_tabulated(x, f):
    xs = np.asarray(x, dtype=float)
    fs = np.asarray(f, dtype=float)
    if xs.ndim != 1 or xs.shape != fs.shape or len(xs) < 2:
        raise ValueError("tabulated profile needs matching 1D x, f arrays")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("tabulated profile x values must increase")
    if np.any(fs <= 0):
        raise ValueError("tabulated profile must be positive everywhere")
    return Profile("tabulated", (_freeze(xs.copy()), _freeze(fs.copy())), f"tabulated(n={len(xs)})")


PROFILE_FAMILIES = {
    "constant": _make_constant,
    "exponential": _make_exponential,
    "lorentzian": _make_lorentzian,
    "tabulated": _make_tabulated,
}


def make_profile(family, **params) -> Profile:
    try:
        factory = PROFILE_FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown profile {family!r}; registered: {sorted(PROFILE_FAMILIES)}") from None
    return factory(**params)


@dataclass(frozen=True)
class AbsorbingPotential:
    """V(x) = −i·V0·θ(−x)·f(x) with positive profile f; zero for x ≥ 0."""

    V0: float
    profile: Profile

    def __post_init__(self):
        if self.V0 < 0:
            raise ValueError("V0 must be >= 0")

    def shape_on(self, grid: SpatialGrid, edge_weight: float = 0.0):
        """f(x)·θ(−x) on the lattice (the −i·V0 factor is applied by callers)."""
        return self.profile(grid.x) * grid.negative_mask(edge_weight)

    def max_f(self, grid: SpatialGrid) -> float:
        return float(np.max(self.shape_on(grid)))


# --- spectral machinery -------------------------------------------------

def spectral_transform(psi: WaveFunction, direction: str) -> WaveFunction:
    """Unitary change of representation; round trip is the identity.

    direction = 'to-momentum' | 'to-position'.
    """
    g = psi.grid
    if direction == "to-momentum":
        if psi.representation != "position":
            raise RepresentationError("to-momentum needs a position-representation state")
        phi = (g.dx / np.sqrt(2 * np.pi)) * np.exp(-1j * g.k * g.x_min) * np.fft.fft(psi.amplitudes)
        return WaveFunction(g, phi, "momentum")
    if direction == "to-position":
        if psi.representation != "momentum":
            raise RepresentationError("to-position needs a momentum-representation state")
        amps = np.fft.ifft((np.sqrt(2 * np.pi) / g.dx) * np.exp(1j * g.k * g.x_min) * psi.amplitudes)
        return WaveFunction(g, amps, "position")
    raise ValueError(f"unknown direction {direction!r}")


def momentum_spectrum(psi: WaveFunction) -> np.ndarray:
    """φ(k) on the fftfreq grid, regardless of the input representation."""
    if psi.representation == "momentum":
        return psi.amplitudes
    return spectral_transform(psi, "to-momentum").amplitudes


def point_weights(grid: SpatialGrid, x_target: float) -> np.ndarray:
    """Complex weights w with ψ(x_target) = Σ_l w_l · FFT(ψ)_l.

    Band-limited interpolation at an arbitrary point, expressed against the
    raw numpy forward FFT of the position amplitudes.
    """
    return (1.0 / grid.n_points) * np.exp(1j * grid.k * (x_target - grid.x_min))


def derivative_weights(grid: SpatialGrid, x_target: float) -> np.ndarray:
    """Weights for ∂ₓψ(x_target) against the raw forward FFT."""
    return (1j * grid.k / grid.n_points) * np.exp(1j * grid.k * (x_target - grid.x_min))


def band_limited_delta(grid: SpatialGrid, x_center: float = 0.0) -> WaveFunction:
    """Grid stand-in for |x_center⟩: flat spectrum over the grid band.

    Sidelobes vanish at every other lattice point only when x_center lies on
    the lattice; kernel-verification grids are chosen so that it does.
    """
    amps = np.fft.ifft(np.exp(1j * grid.k * (grid.x_min - x_center))) / grid.dx
    return WaveFunction(grid, amps, "position")


def value_at(psi: WaveFunction, x_target: float) -> complex:
    """ψ(x_target) by band-limited interpolation."""
    if psi.representation != "position":
        raise RepresentationError("value_at needs a position-representation state")
    return complex(np.sum(point_weights(psi.grid, x_target) * np.fft.fft(psi.amplitudes)))


@dataclass(frozen=True)
class Observables:
    norm_squared: float
    mean_x: float
    mean_p: float
    dpsi_at_0: complex


def observables(psi: WaveFunction, constants: PhysicalConstants = PhysicalConstants()) -> Observables:
    """Norm, ⟨x̂⟩, ⟨p̂⟩, and the spectral derivative ∂ₓψ(0).

    ⟨p̂⟩ is accumulated from the momentum density so it is real by
    construction; ∂ₓψ(0) is differentiation in momentum space followed by
    band-limited evaluation at exactly x = 0.
    """
    g = psi.grid
    if psi.representation == "position":
        pos = psi.amplitudes
        phi = momentum_spectrum(psi)
    else:
        phi = psi.amplitudes
        pos = spectral_transform(psi, "to-position").amplitudes
    n2_x = float(np.sum(np.abs(pos) ** 2) * g.dx)
    mean_x = float(np.sum(g.x * np.abs(pos) ** 2) * g.dx / n2_x)
    mean_p = float(constants.hbar * np.sum(g.k * np.abs(phi) ** 2) * g.dk / n2_x)
    dpsi0 = complex((g.dk / np.sqrt(2 * np.pi)) * np.sum(1j * g.k * phi))
    return Observables(n2_x, mean_x, mean_p, dpsi0)


def make_gaussian(spec: "GaussianPacketSpec", grid: SpatialGrid) -> WaveFunction:
    """Normalized Gaussian packet ∝ exp(−(x−x0)²/4σ² + i k0 (x−x0)).

    Construction is rejected unless the packet is concentrated in x > 0 and
    carries negative momenta only, both at the spec's tail tolerance, and its
    boundary tails are representable on the grid.
    """
    x = grid.x
    psi = (2 * np.pi * spec.sigma**2) ** (-0.25) * np.exp(
        -((x - spec.x0) ** 2) / (4 * spec.sigma**2) + 1j * spec.k0 * (x - spec.x0)
    )
    n2 = np.sum(np.abs(psi) ** 2) * grid.dx
    if not (n2 > 0 and np.isfinite(n2)):
        raise PacketConstructionError("packet underflows on this grid")
    psi = psi / np.sqrt(n2)
    wf = WaveFunction(grid, psi, "position")

    tol = spec.tail_tol
    dens = np.abs(wf.amplitudes) ** 2
    left_mass = float(np.sum(dens[x < 0.0]) * grid.dx)
    if left_mass > tol:
        raise PacketConstructionError(
            f"mass in x<0 is {left_mass:.3e} (tolerance {tol:.1e}); "
            "move the packet right or shrink sigma"
        )
    boundary = float(max(dens[0], dens[-1]) * grid.dx)
    if boundary > tol:
        raise PacketConstructionError(
            f"boundary tail density {boundary:.3e} exceeds tolerance {tol:.1e}; widen the grid"
        )
    phi = momentum_spectrum(wf)
    pos_mass = float(np.sum(np.abs(phi[grid.k > 0.0]) ** 2) * grid.dk)
    if pos_mass > tol:
        raise PacketConstructionError(
            f"positive-momentum mass {pos_mass:.3e} exceeds tolerance {tol:.1e}; "
            "k0 too close to 0 for this sigma"
        )
    return wf


@dataclass(frozen=True)
class GaussianPacketSpec:
    """Packet concentrated in x > 0 moving toward the detector at x = 0."""

    x0: float
    sigma: float
    k0: float
    tail_tol: float = 1e-8

    def __post_init__(self):
        if self.x0 <= 0:
            raise ValueError("x0 must be > 0")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.k0 >= 0:
            raise ValueError("k0 must be < 0 (packet moves toward x = 0)")
        if self.tail_tol <= 0:
            raise ValueError("tail_tol must be > 0")
