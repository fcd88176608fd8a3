"""Free flight to the screen and screen-pattern observables.

After the readout the atom evolves freely for a time t_prime.  Each factor
column of the density operator is a wavefunction, so conjugation by the
free propagator reduces to one spectral kernel application per column:

    psi_hat(k) -> exp(-i k^2 * DISPERSION_RATE * t_prime) psi_hat(k),

with k the angular spatial frequency of the position grid (units k_c = 1).
DISPERSION_RATE converts the quoted flight time into the kernel's phase
coefficient; it is fixed once here, and the analytic Gaussian-spreading
and two-slit oracles in the test suite are parameterised by the same
constant, which pins the kernel against closed forms.  Its value makes the
default grid (x in [-12, 14], 4096 points) hold the default flight time
t_prime = 3 with boundary weight far below the aliasing tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError, UndefinedVisibilityError
from .interferometer import AtomDensity

# kernel phase per unit flight time at unit spatial frequency
DISPERSION_RATE = 1.0 / (4.0 * math.pi ** 2)

# screen axis is expressed in classical wavelengths
WAVELENGTH = 2.0 * math.pi

# analysis window for fringe contrast, in classical wavelengths
DEFAULT_VISIBILITY_WINDOW = 0.25

__all__ = [
    "DISPERSION_RATE",
    "WAVELENGTH",
    "DEFAULT_VISIBILITY_WINDOW",
    "FlightSpec",
    "ScreenPattern",
    "free_propagate",
    "screen_distribution",
    "fringe_visibility",
]


@dataclass(frozen=True)
class FlightSpec:
    """Field-free flight of duration t_prime (dimensionless units)."""

    t_prime: float = 3.0

    def __post_init__(self):
        if self.t_prime < 0.0:
            raise ValueError("flight time must be non-negative")

    @property
    def tau(self) -> float:
        """Kernel phase coefficient for this flight."""
        return DISPERSION_RATE * self.t_prime


@dataclass(frozen=True)
class ScreenPattern:
    """Normalised atomic arrival density; x axis in classical wavelengths."""

    x_axis: np.ndarray
    intensity: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("x_lambda,intensity\n")
            for x, v in zip(self.x_axis, self.intensity):
                fh.write(f"{x:.9g},{v:.9g}\n")


def free_propagate(rho: AtomDensity, flight: FlightSpec,
                   boundary_tol: float = 1e-6) -> AtomDensity:
    """Evolve the atomic density operator through field-free flight.

    The kernel is unitary, so trace, Hermiticity and purity are preserved
    exactly; the boundary check guards against wrap-around of a state that
    outgrew the periodic grid.
    """
    grid = rho.grid
    k = 2.0 * math.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)
    kernel = np.exp(-1j * flight.tau * k * k)
    spectra = np.fft.fft(rho.factors, axis=0)
    factors = np.fft.ifft(kernel[:, None, None] * spectra, axis=0)
    out = AtomDensity(grid=grid, factors=factors)
    edge = float(np.sum(out.diagonal()[[0, -1], :])) * grid.dx
    if edge > boundary_tol:
        raise GridError(
            f"boundary probability {edge:.3e} exceeds {boundary_tol:.1e}; "
            "the grid is too small for this flight time"
        )
    return out


def screen_distribution(rho: AtomDensity) -> ScreenPattern:
    """Arrival density summed over internal levels, axis in wavelengths."""
    density = np.sum(rho.diagonal(), axis=1)
    return ScreenPattern(
        x_axis=rho.grid.x / WAVELENGTH,
        intensity=density * WAVELENGTH,
    )


def _interior_extrema(values: np.ndarray) -> np.ndarray:
    """Indices of strict interior local extrema of a sampled curve."""
    d = np.diff(values)
    sign = np.sign(d)
    # carry the last nonzero slope through plateaus
    for i in range(1, sign.size):
        if sign[i] == 0.0:
            sign[i] = sign[i - 1]
    turns = np.nonzero(sign[1:] * sign[:-1] < 0.0)[0] + 1
    return turns


def fringe_visibility(pattern: ScreenPattern, window=None) -> float:
    """Average fringe contrast over adjacent extremum pairs in a window.

    window is an (x_lo, x_hi) interval on the wavelength axis; by default
    a central window of width DEFAULT_VISIBILITY_WINDOW around the
    intensity centroid.  Raises UndefinedVisibilityError when the window
    holds fewer than two interior extrema (a fringe-free pattern), which
    is deliberately distinct from measuring zero contrast.
    """
    x = pattern.x_axis
    inten = pattern.intensity
    if window is None:
        total = float(np.sum(inten))
        centre = float(np.sum(x * inten) / total) if total > 0.0 else 0.0
        half = 0.5 * DEFAULT_VISIBILITY_WINDOW
        window = (centre - half, centre + half)
    lo, hi = float(window[0]), float(window[1])
    mask = (x >= lo) & (x <= hi)
    values = inten[mask]
    if values.size < 3:
        raise UndefinedVisibilityError("analysis window holds too few samples")
    turns = _interior_extrema(values)
    if turns.size < 2:
        raise UndefinedVisibilityError("no adjacent fringe extrema inside the window")
    levels = values[turns]
    hi_side = np.maximum(levels[:-1], levels[1:])
    lo_side = np.minimum(levels[:-1], levels[1:])
    contrasts = (hi_side - lo_side) / (hi_side + lo_side)
    return float(np.mean(contrasts))
