"""Joint position / internal-level / photon-number state and its readouts.

The atomic transverse coordinate lives on a uniform grid (units of 1/k_c,
so the classical wavelength is 2 pi).  The top slit sits on the common
antinode at x = 0, the bottom slit on the common node at x = pi/2, and
each slit launches a Gaussian packet of width sigma.  The full state is a
complex array indexed (grid point, level in {b, c}, Fock index).

Readouts reduce the field:

* trace_out_field keeps the atomic density operator, stored in factored
  form rho = L L^dag (one factor column per Fock index), which propagation
  and screen extraction consume directly; the dense matrix is materialised
  only on demand.
* condition_on_quadrature projects the field on a homodyne outcome and
  returns the (pure, rank-1) conditional atom state plus the outcome's
  probability density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import evolution
from .errors import ConfigError, ImpossibleOutcomeError, TruncationError
from .evolution import InteractionParams
from .fock import FieldState, QuadratureSpec, coherent_state, quadrature_projector

LEVEL_INDEX = {"b": 0, "c": 1}
SLIT_KICK = "slit"
LOCAL_KICK = "local"

__all__ = [
    "GridSpec",
    "SlitGeometry",
    "PreparationParams",
    "JointState",
    "AtomDensity",
    "InteractionDiagnostics",
    "build_initial",
    "interact",
    "trace_out_field",
    "condition_on_quadrature",
    "quadrature_pdf",
    "field_density",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform position grid; the endpoint is excluded (periodic FFT domain)."""

    x_min: float = -12.0
    x_max: float = 14.0
    n_points: int = 4096

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.n_points >= 16):
            raise ConfigError("grid must have x_max > x_min and at least 16 points")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)


@dataclass(frozen=True)
class SlitGeometry:
    """Slit centres and Gaussian aperture width, in units of 1/k_c."""

    x_top: float = 0.0
    x_bottom: float = math.pi / 2.0
    sigma: float = 0.05

    def __post_init__(self):
        # slit separation is a quarter classical wavelength
        if abs((self.x_bottom - self.x_top) - math.pi / 2.0) > 1e-12:
            raise ConfigError("slit separation must be pi/2 (0.25 classical wavelengths)")
        if not self.sigma > 0.0:
            raise ConfigError("slit width must be positive")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.x_top + self.x_bottom)


@dataclass(frozen=True)
class PreparationParams:
    """Path amplitudes and the internal-state mixing angle of the top path.

    The top path carries cos(phi)|c> + sin(phi)|b>, the bottom path |c>.
    """

    c_up: complex
    c_down: complex
    phi: float

    def __post_init__(self):
        total = abs(self.c_up) ** 2 + abs(self.c_down) ** 2
        if abs(total - 1.0) > 1e-12:
            raise ConfigError(f"|c_up|^2 + |c_down|^2 must be 1, got {total!r}")


@dataclass(frozen=True)
class InteractionDiagnostics:
    leak: float = 0.0
    truncation_loss: float = 0.0


@dataclass(frozen=True)
class JointState:
    """Amplitudes indexed (grid point, level b/c, Fock index)."""

    grid: GridSpec
    geometry: SlitGeometry
    amps: np.ndarray
    diagnostics: InteractionDiagnostics = dataclass_field(default_factory=InteractionDiagnostics)

    @property
    def n_max(self) -> int:
        return self.amps.shape[2]

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2)) * self.grid.dx


@dataclass(frozen=True)
class AtomDensity:
    """Atomic density operator in factored form rho = L L^dag.

    factors has shape (grid points, 2 levels, rank); the grid measure dx is
    not folded into the factors, so trace(rho) = sum |factors|^2 * dx.
    Constructors normalise to unit trace.  rho is Hermitian and positive
    semidefinite by construction.
    """

    grid: GridSpec
    factors: np.ndarray

    @property
    def rank(self) -> int:
        return self.factors.shape[2]

    def trace(self) -> float:
        return float(np.sum(np.abs(self.factors) ** 2)) * self.grid.dx

    def diagonal(self) -> np.ndarray:
        """Probability density over (grid point, level)."""
        return np.sum(np.abs(self.factors) ** 2, axis=2)

    def purity(self) -> float:
        """trace(rho^2) via the rank x rank Gram matrix."""
        flat = self.factors.reshape(-1, self.rank)
        gram = (flat.conj().T @ flat) * self.grid.dx
        return float(np.sum(np.abs(gram) ** 2))

    def rho(self) -> np.ndarray:
        """Dense density matrix indexed (i, s, j, s'); use on small grids."""
        flat = self.factors.reshape(-1, self.rank)
        dense = flat @ flat.conj().T
        n = self.grid.n_points
        return dense.reshape(n, 2, n, 2)


def _slit_profile(grid: GridSpec, centre: float, sigma: float) -> np.ndarray:
    x = grid.x
    return (2.0 * math.pi * sigma ** 2) ** -0.25 * np.exp(-((x - centre) ** 2) / (4.0 * sigma ** 2))


def build_initial(prep: PreparationParams, geom: SlitGeometry, alpha: complex,
                  grid: GridSpec, n_max: int) -> JointState:
    """Two slit packets, correlated internal states, and a coherent field."""
    margin = 6.0 * geom.sigma
    if grid.x_min > geom.x_top - margin or grid.x_max < geom.x_bottom + margin:
        raise ConfigError("grid does not cover both slits with a 6 sigma margin")
    g_top = _slit_profile(grid, geom.x_top, geom.sigma)
    g_bot = _slit_profile(grid, geom.x_bottom, geom.sigma)
    c_m = coherent_state(alpha, n_max).amps
    phi = float(prep.phi)
    ground = prep.c_up * math.cos(phi) * g_top + prep.c_down * g_bot
    mixed = prep.c_up * math.sin(phi) * g_top
    edge = max(abs(ground[0]) ** 2 + abs(mixed[0]) ** 2,
               abs(ground[-1]) ** 2 + abs(mixed[-1]) ** 2)
    if edge > 1e-8:
        raise ConfigError(f"slit packets reach the grid boundary (density {edge:.2e})")
    amps = np.zeros((grid.n_points, 2, n_max), dtype=complex)
    amps[:, LEVEL_INDEX["c"], :] = np.outer(ground, c_m)
    amps[:, LEVEL_INDEX["b"], :] = np.outer(mixed, c_m)
    return JointState(grid=grid, geometry=geom, amps=amps)


def _kick_positions(state: JointState, kick: str) -> np.ndarray:
    """Positions at which the interaction multipliers are evaluated.

    "slit" assigns every grid point the centre of its nearest slit, which
    reproduces per-path evolution (each packet sees one antinode or node);
    "local" evaluates the standing-wave couplings at every grid point, so
    the kick varies across the packet width.
    """
    if kick == LOCAL_KICK:
        return state.grid.x
    if kick == SLIT_KICK:
        geom = state.geometry
        return np.where(state.grid.x < geom.midpoint, geom.x_top, geom.x_bottom)
    raise ConfigError(f"unknown kick policy {kick!r}")


def interact(state: JointState, params: InteractionParams, mode: str = "dispersive",
             kick: str = SLIT_KICK, tail_tol: float = 1e-9) -> JointState:
    """Apply the cavity interaction to every grid point of the state.

    Each level's Fock vector is replaced by its stay/cross branches; the
    photon-raising branch that falls off the truncation is accumulated
    into the truncation-loss diagnostic and trips TruncationError above
    tail_tol.  In exact mode the weight leaked to the excited level is
    reported in diagnostics rather than tracked as a state.
    """
    n_max = state.n_max
    dx = state.grid.dx
    xs = _kick_positions(state, kick)
    in_b = state.amps[:, LEVEL_INDEX["b"], :]
    in_c = state.amps[:, LEVEL_INDEX["c"], :]
    stay_b, cross_b, leak_b = evolution.branch_multipliers("b", xs, params, n_max, mode)
    stay_c, cross_c, leak_c = evolution.branch_multipliers("c", xs, params, n_max, mode)

    out = np.zeros_like(state.amps)
    out_b = out[:, LEVEL_INDEX["b"], :]
    out_c = out[:, LEVEL_INDEX["c"], :]
    out_b += stay_b * in_b
    out_c += stay_c * in_c
    # |b>|m> -> |c>|m+1>, |c>|m> -> |b>|m-1>
    out_c[:, 1:] += cross_b[:, :-1] * in_b[:, :-1]
    out_b[:, :-1] += cross_c[:, 1:] * in_c[:, 1:]

    truncation_loss = float(np.sum(np.abs(cross_b[:, -1] * in_b[:, -1]) ** 2)) * dx
    if truncation_loss > tail_tol:
        raise TruncationError(
            f"interaction pushed {truncation_loss:.3e} weight past the Fock truncation "
            f"(tolerance {tail_tol:.1e}); increase n_max"
        )
    leak = float(np.sum(leak_b * np.abs(in_b) ** 2) + np.sum(leak_c * np.abs(in_c) ** 2)) * dx
    return JointState(
        grid=state.grid,
        geometry=state.geometry,
        amps=out,
        diagnostics=InteractionDiagnostics(leak=leak, truncation_loss=truncation_loss),
    )


def trace_out_field(state: JointState) -> AtomDensity:
    """Partial trace over the field, renormalised to unit trace.

    The Fock slices of the joint state are exactly the factor columns of
    the reduced density operator, so no dense matrix is ever formed.
    """
    norm = state.norm_sq()
    if norm <= 0.0:
        raise ValueError("cannot trace a zero-norm state")
    return AtomDensity(grid=state.grid, factors=state.amps / math.sqrt(norm))


def condition_on_quadrature(state: JointState, spec: QuadratureSpec):
    """Project the field on a quadrature outcome.

    Returns (AtomDensity, density): the renormalised pure conditional atom
    state and the probability density of obtaining the outcome chi at the
    chosen angle.
    """
    coeffs = quadrature_projector(spec, state.n_max)
    cond = state.amps @ coeffs.conj()  # (grid, level)
    density = float(np.sum(np.abs(cond) ** 2)) * state.grid.dx
    if density < 1e-300:
        raise ImpossibleOutcomeError(
            f"outcome chi={spec.chi:g} at theta={spec.theta:g} has vanishing density"
        )
    factors = (cond / math.sqrt(density))[:, :, None]
    return AtomDensity(grid=state.grid, factors=factors), density


def quadrature_pdf(state: JointState, theta: float, chi_samples) -> np.ndarray:
    """Outcome densities for a sweep of quadrature eigenvalues."""
    chi_samples = np.asarray(chi_samples, dtype=float)
    n_max = state.n_max
    coeffs = np.empty((chi_samples.size, n_max), dtype=complex)
    for i, chi in enumerate(chi_samples):
        coeffs[i] = quadrature_projector(QuadratureSpec(theta=theta, chi=chi), n_max)
    flat = state.amps.reshape(-1, n_max)
    cond = flat @ coeffs.conj().T  # (grid*level, chi)
    return np.sum(np.abs(cond) ** 2, axis=0) * state.grid.dx


def field_density(state: JointState) -> np.ndarray:
    """Field density operator after tracing the atom, unit trace."""
    flat = state.amps.reshape(-1, state.n_max)
    rho = (flat.T @ flat.conj()) * state.grid.dx  # rho[m, n] = sum_g amps_m conj(amps_n)
    tr = float(np.trace(rho).real)
    if tr <= 0.0:
        raise ValueError("cannot trace a zero-norm state")
    return rho / tr
