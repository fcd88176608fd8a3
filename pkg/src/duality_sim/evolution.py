"""Atom-field interaction in the double cavity.

A three-level atom (ground |c>, intermediate |b>, excited |a>) crosses two
superposed standing waves: a quantised mode coupling the a-c transition
with position-dependent strength g cos(k_q x), and a classical drive of
amplitude epsilon coupling a-b with strength g' cos(k_c x).  The quantum
wavenumber is three times the classical one, so the modes share the
antinode at x = 0 and the node at x = pi/2 (a quarter classical
wavelength).

Both detunings are equal and large, so |a> is only virtually populated.
In that regime the propagator restricted to {b, c} acts per Fock index m:
the input level keeps its photon number and acquires a phase, while the
cross branch exchanges one photon with the quantum mode (m -> m+1 from
|b>, m -> m-1 from |c>).  With

    A = cos^2(k_q x) * n_eff          (n_eff = m+1 from |b>, m from |c>)
    B = (g'/g)^2 cos^2(k_c x) |eps|^2
    theta = Theta * (A + B),          Theta = g^2 t / Delta

the dispersive multipliers on the input amplitude c_m are

    stay  = 1 + numer * (e^{i theta} - 1) / (A + B)
    cross = cos(k_q x) cos(k_c x) (g'/g) eps^(*) sqrt(n_eff) (e^{i theta} - 1) / (A + B)

with numer = B from |b> and numer = A from |c>.  Per m this map is exactly
unitary on the two-level subspace: |stay|^2 + |cross|^2 = 1.  At a common
node A = B = 0 and the map is the identity.

The exact (finite-detuning) multipliers replace e^{i theta} - 1 by

    e^{-i Delta t / 2} (cos(sqrt(mu) t) + i (Delta/2) sin(sqrt(mu) t)/sqrt(mu)) - 1,
    mu = g^2 (A + B) + Delta^2 / 4,

and leave a small population in |a> reported as a leak instead of a state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .fock import FieldState

LEVELS = ("b", "c")

# A + B values below this floor are float residue of node positions
# (cos(pi/2) is ~6e-17, not 0); the map there is the identity, as at an
# exact node.  The implied phase bound is theta_int * 1e-28.
DEGENERACY_FLOOR = 1e-28

__all__ = [
    "LEVELS",
    "InteractionParams",
    "CouplingPair",
    "LevelBranch",
    "coupling_at",
    "branch_multipliers",
    "dispersive_row",
    "exact_row",
    "effective_hamiltonian_phase",
]


@dataclass(frozen=True)
class InteractionParams:
    """Physical knobs of the double-cavity interaction.

    epsilon        classical drive amplitude (complex allowed, real typical)
    theta_int      dispersive phase per unit of A + B, i.e. g^2 t / Delta
    g_ratio        g'/g for the classical-drive coupling (1 by default)
    k_q, k_c       wavenumbers of the quantum and classical modes; k_q = 3 k_c
    detuning_ratio Delta/g, used only by the exact multipliers
    coupling_time  g t, used only by the exact multipliers; defaults to
                   theta_int * detuning_ratio so both routes share Theta
    """

    epsilon: complex = 0.0
    theta_int: float = math.pi
    g_ratio: float = 1.0
    k_q: float = 3.0
    k_c: float = 1.0
    detuning_ratio: float = 200.0
    coupling_time: float | None = None

    def __post_init__(self):
        eps = complex(self.epsilon)
        if not (math.isfinite(eps.real) and math.isfinite(eps.imag)):
            raise ValueError("epsilon must be finite")
        object.__setattr__(self, "epsilon", eps)
        if not self.theta_int > 0.0:
            raise ValueError("theta_int must be positive")
        if abs(self.k_q - 3.0 * self.k_c) > 1e-12 * max(1.0, abs(self.k_c)):
            raise ValueError("quantum wavenumber must be three times the classical one")
        if not self.detuning_ratio > 0.0:
            raise ValueError("detuning_ratio must be positive")

    @property
    def gt(self) -> float:
        """Coupling time g*t implied by Theta when not set explicitly."""
        if self.coupling_time is not None:
            return float(self.coupling_time)
        return self.theta_int * self.detuning_ratio


@dataclass(frozen=True)
class CouplingPair:
    """Local couplings in units of g: g1 = cos(k_q x), g2 = (g'/g) cos(k_c x)."""

    g1: float
    g2: float


@dataclass(frozen=True)
class LevelBranch:
    """One output branch of the interaction: internal level plus field."""

    level: str
    field: FieldState


def coupling_at(x: float, params: InteractionParams) -> CouplingPair:
    """Standing-wave couplings at position x (units of 1/k_c, antinode at 0)."""
    return CouplingPair(
        g1=math.cos(params.k_q * x),
        g2=params.g_ratio * math.cos(params.k_c * x),
    )


def _level_arrays(level_in, x, params, n_max):
    """Shared geometry/photon-number pieces, broadcast over x."""
    if level_in not in LEVELS:
        raise ValueError(f"unknown input level {level_in!r}")
    x = np.asarray(x, dtype=float)
    cq = np.cos(params.k_q * x)[..., None]
    cc = params.g_ratio * np.cos(params.k_c * x)[..., None]
    m = np.arange(n_max, dtype=float)
    eps = complex(params.epsilon)
    drive = cc * cc * abs(eps) ** 2
    if level_in == "b":
        n_eff = m + 1.0
        cross_amp = cq * cc * eps * np.sqrt(m + 1.0)
    else:
        n_eff = m
        cross_amp = cq * cc * np.conj(eps) * np.sqrt(m)
    photon = cq * cq * n_eff
    return drive, photon, cross_amp


def branch_multipliers(level_in, x, params: InteractionParams, n_max: int, mode="dispersive"):
    """Per-Fock-index multipliers (stay, cross, leak) at the given positions.

    stay[m] scales the amplitude that keeps the input level and photon
    number; cross[m] scales the amplitude moving to |m+1> (from |b>) or
    |m-1> (from |c>).  leak is the |a>-population fraction per unit input
    weight, zero identically in dispersive mode.  x may be a scalar or an
    array; outputs broadcast to shape(x) + (n_max,).
    """
    drive, photon, cross_amp = _level_arrays(level_in, x, params, n_max)
    total = drive + photon
    degenerate = total <= DEGENERACY_FLOOR
    safe = np.where(degenerate, 1.0, total)
    if mode == "dispersive":
        ring = np.exp(1j * params.theta_int * total) - 1.0
        leak = np.zeros_like(total)
    elif mode == "exact":
        d = params.detuning_ratio
        gt = params.gt
        mu = total + 0.25 * d * d
        arg = gt * np.sqrt(mu)
        sinc = np.sin(arg) / np.sqrt(mu)
        ring = np.exp(-0.5j * d * gt) * (np.cos(arg) + 0.5j * d * sinc) - 1.0
        seed = drive if level_in == "b" else photon
        leak = np.where(degenerate, 0.0, seed * sinc * sinc)
    else:
        raise ValueError(f"unknown interaction mode {mode!r}")
    numer = drive if level_in == "b" else photon
    stay = np.where(degenerate, 1.0 + 0.0j, 1.0 + numer * ring / safe)
    cross = np.where(degenerate, 0.0 + 0.0j, cross_amp * ring / safe)
    return stay, cross, leak


def effective_hamiltonian_phase(m: int, level: str, x: float, params: InteractionParams) -> float:
    """Accumulated dispersive phase Theta * (A + B) for Fock index m."""
    drive, photon, _ = _level_arrays(level, float(x), params, m + 1)
    total = drive + photon  # broadcasts the drive term over the Fock axis
    return float(params.theta_int * total[..., m])


def _assemble_branches(level_in, field_in, stay, cross, tail_tol):
    """Build the branch list from multipliers; police the top-row shift."""
    amps = field_in.amps
    n_max = field_in.n_max
    other = "c" if level_in == "b" else "b"
    branches = [LevelBranch(level=level_in, field=FieldState(stay * amps))]
    lost = 0.0
    if level_in == "b":
        # cross branch raises the photon number; the top coefficient falls
        # off the truncation and is accounted as loss.
        shifted = np.zeros(n_max, dtype=complex)
        shifted[1:] = cross[:-1] * amps[:-1]
        lost = float(abs(cross[-1] * amps[-1]) ** 2)
    else:
        shifted = np.zeros(n_max, dtype=complex)
        shifted[:-1] = cross[1:] * amps[1:]
    if lost > tail_tol:
        raise TruncationError(
            f"photon-raising branch lost {lost:.3e} weight past the truncation "
            f"(tolerance {tail_tol:.1e}); increase n_max"
        )
    cross_state = FieldState(shifted)
    if cross_state.norm_sq() > 0.0:
        branches.append(LevelBranch(level=other, field=cross_state))
    return branches, lost


def dispersive_row(level_in, field_in: FieldState, x: float, params: InteractionParams,
                   tail_tol: float = 1e-9):
    """Dispersive image of |level_in> (x) field_in at position x.

    Returns the branch list; the cross branch is omitted when it carries no
    weight (epsilon = 0, a node, or the vacuum from |c>).
    """
    stay, cross, _ = branch_multipliers(level_in, float(x), params, field_in.n_max,
                                        mode="dispersive")
    branches, _ = _assemble_branches(level_in, field_in, stay, cross, tail_tol)
    return branches


def exact_row(level_in, field_in: FieldState, x: float, params: InteractionParams,
              tail_tol: float = 1e-9):
    """Finite-detuning image of |level_in> (x) field_in at position x.

    Returns (branches, leak) where leak is the input weight lost to the
    excited level; it vanishes as detuning_ratio grows at fixed theta_int.
    """
    stay, cross, leak = branch_multipliers(level_in, float(x), params, field_in.n_max,
                                           mode="exact")
    branches, _ = _assemble_branches(level_in, field_in, stay, cross, tail_tol)
    weights = np.abs(field_in.amps) ** 2
    return branches, float(np.sum(leak * weights))
