"""
Localized cavity modes of a 1D dielectric profile and their overlap.

The scalar mode equation ``phi'' + eps(x) omega**2 phi = 0`` (c = 1) is
discretised with the three-point Laplacian on a uniform grid, with zero field
beyond both ends. Material interfaces should fall midway between samples
(cell-centred sampling) for the frequencies to converge at second order.

The nearest-neighbour coupling is

    alpha = int (eps_single - eps_periodic) phi_j phi_{j+1} dx

with ``phi_{j+1}`` the single-cavity mode translated by one array period and
modes normalised to ``int eps_single phi**2 dx = 1``. Each mode's overall sign
is a free choice; ``phi_{j+1}`` is taken with the sign that makes
``int phi_j phi_{j+1} dx`` positive, which fixes the sign of alpha.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import ParameterError

LOCALIZED_PR = 0.5
MIN_GRID_POINTS = 200
NORM_TOL = 1e-8


class NoLocalizedModeError(ParameterError):
    pass


@dataclass(frozen=True)
class DielectricProfile1D:
    """Single-cavity and array permittivities sampled on one uniform grid.

    ``period`` is the array period in grid cells.
    """

    x: np.ndarray
    eps_single: np.ndarray
    eps_periodic: np.ndarray
    period: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        eps0 = np.asarray(self.eps_single, dtype=float)
        eps = np.asarray(self.eps_periodic, dtype=float)
        if not (x.shape == eps0.shape == eps.shape) or x.ndim != 1:
            raise ParameterError("x, eps_single and eps_periodic must be 1D and equal length")
        if x.size < 2 or np.any(np.diff(x) <= 0):
            raise ParameterError("grid must increase strictly")
        h = x[1] - x[0]
        if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
            raise ParameterError("grid must be uniform")
        if np.any(eps0 < 1) or np.any(eps < 1):
            raise ParameterError("permittivities must be >= 1")
        period = int(self.period)
        if period != self.period or period < 1 or 2 * period > x.size:
            raise ParameterError("period must be a positive cell count well inside the grid")
        # interior periodicity: drop one period at each end
        head = eps[period:x.size - 2 * period]
        tail = eps[2 * period:x.size - period]
        if head.size and np.max(np.abs(head - tail)) > 1e-12:
            raise ParameterError("eps_periodic is not periodic with the given period")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "eps_single", eps0)
        object.__setattr__(self, "eps_periodic", eps)
        object.__setattr__(self, "period", period)

    @property
    def spacing(self):
        return self.x[1] - self.x[0]

    @property
    def size(self):
        return self.x.size


@dataclass(frozen=True)
class LocalizedMode:
    """Mode profile on the grid; ``shift`` records a translation in cells."""

    frequency: float
    profile: np.ndarray
    participation_ratio: float
    shift: int = 0

    def translated(self, cells):
        """Copy moved by ``cells`` grid points, zero-filled at the trailing edge."""
        moved = np.zeros_like(self.profile)
        if cells >= 0:
            moved[cells:] = self.profile[:self.profile.size - cells]
        else:
            moved[:cells] = self.profile[-cells:]
        return replace(self, profile=moved, shift=self.shift + cells)


def participation_ratio(phi):
    """``(sum phi^2)^2 / (P sum phi^4)``: 1 for a flat field, ~1/P for one spike."""
    phi = np.asarray(phi, dtype=float)
    p2 = np.sum(phi ** 2)
    return float(p2 ** 2 / (phi.size * np.sum(phi ** 4)))


def layered_profile(layers, spacing, x0=0.0):
    """Sample ``[(eps, thickness), ...]`` at cell centres of width ``spacing``.

    Every thickness must be an integer multiple of ``spacing``.
    """
    values = []
    for eps, thickness in layers:
        cells = int(round(thickness / spacing))
        if abs(cells * spacing - thickness) > 1e-9 * max(thickness, 1.0):
            raise ParameterError(
                "layer thickness %r is not a multiple of spacing %r" % (thickness, spacing))
        values.extend([eps] * cells)
    values = np.array(values, dtype=float)
    x = x0 + (np.arange(values.size) + 0.5) * spacing
    return x, values


def bragg_cavity_array(half_slots, period_cells, spacing, eps_high=4.0,
                       eps_low=1.0, eps_defect=4.0, d_high=0.25, d_low=0.5):
    """Bragg stack with defect cavities replacing low-index layers.

    The stack is ``L H L H ... H L`` with ``2 * half_slots + 1`` low-index
    slots; both walls touch a low-index layer. The single-cavity profile has
    the defect in the centre slot; the array repeats it every
    ``period_cells`` Bragg cells. With the defaults the stack is quarter-wave
    at ``omega = pi`` and a defect with ``eps_defect = 4`` sits mid-gap.
    """
    n_slots = 2 * half_slots + 1
    centre = half_slots

    def build(defect_slots):
        layers = []
        for slot in range(n_slots):
            layers.append((eps_defect if slot in defect_slots else eps_low, d_low))
            if slot < n_slots - 1:
                layers.append((eps_high, d_high))
        return layered_profile(layers, spacing)

    x, eps_single = build({centre})
    array_slots = {s for s in range(n_slots) if (s - centre) % period_cells == 0}
    _, eps_periodic = build(array_slots)
    cell = (d_high + d_low) / spacing
    if abs(cell * period_cells - round(cell * period_cells)) > 1e-9:
        raise ParameterError("array period is not a whole number of grid cells")
    return DielectricProfile1D(x=x, eps_single=eps_single, eps_periodic=eps_periodic,
                               period=int(round(cell * period_cells)))


def _normalize(phi, eps, x):
    norm = np.trapezoid(eps * phi ** 2, x)
    phi = phi / np.sqrt(norm)
    # deterministic sign: largest lobe positive
    if phi[np.argmax(np.abs(phi))] < 0:
        phi = -phi
    return phi


def solve_defect_mode(profile, omega_max=None, n_search=40):
    """Most localized eigenmode of the single-cavity permittivity.

    Parameters
    ----------
    profile : DielectricProfile1D
    omega_max : float, optional
        Examine every mode at or below this frequency.
    n_search : int
        Without ``omega_max``, examine this many lowest eigenpairs.

    Returns
    -------
    LocalizedMode

    Raises
    ------
    NoLocalizedModeError
        If every examined mode has participation ratio >= 0.5.
    """
    if profile.size < MIN_GRID_POINTS:
        raise ParameterError("need at least %d grid points" % MIN_GRID_POINTS)
    eps = profile.eps_single
    h = profile.spacing
    # symmetrised form of -phi'' = lambda eps phi with psi = sqrt(eps) phi
    diag = 2.0 / (h * h * eps)
    off = -1.0 / (h * h * np.sqrt(eps[:-1] * eps[1:]))
    if omega_max is None:
        k = min(n_search, profile.size)
        lam, psi = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    else:
        lam, psi = eigh_tridiagonal(diag, off, select="v",
                                    select_range=(0.0, omega_max ** 2))
    omega = np.sqrt(lam)
    phi = psi / np.sqrt(eps)[:, None]
    pr = np.array([participation_ratio(phi[:, i]) for i in range(lam.size)])
    candidates = np.where(pr < LOCALIZED_PR)[0]
    if candidates.size == 0:
        raise NoLocalizedModeError("no localized mode among the examined eigenpairs")
    best = candidates[np.argmin(pr[candidates])]
    return LocalizedMode(frequency=float(omega[best]),
                         profile=_normalize(phi[:, best], eps, profile.x),
                         participation_ratio=float(pr[best]))


def _check_normalized(mode, profile):
    eps = np.roll(profile.eps_single, mode.shift)
    norm = np.trapezoid(eps * mode.profile ** 2, profile.x)
    if abs(norm - 1.0) > NORM_TOL:
        raise ParameterError("mode is not normalized: int eps phi^2 = %r" % norm)


def overlap_alpha(profile, phi_j, phi_j1):
    """Nearest-neighbour coupling from the dielectric overlap integral."""
    _check_normalized(phi_j, profile)
    _check_normalized(phi_j1, profile)
    contrast = profile.eps_single - profile.eps_periodic
    alpha = np.trapezoid(contrast * phi_j.profile * phi_j1.profile, profile.x)
    tails = np.trapezoid(phi_j.profile * phi_j1.profile, profile.x)
    return float(alpha * (1.0 if tails >= 0 else -1.0))


def coupling_from_profile(profile, **solver_kwargs):
    """Solve the single-cavity mode, translate it by one period, return (mode, alpha)."""
    mode = solve_defect_mode(profile, **solver_kwargs)
    neighbour = mode.translated(profile.period)
    return mode, overlap_alpha(profile, mode, neighbour)
