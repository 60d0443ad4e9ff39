"""
Exact stationary scattering on a finite dissipative chain.

The N lossy sites (on-site ``omega_eff``, hopping ``-alpha omega_eff``) are
embedded between two semi-infinite lossless chains with the same ``omega_c``
and ``alpha``. Site amplitudes obey, for j = 1..N,

    omega e_j = omega_eff e_j - alpha omega_eff (e_{j-1} + e_{j+1})

while the leads carry plane waves ``e^{i k j}`` with
``omega = omega_c - 2 alpha omega_c cos k``. For this hopping sign the
right-moving wave has ``k = arccos((omega_c - omega) / (2 alpha omega_c))``,
which is ``pi`` minus the band-formula wavevector used in ``transport``; only
``|sin k|`` enters observables shared by both modules.

Boundary conditions: ``e_j = e^{ikj} + r e^{-ikj}`` for j <= 1 and
``e_j = t e^{ikj}`` for j >= N. The 2x2 per-site transfer matrices map
``(e_j, e_{j-1}) -> (e_{j+1}, e_j)``; read with the site order reversed they
map ``(e_j, e_{j+1}) -> (e_{j-1}, e_j)``. The product is accumulated with
running renormalisation, the scale being carried as a logarithm.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import ParameterError, derive_rates, validate
from .transport import BandEdgeError, band_grid, total_transmission

# below this |sin k| the plane-wave basis is nearly degenerate
UNRELIABLE_SIN = 1e-3


class DecoupledChainError(ParameterError):
    """alpha == 0: the transfer matrix is singular and nothing propagates."""


@dataclass(frozen=True)
class OracleResult:
    r_total: complex
    t_total: complex
    t_exact: float
    t_product: float
    relative_deviation: float
    reliable: bool


@dataclass(frozen=True)
class DeviationTable:
    omega: np.ndarray
    t_exact: np.ndarray
    t_product: np.ndarray
    deviation: np.ndarray
    reliable: np.ndarray
    midband: np.ndarray

    @property
    def max_deviation(self):
        return float(np.max(self.deviation))

    @property
    def max_midband_deviation(self):
        return float(np.max(self.deviation[self.midband]))

    def rows(self):
        return list(zip(self.omega.tolist(), self.t_exact.tolist(),
                        self.t_product.tolist(), self.deviation.tolist()))


def chain_transfer_matrix(omega, onsite, hopping):
    """Renormalised product ``M_N ... M_1`` for a chain of lossy sites.

    Parameters
    ----------
    omega : float
        Photon frequency.
    onsite, hopping : sequence of complex
        Per-site on-site frequency and the hopping amplitude ``-alpha*omega_eff``
        used in that site's equation.

    Returns
    -------
    matrix : ndarray, shape (2, 2)
        Product divided by ``exp(log_scale)``.
    log_scale : float
    """
    # entries as Python complex scalars: far cheaper than 2x2 ndarrays per site
    m00, m01, m10, m11 = 1 + 0j, 0j, 0j, 1 + 0j
    log_scale = 0.0
    for eps, hop in zip(onsite, hopping):
        if hop == 0:
            raise DecoupledChainError("hopping is zero; the chain is decoupled")
        a = complex((omega - eps) / hop)
        # [[a, -1], [1, 0]] @ m
        m00, m01, m10, m11 = a * m00 - m10, a * m01 - m11, m00, m01
        peak = max(abs(m00), abs(m01), abs(m10), abs(m11))
        m00, m01, m10, m11 = m00 / peak, m01 / peak, m10 / peak, m11 / peak
        log_scale += math.log(peak)
    return np.array([[m00, m01], [m10, m11]]), float(log_scale)


def _solve(omega, onsite, hopping, phase):
    """Solve for ``(r, t)`` given the chain and the right-moving lead phase k.

    The recurrence is run from right to left, starting from the purely
    outgoing wave ``(e_N, e_{N+1}) = (1, z)``. The incoming amplitude is then
    the dominant solution and ``t`` follows as its reciprocal, which avoids
    the cancellation a left-to-right solve suffers in strongly lossy chains.
    """
    z = np.exp(1j * phase)
    n = len(onsite)
    # (e_j, e_{j+1}) -> (e_{j-1}, e_j) has the same per-site matrix form
    back, log_scale = chain_transfer_matrix(omega, onsite[::-1], hopping[::-1])
    e0, e1 = back @ np.array([1.0, z])
    # (e_0, e_1) = A (1, z) + A r (1, 1/z)
    a = np.array([[1.0, 1.0], [z, 1.0 / z]])
    amp, amp_r = np.linalg.solve(a, np.array([e0, e1]))
    if amp == 0:
        raise ArithmeticError("no incoming wave couples to the outgoing solution")
    r = amp_r / amp
    # t z^N = 1 / (A scale)
    log_abs_t = -(np.log(np.abs(amp)) + log_scale)
    t = np.exp(log_abs_t) * np.exp(-1j * (np.angle(amp) + n * phase))
    return complex(r), complex(t), float(np.exp(2 * log_abs_t))


def _lead_phase(omega, params):
    half_width = 2 * params.alpha * params.omega_c
    c = (params.omega_c - omega) / half_width
    if abs(c) >= 1.0:
        raise BandEdgeError(
            "frequency %r is at or outside the lead band edge" % (omega,))
    return float(np.arccos(c))


def exact_scattering(omega, params, reverse=False):
    """Exact transmission/reflection of the dissipative chain at ``omega``.

    ``reverse=True`` sends the photon in from the right, i.e. traverses the
    chain with the site order (and hence the matrix product) reversed.

    Raises
    ------
    DecoupledChainError
        If ``alpha == 0``.
    BandEdgeError
        If ``omega`` is not strictly inside the band.
    """
    validate(params, require_coupling=False)
    if params.alpha == 0:
        raise DecoupledChainError("alpha == 0: decoupled chain, no transport")
    rates = derive_rates(params)
    phase = _lead_phase(omega, params)
    n = params.n_cavities
    onsite = np.full(n, rates.omega_eff)
    hopping = np.full(n, -params.alpha * rates.omega_eff)
    if reverse:
        onsite, hopping = onsite[::-1], hopping[::-1]
    r, t, t_exact = _solve(omega, onsite, hopping, phase)
    t_prod = total_transmission(omega, params)
    if t_prod > 0:
        deviation = abs(t_exact - t_prod) / t_prod
    else:
        deviation = 0.0 if t_exact == 0 else np.inf
    return OracleResult(r_total=r, t_total=t, t_exact=t_exact, t_product=t_prod,
                        relative_deviation=float(deviation),
                        reliable=bool(np.sin(phase) >= UNRELIABLE_SIN))


def deviation_sweep(params, n_points):
    """Compare exact and product-formula transmission on the open band grid."""
    if n_points < 2:
        raise ParameterError("deviation_sweep needs n_points >= 2")
    validate(params)
    omega = band_grid(params, n_points)
    results = [exact_scattering(w, params) for w in omega]
    return DeviationTable(
        omega=omega,
        t_exact=np.array([res.t_exact for res in results]),
        t_product=np.array([res.t_product for res in results]),
        deviation=np.array([res.relative_deviation for res in results]),
        reliable=np.array([res.reliable for res in results]),
        midband=np.abs(omega - params.omega_c) <= params.alpha * params.omega_c,
    )
