"""
Analytic single-photon transport through a dissipative array.

Local amplitudes at one site, with ``s = |sin kL|`` and ``c = cos kL``::

    D = (gamma + xi s - kappa c) - i kappa s
    r = (kappa c - gamma) / D
    t = (xi - i kappa) s / D

The position-dependent phase ``exp(2 i k j L)`` of ``r`` is dropped. The
total transmission is ``T = |t|**(2N)``.

Maximal transmission is quoted in two forms: ``(1 + gamma/xi)**(-2N)`` and
its first-order version ``1 / (1 + N gamma / xi)**2``. With the array quality
factor ``zeta = alpha Q / N`` one has ``N gamma / xi = 1 / zeta``, hence
``T_max = 1 / (1 + 1/zeta)**2``. (Writing ``1 / (1 + zeta)**2`` instead would
make high-zeta arrays opaque, which is the opposite of their behaviour.)
"""

from dataclasses import dataclass

import numpy as np

from .core import ParameterError, derive_rates, validate
from .hamiltonian import mode_wavevectors

# relative slack for frequencies computed as omega_c (1 +/- 2 alpha)
_EDGE_RTOL = 1e-12


class BandEdgeError(ValueError):
    """Frequency lies outside the closed band [omega_c(1-2a), omega_c(1+2a)]."""


@dataclass(frozen=True)
class ScatteringAmplitudes:
    r: complex
    t: complex


@dataclass(frozen=True)
class TransmissionCurve:
    omega: np.ndarray
    transmission: np.ndarray
    kind: str

    @property
    def points(self):
        return list(zip(self.omega.tolist(), self.transmission.tolist()))


@dataclass(frozen=True)
class TMax:
    exact: float
    first_order: float


def _band_cosine(omega, params):
    half_width = 2 * params.alpha * params.omega_c
    c = (np.asarray(omega, dtype=float) - params.omega_c) / half_width
    if np.any(np.abs(c) > 1 + _EDGE_RTOL / params.alpha):
        bad = np.atleast_1d(omega)[np.atleast_1d(np.abs(c) > 1 + _EDGE_RTOL / params.alpha)]
        raise BandEdgeError(
            "frequency %r outside the band [%r, %r]"
            % (bad[0], params.omega_c - half_width, params.omega_c + half_width))
    return np.clip(c, -1.0, 1.0)


def wavevector_of(omega, params):
    """Return ``k L = arccos((omega - omega_c) / (2 alpha omega_c))`` in [0, pi]."""
    validate(params)
    return np.arccos(_band_cosine(omega, params))


def _amplitudes(omega, params):
    rates = derive_rates(params)
    c = _band_cosine(omega, params)
    s = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
    g, xi, ka = rates.gamma, rates.xi, rates.kappa
    denom = (g + xi * s - ka * c) - 1j * ka * s
    r = (ka * c - g) / denom
    t = (xi - 1j * ka) * s / denom
    return r, t


def local_amplitudes(omega, params):
    """Local reflection/transmission amplitudes at one in-band frequency.

    Raises
    ------
    BandEdgeError
        If ``omega`` is outside the band.
    """
    r, t = _amplitudes(float(omega), params)
    return ScatteringAmplitudes(r=complex(r), t=complex(t))


def local_amplitudes_array(omega, params):
    """Vectorised ``local_amplitudes``: returns arrays ``(r, t)``."""
    return _amplitudes(np.asarray(omega, dtype=float), params)


def total_transmission(omega, params):
    """``T = |t|**(2N)``; accepts a scalar or an array of frequencies."""
    _, t = _amplitudes(omega, params)
    result = np.abs(t) ** (2 * params.n_cavities)
    return float(result) if np.ndim(result) == 0 else result


def band_grid(params, n_points):
    """Uniform grid of ``n_points`` frequencies strictly inside the band."""
    half_width = 2 * params.alpha * params.omega_c
    lo, hi = params.omega_c - half_width, params.omega_c + half_width
    return np.linspace(lo, hi, n_points + 2)[1:-1]


def spectrum(params, kind="continuous", n_points=801):
    """Total transmission at the N band modes or on a uniform in-band grid.

    Parameters
    ----------
    params : ArrayParams
    kind : {"discrete", "continuous"}
    n_points : int
        Grid size for ``kind="continuous"``; ignored for ``"discrete"``.
    """
    validate(params)
    if kind == "discrete":
        omega = np.array([m.frequency for m in mode_wavevectors(params)])
        omega = omega[::-1]
    elif kind == "continuous":
        if n_points < 2:
            raise ParameterError("continuous spectrum needs n_points >= 2")
        omega = band_grid(params, n_points)
    else:
        raise ValueError("kind must be 'discrete' or 'continuous', got %r" % (kind,))
    trans = np.clip(total_transmission(omega, params), 0.0, 1.0)
    return TransmissionCurve(omega=omega, transmission=np.atleast_1d(trans), kind=kind)


def t_max(params):
    """Peak transmission, exact-in-gamma/xi and first-order forms (kappa dropped)."""
    rates = derive_rates(params)
    ratio = rates.gamma / rates.xi
    n = params.n_cavities
    return TMax(exact=float(np.exp(-2 * n * np.log1p(ratio))),
                first_order=1.0 / (1.0 + n * ratio) ** 2)


def t_max_from_zeta(zeta):
    """``T_max = 1 / (1 + 1/zeta)**2`` for the array quality factor ``zeta``."""
    if not zeta > 0:
        raise ParameterError("zeta must be positive, got %r" % (zeta,))
    return 1.0 / (1.0 + 1.0 / zeta) ** 2
