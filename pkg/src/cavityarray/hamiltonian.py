"""
Effective non-Hermitian tight-binding Hamiltonian of a dissipative array.

Each cavity is replaced by a quasi-boson of complex frequency
``omega_eff = omega_c - i gamma``; nearest neighbours hop with amplitude
``-alpha * omega_eff``. The chain is open (hard walls), so the modes sit at
``k_n L = n pi / (N + 1)``.

The band formula ``omega_c + 2 alpha omega_c cos(k L)`` and the eigenvalues of
the ``-alpha`` hopping matrix, ``omega_eff (1 - 2 alpha cos(k L))``, differ by
``n -> N + 1 - n``; the two agree as sets, which is what the tests check.

The decay rate also enters the mode equation of a single cavity as a shift
``omega_c**2 -> omega_c**2 + gamma**2``. For any fixed linear operator such a
shift of the target eigenvalue leaves the eigenvectors untouched, so the
overlap integral of the lossy modes equals the lossless one and no separate
computation is done for it.
"""

from dataclasses import dataclass

import numpy as np

from .core import BandMode, derive_rates, validate


@dataclass(frozen=True)
class ComplexTridiagonal:
    """Uniform open-chain tridiagonal matrix stored by its two entries."""

    dimension: int
    diagonal: complex
    off_diagonal: complex

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def to_dense(self):
        n = self.dimension
        h = np.zeros((n, n), dtype=complex)
        idx = np.arange(n)
        h[idx, idx] = self.diagonal
        h[idx[:-1], idx[1:]] = self.off_diagonal
        h[idx[1:], idx[:-1]] = self.off_diagonal
        return h


@dataclass(frozen=True)
class ComplexSpectrum:
    eigenvalues: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=complex)
        order = np.lexsort((vals.imag, vals.real))
        object.__setattr__(self, "eigenvalues", vals[order])


def mode_wavevectors(params):
    """Return the N open-chain band modes, ordered by index n = 1..N."""
    validate(params, require_coupling=False)
    n_cav = params.n_cavities
    n = np.arange(1, n_cav + 1)
    k = n * np.pi / ((n_cav + 1) * params.period)
    omega = params.omega_c + 2 * params.alpha * params.omega_c * np.cos(k * params.period)
    return [BandMode(index=int(i), wavevector=float(kk), frequency=float(w))
            for i, kk, w in zip(n, k, omega)]


def build_effective(params):
    """Effective dissipative Hamiltonian: on-site omega_eff, hopping -alpha*omega_eff."""
    rates = derive_rates(params)
    return ComplexTridiagonal(dimension=params.n_cavities,
                              diagonal=rates.omega_eff,
                              off_diagonal=-params.alpha * rates.omega_eff)


def eigenfrequencies(h, method="closed"):
    """Complex eigenfrequencies of a uniform open-chain tridiagonal.

    Parameters
    ----------
    h : ComplexTridiagonal
    method : {"closed", "dense"}
        ``"closed"`` uses ``d + 2 o cos(n pi / (N + 1))``; ``"dense"`` calls a
        general complex eigensolver on the full matrix (meant for N <= 200).

    Returns
    -------
    ComplexSpectrum
        Eigenvalues sorted by real part.
    """
    if method == "closed":
        n = np.arange(1, h.dimension + 1)
        vals = h.diagonal + 2 * h.off_diagonal * np.cos(n * np.pi / (h.dimension + 1))
    elif method == "dense":
        vals = np.linalg.eigvals(h.to_dense())
    else:
        raise ValueError("unknown method %r" % (method,))
    return ComplexSpectrum(vals)


def complex_band(params):
    """``(n, k_n, omega_eff (1 + 2 alpha cos k_n L))`` for n = 1..N.

    Real parts reproduce the lossless band; the set equals the eigenvalues
    of ``build_effective(params)``.
    """
    rates = derive_rates(params)
    return [(m.index, m.wavevector,
             rates.omega_eff * (1 + 2 * params.alpha * np.cos(m.wavevector * params.period)))
            for m in mode_wavevectors(params)]
