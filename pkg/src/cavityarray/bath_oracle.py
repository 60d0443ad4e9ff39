"""
Single cavity coupled to a discretised continuum bath.

The continuum ``int d w_r`` is replaced by M oscillators on a uniform midpoint
grid with couplings ``g_m = eta(w_m) sqrt(rho(w_m) dw)``. In the
single-excitation sector the universe Hamiltonian is a real symmetric
(M+1)x(M+1) arrowhead matrix, diagonalised densely. From it we get the
cavity survival probability, its exponential decay rate and the cavity
spectral weight, to be compared with the golden-rule rate
``gamma = pi rho(w_c) |eta(w_c)|^2`` and the principal-value shift
``PV int rho |eta|^2 / (w_c - w) dw``.

Downstream modules keep the bare ``omega_c``; the shift is a diagnostic only.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .core import ParameterError

# fit window in units of 1/gamma: after the early quadratic regime, well
# before discretisation recurrences at 2 pi / dw
FIT_WINDOW = (0.1, 3.0)
MIN_FIT_SAMPLES = 8
QUASI_BOSON_WARN = 0.01


class QuasiBosonWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SpectralShape:
    """Real function of frequency: flat, linear tilt or tabulated.

    ``flat``: ``level``; ``tilt``: ``level + slope * omega``;
    ``tabulated``: linear interpolation through ``(table_omega, table_value)``.
    """

    kind: str = "flat"
    level: float = 1.0
    slope: float = 0.0
    table_omega: tuple = ()
    table_value: tuple = ()

    def __post_init__(self):
        if self.kind not in ("flat", "tilt", "tabulated"):
            raise ParameterError("unknown spectral shape %r" % (self.kind,))
        if self.kind == "tabulated":
            x = np.asarray(self.table_omega, dtype=float)
            if x.size < 2 or x.size != len(self.table_value):
                raise ParameterError("tabulated shape needs >= 2 matching samples")
            if np.any(np.diff(x) <= 0):
                raise ParameterError("tabulated frequencies must increase strictly")

    @classmethod
    def flat(cls, level):
        return cls("flat", level=level)

    @classmethod
    def tilt(cls, slope, level=0.0):
        return cls("tilt", level=level, slope=slope)

    @classmethod
    def tabulated(cls, omega, value):
        return cls("tabulated", table_omega=tuple(np.asarray(omega, float)),
                   table_value=tuple(np.asarray(value, float)))

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.kind == "flat":
            return np.full_like(omega, self.level)
        if self.kind == "tilt":
            return self.level + self.slope * omega
        x = np.asarray(self.table_omega)
        if np.any(omega < x[0]) or np.any(omega > x[-1]):
            raise ParameterError("tabulated shape evaluated outside its table")
        return np.interp(omega, x, np.asarray(self.table_value))


@dataclass(frozen=True)
class BathSpec:
    """Continuum bath seen by one cavity of frequency ``omega_c``."""

    density: SpectralShape
    coupling: SpectralShape
    omega_min: float
    omega_max: float
    omega_c: float = 1.0

    def __post_init__(self):
        if not self.omega_min < self.omega_c < self.omega_max:
            raise ParameterError(
                "band [%r, %r] must contain omega_c=%r strictly"
                % (self.omega_min, self.omega_max, self.omega_c))
        probe = np.linspace(self.omega_min, self.omega_max, 257)
        rho = self.density(probe)
        if np.any(rho < 0):
            raise ParameterError("density of states must be non-negative on the band")
        if not np.all(np.isfinite(rho * np.abs(self.coupling(probe)) ** 2)):
            raise ParameterError("rho |eta|^2 must be finite on the band")
        gamma = golden_rule(self)
        if self.width < 100 * gamma:
            raise ParameterError(
                "band width %r below 100 * gamma (%r)" % (self.width, gamma))

    @property
    def width(self):
        return self.omega_max - self.omega_min

    def spectral_function(self, omega):
        """``rho(omega) |eta(omega)|^2``."""
        return self.density(omega) * np.abs(self.coupling(omega)) ** 2

    @classmethod
    def flat_for_gamma(cls, gamma, width, omega_c=1.0):
        """Flat bath centred on ``omega_c`` whose golden-rule rate is ``gamma``."""
        return cls(density=SpectralShape.flat(gamma / np.pi),
                   coupling=SpectralShape.flat(1.0),
                   omega_min=omega_c - width / 2, omega_max=omega_c + width / 2,
                   omega_c=omega_c)


@dataclass(frozen=True)
class DiscreteBath:
    mode_frequencies: np.ndarray
    mode_couplings: np.ndarray
    spacing: float

    @property
    def n_modes(self):
        return len(self.mode_frequencies)

    @property
    def recurrence_time(self):
        return 2 * np.pi / self.spacing


@dataclass(frozen=True)
class UniverseSpectrum:
    """Eigen-decomposition of the single-excitation universe Hamiltonian.

    ``offsets`` are eigenvalues minus ``omega_c``; the cavity is basis index 0.
    """

    omega_c: float
    offsets: np.ndarray
    vectors: np.ndarray

    @property
    def eigenvalues(self):
        return self.omega_c + self.offsets

    @property
    def cavity_weights(self):
        return self.vectors[0] ** 2


@dataclass
class DecayReport:
    gamma_fit: float
    gamma_golden: float
    lamb_shift: float
    max_norm_error: float
    times: np.ndarray = field(repr=False)
    survival: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)

    @property
    def relative_error(self):
        return abs(self.gamma_fit - self.gamma_golden) / self.gamma_golden

    @property
    def ratio(self):
        return self.gamma_fit / self.gamma_golden


def discretize(spec, m_modes):
    """Midpoint-rule discretisation of the bath into ``m_modes`` oscillators."""
    if m_modes < 2:
        raise ParameterError("m_modes must be >= 2")
    if not spec.omega_min < spec.omega_c < spec.omega_max:
        raise ParameterError("band does not contain omega_c")
    dw = spec.width / m_modes
    omega = spec.omega_min + (np.arange(m_modes) + 0.5) * dw
    g = np.abs(spec.coupling(omega)) * np.sqrt(spec.density(omega) * dw)
    return DiscreteBath(mode_frequencies=omega, mode_couplings=g, spacing=dw)


def diagonalize_universe(omega_c, bath):
    m = bath.n_modes
    h = np.zeros((m + 1, m + 1))
    idx = np.arange(1, m + 1)
    # shifted by omega_c: keeps phases accurate at t ~ 1/gamma
    h[idx, idx] = bath.mode_frequencies - omega_c
    h[0, 1:] = bath.mode_couplings
    h[1:, 0] = bath.mode_couplings
    try:
        offsets, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ParameterError("universe diagonalisation failed: %s" % exc)
    return UniverseSpectrum(omega_c=omega_c, offsets=offsets, vectors=vectors)


def _cavity_amplitude(universe, times):
    phases = np.exp(-1j * np.outer(universe.offsets, times))
    return universe.cavity_weights @ phases


def survival_probability(omega_c, bath, time_grid, universe=None):
    """Cavity survival probability ``P(t)`` after a single excitation at t=0.

    Returns ``(times, P)`` as arrays. A precomputed ``universe`` may be passed
    to skip the diagonalisation.
    """
    times = np.asarray(time_grid, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise ParameterError("time grid must be non-negative and increasing")
    if universe is None:
        universe = diagonalize_universe(omega_c, bath)
    amp = _cavity_amplitude(universe, times)
    return times, np.abs(amp) ** 2


def universe_norm(universe, times):
    """Total norm of the evolved state summed over cavity and bath sites."""
    c0 = universe.vectors[0]
    phases = np.exp(-1j * np.outer(universe.offsets, times)) * c0[:, None]
    state = universe.vectors @ phases
    return np.sum(np.abs(state) ** 2, axis=0)


def fit_decay(samples, window=None):
    """Fit ``P(t) = A exp(-2 gamma t)`` by least squares on ``ln P``.

    Parameters
    ----------
    samples : (times, P) pair of arrays, or sequence of (t, P) tuples
    window : (t_lo, t_hi), optional
        Only samples with ``t_lo <= t <= t_hi`` are used.

    Returns
    -------
    float
        ``gamma_fit = -slope / 2``.
    """
    if isinstance(samples, tuple) and len(samples) == 2 and np.ndim(samples[0]) == 1:
        t, p = (np.asarray(a, dtype=float) for a in samples)
    else:
        arr = np.asarray(samples, dtype=float).reshape(-1, 2)
        t, p = arr[:, 0], arr[:, 1]
    use = np.isfinite(p) & (p > 0)
    if window is not None:
        use &= (t >= window[0]) & (t <= window[1])
    if np.count_nonzero(use) < MIN_FIT_SAMPLES:
        raise ParameterError(
            "need at least %d usable samples, got %d"
            % (MIN_FIT_SAMPLES, np.count_nonzero(use)))
    slope, _ = np.polyfit(t[use], np.log(p[use]), 1)
    return float(-slope / 2) + 0.0


def golden_rule(spec):
    """Markovian decay rate ``pi rho(w_c) |eta(w_c)|^2``."""
    return float(np.pi * spec.spectral_function(spec.omega_c))


def lamb_shift(spec, quadrature_points=10000):
    """Principal value of ``int rho |eta|^2 / (w_c - w) dw`` over the band.

    Points ``w_c +/- u`` are paired on the largest window symmetric about
    ``w_c``, which turns the singular part into the regular integrand
    ``(f(w_c - u) - f(w_c + u)) / u``. The rest of the band is integrated
    directly. Both pieces use the midpoint rule at a common step.
    """
    w_c = spec.omega_c
    half = min(w_c - spec.omega_min, spec.omega_max - w_c)
    if half < 1e-3 * spec.width:
        raise ParameterError("omega_c too close to a band edge for a symmetric PV window")
    rest = spec.width - 2 * half
    step = (half + rest) / quadrature_points
    n_win = max(1, int(round(half / step)))
    du = half / n_win
    u = (np.arange(n_win) + 0.5) * du
    f = spec.spectral_function
    total = np.sum((f(w_c - u) - f(w_c + u)) / u) * du
    if rest > 0:
        n_rest = max(1, int(round(rest / step)))
        if w_c - spec.omega_min > spec.omega_max - w_c:
            lo, hi = spec.omega_min, w_c - half
        else:
            lo, hi = w_c + half, spec.omega_max
        dw = (hi - lo) / n_rest
        w = lo + (np.arange(n_rest) + 0.5) * dw
        total += np.sum(f(w) / (w_c - w)) * dw
    return float(total)


def _lorentzian(w, height, center, width, base):
    return height * width ** 2 / ((w - center) ** 2 + width ** 2) + base


def dominant_peak(universe, bath, span=3.0):
    """Centre of the cavity spectral weight from a Lorentzian fit.

    The weights divided by the mode spacing approximate the cavity spectral
    density. The fit uses eigenvalues within ``span`` estimated half-widths of
    the largest weight.
    """
    density = universe.cavity_weights / bath.spacing
    peak = int(np.argmax(density))
    x0 = universe.offsets[peak]
    width0 = 1.0 / (np.pi * density[peak])
    sel = np.abs(universe.offsets - x0) <= span * width0
    if np.count_nonzero(sel) < 5:
        raise ParameterError("spectral peak is not resolved by the bath grid")
    popt, _ = curve_fit(_lorentzian, universe.offsets[sel], density[sel],
                        p0=(density[peak], x0, width0, 0.0))
    return universe.omega_c + float(popt[1])


def bosonicity_deviation(params):
    """Magnitude ``2 gamma / omega_c`` of the deviation of ``[b, b+]`` from 1.

    Warns with ``QuasiBosonWarning`` above 0.01. Only ``q_factor > 0`` is
    required here: this is the diagnostic for leaving the high-Q regime, so
    it must accept Q at or below the usual validity floor.
    """
    if not params.q_factor > 0:
        raise ParameterError("q_factor > 0 violated: got %r" % (params.q_factor,))
    dev = 4.0 / params.q_factor
    if dev > QUASI_BOSON_WARN:
        warnings.warn("2 gamma / omega_c = %.3g exceeds %.3g: quasi-boson picture "
                      "unreliable" % (dev, QUASI_BOSON_WARN), QuasiBosonWarning,
                      stacklevel=2)
    return dev


def run_decay_experiment(spec, m_modes, n_times=200):
    """Diagonalise the discretised universe and compare with the golden rule."""
    gamma = golden_rule(spec)
    if gamma <= 0:
        raise ParameterError("bath has zero spectral weight at omega_c")
    bath = discretize(spec, m_modes)
    t_lo, t_hi = FIT_WINDOW[0] / gamma, FIT_WINDOW[1] / gamma
    if t_hi >= 0.5 * bath.recurrence_time:
        raise ParameterError(
            "fit window ends at %g but recurrences start near %g; use more modes"
            % (t_hi, bath.recurrence_time))
    universe = diagonalize_universe(spec.omega_c, bath)
    times = np.concatenate([[0.0], np.linspace(t_lo, t_hi, n_times)])
    _, p = survival_probability(spec.omega_c, bath, times, universe=universe)
    gamma_fit = fit_decay((times, p), window=(t_lo, t_hi))
    slope, intercept = np.polyfit(times[1:], np.log(p[1:]), 1)
    residual = p - np.exp(intercept + slope * times)
    norm = universe_norm(universe, times)
    return DecayReport(gamma_fit=gamma_fit, gamma_golden=gamma,
                       lamb_shift=lamb_shift(spec),
                       max_norm_error=float(np.max(np.abs(norm - 1.0))),
                       times=times, survival=p, residual=residual)
