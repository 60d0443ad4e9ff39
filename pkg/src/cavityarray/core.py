"""
Array parameters and the rates derived from them.

Conventions
-----------
- Frequencies are in units of the bare cavity frequency ``omega_c`` (1 by
  default) and lengths in units of the period ``L`` (1 by default).
- The quality factor follows the convention ``Q = 2 * omega_c / gamma``,
  NOT the more common ``omega_c / (2 * gamma)``. Every decay rate in this
  package is computed from ``Q`` with this relation.
"""

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path


class ParameterError(ValueError):
    """Raised when array or bath parameters violate a model invariant."""


@dataclass(frozen=True)
class ArrayParams:
    """Physical description of a uniform coupled-cavity array.

    Attributes
    ----------
    n_cavities : int
        Number of cavities N.
    alpha : float
        Nearest-neighbour overlap integral (dimensionless).
    q_factor : float
        Single-cavity quality factor, ``Q = 2 omega_c / gamma``. ``inf``
        describes a lossless array.
    omega_c : float
        Bare single-cavity frequency.
    period : float
        Lattice period L.
    """

    n_cavities: int
    alpha: float
    q_factor: float
    omega_c: float = 1.0
    period: float = 1.0

    @classmethod
    def from_xi(cls, n_cavities, xi, q_factor, omega_c=1.0, period=1.0):
        """Build parameters from the hopping bandwidth ``xi = 2 alpha omega_c``."""
        return cls(n_cavities=n_cavities, omega_c=omega_c,
                   alpha=xi / (2.0 * omega_c), q_factor=q_factor,
                   period=period)

    @property
    def gamma(self):
        return 2.0 * self.omega_c / self.q_factor

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedRates:
    gamma: float
    xi: float
    kappa: float
    omega_eff: complex
    zeta: float


@dataclass(frozen=True)
class BandMode:
    index: int
    wavevector: float
    frequency: float


def validate(params, require_coupling=True):
    """Return ``params`` unchanged if every invariant holds.

    ``q_factor`` may be ``inf``, which describes a lossless array. With
    ``require_coupling=False`` the decoupled limit ``alpha == 0`` is let
    through for callers that handle it explicitly.

    Raises
    ------
    ParameterError
        Naming the first violated invariant.
    """
    n = params.n_cavities
    if isinstance(n, bool) or int(n) != n:
        raise ParameterError("n_cavities must be an integer")
    if n < 1:
        raise ParameterError("n_cavities >= 1 violated: got %r" % (n,))
    if not params.omega_c > 0:
        raise ParameterError("omega_c > 0 violated: got %r" % (params.omega_c,))
    if not params.period > 0:
        raise ParameterError("period > 0 violated: got %r" % (params.period,))
    lower_ok = params.alpha >= 0 if not require_coupling else params.alpha > 0
    if not (lower_ok and params.alpha < 0.5):
        raise ParameterError(
            "0 < alpha < 0.5 violated (alpha < 0.5 keeps the band above zero "
            "frequency): got %r" % (params.alpha,))
    if not params.q_factor > 100:
        raise ParameterError(
            "q_factor > 100 violated (high-Q regime): got %r"
            % (params.q_factor,))
    return params


def derive_rates(params):
    """Compute gamma, xi, kappa, omega_eff and zeta from validated params."""
    validate(params)
    gamma = 2.0 * params.omega_c / params.q_factor
    xi = 2.0 * params.alpha * params.omega_c
    kappa = 2.0 * params.alpha * gamma
    zeta = params.alpha * params.q_factor / params.n_cavities
    return DerivedRates(gamma=gamma, xi=xi, kappa=kappa,
                        omega_eff=complex(params.omega_c, -gamma), zeta=zeta)


_CONFIG_KEYS = {"n_cavities", "omega_c", "alpha", "xi", "q_factor", "period"}


def read_config(path):
    """Read a flat ``key = value`` file into a dict of floats/ints.

    No section header is needed. Unknown keys raise ``ParameterError``; so
    does giving both ``alpha`` and ``xi``.
    """
    text = Path(path).read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[array]\n" + text)
    except configparser.Error as exc:
        raise ParameterError("malformed config file %s: %s" % (path, exc))
    values = {}
    for key, raw in parser["array"].items():
        if key not in _CONFIG_KEYS:
            raise ParameterError("unknown config key %r in %s" % (key, path))
        try:
            num = float(raw)
        except ValueError:
            raise ParameterError("config key %r is not a number: %r" % (key, raw))
        if key == "n_cavities":
            if num != int(num):
                raise ParameterError("n_cavities must be an integer: %r" % raw)
            num = int(num)
        values[key] = num
    if "alpha" in values and "xi" in values:
        raise ParameterError("config specifies both alpha and xi")
    return values


def params_from_mapping(values):
    """Build validated ``ArrayParams`` from a mapping that may hold xi instead of alpha."""
    values = dict(values)
    omega_c = values.get("omega_c", 1.0)
    if "xi" in values:
        if "alpha" in values:
            raise ParameterError("both alpha and xi given")
        values["alpha"] = values.pop("xi") / (2.0 * omega_c)
    missing = [k for k in ("n_cavities", "alpha", "q_factor") if k not in values]
    if missing:
        raise ParameterError("missing required parameter(s): " + ", ".join(missing))
    params = ArrayParams(n_cavities=values["n_cavities"], omega_c=omega_c,
                         alpha=values["alpha"], q_factor=values["q_factor"],
                         period=values.get("period", 1.0))
    return validate(params)


def is_lossless(params):
    return math.isinf(params.q_factor)
