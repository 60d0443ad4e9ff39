"""Dissipative coupled-cavity arrays: bands, transmission and numerical cross-checks."""

from .core import (ArrayParams, BandMode, DerivedRates, ParameterError, derive_rates,
                   read_config, validate)
from .hamiltonian import (ComplexSpectrum, ComplexTridiagonal, build_effective,
                          complex_band, eigenfrequencies, mode_wavevectors)
from .transport import (BandEdgeError, ScatteringAmplitudes, TransmissionCurve,
                        local_amplitudes, spectrum, t_max, t_max_from_zeta,
                        total_transmission, wavevector_of)
from .scattering_oracle import OracleResult, deviation_sweep, exact_scattering

__version__ = "0.1.0"
