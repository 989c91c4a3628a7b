"""Strong-field harmonic spectra of isolated bound states (atomic units, length gauge)."""

from ._core import (
    RuntimeFailure,
    ValidationError,
    WellSpec,
    bessel_j0,
    bound_states,
    carrier_wave_sidebands,
    equally_spaced_wells,
    find_peaks,
    fit_dipole,
    linear_sidebands,
    main,
    odd_centered_sidebands,
    potential,
    propagate,
    spectrum,
    sweep,
    tls_propagate,
    tune_well_separation,
)

__version__ = "0.1.0"

__all__ = [
    "RuntimeFailure",
    "ValidationError",
    "WellSpec",
    "bessel_j0",
    "bound_states",
    "carrier_wave_sidebands",
    "equally_spaced_wells",
    "find_peaks",
    "fit_dipole",
    "linear_sidebands",
    "main",
    "odd_centered_sidebands",
    "potential",
    "propagate",
    "spectrum",
    "sweep",
    "tls_propagate",
    "tune_well_separation",
]
