"""Tight Weil-Petersson volumes, their recursions and moment geometry."""

from ._memo import clear_caches
from .correlators import CorrelatorLaurent, T_from_omega, omega, omega_from_T, tight_volume_residue
from .decomposition import (extract_tight, glue_tight, half_tight_H, half_tight_volume,
                            regluing_check)
from .jt import JTResult, fzzt_partition, gauss_glue, jt_partition, z02
from .moments import (FZZT, Atom, ConvergenceError, FormalMomentData, MomentData, Weight,
                      delta, formal_moment_data, moment_data, moments, solve_R)
from .nrecursion import (compare_with_printed, normalized_volume, psi_intersection,
                         string_dilaton_check, tight_volume_nrec)
from .ring import MPoly, TruncSeries
from .volumes import (VolumePoly, specialize_wp, tight_volume, tight_volume_moments,
                      wp_volume)

__version__ = "0.1.0"

__all__ = [
    "clear_caches", "MPoly", "TruncSeries", "VolumePoly",
    "tight_volume", "tight_volume_moments", "wp_volume", "specialize_wp",
    "CorrelatorLaurent", "omega", "omega_from_T", "T_from_omega", "tight_volume_residue",
    "normalized_volume", "tight_volume_nrec", "psi_intersection", "string_dilaton_check",
    "compare_with_printed",
    "Atom", "FZZT", "Weight", "delta", "MomentData", "FormalMomentData", "ConvergenceError",
    "moment_data", "formal_moment_data", "moments", "solve_R",
    "extract_tight", "glue_tight", "half_tight_volume", "half_tight_H", "regluing_check",
    "JTResult", "jt_partition", "fzzt_partition", "gauss_glue", "z02",
]
