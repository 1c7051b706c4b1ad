"""Exact commutative ring used by every recursion: symbols, polynomials, series."""

from . import _kernels
from .mpoly import (MPoly, as_rational, const, linear_combination,
                    poly_integrate_even, sum_of_products, var)
from .series import (LaurentSeries, TruncSeries, laurent_residue, poly_eval,
                     residue_of_product)
from .symbols import (INV_M0, PI2, Symbol, b, beta, from_id, moment,
                      parse_symbol, small_m, zinv)

__all__ = [
    "MPoly", "as_rational", "const", "var", "linear_combination", "sum_of_products",
    "poly_integrate_even", "TruncSeries", "LaurentSeries", "laurent_residue",
    "residue_of_product", "poly_eval", "Symbol", "PI2", "INV_M0", "b", "beta",
    "moment", "small_m", "zinv", "from_id", "parse_symbol", "_kernels",
]
