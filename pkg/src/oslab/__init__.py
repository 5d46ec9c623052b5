"""oslab: numerical function-space toolkit on sampled grids.

Computes Orlicz, Orlicz-slice, Orlicz-amalgam, Hardy, and Campanato
quasi-norms of grid functions, applies Hardy-Littlewood / smooth-kernel /
grand maximal operators, Littlewood-Paley square functionals, atomic
decompositions, and Hölder-regular singular integral operators, and ships
verification suites that check the exact identities and inequality brackets
these objects satisfy at grid scale.
"""

from .errors import OslabError
from .grid import Ball, Cube, GridFunction, GridSpec, integrate
from .norms import (
    CampanatoParams,
    SliceSpaceParams,
    amalgam_norm,
    campanato_norm,
    lebesgue_norm,
    luxemburg_norm,
    slice_norm,
)
from .orlicz import OrliczFunction, conjugate, log_quotient, power, power_log

__all__ = [
    "OslabError",
    "GridSpec",
    "GridFunction",
    "Ball",
    "Cube",
    "integrate",
    "OrliczFunction",
    "power",
    "power_log",
    "log_quotient",
    "conjugate",
    "SliceSpaceParams",
    "CampanatoParams",
    "lebesgue_norm",
    "luxemburg_norm",
    "slice_norm",
    "amalgam_norm",
    "campanato_norm",
]

__version__ = "0.1.0"
