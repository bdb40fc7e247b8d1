"""Exact Zariski decompositions on surface lattice models."""

from .bounds import (
    SurfaceBounds,
    amgm_det_bound,
    enumerate_denominator_bound,
    negativity_bound,
    primitive_decomposition,
    realize_denominator,
    surface_bounds,
    theorem_b_bound,
    theorem_d_bound,
)
from .decomposition import (
    NegativePartSystem,
    ZariskiDecomposition,
    decompose,
    decompose_oracle,
    denominator_of,
    verify,
)
from .errors import ZariskiError
from .gallery import build, build_collinear, build_del_pezzo, build_frobenius_model, build_two_lines
from .surface import SurfaceModel, load, make_model, save, validate

__version__ = "0.1.0"
