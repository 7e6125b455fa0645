"""Nonparametric estimation of Pickands dependence functions.

Library layout:

- ``simplex``: points and grids on the unit simplex, shared constants
- ``models``: logistic-type dependence functions and validity checks
- ``sampling``: exact samplers on exponential margins
- ``estimators``: the naive / CFG / ZWP / OLS estimators and baselines
- ``asymptotics``: covariance estimation, optimal weights, quadrature oracle
- ``bench``: the Monte Carlo bias/MSE study
- ``service`` / ``cli``: HTTP surface and its thin command-line client
"""

__version__ = "0.1.0"

from .errors import PickandsError
from .models import (
    AsymmetricLogistic,
    DependenceModel,
    Independence,
    SymmetricLogistic,
    TabulatedPickands,
    check_pointwise_validity,
)
from .sampling import RngStream, SampleY, draw_sample
from .simplex import (
    EULER_GAMMA,
    GUMBEL_VARIANCE,
    SimplexGrid,
    SimplexPoint,
    centroid,
    full_grid,
    line_grid_w1_eq_w2,
    make_point,
    vertex,
)

__all__ = [
    "AsymmetricLogistic",
    "DependenceModel",
    "EULER_GAMMA",
    "GUMBEL_VARIANCE",
    "Independence",
    "PickandsError",
    "RngStream",
    "SampleY",
    "SimplexGrid",
    "SimplexPoint",
    "SymmetricLogistic",
    "TabulatedPickands",
    "centroid",
    "check_pointwise_validity",
    "draw_sample",
    "full_grid",
    "line_grid_w1_eq_w2",
    "make_point",
    "vertex",
    "__version__",
]
