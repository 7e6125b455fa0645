"""Small dense SPD solves with a shared singularity guard."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .simplex import COND_LIMIT


def spd_solve(matrix: np.ndarray, rhs: np.ndarray, exc: type[Exception]) -> np.ndarray:
    """Solve `matrix @ x = rhs` for a symmetric positive-definite matrix.

    Raises `exc` when the condition number exceeds the repo-wide limit, which
    is how comonotone-degenerate data must surface.
    """
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise exc(f"matrix is numerically singular (condition number {cond:.3g})")
    try:
        factor = scipy.linalg.cho_factor(matrix, lower=True)
    except scipy.linalg.LinAlgError as err:
        raise exc(f"factorization failed: {err}") from err
    return scipy.linalg.cho_solve(factor, rhs)
