"""Finite-sample estimates of the limiting covariance structure.

The fluctuations of the log-scale estimators are governed by the covariance
function c(v, w) = cov(-log xi(v), -log xi(w)). This module estimates it two
ways: by sample covariances, and by numerical evaluation of the equivalent
double integral

    c(v, w) = int int [ exp(-ell(max(v s, w t))) - exp(-s A(v)) exp(-t A(w)) ]
              ds/s dt/t  over (0, inf)^2,

which serves as the model-based oracle. From either route come the optimal
weight vectors (solutions of Sigma lambda = c) and the minimal variance
var zeta(w) - c' Sigma^-1 c of the weighted vertex correction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import spd_solve
from .errors import (
    DimensionMismatch,
    QuadratureNotConverged,
    SingularSigma,
    TooFewObservations,
)
from .estimators import xi
from .models import DependenceModel
from .sampling import SampleY
from .simplex import SimplexPoint, vertex

#: Truncation of the improper double integral; the differenced integrand is
#: O(s) near zero and decays like exp(-s/p) at infinity.
QUAD_LOWER = 1e-6
QUAD_UPPER = 40.0

#: Node-doubling convergence tolerance.
QUAD_TOL = 1e-4

DEFAULT_NODES = 512


@dataclass(frozen=True)
class SigmaMatrix:
    """Symmetric PSD estimate of the vertex covariance matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch("covariance matrix must be square")
        if np.max(np.abs(m - m.T)) > 1e-12:
            raise DimensionMismatch("covariance matrix must be symmetric")
        if np.linalg.eigvalsh(m).min() < -1e-8:
            raise SingularSigma("covariance matrix has a significantly negative eigenvalue")
        m.setflags(write=False)

    @property
    def p(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class OptimalWeights:
    """Variance-minimizing weight vector at one simplex point."""

    weights: np.ndarray
    at_point: SimplexPoint
    provenance: str  # "sample-estimated" or "quadrature"


def _neg_log_xi(sample: SampleY, w: SimplexPoint) -> np.ndarray:
    return -np.log(xi(sample, w).values)


def sample_cov_zeta(sample: SampleY, v: SimplexPoint, w: SimplexPoint) -> float:
    """Unbiased sample covariance of (-log xi(v), -log xi(w))."""
    if sample.n < 2:
        raise TooFewObservations("covariance needs at least two observations")
    zv = _neg_log_xi(sample, v)
    zw = _neg_log_xi(sample, w)
    return float((zv - zv.mean()) @ (zw - zw.mean()) / (sample.n - 1))


def sigma_hat(sample: SampleY) -> SigmaMatrix:
    """Sample covariance matrix of the vertex variables -log Y_j."""
    if sample.n < sample.p + 1:
        raise TooFewObservations(f"sigma_hat needs n >= p + 1 = {sample.p + 1}")
    z = -np.log(sample.data)
    zc = z - z.mean(axis=0)
    m = zc.T @ zc / (sample.n - 1)
    return SigmaMatrix((m + m.T) / 2.0)


def _cov_vector(sample: SampleY, w: SimplexPoint) -> np.ndarray:
    zw = _neg_log_xi(sample, w)
    zw = zw - zw.mean()
    z = -np.log(sample.data)
    zc = z - z.mean(axis=0)
    return zc.T @ zw / (sample.n - 1)


def lambda_opt_hat(sample: SampleY, w: SimplexPoint) -> OptimalWeights:
    """Solve Sigma_hat lambda = c_hat(w) for the estimated optimal weights.

    Divisors n-1 are used on both sides, which makes the solution agree with
    the slope coefficients of the OLS fit up to round-off.
    """
    sig = sigma_hat(sample)
    lam = spd_solve(sig.matrix, _cov_vector(sample, w), SingularSigma)
    return OptimalWeights(lam, w, "sample-estimated")


def var_eta_opt_hat(sample: SampleY, w: SimplexPoint) -> float:
    """Estimated minimal variance var zeta(w) - c' Sigma^-1 c, floored at 0."""
    sig = sigma_hat(sample)
    c = _cov_vector(sample, w)
    lam = spd_solve(sig.matrix, c, SingularSigma)
    zw = _neg_log_xi(sample, w)
    var_w = float(zw.var(ddof=1))
    return max(var_w - float(c @ lam), 0.0)


def weighted_variance_hat(sample: SampleY, w: SimplexPoint, weights) -> float:
    """Sample variance of zeta(w) - lambda' zeta(e) for a fixed weight vector."""
    lam = np.asarray(weights, dtype=float)
    combined = _neg_log_xi(sample, w) + np.log(sample.data) @ lam
    return float(combined.var(ddof=1))


# ---------------------------------------------------------------------------
# quadrature oracle
# ---------------------------------------------------------------------------


def _cov_integral(model: DependenceModel, v: np.ndarray, w: np.ndarray, nodes: int) -> float:
    """Log-spaced tensor trapezoid approximation of the covariance integral."""
    x = np.linspace(np.log(QUAD_LOWER), np.log(QUAD_UPPER), nodes)
    h = x[1] - x[0]
    wt = np.full(nodes, h)
    wt[0] = wt[-1] = h / 2.0
    s = np.exp(x)
    a_v = float(model.pickands(v))
    a_w = float(model.pickands(w))
    args = np.maximum(s[:, None, None] * v, s[None, :, None] * w)
    joint = np.exp(-model.stable_tail(args))
    product = np.exp(-s[:, None] * a_v) * np.exp(-s[None, :] * a_w)
    return float(wt @ (joint - product) @ wt)


def cov_zeta_quadrature(
    model: DependenceModel,
    v: SimplexPoint,
    w: SimplexPoint,
    nodes: int = DEFAULT_NODES,
) -> float:
    """Model-based covariance of (-log xi(v), -log xi(w)) by quadrature.

    The integral is evaluated on a log-spaced tensor grid truncated to
    [1e-6, 40] with the trapezoid rule; the result at doubled node count is
    returned and the two evaluations must agree within 1e-4.
    """
    if nodes < 64:
        raise ValueError("quadrature needs at least 64 nodes per axis")
    if v.p != model.p or w.p != model.p:
        raise DimensionMismatch("points and model dimension differ")
    coarse = _cov_integral(model, v.weights, w.weights, nodes)
    fine = _cov_integral(model, v.weights, w.weights, 2 * nodes)
    if abs(fine - coarse) > QUAD_TOL:
        raise QuadratureNotConverged(
            f"doubling {nodes} nodes moved the value by {abs(fine - coarse):.3g}"
        )
    return fine


def sigma_quadrature(model: DependenceModel, nodes: int = DEFAULT_NODES) -> SigmaMatrix:
    """Vertex covariance matrix from the quadrature oracle."""
    p = model.p
    m = np.empty((p, p))
    for j in range(p):
        for k in range(j, p):
            val = cov_zeta_quadrature(model, vertex(p, j), vertex(p, k), nodes)
            m[j, k] = m[k, j] = val
    return SigmaMatrix(m)


def lambda_opt_quadrature(
    model: DependenceModel, w: SimplexPoint, nodes: int = DEFAULT_NODES
) -> OptimalWeights:
    sig = sigma_quadrature(model, nodes)
    c = np.array(
        [cov_zeta_quadrature(model, vertex(model.p, j), w, nodes) for j in range(model.p)]
    )
    lam = spd_solve(sig.matrix, c, SingularSigma)
    return OptimalWeights(lam, w, "quadrature")


def var_eta_opt_quadrature(
    model: DependenceModel, w: SimplexPoint, nodes: int = DEFAULT_NODES
) -> float:
    sig = sigma_quadrature(model, nodes)
    c = np.array(
        [cov_zeta_quadrature(model, vertex(model.p, j), w, nodes) for j in range(model.p)]
    )
    lam = spd_solve(sig.matrix, c, SingularSigma)
    var_w = cov_zeta_quadrature(model, w, w, nodes)
    return max(var_w - float(c @ lam), 0.0)


def quadrature_report_csv(model: DependenceModel, grid, nodes: int = DEFAULT_NODES) -> str:
    """Long-format CSV with Sigma, optimal weights and minimal variances.

    Record kinds: "sigma" rows carry matrix indices i, j; "lambda" rows carry
    the weight index i and the grid point; "var_eta_opt" rows carry only the
    grid point. Sigma is computed once and reused for every grid point.
    """
    p = model.p
    sig = sigma_quadrature(model, nodes)
    wcols = ",".join(f"w{j + 1}" for j in range(p))
    lines = [f"record,i,j,{wcols},value"]
    blank_w = "," * (p - 1)
    for j in range(p):
        for k in range(j, p):
            lines.append(f"sigma,{j + 1},{k + 1},{blank_w},{sig.matrix[j, k]:.17g}")
    for point in grid:
        c = np.array(
            [cov_zeta_quadrature(model, vertex(p, j), point, nodes) for j in range(p)]
        )
        lam = spd_solve(sig.matrix, c, SingularSigma)
        var_w = cov_zeta_quadrature(model, point, point, nodes)
        var_opt = max(var_w - float(c @ lam), 0.0)
        coords = ",".join(f"{x:.17g}" for x in point.weights)
        for j in range(p):
            lines.append(f"lambda,{j + 1},,{coords},{lam[j]:.17g}")
        lines.append(f"var_eta_opt,,,{coords},{var_opt:.17g}")
    return "\n".join(lines) + "\n"
