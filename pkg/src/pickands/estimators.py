"""Nonparametric estimators of the Pickands dependence function.

All estimators are driven by the pointwise minima

    xi_i(w) = min_j Y_ij / w_j,

which are unit-rate exponential in A(w)^-1 whenever the sample has
unit-exponential margins and extreme-value dependence. The log-scale
estimators (naive, CFG with weight functions, the closed-form ZWP
representation, and the OLS intercept estimator) all live here, alongside
the Pickands / Deheuvels / Hall-Tajvidi reciprocal-scale baselines and the
shape-correction post-processing step.

Everything is a pure function of (sample, point); concurrent evaluation
needs no synchronization.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._linalg import spd_solve
from .errors import (
    DimensionMismatch,
    NonPositiveEstimate,
    NonPositiveInput,
    ParameterError,
    SingularDesign,
    TooFewObservations,
    WeightConstraintViolated,
)
from .sampling import SampleY
from .simplex import EULER_GAMMA, SimplexGrid, SimplexPoint, vertex

#: Estimator identifiers accepted by curve evaluation and the benchmark.
ESTIMATOR_IDS = ("naive", "cfg", "zwp", "ols", "pickands", "deheuvels", "ht", "oracle")


@dataclass(frozen=True)
class XiVector:
    """The n minima xi_i(w) for one simplex point."""

    values: np.ndarray
    at_point: SimplexPoint

    def __post_init__(self):
        if np.any(self.values <= 0) or not np.all(np.isfinite(self.values)):
            raise NonPositiveInput("xi values must be positive and finite")
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _xi_row(data: np.ndarray, w: np.ndarray) -> np.ndarray:
    """min_j Y_ij / w_j with coordinates where w_j = 0 excluded."""
    with np.errstate(divide="ignore"):
        ratios = data / w
    return ratios.min(axis=1)


def xi(sample: SampleY, w: SimplexPoint) -> XiVector:
    """Transform the sample into the exponential variables at w.

    Coordinates with zero weight are treated as +inf and drop out of the
    minimum; at a vertex e_j the result equals the j-th column bitwise.
    """
    if w.p != sample.p:
        raise DimensionMismatch(f"point has p={w.p}, sample has p={sample.p}")
    return XiVector(_xi_row(sample.data, w.weights), w)


def naive_log(xi_vec: XiVector) -> float:
    """Log of the uncorrected estimator: -mean(log xi) - gamma."""
    return float(-np.mean(np.log(xi_vec.values)) - EULER_GAMMA)


def naive(sample: SampleY, w: SimplexPoint) -> float:
    return float(np.exp(naive_log(xi(sample, w))))


class WeightScheme(ABC):
    """Weight functions lambda_j on the simplex with lambda_j(e_k) = delta_jk."""

    @abstractmethod
    def weights_at(self, w: SimplexPoint) -> np.ndarray:
        """The p weights at one simplex point."""

    def check_vertex_constraint(self, p: int, tol: float = 1e-12) -> None:
        for k in range(p):
            lam = self.weights_at(vertex(p, k))
            target = np.zeros(p)
            target[k] = 1.0
            if np.max(np.abs(lam - target)) > tol:
                raise WeightConstraintViolated(
                    f"weights at vertex {k} are {lam}, expected the unit vector"
                )


class PragmaticWeights(WeightScheme):
    """lambda_j(w) = w_j, the recommended default."""

    def weights_at(self, w: SimplexPoint) -> np.ndarray:
        return w.weights


class FixedWeights(WeightScheme):
    """User-supplied weight function w -> (p,) vector, checked at the vertices."""

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], p: int):
        self._func = func
        self.p = p
        self.check_vertex_constraint(p)

    def weights_at(self, w: SimplexPoint) -> np.ndarray:
        return np.asarray(self._func(w.weights), dtype=float)


class EstimatedWeights(WeightScheme):
    """Variance-minimizing weights estimated from a sample.

    Using these in the CFG combination reproduces the OLS estimator; the
    weights are the slope solution of the vertex covariance system.
    """

    def __init__(self, sample: SampleY):
        self.sample = sample

    def weights_at(self, w: SimplexPoint) -> np.ndarray:
        from .asymptotics import lambda_opt_hat

        return lambda_opt_hat(self.sample, w).weights

    def check_vertex_constraint(self, p: int, tol: float = 1e-8) -> None:
        # sample-estimated weights hit the vertex constraint only up to the
        # accuracy of the covariance solve
        super().check_vertex_constraint(p, tol=tol)


PRAGMATIC = PragmaticWeights()


def _vertex_naive_logs(sample: SampleY) -> np.ndarray:
    return -np.log(sample.data).mean(axis=0) - EULER_GAMMA


def cfg(sample: SampleY, w: SimplexPoint, scheme: WeightScheme = PRAGMATIC) -> float:
    """Vertex-corrected log-scale estimator.

    log A_cfg(w) = log A_naive(w) - sum_j lambda_j(w) log A_naive(e_j).
    Exactly one at the vertices for any admissible scheme.
    """
    lam = np.asarray(scheme.weights_at(w), dtype=float)
    if lam.shape != (sample.p,):
        raise DimensionMismatch("weight scheme returned a vector of wrong length")
    log_val = naive_log(xi(sample, w)) - float(lam @ _vertex_naive_logs(sample))
    return float(np.exp(log_val))


def zwp(sample: SampleY, w: SimplexPoint, scheme: WeightScheme = PRAGMATIC) -> float:
    """Original rank-integral estimator in its solved closed form.

    Requires non-negative weights summing to one; under that constraint it
    coincides analytically with `cfg`, and is kept as an independent code
    path for cross-validation:

        log A_zwp(w) = sum_j lambda_j(w) * mean_i(log Y_ij - log xi_i(w)).
    """
    lam = np.asarray(scheme.weights_at(w), dtype=float)
    if abs(lam.sum() - 1.0) > 1e-10:
        raise WeightConstraintViolated(f"weights sum to {lam.sum()}, expected 1")
    if np.any(lam < -1e-12):
        raise WeightConstraintViolated(f"negative weight in {lam}")
    log_xi = np.log(xi(sample, w).values)
    per_coord = np.log(sample.data).mean(axis=0) - log_xi.mean()
    return float(np.exp(lam @ per_coord))


@dataclass(frozen=True)
class OlsFit:
    """Intercept-plus-slopes fit of the vertex regression at one point."""

    beta: np.ndarray
    sigma2: float
    at_point: SimplexPoint


@dataclass(frozen=True)
class OlsEstimate:
    value: float
    variance: float


def _design_matrix(sample: SampleY) -> np.ndarray:
    x = np.empty((sample.n, sample.p + 1))
    x[:, 0] = 1.0
    x[:, 1:] = -np.log(sample.data) - EULER_GAMMA
    return x


def ols_fit(sample: SampleY, w: SimplexPoint) -> OlsFit:
    """Least-squares regression of -log xi(w) - gamma on the vertex variables.

    Solved through the normal equations with a Cholesky factorization; a
    condition number beyond 1e12 signals comonotone-like data and raises
    SingularDesign rather than returning a rank-deficient fit.
    """
    n, p = sample.n, sample.p
    if n < p + 2:
        raise TooFewObservations(f"OLS needs n >= p + 2 = {p + 2}, got {n}")
    x = _design_matrix(sample)
    gram = x.T @ x
    ydep = -np.log(xi(sample, w).values) - EULER_GAMMA
    beta = spd_solve(gram, x.T @ ydep, SingularDesign)
    resid = ydep - x @ beta
    sigma2 = float(resid @ resid) / (n - p - 1)
    return OlsFit(beta, max(sigma2, 0.0), w)


def ols_estimate(sample: SampleY, w: SimplexPoint) -> OlsEstimate:
    """exp(intercept) and the residual variance estimate."""
    fit = ols_fit(sample, w)
    return OlsEstimate(float(np.exp(fit.beta[0])), fit.sigma2)


def pickands(sample: SampleY, w: SimplexPoint) -> float:
    """Reciprocal of the mean of xi(w)."""
    return float(1.0 / np.mean(xi(sample, w).values))


def deheuvels(sample: SampleY, w: SimplexPoint) -> float:
    """Pickands estimator with the linear endpoint correction.

    1/A_D(w) = mean(xi(w)) - sum_j w_j (mean(Y_j) - 1); exactly one at the
    vertices. Raises when the corrected reciprocal is non-positive.
    """
    recip = float(np.mean(xi(sample, w).values) - w.weights @ (sample.data.mean(axis=0) - 1.0))
    if recip <= 0:
        raise NonPositiveEstimate(f"corrected reciprocal is {recip}")
    return 1.0 / recip


def hall_tajvidi(sample: SampleY, w: SimplexPoint) -> float:
    """Pickands estimator on the marginal-mean rescaled sample.

    xi~_i(w) = min_j Y_ij / (w_j * mean(Y_j)); self-normalization makes the
    vertex values exactly one.
    """
    if w.p != sample.p:
        raise DimensionMismatch(f"point has p={w.p}, sample has p={sample.p}")
    scaled = sample.data / sample.data.mean(axis=0)
    return float(1.0 / np.mean(_xi_row(scaled, w.weights)))


# ---------------------------------------------------------------------------
# curve evaluation over grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimateRecord:
    estimator: str
    values: np.ndarray
    variances: np.ndarray | None = None


@dataclass(frozen=True)
class EstimateCurve:
    """Estimator values over a grid; failed cells carry NaN sentinels."""

    grid: SimplexGrid
    records: tuple[EstimateRecord, ...]
    shape_corrected: bool = False

    def record(self, estimator: str) -> EstimateRecord:
        for rec in self.records:
            if rec.estimator == estimator:
                return rec
        raise KeyError(estimator)


def _curve_table(
    data: np.ndarray,
    weight_rows: np.ndarray,
    which: Sequence[str],
    lam_rows: np.ndarray | None = None,
    truth: np.ndarray | None = None,
    strict: bool = True,
) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """Evaluate several estimators on a grid from raw arrays.

    Returns (values, variances) keyed by estimator id; in non-strict mode
    failures become NaN cells instead of exceptions. This is the single
    implementation behind `estimate_curve` and the benchmark loop.
    """
    n, p = data.shape
    m = weight_rows.shape[0]
    unknown = [e for e in which if e not in ESTIMATOR_IDS]
    if unknown:
        raise ParameterError(f"unknown estimator id(s): {unknown}")
    values: dict[str, np.ndarray] = {}
    variances: dict[str, np.ndarray] = {}

    log_data = np.log(data)
    xi_rows = np.empty((m, n))
    for i in range(m):
        xi_rows[i] = _xi_row(data, weight_rows[i])
    log_xi = np.log(xi_rows)

    need_log = {"naive", "cfg", "zwp", "ols"} & set(which)
    if need_log:
        log_naive_pts = -log_xi.mean(axis=1) - EULER_GAMMA
        log_naive_vert = -log_data.mean(axis=0) - EULER_GAMMA
    if "naive" in which:
        values["naive"] = np.exp(log_naive_pts)
    if "cfg" in which or "zwp" in which:
        lam = weight_rows if lam_rows is None else lam_rows
    if "cfg" in which:
        values["cfg"] = np.exp(log_naive_pts - lam @ log_naive_vert)
    if "zwp" in which:
        sums = lam.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-10) or np.any(lam < -1e-12):
            raise WeightConstraintViolated("zwp requires non-negative weights summing to 1")
        per_coord = log_data.mean(axis=0)
        values["zwp"] = np.exp(lam @ per_coord - log_xi.mean(axis=1))
    if "ols" in which:
        if n < p + 2:
            raise TooFewObservations(f"OLS needs n >= p + 2 = {p + 2}, got {n}")
        x = np.empty((n, p + 1))
        x[:, 0] = 1.0
        x[:, 1:] = -log_data - EULER_GAMMA
        ydep = -log_xi - EULER_GAMMA
        try:
            beta = spd_solve(x.T @ x, x.T @ ydep.T, SingularDesign)
            resid = ydep - (x @ beta).T
            values["ols"] = np.exp(beta[0])
            variances["ols"] = np.maximum((resid**2).sum(axis=1), 0.0) / (n - p - 1)
        except SingularDesign:
            if strict:
                raise
            values["ols"] = np.full(m, np.nan)
            variances["ols"] = np.full(m, np.nan)
    if {"pickands", "deheuvels"} & set(which):
        mean_xi = xi_rows.mean(axis=1)
    if "pickands" in which:
        values["pickands"] = 1.0 / mean_xi
    if "deheuvels" in which:
        recip = mean_xi - weight_rows @ (data.mean(axis=0) - 1.0)
        if strict and np.any(recip <= 0):
            raise NonPositiveEstimate("corrected reciprocal non-positive at a grid point")
        with np.errstate(divide="ignore"):
            values["deheuvels"] = np.where(recip > 0, 1.0 / recip, np.nan)
    if "ht" in which:
        scaled = data / data.mean(axis=0)
        xit = np.empty((m, n))
        for i in range(m):
            xit[i] = _xi_row(scaled, weight_rows[i])
        values["ht"] = 1.0 / xit.mean(axis=1)
    if "oracle" in which:
        if truth is None:
            raise ParameterError("the oracle estimator needs the true model values")
        values["oracle"] = truth.copy()
    return values, variances


def estimate_curve(
    sample: SampleY,
    grid: SimplexGrid,
    which: Sequence[str] = ("cfg", "ols"),
    scheme: WeightScheme = PRAGMATIC,
    model=None,
    strict: bool = True,
) -> EstimateCurve:
    """Evaluate estimators over a grid; `model` is only needed for "oracle"."""
    if grid.p != sample.p:
        raise DimensionMismatch("grid and sample dimension differ")
    weight_rows = grid.as_matrix()
    lam_rows = None
    if not isinstance(scheme, PragmaticWeights) and ({"cfg", "zwp"} & set(which)):
        lam_rows = np.array([scheme.weights_at(pt) for pt in grid])
    truth = None
    if "oracle" in which:
        if model is None:
            raise ParameterError("the oracle estimator needs a model")
        truth = np.atleast_1d(model.pickands(weight_rows))
    values, variances = _curve_table(
        sample.data, weight_rows, which, lam_rows=lam_rows, truth=truth, strict=strict
    )
    records = tuple(
        EstimateRecord(est, values[est], variances.get(est)) for est in which
    )
    return EstimateCurve(grid, records)


def _greatest_convex_minorant(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Evaluate the lower convex hull of (t_k, v_k) at each t_k."""
    order = np.argsort(t)
    ts, vs = t[order], v[order]
    hull: list[int] = []
    for i in range(len(ts)):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            cross = (ts[i1] - ts[i0]) * (vs[i] - vs[i0]) - (vs[i1] - vs[i0]) * (ts[i] - ts[i0])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    minorant = np.interp(ts, ts[hull], vs[hull])
    out = np.empty_like(v)
    out[order] = minorant
    return out


def shape_correct(curve: EstimateCurve) -> EstimateCurve:
    """Clamp values into [max_j w_j, 1]; for p = 2 take the convex minorant.

    For p >= 3 even the convex minorant would not guarantee a genuine
    dependence function, so only the clamping is applied there.
    """
    weight_rows = curve.grid.as_matrix()
    lower = weight_rows.max(axis=1)
    records = []
    for rec in curve.records:
        vals = np.clip(rec.values, lower, 1.0)
        if curve.grid.p == 2:
            finite = np.isfinite(vals)
            if finite.all():
                vals = _greatest_convex_minorant(weight_rows[:, 1], vals)
        records.append(EstimateRecord(rec.estimator, vals, rec.variances))
    return EstimateCurve(curve.grid, tuple(records), shape_corrected=True)


def curve_to_csv(curve: EstimateCurve) -> str:
    """CSV with columns w1..wp,estimator,value,variance (blank if absent)."""
    p = curve.grid.p
    lines = [",".join(f"w{j + 1}" for j in range(p)) + ",estimator,value,variance"]
    weight_rows = curve.grid.as_matrix()
    for i in range(len(curve.grid)):
        coords = ",".join(f"{c:.17g}" for c in weight_rows[i])
        for rec in sorted(curve.records, key=lambda r: r.estimator):
            var = "" if rec.variances is None else f"{rec.variances[i]:.17g}"
            lines.append(f"{coords},{rec.estimator},{rec.values[i]:.17g},{var}")
    return "\n".join(lines) + "\n"
