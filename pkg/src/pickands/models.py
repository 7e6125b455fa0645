"""Parametric Pickands dependence functions of logistic type.

The dependence function A maps the unit simplex into [max(w), 1]; the stable
tail dependence function is its degree-1 homogeneous extension
ell(y) = |y| * A(y / |y|). Both are evaluated here for the symmetric and
asymmetric trivariate logistic families, the independence model, and
tabulated functions used to score estimator output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ParameterError, ZeroVector
from .simplex import SimplexGrid


def _as_weight_array(w, p: int) -> np.ndarray:
    arr = np.asarray(getattr(w, "weights", w), dtype=float)
    if arr.shape[-1] != p:
        raise DimensionMismatch(f"expected last axis {p}, got shape {arr.shape}")
    return arr


def _power_sum_root(t: np.ndarray, r: float) -> np.ndarray:
    """(sum_j t_j^r)^(1/r) along the last axis, factored by the maximum.

    Factoring keeps large r stable and makes the value exact when a single
    coordinate carries all the mass.
    """
    m = np.max(t, axis=-1)
    out = np.zeros_like(m)
    pos = m > 0
    if np.any(pos):
        scaled = t[pos] / m[pos][..., None]
        out[pos] = m[pos] * np.sum(scaled**r, axis=-1) ** (1.0 / r)
    return out


class DependenceModel:
    """Base class: immutable model with pure evaluation methods."""

    p: int
    tag: str

    def pickands(self, w) -> float | np.ndarray:
        """Dependence function A at simplex point(s) w, shape (..., p)."""
        arr = _as_weight_array(w, self.p)
        out = self._pickands_array(np.atleast_2d(arr))
        return float(out[0]) if arr.ndim == 1 else out.reshape(arr.shape[:-1])

    def stable_tail(self, y) -> float | np.ndarray:
        """ell(y) = |y| * A(y / |y|) for non-negative, non-zero y."""
        arr = np.asarray(y, dtype=float)
        if arr.shape[-1] != self.p:
            raise DimensionMismatch(f"expected last axis {self.p}, got shape {arr.shape}")
        if np.any(arr < 0):
            raise ZeroVector("stable tail function requires non-negative arguments")
        flat = np.atleast_2d(arr)
        norms = flat.sum(axis=-1)
        if np.any(norms <= 0):
            raise ZeroVector("stable tail function undefined at the origin")
        vals = norms * self._pickands_array(flat / norms[..., None])
        return float(vals[0]) if arr.ndim == 1 else vals.reshape(arr.shape[:-1])

    def _pickands_array(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class SymmetricLogistic(DependenceModel):
    """A(w) = (sum_j w_j^r)^(1/r); r = 1 is independence, r -> inf comonotone."""

    r: float
    p: int = 3

    def __post_init__(self):
        if not self.r >= 1:
            raise ParameterError(f"symmetric logistic requires r >= 1, got {self.r}")
        if self.p < 2:
            raise ParameterError("dimension must be at least 2")

    @property
    def tag(self) -> str:
        return f"symlog(r={self.r:g},p={self.p})"

    def _pickands_array(self, w: np.ndarray) -> np.ndarray:
        return _power_sum_root(w, self.r)


@dataclass(frozen=True)
class AsymmetricLogistic(DependenceModel):
    """Trivariate asymmetric logistic with cyclic pair terms.

    A(w) = sum over the pairs (1,2), (2,3), (3,1) of
    ((theta*w_a)^r + (phi*w_b)^r)^(1/r), plus psi*(w1^r+w2^r+w3^r)^(1/r),
    plus (1 - theta - phi - psi)*(w1+w2+w3). Each coordinate's weights add
    to one, which pins unit mass on every margin.
    """

    r: float
    theta: float
    phi: float
    psi: float
    p: int = field(default=3, init=False)

    def __post_init__(self):
        if not self.r >= 1:
            raise ParameterError(f"asymmetric logistic requires r >= 1, got {self.r}")
        for name in ("theta", "phi", "psi"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {v}")
        if self.theta + self.phi + self.psi > 1.0 + 1e-12:
            raise ParameterError("theta + phi + psi must not exceed 1")

    @property
    def tag(self) -> str:
        return f"asymlog(r={self.r:g},theta={self.theta:g},phi={self.phi:g},psi={self.psi:g})"

    @property
    def singleton_mass(self) -> float:
        return 1.0 - self.theta - self.phi - self.psi

    def _pickands_array(self, w: np.ndarray) -> np.ndarray:
        th, ph = self.theta, self.phi
        total = np.zeros(w.shape[:-1])
        for a, b in ((0, 1), (1, 2), (2, 0)):
            pair = np.stack([th * w[..., a], ph * w[..., b]], axis=-1)
            total += _power_sum_root(pair, self.r)
        total += self.psi * _power_sum_root(w, self.r)
        total += self.singleton_mass * w.sum(axis=-1)
        return total


@dataclass(frozen=True)
class Independence(DependenceModel):
    """A identically one; ell(y) = sum(y)."""

    p: int = 3

    def __post_init__(self):
        if self.p < 2:
            raise ParameterError("dimension must be at least 2")

    @property
    def tag(self) -> str:
        return f"independence(p={self.p})"

    def _pickands_array(self, w: np.ndarray) -> np.ndarray:
        return np.ones(w.shape[:-1])


class TabulatedPickands(DependenceModel):
    """Dependence function given by values on a grid.

    Exists so the benchmark can score estimator output as a model. Between
    tabulated points the function is interpolated linearly in barycentric
    coordinates: 1-d interpolation along collinear grids (the benchmark's
    line grids), Delaunay-based barycentric interpolation otherwise.
    """

    def __init__(self, grid: SimplexGrid, values: Sequence[float]):
        vals = np.asarray(values, dtype=float)
        if vals.shape != (len(grid),):
            raise DimensionMismatch("need exactly one value per grid point")
        self.grid = grid
        self.values = vals
        self.p = grid.p
        self.tag = f"tabulated({len(grid)} points)"
        self._points = grid.as_matrix()
        self._interp = None

    def _pickands_array(self, w: np.ndarray) -> np.ndarray:
        flat = w.reshape(-1, self.p)
        out = np.empty(flat.shape[0])
        for i, q in enumerate(flat):
            out[i] = self._eval_one(q)
        return out.reshape(w.shape[:-1])

    def _eval_one(self, q: np.ndarray) -> float:
        dist = np.abs(self._points - q).max(axis=1)
        j = int(np.argmin(dist))
        if dist[j] <= 1e-9:
            return float(self.values[j])
        return self._interpolate(q)

    def _interpolate(self, q: np.ndarray) -> float:
        pts = self._points
        centered = pts - pts.mean(axis=0)
        # collinear tabulation: interpolate along the principal direction
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        if s.shape[0] < 2 or s[1] <= 1e-10 * max(s[0], 1.0):
            axis = vt[0]
            ts = pts @ axis
            order = np.argsort(ts)
            tq = float(q @ axis)
            if tq < ts[order[0]] - 1e-9 or tq > ts[order[-1]] + 1e-9:
                raise ParameterError("query point outside the tabulated range")
            return float(np.interp(tq, ts[order], self.values[order]))
        from scipy.interpolate import LinearNDInterpolator

        if self._interp is None:
            self._interp = LinearNDInterpolator(pts[:, :-1], self.values)
        val = self._interp(q[:-1]).item()
        if np.isnan(val):
            raise ParameterError("query point outside the tabulated hull")
        return val


@dataclass(frozen=True)
class ValidityViolation:
    kind: str  # "upper", "lower" or "convexity"
    point: tuple[float, ...]
    value: float
    limit: float


@dataclass(frozen=True)
class ValidityReport:
    bound_violations: tuple[ValidityViolation, ...]
    convexity_violations: tuple[ValidityViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.bound_violations and not self.convexity_violations

    def summary(self) -> str:
        if self.ok:
            return "no violations"
        return (
            f"{len(self.bound_violations)} bound violation(s), "
            f"{len(self.convexity_violations)} midpoint-convexity violation(s)"
        )


def check_pointwise_validity(
    model: DependenceModel,
    grid: SimplexGrid,
    *,
    bound_tol: float = 1e-12,
    convexity_tol: float = 1e-10,
) -> ValidityReport:
    """Diagnostic check of max(w) <= A(w) <= 1 and midpoint convexity on a grid.

    This samples midpoints of grid pairs; it is not a convexity certificate.
    """
    if grid.p != model.p:
        raise DimensionMismatch("grid and model dimension differ")
    pts = grid.as_matrix()
    vals = np.atleast_1d(model.pickands(pts))
    bounds = []
    for q, a in zip(pts, vals):
        lo = float(q.max())
        if a > 1.0 + bound_tol:
            bounds.append(ValidityViolation("upper", tuple(q), float(a), 1.0))
        if a < lo - bound_tol:
            bounds.append(ValidityViolation("lower", tuple(q), float(a), lo))
    convexity = []
    m = len(pts)
    iu, ju = np.triu_indices(m, k=1)
    if iu.size:
        mids = (pts[iu] + pts[ju]) / 2.0
        mids /= mids.sum(axis=1, keepdims=True)
        mid_vals = np.atleast_1d(model.pickands(mids))
        chords = (vals[iu] + vals[ju]) / 2.0
        bad = mid_vals > chords + convexity_tol
        for k in np.nonzero(bad)[0]:
            convexity.append(
                ValidityViolation("convexity", tuple(mids[k]), float(mid_vals[k]), float(chords[k]))
            )
    return ValidityReport(tuple(bounds), tuple(convexity))


def model_from_dict(spec: dict) -> DependenceModel:
    """Build a model from the JSON object used by the CLI and the service."""
    family = spec.get("family")
    if family in ("symlog", "asymlog") and spec.get("r") is None:
        raise ParameterError(f"family {family!r} requires the parameter r")
    if family == "symlog":
        return SymmetricLogistic(r=float(spec["r"]), p=int(spec.get("p", 3)))
    if family == "asymlog":
        return AsymmetricLogistic(
            r=float(spec["r"]),
            theta=float(spec.get("theta", 0.0)),
            phi=float(spec.get("phi", 0.0)),
            psi=float(spec.get("psi", 0.0)),
        )
    if family == "independence":
        return Independence(p=int(spec.get("p", 3)))
    raise ParameterError(f"unknown model family: {family!r}")


def model_to_dict(model: DependenceModel) -> dict:
    if isinstance(model, SymmetricLogistic):
        return {"family": "symlog", "r": model.r, "p": model.p}
    if isinstance(model, AsymmetricLogistic):
        return {
            "family": "asymlog",
            "r": model.r,
            "theta": model.theta,
            "phi": model.phi,
            "psi": model.psi,
        }
    if isinstance(model, Independence):
        return {"family": "independence", "p": model.p}
    raise ParameterError(f"model {model.tag} has no JSON form")
