"""Points and grids on the unit simplex, plus shared mathematical constants.

Every downstream module consumes weights that were validated and renormalized
here, so none of them re-checks simplex membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidStep, NotASimplexPoint

#: Euler--Mascheroni constant, mean of the standard Gumbel distribution.
EULER_GAMMA = 0.5772156649015329

#: Variance of the standard Gumbel distribution.
GUMBEL_VARIANCE = math.pi**2 / 6

#: Tolerance for simplex membership; round-off from renormalization must not
#: reject valid points.
SUM_TOL = 1e-12

#: Condition-number threshold beyond which covariance/design matrices are
#: treated as singular (comonotone-degenerate data). Shared across the repo.
COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    """A point w of the unit simplex, stored renormalized.

    Construct via :func:`make_point`; direct construction skips validation.
    Immutable after construction and safe to share across threads.
    """

    weights: np.ndarray

    def __post_init__(self):
        self.weights.setflags(write=False)

    @property
    def p(self) -> int:
        return self.weights.shape[0]

    def is_vertex(self, j: int) -> bool:
        """True iff the weights equal the j-th standard unit vector exactly."""
        e = np.zeros(self.p)
        e[j] = 1.0
        return bool(np.array_equal(self.weights, e))

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplexPoint) and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash(self.weights.tobytes())

    def __repr__(self) -> str:
        return f"SimplexPoint({np.array2string(self.weights, separator=', ')})"


def make_point(weights: Sequence[float] | np.ndarray) -> SimplexPoint:
    """Validate, clip round-off negatives and renormalize simplex weights.

    Raises
    ------
    NotASimplexPoint
        If fewer than two weights are given, any entry is below ``-1e-12``,
        or the sum deviates from one by more than the membership tolerance.
    """
    w = np.asarray(weights, dtype=float).copy()
    if w.ndim != 1 or w.shape[0] < 2:
        raise NotASimplexPoint(f"need a 1-d vector of length >= 2, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise NotASimplexPoint("weights must be finite")
    if np.any(w < -SUM_TOL):
        raise NotASimplexPoint(f"negative weight beyond tolerance: {w.min()}")
    w[w < 0] = 0.0
    s = float(w.sum())
    if s <= 0 or abs(s - 1.0) > SUM_TOL:
        raise NotASimplexPoint(f"weights sum to {s}, not 1 within {SUM_TOL}")
    return SimplexPoint(w / s)


def vertex(p: int, j: int) -> SimplexPoint:
    """The j-th vertex e_j of the p-simplex (0-based j)."""
    if not 0 <= j < p:
        raise DimensionMismatch(f"vertex index {j} out of range for p={p}")
    e = np.zeros(p)
    e[j] = 1.0
    return SimplexPoint(e)


def centroid(p: int) -> SimplexPoint:
    return make_point(np.full(p, 1.0 / p))


@dataclass(frozen=True)
class SimplexGrid:
    """An ordered collection of distinct simplex points with a provenance tag."""

    points: tuple[SimplexPoint, ...]
    descriptor: str = "custom"

    def __post_init__(self):
        if not self.points:
            raise NotASimplexPoint("a grid needs at least one point")
        p = self.points[0].p
        if any(pt.p != p for pt in self.points):
            raise DimensionMismatch("grid points live on different simplices")
        seen = {pt.weights.tobytes() for pt in self.points}
        if len(seen) != len(self.points):
            raise NotASimplexPoint("grid points must be distinct")

    @property
    def p(self) -> int:
        return self.points[0].p

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_matrix(self) -> np.ndarray:
        """Grid weights stacked into an (m, p) array."""
        return np.array([pt.weights for pt in self.points])


def line_grid_w1_eq_w2(step: float, p: int = 3) -> SimplexGrid:
    """Grid along the line {w : w1 = w2} of the 3-simplex.

    Points are (t, t, 1 - 2t) for t = step, 2*step, ... strictly below 1/2,
    so boundary and degenerate points are excluded.
    """
    if p != 3:
        raise DimensionMismatch("the w1=w2 line grid is defined for p=3 only")
    if not (0.0 < step < 0.5):
        raise InvalidStep(f"step must lie in (0, 1/2), got {step}")
    points = []
    k = 1
    while k * step < 0.5 - SUM_TOL:
        t = k * step
        points.append(make_point([t, t, 1.0 - 2.0 * t]))
        k += 1
    if not points:
        raise InvalidStep(f"step {step} produces an empty grid")
    return SimplexGrid(tuple(points), descriptor=f"line w1=w2, step {step:g}")


def full_grid(p: int, resolution: int) -> SimplexGrid:
    """All points of the p-simplex with weights k/resolution, k integer."""
    if resolution < 1:
        raise InvalidStep("resolution must be a positive integer")
    points = [
        make_point(np.array(comp, dtype=float) / resolution)
        for comp in _compositions(resolution, p)
    ]
    return SimplexGrid(tuple(points), descriptor=f"full grid, resolution {resolution}")


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def grid_from_csv(text: str, descriptor: str = "custom") -> SimplexGrid:
    """Parse a grid from CSV with header w1,...,wp, one point per row."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise NotASimplexPoint("grid CSV needs a header and at least one row")
    header = [h.strip() for h in lines[0].split(",")]
    if not all(h.startswith("w") for h in header):
        raise NotASimplexPoint(f"unexpected grid CSV header: {lines[0]!r}")
    try:
        points = tuple(make_point([float(v) for v in ln.split(",")]) for ln in lines[1:])
    except ValueError as err:
        raise NotASimplexPoint(f"could not parse grid CSV: {err}") from err
    return SimplexGrid(points, descriptor=descriptor)
