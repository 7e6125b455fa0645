"""Exact simulation of extreme-value samples with unit-exponential margins.

Logistic-type max-stable vectors are built from positive stable variables
(Chambers-Mallows-Stuck transform) mixed with independent exponentials; the
asymmetric family is a max-mixture over the five coordinate subsets implied
by its dependence function. Observations are returned on exponential scale,
Y = 1/Z for unit-Frechet Z, which is all the estimators consume.

Determinism: every draw is a pure function of an (seed, stream_id) pair via
numpy's Philox generator, so replications can be produced independently and
in parallel with reproducible output.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonPositiveInput, ParameterError
from .models import (
    AsymmetricLogistic,
    DependenceModel,
    Independence,
    SymmetricLogistic,
)

#: Frechet-scale values are clamped to this range so exponential-scale
#: observations stay strictly positive and finite.
FRECHET_MIN = 1e-300
FRECHET_MAX = 1e300


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream keyed by (seed, stream_id)."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream_id < 0:
            raise ParameterError("seed and stream_id must be non-negative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class SampleY:
    """An n x p sample with unit-exponential margins and provenance."""

    data: np.ndarray
    model_tag: str
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if self.data.ndim != 2:
            raise NonPositiveInput("sample data must be a 2-d array")
        if not np.all(np.isfinite(self.data)) or np.any(self.data <= 0):
            raise NonPositiveInput("sample entries must be strictly positive and finite")
        self.data.setflags(write=False)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]


def _open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1); exact zeros are redrawn."""
    u = rng.random(size)
    while True:
        zero = u == 0.0
        if not zero.any():
            return u
        u[zero] = rng.random(int(zero.sum()))


def _positive_exponential(rng: np.random.Generator, size) -> np.ndarray:
    e = rng.standard_exponential(size)
    while True:
        zero = e == 0.0
        if not zero.any():
            return e
        e[zero] = rng.standard_exponential(int(zero.sum()))


def sample_positive_stable(alpha: float, u, e):
    """Positive stable variate with Laplace transform exp(-t^alpha).

    Deterministic Chambers-Mallows-Stuck transform of a uniform u in (0, 1)
    and a unit exponential e:

        a(u) = sin((1-alpha) pi u) * sin(alpha pi u)^(alpha/(1-alpha))
               / sin(pi u)^(1/(1-alpha)),
        S    = (a(u) / e)^((1-alpha)/alpha).

    For alpha = 1 the distribution degenerates to the constant 1.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    u_arr = np.asarray(u, dtype=float)
    e_arr = np.asarray(e, dtype=float)
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise DomainError("u must lie strictly inside (0, 1)")
    if np.any(e_arr <= 0.0):
        raise DomainError("e must be strictly positive")
    if alpha == 1.0:
        out = np.ones(np.broadcast(u_arr, e_arr).shape)
        return float(out) if out.ndim == 0 else out
    a = (
        np.sin((1.0 - alpha) * np.pi * u_arr)
        * np.sin(alpha * np.pi * u_arr) ** (alpha / (1.0 - alpha))
        / np.sin(np.pi * u_arr) ** (1.0 / (1.0 - alpha))
    )
    s = (a / e_arr) ** ((1.0 - alpha) / alpha)
    return float(s) if s.ndim == 0 else s


def symlog_frechet_transform(s, e, r: float) -> np.ndarray:
    """Z_j = (S / E_j)^(1/r): unit-Frechet vector given the mixing variable.

    With S positive stable of index 1/r and E_j iid unit exponentials the
    joint law is exp(-(sum_j z_j^(-r))^(1/r)).
    """
    s_arr = np.asarray(s, dtype=float)
    e_arr = np.asarray(e, dtype=float)
    z = (s_arr[..., None] / e_arr) ** (1.0 / r)
    return np.clip(z, FRECHET_MIN, FRECHET_MAX)


def sample_symlog_frechet(r: float, p: int, rng: np.random.Generator, size: int | None = None):
    """Draw unit-Frechet vectors from the symmetric logistic model.

    Returns shape (p,) when ``size`` is None, else (size, p). Draw order is
    fixed (stable uniform, stable exponential, then the n x p exponentials)
    so output is reproducible for a given generator state.
    """
    if not r >= 1:
        raise ParameterError(f"symmetric logistic requires r >= 1, got {r}")
    if p < 1:
        raise ParameterError("dimension must be positive")
    n = 1 if size is None else int(size)
    u = _open_uniform(rng, n)
    e0 = _positive_exponential(rng, n)
    s = sample_positive_stable(1.0 / r, u, e0)
    e = _positive_exponential(rng, (n, p))
    z = symlog_frechet_transform(np.asarray(s), e, r)
    return z[0] if size is None else z


# The asymmetric logistic dependence function decomposes into per-subset
# symmetric-logistic terms; max-mixing independent max-stable vectors over
# those subsets adds their stable tail functions.  Pair components carry
# (theta, phi) in cyclic order, the full set carries psi on each coordinate,
# and singletons absorb the remaining mass.
_PAIRS = ((0, 1), (1, 2), (2, 0))


def sample_asymlog_frechet(
    r: float,
    theta: float,
    phi: float,
    psi: float,
    rng: np.random.Generator,
    size: int | None = None,
):
    """Draw unit-Frechet vectors from the trivariate asymmetric logistic model."""
    model = AsymmetricLogistic(r=r, theta=theta, phi=phi, psi=psi)  # validates parameters
    n = 1 if size is None else int(size)
    z = np.zeros((n, 3))
    if theta > 0.0 or phi > 0.0:
        for a, b in _PAIRS:
            zp = sample_symlog_frechet(r, 2, rng, size=n)
            np.maximum(z[:, a], theta * zp[:, 0], out=z[:, a])
            np.maximum(z[:, b], phi * zp[:, 1], out=z[:, b])
    if psi > 0.0:
        zf = sample_symlog_frechet(r, 3, rng, size=n)
        np.maximum(z, psi * zf, out=z)
    mass = model.singleton_mass
    if mass > 0.0:
        e = _positive_exponential(rng, (n, 3))
        np.maximum(z, mass / e, out=z)
    z = np.clip(z, FRECHET_MIN, FRECHET_MAX)
    return z[0] if size is None else z


def to_exponential_margins(z) -> np.ndarray:
    """Map Frechet-scale values to exponential scale, Y = 1/Z.

    Values are clamped so the result is strictly positive and finite.
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z_arr) & ~np.isposinf(z_arr)) or np.any(z_arr <= 0):
        raise NonPositiveInput("Frechet-scale values must be strictly positive")
    return 1.0 / np.clip(z_arr, FRECHET_MIN, FRECHET_MAX)


def draw_sample(model: DependenceModel, n: int, seed: int, stream_id: int = 0) -> SampleY:
    """n iid rows from the model, bit-reproducible given (model, n, seed, stream)."""
    if n < 1:
        raise ParameterError("sample size must be at least 1")
    rng = RngStream(seed, stream_id).generator()
    if isinstance(model, SymmetricLogistic):
        z = sample_symlog_frechet(model.r, model.p, rng, size=n)
    elif isinstance(model, AsymmetricLogistic):
        z = sample_asymlog_frechet(model.r, model.theta, model.phi, model.psi, rng, size=n)
    elif isinstance(model, Independence):
        z = sample_symlog_frechet(1.0, model.p, rng, size=n)
    else:
        raise ParameterError(f"cannot sample from model {model.tag}")
    return SampleY(to_exponential_margins(z), model.tag, seed, stream_id)


def sample_to_csv(sample: SampleY) -> str:
    """CSV dump with header y1,...,yp at full double precision."""
    buf = io.StringIO()
    buf.write(",".join(f"y{j + 1}" for j in range(sample.p)) + "\n")
    for row in sample.data:
        buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return buf.getvalue()


def sample_from_csv(text: str, model_tag: str = "csv", seed: int = 0) -> SampleY:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise NonPositiveInput("sample CSV needs a header and at least one row")
    header = lines[0].split(",")
    if not all(h.strip().startswith("y") for h in header):
        raise NonPositiveInput(f"unexpected sample CSV header: {lines[0]!r}")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return SampleY(data, model_tag, seed)
