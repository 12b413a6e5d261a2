"""Events in 1+n Minkowski space, banded causal classification and the group G.

Coordinate 0 is time; coordinates 1..n are spatial.  The metric signature is
(+, -, ..., -), so ``quadratic_form(v) > 0`` means ``v`` is timelike.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Event",
    "TolerancePolicy",
    "DEFAULT_TOL",
    "CausalClass",
    "GTransform",
    "quadratic_form",
    "displacement",
    "classify",
    "classify_array",
    "apply_transform",
    "boost",
    "rotation",
    "minkowski_metric",
    "random_event",
    "random_g",
    "first_nonzero_sign",
]

MIN_SPATIAL_DIM = 1
MAX_SPATIAL_DIM = 3


@dataclass(frozen=True)
class Event:
    """A point of 1+n Minkowski space."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not MIN_SPATIAL_DIM + 1 <= len(coords) <= MAX_SPATIAL_DIM + 1:
            raise ValueError(f"events need 2 to 4 coordinates, got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def _trusted(cls, coords: tuple) -> "Event":
        """Skip validation for coordinates computed from finite floats."""
        ev = object.__new__(cls)
        object.__setattr__(ev, "coords", coords)
        return ev

    @classmethod
    def origin(cls, n: int = 3) -> "Event":
        return cls((0.0,) * (n + 1))

    @property
    def t(self) -> float:
        return self.coords[0]

    @property
    def spatial(self) -> tuple:
        return self.coords[1:]

    @property
    def n(self) -> int:
        """Number of spatial dimensions."""
        return len(self.coords) - 1

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def shifted(self, v: Sequence[float]) -> "Event":
        if len(v) != len(self.coords):
            raise ValueError("dimension mismatch")
        return Event(tuple(a + b for a, b in zip(self.coords, v)))

    def __repr__(self):
        return "Event(" + ", ".join(f"{c:g}" for c in self.coords) + ")"


EventLike = Union[Event, Sequence[float]]


def _coords(x: EventLike) -> tuple:
    return x.coords if isinstance(x, Event) else tuple(x)


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative band used to decide whether a displacement is null.

    A displacement ``v`` is treated as null when
    ``|Q(v)| <= tau_rel * max(1, |v|^2)``.
    """

    tau_rel: float = 1e-9

    def __post_init__(self):
        if not self.tau_rel > 0:
            raise ValueError("tau_rel must be positive")

    def scale(self, v: Sequence[float]) -> float:
        return max(1.0, sum(c * c for c in v))

    def band(self, v: Sequence[float]) -> float:
        return self.tau_rel * self.scale(v)


DEFAULT_TOL = TolerancePolicy()


class CausalClass(enum.Enum):
    EQUAL = "Equal"
    CHRONO_FUTURE = "ChronoFuture"
    CHRONO_PAST = "ChronoPast"
    HORISMOS_FUTURE = "HorismosFuture"
    HORISMOS_PAST = "HorismosPast"
    SPACELIKE = "Spacelike"

    def __str__(self):
        return self.value

    def reversed(self) -> "CausalClass":
        """Class of the swapped pair."""
        return _REVERSED[self]

    @property
    def is_chrono(self) -> bool:
        return self in (CausalClass.CHRONO_FUTURE, CausalClass.CHRONO_PAST)

    @property
    def is_horismos(self) -> bool:
        return self in (CausalClass.HORISMOS_FUTURE, CausalClass.HORISMOS_PAST)


_REVERSED = {
    CausalClass.EQUAL: CausalClass.EQUAL,
    CausalClass.SPACELIKE: CausalClass.SPACELIKE,
    CausalClass.CHRONO_FUTURE: CausalClass.CHRONO_PAST,
    CausalClass.CHRONO_PAST: CausalClass.CHRONO_FUTURE,
    CausalClass.HORISMOS_FUTURE: CausalClass.HORISMOS_PAST,
    CausalClass.HORISMOS_PAST: CausalClass.HORISMOS_FUTURE,
}

# Integer codes used by the vectorised classifier.
CLASS_CODES = {
    CausalClass.EQUAL: 0,
    CausalClass.CHRONO_FUTURE: 1,
    CausalClass.CHRONO_PAST: 2,
    CausalClass.HORISMOS_FUTURE: 3,
    CausalClass.HORISMOS_PAST: 4,
    CausalClass.SPACELIKE: 5,
}
CODE_CLASSES = {v: k for k, v in CLASS_CODES.items()}


def quadratic_form(v: Sequence[float]) -> float:
    """Minkowski form ``v_t^2 - sum(v_i^2)``."""
    v = _coords(v)
    return v[0] * v[0] - sum(c * c for c in v[1:])


def displacement(x: EventLike, y: EventLike) -> tuple:
    """``y - x`` as a coordinate tuple."""
    xc = x.coords if type(x) is Event else tuple(x)
    yc = y.coords if type(y) is Event else tuple(y)
    if len(xc) != len(yc):
        raise ValueError(f"dimension mismatch: {len(xc)} vs {len(yc)}")
    return tuple(b - a for a, b in zip(xc, yc))


def first_nonzero_sign(v: Sequence[float]) -> int:
    for c in v:
        if c > 0:
            return 1
        if c < 0:
            return -1
    return 0


def classify(x: EventLike, y: EventLike, tol: TolerancePolicy = DEFAULT_TOL) -> CausalClass:
    """Causal class of ``y`` as seen from ``x``.

    The zero displacement is ``EQUAL`` before any band test.  A null
    displacement with vanishing time component (only possible inside the
    band) takes its time orientation from the first nonzero coordinate, which
    keeps the classification antisymmetric under swapping arguments.
    """
    v = displacement(x, y)
    if not any(v):
        return CausalClass.EQUAL
    q = v[0] * v[0]
    n2 = q
    for c in v[1:]:
        c2 = c * c
        q -= c2
        n2 += c2
    band = tol.tau_rel * (n2 if n2 > 1.0 else 1.0)
    if q < -band:
        return CausalClass.SPACELIKE
    future = first_nonzero_sign(v) > 0
    if q > band:
        return CausalClass.CHRONO_FUTURE if future else CausalClass.CHRONO_PAST
    return CausalClass.HORISMOS_FUTURE if future else CausalClass.HORISMOS_PAST


def classify_array(x: EventLike, ys: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Vectorised :func:`classify` over the rows of ``ys``; returns class codes."""
    ys = np.asarray(ys, dtype=float)
    v = ys - np.asarray(_coords(x), dtype=float)
    sq = v * v
    q = sq[:, 0] - sq[:, 1:].sum(axis=1)
    n2 = sq.sum(axis=1)
    band = tol.tau_rel * np.maximum(1.0, n2)
    nz = v != 0
    zero = ~nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    future = v[np.arange(len(v)), first] > 0
    out = np.full(len(v), CLASS_CODES[CausalClass.SPACELIKE], dtype=np.int8)
    chrono = q > band
    null = ~chrono & (q >= -band)
    out[chrono & future] = CLASS_CODES[CausalClass.CHRONO_FUTURE]
    out[chrono & ~future] = CLASS_CODES[CausalClass.CHRONO_PAST]
    out[null & future] = CLASS_CODES[CausalClass.HORISMOS_FUTURE]
    out[null & ~future] = CLASS_CODES[CausalClass.HORISMOS_PAST]
    out[zero] = CLASS_CODES[CausalClass.EQUAL]
    return out


def minkowski_metric(n: int) -> np.ndarray:
    return np.diag([1.0] + [-1.0] * n)


@dataclass(frozen=True, eq=False)
class GTransform:
    """``x -> dilatation * (lam @ x) + translation`` with ``lam`` Lorentz."""

    lam: np.ndarray
    translation: np.ndarray
    dilatation: float = 1.0
    tol: TolerancePolicy = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        trans = np.array(self.translation, dtype=float)
        dim = lam.shape[0]
        if lam.shape != (dim, dim) or trans.shape != (dim,):
            raise ValueError("shape mismatch between matrix and translation")
        if not self.dilatation > 0:
            raise ValueError("dilatation must be positive")
        eta = minkowski_metric(dim - 1)
        err = np.max(np.abs(lam.T @ eta @ lam - eta))
        if err > self.tol.tau_rel:
            raise ValueError(f"matrix is not Lorentz (max deviation {err:.3g})")
        lam.flags.writeable = False
        trans.flags.writeable = False
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "translation", trans)
        object.__setattr__(self, "dilatation", float(self.dilatation))

    @classmethod
    def identity(cls, n: int = 3) -> "GTransform":
        return cls(np.eye(n + 1), np.zeros(n + 1))

    @property
    def n(self) -> int:
        return self.lam.shape[0] - 1

    def __call__(self, x: EventLike) -> Event:
        return apply_transform(self, x)

    def linear(self, v: Sequence[float]) -> np.ndarray:
        """Action on displacements (no translation)."""
        return self.dilatation * (self.lam @ np.asarray(v, dtype=float))

    def spatial_rotation(self) -> np.ndarray | None:
        """The spatial block of ``lam`` if ``lam`` fixes the time axis."""
        if abs(self.lam[0, 0] - 1.0) > self.tol.tau_rel or np.any(np.abs(self.lam[0, 1:]) > self.tol.tau_rel):
            return None
        return self.lam[1:, 1:]


def apply_transform(g: GTransform, x: EventLike) -> Event:
    xc = np.asarray(_coords(x), dtype=float)
    if xc.shape[0] != g.lam.shape[0]:
        raise ValueError("dimension mismatch")
    return Event(tuple(g.dilatation * (g.lam @ xc) + g.translation))


def boost(velocity: Sequence[float]) -> np.ndarray:
    """Pure boost matrix for a spatial velocity with ``|v| < 1``."""
    v = np.asarray(velocity, dtype=float)
    n = v.shape[0]
    speed2 = float(v @ v)
    if speed2 >= 1.0:
        raise ValueError("boost speed must be below 1")
    lam = np.eye(n + 1)
    if speed2 == 0.0:
        return lam
    gamma = 1.0 / math.sqrt(1.0 - speed2)
    lam[0, 0] = gamma
    lam[0, 1:] = -gamma * v
    lam[1:, 0] = -gamma * v
    lam[1:, 1:] += (gamma - 1.0) * np.outer(v, v) / speed2
    return lam


def rotation(spatial: np.ndarray) -> np.ndarray:
    """Embed an orthogonal n x n matrix as a Lorentz transformation."""
    r = np.asarray(spatial, dtype=float)
    lam = np.eye(r.shape[0] + 1)
    lam[1:, 1:] = r
    return lam


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_event(seed, n: int = 3, bound: float = 1.0) -> Event:
    """Uniform event in ``[-bound, bound]^(1+n)``; ``seed`` may be a Generator."""
    rng = _as_rng(seed)
    return Event(tuple(rng.uniform(-bound, bound, n + 1)))


def random_g(
    seed,
    n: int = 3,
    *,
    max_speed: float = 0.9,
    translation_bound: float = 10.0,
    dilatation_range: tuple = (0.5, 2.0),
    boosts: bool = True,
) -> GTransform:
    """Random element of G: rotation, boost (|v| <= max_speed), translation, dilatation."""
    rng = _as_rng(seed)
    rot = random_rotation(rng, n)
    lam = rotation(rot)
    if boosts:
        direction = rng.standard_normal(n)
        direction /= np.linalg.norm(direction)
        speed = rng.uniform(0.0, max_speed)
        lam = boost(speed * direction) @ lam
    trans = rng.uniform(-translation_bound, translation_bound, n + 1)
    dil = rng.uniform(*dilatation_range)
    return GTransform(lam, trans, dil)
