"""Vector-space substrate for finite-dimensional probabilistic models.

States and effects are real vectors in a common embedding space and the
outcome probability is the Euclidean pairing ``inner(e, w)``.  The unit
effect ``u`` singles out the normalization direction; every vector splits
as ``v = c*u + v_hat`` with ``v_hat`` orthogonal to ``u``.

Validity of an effect only needs to be checked on pure states: the pairing
is linear, every state is a convex combination of pure states, so the
extreme values of ``inner(e, .)`` over the state set are attained on pure
states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

#: Tolerance for identities that are pure floating-point arithmetic.
ARITH_TOL = 1e-12
#: Tolerance for geometric identities built from trigonometric coordinates.
GEOM_TOL = 1e-9


class DimensionError(ValueError):
    """Raised when two vectors of different dimension are paired."""


class UnsupportedModelError(ValueError):
    """Raised when an operation does not apply to a model kind."""


def as_vector(v) -> np.ndarray:
    """Return ``v`` as a read-only float array, checking shape and finiteness."""
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.size < 2:
        raise DimensionError(f"vectors need dimension >= 2, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    arr.setflags(write=False)
    return arr


def _coords(v) -> np.ndarray:
    return v.coords if hasattr(v, "coords") else as_vector(v)


@dataclass(frozen=True, eq=False)
class StateVec:
    """A normalized state: coordinates plus an optional label."""

    coords: np.ndarray
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", as_vector(self.coords))

    @property
    def dim(self) -> int:
        return self.coords.size


@dataclass(frozen=True, eq=False)
class EffectVec:
    """A linear functional on states.

    ``pure`` marks effects lying on an extreme ray of the effect cone.
    ``angle`` is the hat-plane angle for polygon effects (``None`` otherwise).
    """

    coords: np.ndarray
    label: str | None = None
    is_complement: bool = False
    pure: bool = False
    angle: float | None = None
    weights: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", as_vector(self.coords))

    @property
    def dim(self) -> int:
        return self.coords.size

    def complement(self, unit) -> "EffectVec":
        label = None
        if self.label is not None:
            label = self.label[1:] if self.label.startswith("~") else "~" + self.label
        return EffectVec(_coords(unit) - self.coords, label=label,
                         is_complement=not self.is_complement)


@dataclass(frozen=True, eq=False)
class HatDecomposition:
    unit_component: float
    hat_part: np.ndarray

    def recompose(self, unit) -> np.ndarray:
        return self.unit_component * _coords(unit) + self.hat_part


class EffectClass(str, enum.Enum):
    RAY_EXTREMAL = "ray_extremal"
    EXTREMAL_NOT_RAY = "extremal_not_ray"
    BOUNDARY_MIXED = "boundary_mixed"
    INTERIOR = "interior"
    INVALID = "invalid"


def inner(a, b) -> float:
    """Euclidean pairing of two vectors (states, effects or raw arrays)."""
    x, y = _coords(a), _coords(b)
    if x.size != y.size:
        raise DimensionError(f"dimension mismatch: {x.size} != {y.size}")
    return float(x @ y)


def hat_decompose(v, unit) -> HatDecomposition:
    """Split ``v`` into its component along ``unit`` and an orthogonal hat part."""
    x, u = _coords(v), _coords(unit)
    if x.size != u.size:
        raise DimensionError(f"dimension mismatch: {x.size} != {u.size}")
    uu = float(u @ u)
    if uu == 0.0:
        raise ValueError("unit vector must be nonzero")
    c = float(x @ u) / uu
    hat = x - c * u
    hat.setflags(write=False)
    return HatDecomposition(c, hat)


def probability(e, w, tol: float = ARITH_TOL) -> float:
    """Probability that effect ``e`` clicks on state ``w``.

    Values are returned unclamped; anything outside ``[-tol, 1 + tol]``
    means the pair is not a valid effect/state pair and is rejected.
    """
    p = inner(e, w)
    if p < -tol or p > 1.0 + tol:
        raise ValueError(f"invalid effect/state pair: p = {p!r}")
    return p


def clamp_probability(p: float) -> float:
    return min(1.0, max(0.0, p))


def scale_to_plane(e, unit) -> EffectVec:
    """Rescale ``e`` so its unit component is exactly one."""
    dec = hat_decompose(e, unit)
    if dec.unit_component <= 0.0:
        raise ValueError("effect has no positive unit component; cannot reach the plane")
    scaled = _coords(e) / dec.unit_component
    # pin the unit coordinate to 1 exactly; otherwise a rounding ulp survives
    u = _coords(unit)
    scaled = scaled - (float(scaled @ u) / float(u @ u) - 1.0) * u
    label = getattr(e, "label", None)
    return EffectVec(scaled, label=label)


def effect_weight(e, unit) -> float:
    """The unit component of ``e``, i.e. the factor with ``e = weight * scaled``."""
    return hat_decompose(e, unit).unit_component


@dataclass(frozen=True)
class EffectValidity:
    """Verdict of :func:`validate_effect`; truthy iff valid."""

    valid: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.valid


def validate_effect(model, e, tol: float = ARITH_TOL) -> EffectValidity:
    """Check ``0 <= p(e|w) <= 1`` on every pure state of ``model``.

    Qubit models have no finite pure-state list; there an effect
    ``(alpha, m)`` is valid iff ``0 <= alpha - |m|`` and ``alpha + |m| <= 1``.
    """
    x = _coords(e)
    if x.size != model.dim:
        raise DimensionError(f"dimension mismatch: {x.size} != {model.dim}")
    if model.kind == "qubit":
        alpha, m = x[-1], float(np.linalg.norm(x[:-1]))
        bad = []
        if alpha - m < -tol:
            bad.append(("min", alpha - m))
        if alpha + m > 1.0 + tol:
            bad.append(("max", alpha + m))
        return EffectValidity(not bad, tuple(bad))
    bad = []
    for w in model.pure_states:
        p = inner(x, w)
        if p < -tol or p > 1.0 + tol:
            bad.append((w.label, p))
    return EffectValidity(not bad, tuple(bad))


def _vertex_generators(gens: np.ndarray, tol: float) -> list[int]:
    """Indices of generators that are not convex combinations of the others."""
    out = []
    for i in range(len(gens)):
        others = np.delete(gens, i, axis=0)
        if not _in_hull(gens[i], others, tol)[0]:
            out.append(i)
    return out


def _in_hull(x: np.ndarray, gens: np.ndarray, tol: float) -> tuple[bool, float]:
    """Test ``x`` in conv(gens) and return the best achievable minimum weight.

    Solves ``max t`` s.t. ``sum w = 1``, ``gens.T @ w = x``, ``w >= t``.
    A positive optimum means ``x`` is a strictly positive combination of all
    generators, i.e. an interior point of the hull.
    """
    k = len(gens)
    if k == 0:
        return False, 0.0
    # variables: w (k), t (free); minimize -t
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_eq = np.zeros((x.size + 1, k + 1))
    a_eq[: x.size, :k] = gens.T
    a_eq[x.size, :k] = 1.0
    b_eq = np.concatenate([x, [1.0]])
    # t - w_i <= 0
    a_ub = np.hstack([-np.eye(k), np.ones((k, 1))])
    b_ub = np.zeros(k)
    bounds = [(0, None)] * k + [(None, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                  method="highs")
    if res.status != 0:
        return False, 0.0
    # re-check equality residual; HiGHS tolerances are looser than ours
    w = res.x[:k]
    if np.max(np.abs(gens.T @ w - x)) > max(tol, 1e-9):
        return False, 0.0
    return True, float(res.x[-1])


def classify_effect(model, e, tol: float = GEOM_TOL) -> EffectClass:
    """Place ``e`` in the extremal structure of the model's effect body.

    The effect body is the convex hull of ``model.effects``.  Ray-extremal
    effects point along a pure generator; other hull vertices (``0``, ``u``
    and, for odd polygons, the complements) are extremal but off every
    extreme ray; the rest is split into boundary and interior points.
    """
    if model.kind != "polytope":
        raise UnsupportedModelError(
            f"effect classification needs a finite generator list (kind={model.kind})")
    x = _coords(e)
    if not validate_effect(model, x):
        return EffectClass.INVALID
    unit = model.unit_effect
    gens = np.array([g.coords for g in model.effects])
    if hat_decompose(x, unit).unit_component > 0:
        scaled = scale_to_plane(x, unit).coords
        for g in model.effects:
            if g.pure and np.allclose(scaled, scale_to_plane(g, unit).coords, atol=tol):
                return EffectClass.RAY_EXTREMAL
    uniq = _unique_rows(gens, tol)
    for i in _vertex_generators(uniq, tol):
        if np.allclose(x, uniq[i], atol=tol):
            return EffectClass.EXTREMAL_NOT_RAY
    inside, tmin = _in_hull(x, uniq, tol)
    if not inside:
        return EffectClass.INVALID
    return EffectClass.INTERIOR if tmin > tol else EffectClass.BOUNDARY_MIXED


def _unique_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    keep: list[np.ndarray] = []
    for r in rows:
        if not any(np.allclose(r, k, atol=tol) for k in keep):
            keep.append(r)
    return np.array(keep)


def _match_point_sets(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if len(a) != len(b):
        return False
    used = np.zeros(len(b), dtype=bool)
    for p in a:
        d = np.linalg.norm(b - p, axis=1)
        d[used] = np.inf
        j = int(np.argmin(d))
        if d[j] > tol:
            return False
        used[j] = True
    return True


def check_self_duality(model, tol: float = GEOM_TOL) -> bool:
    """True iff scaled pure effects and pure states have the same hat parts.

    Both sets are pushed to the normalized plane before comparing, so
    models whose states do not sit at unit component one (e.g. simplices
    with an all-ones unit effect) are handled uniformly.
    """
    if model.kind != "polytope":
        raise UnsupportedModelError("self-duality check needs a finite model")
    unit = model.unit_effect
    states = np.array([hat_decompose(scale_to_plane(w.coords, unit), unit).hat_part
                       for w in model.pure_states])
    effects = np.array([hat_decompose(scale_to_plane(e, unit), unit).hat_part
                        for e in model.effects if e.pure])
    return _match_point_sets(_unique_rows(states, tol), _unique_rows(effects, tol), tol)
