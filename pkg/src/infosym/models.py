"""Catalog of concrete models: regular polygons, simplices, qubit, toy bit.

Every model lives in a real embedding space whose last coordinate is the
unit direction for polygons and the qubit; simplices and the toy bit use
the all-ones functional as unit effect.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from .geometry import (
    ARITH_TOL,
    GEOM_TOL,
    EffectVec,
    StateVec,
    UnsupportedModelError,
    as_vector,
    inner,
    validate_effect,
)

KINDS = ("polytope", "qubit", "measurement_list")


class ModelError(ValueError):
    """Raised for malformed models or states that do not belong to a model."""


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """An immutable description of a probabilistic model.

    ``effects`` is the generator list of the effect body for polytope
    models, the six outcome effects for the toy bit, and empty for the
    qubit (whose effects form a continuous family).  ``measurements``
    groups effect indices into the allowed binary measurements of a
    measurement-list model.
    """

    name: str
    kind: str
    dim: int
    unit_effect: np.ndarray
    pure_states: tuple = ()
    effects: tuple = ()
    measurements: tuple = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown model kind {self.kind!r}")
        object.__setattr__(self, "unit_effect", as_vector(self.unit_effect))
        object.__setattr__(self, "pure_states", tuple(self.pure_states))
        object.__setattr__(self, "effects", tuple(self.effects))

    @property
    def pure_effects(self) -> tuple:
        return tuple(e for e in self.effects if e.pure)

    def state(self, key) -> StateVec:
        """Look up a pure state by label or position."""
        for w in self.pure_states:
            if w.label == str(key):
                return w
        if isinstance(key, (int, np.integer)) and 0 <= key < len(self.pure_states):
            return self.pure_states[key]
        raise ModelError(f"model {self.name!r} has no pure state {key!r}")

    def effect(self, label: str) -> EffectVec:
        for e in self.effects:
            if e.label == label:
                return e
        raise ModelError(f"model {self.name!r} has no effect {label!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "dim": self.dim,
            "unit_effect": [float(x) for x in self.unit_effect],
            "pure_states": [[float(x) for x in w.coords] for w in self.pure_states],
            "effects": [[float(x) for x in e.coords] for e in self.effects],
            "state_labels": [w.label for w in self.pure_states],
            "effect_labels": [e.label for e in self.effects],
            "effect_pure": [bool(e.pure) for e in self.effects],
            "measurements": [list(m) for m in self.measurements],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# ---------------------------------------------------------------------------
# polygons


def circumradius(n: int) -> float:
    """Hat-plane radius of the pure states of the ``n``-gon: sqrt(sec(pi/n))."""
    return math.sqrt(1.0 / math.cos(math.pi / n))


def polygon_state_angle(n: int, i: int) -> float:
    return 2.0 * math.pi * i / n


def polygon_effect_angle(n: int, i: int) -> float:
    """Hat-plane angle of pure effect ``e_i`` (odd: 2*pi*i/n, even: (2i-1)*pi/n)."""
    if n % 2:
        return 2.0 * math.pi * i / n
    return (2 * i - 1) * math.pi / n


def polygon_effect_weight(n: int) -> float:
    """Unit component of each pure effect: 1/2 (even n) or 1/(1 + r_n^2) (odd n)."""
    if n % 2:
        return 1.0 / (1.0 + 1.0 / math.cos(math.pi / n))
    return 0.5


def polygon_model(n: int) -> ModelSpec:
    """The regular ``n``-gon model.

    Generators of the effect body are listed as ``0, u, e_0..e_{n-1},
    ~e_0..~e_{n-1}``.  For even ``n`` every complement is itself a pure
    effect (``~e_i == e_{i+n/2}``); for odd ``n`` the complements are hull
    vertices off the extreme rays.
    """
    if int(n) != n or n < 3:
        raise ModelError(f"polygon needs n >= 3, got {n}")
    n = int(n)
    r = circumradius(n)
    unit = np.array([0.0, 0.0, 1.0])
    states = [
        StateVec([r * math.cos(a), r * math.sin(a), 1.0], label=str(i))
        for i, a in ((i, polygon_state_angle(n, i)) for i in range(n))
    ]
    lam = polygon_effect_weight(n)
    pure = []
    for i in range(n):
        a = polygon_effect_angle(n, i)
        pure.append(EffectVec(lam * np.array([r * math.cos(a), r * math.sin(a), 1.0]),
                              label=f"e{i}", pure=True, angle=a))
    comps = []
    for e in pure:
        a = (e.angle + math.pi) % (2 * math.pi)
        comps.append(EffectVec(unit - e.coords, label="~" + e.label, is_complement=True,
                               pure=(n % 2 == 0), angle=a if n % 2 == 0 else None))
    effects = [EffectVec(np.zeros(3), label="0"), EffectVec(unit, label="u")] + pure + comps
    return ModelSpec(name=f"polygon:{n}", kind="polytope", dim=3, unit_effect=unit,
                     pure_states=states, effects=effects, params={"n": n, "r": r})


def squit_model() -> ModelSpec:
    """The square model; same content as ``polygon_model(4)``."""
    return polygon_model(4)


# ---------------------------------------------------------------------------
# classical simplices


def classical_model(d: int) -> ModelSpec:
    """The classical ``d``-level system, a (d-1)-simplex of states.

    The effect body is the unit hypercube, generated by the indicator
    vectors of all outcome subsets; singletons are the pure effects.
    """
    if int(d) != d or d < 2:
        raise ModelError(f"classical model needs d >= 2, got {d}")
    d = int(d)
    eye = np.eye(d)
    states = [StateVec(eye[i], label=str(i)) for i in range(d)]
    effects = []
    for size in range(d + 1):
        for subset in itertools.combinations(range(d), size):
            vec = np.zeros(d)
            vec[list(subset)] = 1.0
            if size == 0:
                label = "0"
            elif size == d:
                label = "u"
            else:
                label = "+".join(f"e{i}" for i in subset)
            effects.append(EffectVec(vec, label=label, pure=(size == 1)))
    return ModelSpec(name=f"classical:{d}", kind="polytope", dim=d,
                     unit_effect=np.ones(d), pure_states=states, effects=effects,
                     params={"d": d})


# ---------------------------------------------------------------------------
# qubit


def qubit_model() -> ModelSpec:
    """The qubit (Bloch ball).

    States are embedded as ``(bx, by, bz, 1)`` and an effect ``(alpha, m)``
    acting as ``p = alpha + m.b`` is embedded as ``(mx, my, mz, alpha)``.
    """
    return ModelSpec(name="qubit", kind="qubit", dim=4,
                     unit_effect=np.array([0.0, 0.0, 0.0, 1.0]))


def bloch_state(b, label: str | None = None) -> StateVec:
    b = np.asarray(b, dtype=float)
    if b.shape != (3,):
        raise ModelError("Bloch vectors have three components")
    if np.linalg.norm(b) > 1.0 + ARITH_TOL:
        raise ModelError(f"Bloch vector outside the unit ball: |b| = {np.linalg.norm(b)}")
    return StateVec(np.append(b, 1.0), label=label)


def bloch_vector(w) -> np.ndarray:
    coords = w.coords if hasattr(w, "coords") else np.asarray(w, dtype=float)
    if coords.size == 4:
        return np.array(coords[:3])
    if coords.size == 3:
        return np.array(coords)
    raise ModelError("not a qubit state")


def pure_qubit_state(polar: float, azimuth: float = 0.0, label: str | None = None) -> StateVec:
    b = [math.sin(polar) * math.cos(azimuth), math.sin(polar) * math.sin(azimuth),
         math.cos(polar)]
    return bloch_state(b, label=label)


def qubit_effect(alpha: float, m) -> EffectVec:
    m = np.asarray(m, dtype=float)
    if not qubit_effect_valid(alpha, m):
        raise ModelError(f"invalid qubit effect alpha={alpha}, |m|={np.linalg.norm(m)}")
    # rank-one operators lie on extreme rays of the effect cone
    pure = bool(alpha > 0 and abs(np.linalg.norm(m) - alpha) <= ARITH_TOL)
    return EffectVec(np.append(m, alpha), pure=pure)


def qubit_effect_valid(alpha: float, m, tol: float = ARITH_TOL) -> bool:
    norm = float(np.linalg.norm(m))
    return alpha - norm >= -tol and alpha + norm <= 1.0 + tol


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def density_matrix(b) -> np.ndarray:
    """2x2 density operator ``(I + b.sigma)/2``."""
    b = bloch_vector(b)
    return 0.5 * (np.eye(2, dtype=complex) + sum(x * s for x, s in zip(b, _PAULI)))


def bloch_from_ket(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    rho = np.outer(ket, ket.conj())
    return np.array([np.trace(rho @ s).real for s in _PAULI])


# ---------------------------------------------------------------------------
# Spekkens toy bit

ONTIC = (1, 2, 3, 4)


@dataclass(frozen=True)
class ToyEpistemicState:
    """Uniform ignorance over a set of ontic states (size 2 or 4)."""

    support: frozenset

    def __post_init__(self):
        s = frozenset(int(x) for x in self.support)
        if not s <= set(ONTIC) or len(s) not in (2, 4):
            raise ModelError(f"epistemic state must cover 2 or 4 ontic states, got {sorted(s)}")
        object.__setattr__(self, "support", s)

    @classmethod
    def parse(cls, text: str) -> "ToyEpistemicState":
        parts = text.replace("∨", "v").replace("|", "v").lower().split("v")
        try:
            return cls(frozenset(int(p) for p in parts))
        except ValueError as exc:
            raise ModelError(f"cannot parse epistemic state {text!r}") from exc

    @property
    def label(self) -> str:
        return "v".join(str(i) for i in sorted(self.support))

    @property
    def is_maximal(self) -> bool:
        return len(self.support) == 2

    @property
    def distribution(self) -> np.ndarray:
        return np.array([1.0 / len(self.support) if i in self.support else 0.0
                         for i in ONTIC])


@dataclass(frozen=True)
class ToyMeasurement:
    """A partition of the four ontic states into two pairs."""

    name: str
    outcomes: tuple

    def __post_init__(self):
        a, b = (frozenset(o) for o in self.outcomes)
        if len(a) != 2 or len(b) != 2 or a | b != set(ONTIC):
            raise ModelError("a toy measurement must split {1,2,3,4} into two pairs")
        object.__setattr__(self, "outcomes", (a, b))


def toy_states() -> tuple:
    """The six maximal-knowledge states in the conventional order."""
    return tuple(ToyEpistemicState(frozenset(s))
                 for s in ((1, 2), (3, 4), (1, 3), (2, 4), (2, 3), (1, 4)))


def toy_mixed_state() -> ToyEpistemicState:
    return ToyEpistemicState(frozenset(ONTIC))


def toy_measurements() -> tuple:
    return (
        ToyMeasurement("M1", ({1, 2}, {3, 4})),
        ToyMeasurement("M2", ({1, 3}, {2, 4})),
        ToyMeasurement("M3", ({1, 4}, {2, 3})),
    )


def toy_probability(outcome, state: ToyEpistemicState) -> float:
    """Mass of the state's ontic distribution on an outcome's pair."""
    dist = state.distribution
    return float(sum(dist[i - 1] for i in outcome))


def _indicator(pair) -> np.ndarray:
    return np.array([1.0 if i in pair else 0.0 for i in ONTIC])


def spekkens_model() -> ModelSpec:
    """The toy bit as a measurement-list model over ontic distributions."""
    states = [StateVec(s.distribution, label=s.label) for s in toy_states()]
    effects, groups = [], []
    for m in toy_measurements():
        idx = []
        for j, outcome in enumerate(m.outcomes):
            label = "v".join(str(i) for i in sorted(outcome))
            idx.append(len(effects))
            effects.append(EffectVec(_indicator(outcome), label=label, is_complement=j == 1,
                                     pure=True))
        groups.append(tuple(idx))
    return ModelSpec(name="spekkens", kind="measurement_list", dim=4,
                     unit_effect=np.ones(4), pure_states=states, effects=effects,
                     measurements=tuple(groups),
                     params={"measurement_names": [m.name for m in toy_measurements()]})


# ---------------------------------------------------------------------------
# mixtures and distinguishability


def mixture(states, weights, label: str | None = None) -> StateVec:
    """Unchecked convex combination of states."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < -ARITH_TOL) or abs(weights.sum() - 1.0) > ARITH_TOL:
        raise ModelError("mixture weights must be a probability vector")
    coords = sum(w * s.coords for w, s in zip(weights, states))
    return StateVec(coords, label=label)


def mix_states(model: ModelSpec, i, j, p: float, tol: float = GEOM_TOL) -> StateVec:
    """``p*w_i + (1-p)*w_j`` for a perfectly distinguishable pure pair.

    This is the constructor for minimal-ignorance states; endpoints that
    cannot be told apart perfectly are rejected (use :func:`mixture`).
    """
    if not 0.0 <= p <= 1.0:
        raise ModelError(f"mixing weight must lie in [0, 1], got {p}")
    wi, wj = model.state(i), model.state(j)
    if not distinguishable(model, [wi, wj], tol=tol):
        raise ModelError(f"states {wi.label} and {wj.label} are not perfectly distinguishable")
    return mixture([wi, wj], [p, 1.0 - p], label=f"{p:g}*{wi.label}+{1 - p:g}*{wj.label}")


def _key(v: np.ndarray, digits: int = 12) -> tuple:
    return tuple(np.round(v, digits) + 0.0)


def _distinct_measurement_effects(model: ModelSpec) -> list:
    """Generators up to complementation: one representative per ``{e, u-e}``."""
    seen: set = set()
    out = []
    u = model.unit_effect
    for e in model.effects:
        if _key(e.coords) in seen or _key(u - e.coords) in seen:
            continue
        seen.add(_key(e.coords))
        out.append(e)
    return out


def distinguishable(model: ModelSpec, states, tol: float = GEOM_TOL) -> bool:
    """Whether the states can be identified perfectly in a single shot.

    Pairs in a polytope model are decided by the generator maximizing
    ``e.(w1 - w2)`` (a value of one forces ``p(e|w1)=1`` and ``p(e|w2)=0``);
    larger sets go through a linear feasibility problem over convex weights
    on the generators.
    """
    states = list(states)
    if len(states) < 2:
        raise ModelError("distinguishability needs at least two states")
    if model.kind == "qubit":
        if len(states) > 2:
            return False
        b1, b2 = bloch_vector(states[0]), bloch_vector(states[1])
        return bool(np.linalg.norm(b1 - b2) >= 2.0 - tol)
    if model.kind == "measurement_list":
        if len(states) > 2:
            return False
        w1, w2 = states
        for a, b in model.measurements:
            ea, eb = model.effects[a], model.effects[b]
            for x, y in ((ea, eb), (eb, ea)):
                if inner(x, w1) >= 1 - tol and inner(y, w2) >= 1 - tol:
                    return True
        return False
    if len(states) == 2:
        diff = states[0].coords - states[1].coords
        return max(float(e.coords @ diff) for e in model.effects) >= 1.0 - tol
    return _distinguishable_lp(model, states, tol)


def _distinguishable_lp(model: ModelSpec, states, tol: float) -> bool:
    gens = np.array([e.coords for e in model.effects])
    k, g, dim = len(states), len(gens), model.dim
    nvar = k * g
    rows, rhs = [], []
    for j in range(k):
        row = np.zeros(nvar)
        row[j * g:(j + 1) * g] = 1.0
        rows.append(row)
        rhs.append(1.0)
    for c in range(dim):
        row = np.zeros(nvar)
        for j in range(k):
            row[j * g:(j + 1) * g] = gens[:, c]
        rows.append(row)
        rhs.append(model.unit_effect[c])
    for j in range(k):
        for i, w in enumerate(states):
            row = np.zeros(nvar)
            row[j * g:(j + 1) * g] = gens @ w.coords
            rows.append(row)
            rhs.append(1.0 if i == j else 0.0)
    res = linprog(np.zeros(nvar), A_eq=np.array(rows), b_eq=np.array(rhs),
                  bounds=[(0, None)] * nvar, method="highs")
    if res.status != 0:
        return False
    return bool(np.max(np.abs(np.array(rows) @ res.x - np.array(rhs))) <= tol)


def validate_state(model: ModelSpec, w, tol: float = ARITH_TOL) -> StateVec:
    """Return ``w`` as a StateVec after checking normalization and positivity."""
    w = w if isinstance(w, StateVec) else StateVec(w)
    if w.dim != model.dim:
        raise ModelError(f"state has dimension {w.dim}, model {model.name} has {model.dim}")
    if model.kind == "qubit":
        if abs(w.coords[-1] - 1.0) > tol or np.linalg.norm(w.coords[:3]) > 1.0 + tol:
            raise ModelError("not a qubit state")
        return w
    if abs(inner(model.unit_effect, w) - 1.0) > tol:
        raise ModelError(f"state is not normalized: u.w = {inner(model.unit_effect, w)}")
    if model.effects:
        vals = np.array([e.coords for e in model.effects]) @ w.coords
        bad = np.flatnonzero((vals < -tol) | (vals > 1.0 + tol))
        if bad.size:
            e = model.effects[bad[0]]
            raise ModelError(f"state gives p = {vals[bad[0]]} on effect {e.label}")
    return w


# ---------------------------------------------------------------------------
# selectors and files


def model_from_dict(data: dict) -> ModelSpec:
    """Build and validate a polytope model from the JSON schema.

    Pure states must be normalized and every effect must be valid on them.
    When ``effect_pure`` is absent, every generator other than ``0`` and
    ``u`` is treated as a pure-effect candidate.
    """
    try:
        kind = data.get("kind", "polytope")
        if kind != "polytope":
            raise ModelError("only polytope models can be loaded from files")
        dim = int(data["dim"])
        unit = as_vector(data["unit_effect"])
        raw_states = data["pure_states"]
        raw_effects = data["effects"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ModelError(f"malformed model document: {exc}") from exc
    if unit.size != dim:
        raise ModelError("unit_effect has the wrong dimension")
    labels = data.get("state_labels") or [str(i) for i in range(len(raw_states))]
    states = [StateVec(c, label=str(lab)) for c, lab in zip(raw_states, labels)]
    elabels = data.get("effect_labels") or [f"g{i}" for i in range(len(raw_effects))]
    pure_flags = data.get("effect_pure")
    effects = []
    for i, (c, lab) in enumerate(zip(raw_effects, elabels)):
        v = as_vector(c)
        if pure_flags is not None:
            pure = bool(pure_flags[i])
        else:
            pure = not (np.allclose(v, 0.0) or np.allclose(v, unit))
        effects.append(EffectVec(v, label=str(lab), pure=pure))
    if len(states) < 2 or not effects:
        raise ModelError("a model needs at least two pure states and one effect")
    model = ModelSpec(name=str(data.get("name", "file")), kind="polytope", dim=dim,
                      unit_effect=unit, pure_states=states, effects=effects,
                      params=dict(data.get("params", {})))
    for w in states:
        if w.dim != dim:
            raise ModelError(f"state {w.label} has the wrong dimension")
        if abs(inner(unit, w) - 1.0) > GEOM_TOL:
            raise ModelError(f"state {w.label} is not normalized")
    for e in effects:
        if e.dim != dim:
            raise ModelError(f"effect {e.label} has the wrong dimension")
        if not validate_effect(model, e, tol=GEOM_TOL):
            raise ModelError(f"effect {e.label} is not valid on the pure states")
    return model


def load_model(path) -> ModelSpec:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelError("model document must be a JSON object")
    return model_from_dict(data)


def model_from_selector(selector: str) -> ModelSpec:
    """Resolve ``polygon:n``, ``classical:d``, ``squit``, ``qubit``,
    ``spekkens`` or ``file:<path>``."""
    name, _, arg = selector.partition(":")
    name = name.strip().lower()
    if name == "file" and arg:
        return load_model(arg)
    if name in ("polygon", "classical") and arg:
        try:
            k = int(arg)
        except ValueError as exc:
            raise ModelError(f"bad size in selector {selector!r}") from exc
        return polygon_model(k) if name == "polygon" else classical_model(k)
    if not arg and name == "squit":
        return squit_model()
    if not arg and name == "qubit":
        return qubit_model()
    if not arg and name == "spekkens":
        return spekkens_model()
    raise ModelError(f"unknown model selector {selector!r}")


def require_kind(model: ModelSpec, kind: str) -> None:
    if model.kind != kind:
        raise UnsupportedModelError(f"{model.name} is a {model.kind} model, need {kind}")
