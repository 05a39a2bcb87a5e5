"""Minimum-error discrimination of two equiprobable states.

Conventions: a binary measurement reads its ``effect`` outcome as "state 1"
and the complementary outcome as "state 2".  With inputs ``w1, w2``::

    p12 = p(effect | w2)        # guessed 1, was 2
    p21 = p(complement | w1)    # guessed 2, was 1
    pE  = (p12 + p21) / 2

The error always carries the 1/2 prior factor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ARITH_TOL, GEOM_TOL, EffectVec, StateVec
from .models import (
    ModelError,
    ModelSpec,
    ToyEpistemicState,
    bloch_vector,
    circumradius,
    polygon_model,
    require_kind,
    toy_measurements,
    toy_probability,
    validate_state,
)
from .models import _distinct_measurement_effects, _key


@dataclass(frozen=True, eq=False)
class BinaryMeasurement:
    """A two-outcome measurement with its error pair on a given input pair.

    ``kind`` is ``"pure"`` when one outcome is a pure effect, ``"mixed"``
    for convex mixtures of generators and ``"trivial"`` for ``{0, u}``.
    """

    effect: EffectVec
    complement: EffectVec
    label: str
    kind: str
    p12: float
    p21: float
    assignment: tuple = (1, 2)

    @property
    def pE(self) -> float:
        return 0.5 * (self.p12 + self.p21)

    @property
    def asymmetry(self) -> float:
        return abs(self.p12 - self.p21)

    @property
    def signed_asymmetry(self) -> float:
        return self.p12 - self.p21

    @property
    def error_pair(self) -> tuple:
        return tuple(sorted((self.p12, self.p21)))


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    """Optimum of a binary discrimination problem.

    ``p12``/``p21`` belong to the canonical minimizer, listed first: the
    pure-effect minimizer with the exactly smallest error, earliest in
    enumeration order on ties.  When the inputs cannot be told apart at all
    the fair coin ``u/2`` is canonical instead.  ``table`` holds every
    candidate measurement that was evaluated, minimizing or not.
    """

    pE: float
    p12: float
    p21: float
    minimizers: tuple
    table: tuple = field(default=(), repr=False)

    @property
    def asymmetry(self) -> float:
        return abs(self.p12 - self.p21)

    @property
    def error_pair(self) -> tuple:
        return tuple(sorted((self.p12, self.p21)))

    @property
    def canonical(self) -> BinaryMeasurement:
        return self.minimizers[0]

    @property
    def pure_minimizers(self) -> tuple:
        return tuple(m for m in self.minimizers if m.kind == "pure")

    @property
    def mixed_minimizers(self) -> tuple:
        return tuple(m for m in self.minimizers if m.kind == "mixed")

    def to_dict(self) -> dict:
        return {
            "pE": self.pE,
            "p12": self.p12,
            "p21": self.p21,
            "asymmetry": self.asymmetry,
            "minimizers": [
                {"label": m.label, "kind": m.kind, "p12": m.p12, "p21": m.p21,
                 "guess_on_effect": m.assignment[0]}
                for m in self.minimizers
            ],
        }


def _result(candidates: list, tol: float, mixed: list | None = None,
            unit=None) -> DiscriminationResult:
    best = min(c.pE for c in candidates)
    mins = [c for c in candidates if c.pE <= best + tol]
    pure = [c for c in mins if c.kind == "pure"]
    ordered = pure + [c for c in mins if c.kind != "pure"] + list(mixed or [])
    # canonical pick by exact value so that swapping the inputs, which swaps
    # every error pair bit for bit, picks the mirrored measurement
    exact = min(c.pE for c in (pure or mins))
    tied = [c for c in (pure or mins) if c.pE == exact]
    canon = tied[0]
    if unit is not None and sum(c.effect is canon.effect for c in tied) > 1:
        # both readings of one effect are optimal, so the inputs are not
        # told apart at all; the fair coin is the symmetric choice
        half = 0.5 * np.asarray(unit)
        coin = BinaryMeasurement(EffectVec(half, label="u/2"), EffectVec(half, label="u/2"),
                                 "u/2", "mixed", 0.5, 0.5)
        if coin.pE <= best + tol:
            canon = coin
    ordered = [canon] + [c for c in ordered if c is not canon]
    return DiscriminationResult(pE=canon.pE, p12=canon.p12, p21=canon.p21,
                                minimizers=tuple(ordered), table=tuple(candidates))


def _measurement_kind(model: ModelSpec, e: EffectVec) -> str:
    u = model.unit_effect
    if np.allclose(e.coords, 0.0) or np.allclose(e.coords, u):
        return "trivial"
    if e.pure:
        return "pure"
    comp = u - e.coords
    if any(g.pure and np.allclose(g.coords, comp, atol=ARITH_TOL) for g in model.effects):
        return "pure"
    return "mixed"


def _both_assignments(e: EffectVec, unit, w1: StateVec, w2: StateVec, label: str,
                      kind: str) -> list:
    """The measurement ``{e, u-e}`` read both ways.

    Errors are taken from ``e`` alone so that swapping the inputs swaps
    ``p12``/``p21`` bit for bit.
    """
    a1, a2 = float(e.coords @ w1.coords), float(e.coords @ w2.coords)
    comp = EffectVec(unit - e.coords, label="~" + label if not label.startswith("~")
                     else label[1:])
    return [
        BinaryMeasurement(e, comp, label, kind, p12=a2, p21=1.0 - a1, assignment=(1, 2)),
        BinaryMeasurement(e, comp, label, kind, p12=1.0 - a2, p21=a1, assignment=(2, 1)),
    ]


def _guess1_effect(m: BinaryMeasurement) -> np.ndarray:
    return m.effect.coords if m.assignment[0] == 1 else m.complement.coords


def _mixed_family(pure_mins: list, unit) -> list:
    """Balanced points on segments between pure minimizers.

    Error probabilities are affine along the segment, so every point is a
    minimizer too; where the signed asymmetry changes sign the balanced
    point has ``p12 == p21``.
    """
    out = []
    for a, b in itertools.combinations(pure_mins, 2):
        ea, eb = _guess1_effect(a), _guess1_effect(b)
        if np.allclose(ea, eb):
            continue
        da, db = a.signed_asymmetry, b.signed_asymmetry
        t = da / (da - db) if da * db < 0 else 0.5
        e = (1 - t) * ea + t * eb
        p12 = (1 - t) * a.p12 + t * b.p12
        p21 = (1 - t) * a.p21 + t * b.p21
        label = f"{1 - t:.6g}*[{a.label}|{a.assignment[0]}]+{t:.6g}*[{b.label}|{b.assignment[0]}]"
        eff = EffectVec(e, label=label, weights=((a.label, 1 - t), (b.label, t)))
        out.append(BinaryMeasurement(eff, EffectVec(unit - e), label, "mixed", p12, p21))
    return out


def mesd_polytope(model: ModelSpec, w1, w2, tol: float = GEOM_TOL) -> DiscriminationResult:
    """Exact minimum-error discrimination in a polytope model.

    Enumerates every measurement ``{g, u-g}`` with ``g`` a generator of the
    effect body, under both readings.  Since the error is affine in the
    measurement effect, its minimum over the body sits at a generator; when
    several pure generators tie, the mixed measurements they span are
    reported as well.
    """
    require_kind(model, "polytope")
    w1, w2 = validate_state(model, w1), validate_state(model, w2)
    unit = model.unit_effect
    candidates = []
    for e in _distinct_measurement_effects(model):
        candidates += _both_assignments(e, unit, w1, w2, e.label,
                                        _measurement_kind(model, e))
    best = min(c.pE for c in candidates)
    pure_mins = [c for c in candidates if c.kind == "pure" and c.pE <= best + tol]
    return _result(candidates, tol, _mixed_family(pure_mins, unit), unit)


def mesd_qubit(b1, b2) -> DiscriminationResult:
    """Helstrom measurement for two equiprobable qubit states.

    The optimal effect is the projector along ``n = (b1 - b2)/|b1 - b2|``,
    giving ``pE = (1 - |b1 - b2|/2)/2``.  Identical inputs take a projector
    orthogonal to the common Bloch vector, which splits the error evenly.
    """
    b1, b2 = bloch_vector(b1), bloch_vector(b2)
    for b in (b1, b2):
        if np.linalg.norm(b) > 1.0 + ARITH_TOL:
            raise ModelError("Bloch vector outside the unit ball")
    diff = b1 - b2
    dist = float(np.linalg.norm(diff))
    if dist > 0.0:
        n = diff / dist
    else:
        n = _orthogonal_unit(b1)
    e = EffectVec(np.append(0.5 * n, 0.5), label="P+", pure=True)
    comp = EffectVec(np.append(-0.5 * n, 0.5), label="P-", pure=True)
    p21 = 0.5 - 0.5 * float(n @ b1)
    p12 = 0.5 + 0.5 * float(n @ b2)
    m = BinaryMeasurement(e, comp, "helstrom", "pure", p12=p12, p21=p21)
    return DiscriminationResult(pE=m.pE, p12=p12, p21=p21, minimizers=(m,), table=(m,))


def _orthogonal_unit(b: np.ndarray) -> np.ndarray:
    if np.linalg.norm(b) == 0.0:
        return np.array([0.0, 0.0, 1.0])
    trial = np.array([1.0, 0.0, 0.0]) if abs(b[0]) < 0.9 * np.linalg.norm(b) else \
        np.array([0.0, 1.0, 0.0])
    v = np.cross(b, trial)
    return v / np.linalg.norm(v)


def helstrom(overlap_sq: float, prior: float = 0.5) -> float:
    """Minimum error ``(1 - sqrt(1 - 4 q (1-q) |<psi|phi>|^2)) / 2`` for pure states."""
    if not 0.0 <= overlap_sq <= 1.0:
        raise ValueError(f"squared overlap must lie in [0, 1], got {overlap_sq}")
    if not 0.0 <= prior <= 1.0:
        raise ValueError(f"prior must lie in [0, 1], got {prior}")
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * prior * (1.0 - prior) * overlap_sq))


def mesd_spekkens(s1, s2, tol: float = GEOM_TOL) -> DiscriminationResult:
    """Discrimination with the toy bit's three measurements only.

    ``table`` lists all six (measurement, reading) options.
    """
    s1 = s1 if isinstance(s1, ToyEpistemicState) else ToyEpistemicState.parse(str(s1))
    s2 = s2 if isinstance(s2, ToyEpistemicState) else ToyEpistemicState.parse(str(s2))
    for s in (s1, s2):
        if not s.is_maximal:
            raise ModelError(f"{s.label} is not a maximal-knowledge state")
    candidates = []
    for meas in toy_measurements():
        a, b = meas.outcomes
        for first, second in ((a, b), (b, a)):
            e = EffectVec(np.array([1.0 if i in first else 0.0 for i in range(1, 5)]),
                          label=_pair_label(first), pure=True)
            c = EffectVec(np.array([1.0 if i in second else 0.0 for i in range(1, 5)]),
                          label=_pair_label(second), pure=True)
            candidates.append(BinaryMeasurement(
                e, c, meas.name, "pure",
                p12=toy_probability(first, s2), p21=toy_probability(second, s1),
                assignment=(1, 2) if first == a else (2, 1)))
    return _result(candidates, tol, unit=np.ones(4))


def _pair_label(pair) -> str:
    return "v".join(str(i) for i in sorted(pair))


# ---------------------------------------------------------------------------
# closed forms for regular polygons


@dataclass(frozen=True)
class OddGonClosedForm:
    n: int
    k_opt: int
    p: float
    p_bar: float

    @property
    def abs_diff(self) -> float:
        return abs(self.p - self.p_bar)

    @property
    def error_pair(self) -> tuple:
        return tuple(sorted((self.p, self.p_bar)))

    @property
    def pE(self) -> float:
        return 0.5 * (self.p + self.p_bar)


def oddgon_closed_form(n: int) -> OddGonClosedForm:
    """Error pair for neighbouring pure states of an odd polygon.

    With ``k = floor(n/4)`` and ``s = r_n^2``::

        p     = (1 + s cos(2 pi (k+1)/n)) / (1 + s)
        p_bar = s (1 - cos(2 pi k / n)) / (1 + s)
    """
    if int(n) != n or n < 3 or n % 2 == 0:
        raise ValueError(f"odd n >= 3 required, got {n}")
    n = int(n)
    k = n // 4
    s = circumradius(n) ** 2
    p = (1.0 + s * math.cos(2 * math.pi * (k + 1) / n)) / (1.0 + s)
    p_bar = s / (1.0 + s) * (1.0 - math.cos(2 * math.pi * k / n))
    return OddGonClosedForm(n=n, k_opt=k, p=p, p_bar=p_bar)


@dataclass(frozen=True)
class EvenGonPair:
    """Formula values for one candidate ``k`` of an even-polygon pair."""

    k: int
    p: float
    p_bar: float

    @property
    def total(self) -> float:
        return self.p + self.p_bar

    @property
    def abs_diff(self) -> float:
        return abs(self.p - self.p_bar)

    @property
    def error_pair(self) -> tuple:
        return tuple(sorted((self.p, self.p_bar)))


@dataclass(frozen=True)
class EvenGonCase1:
    m: int
    l: int
    n: int
    candidates: tuple
    best: EvenGonPair

    @property
    def k(self) -> int:
        return self.best.k

    @property
    def p(self) -> float:
        return self.best.p

    @property
    def p_bar(self) -> float:
        return self.best.p_bar

    @property
    def abs_diff(self) -> float:
        return self.best.abs_diff

    @property
    def pE(self) -> float:
        return 0.5 * self.best.total


def case1_symmetric_condition(m: int, l: int) -> bool:
    """Whether ``l*pi/m`` is an odd multiple of pi (needed for equal errors, n = 4m)."""
    return l % m == 0 and (l // m) % 2 == 1


def case2_symmetric_condition(m: int, l: int) -> bool:
    """Whether ``2*l*pi/(2m+1)`` is an odd multiple of pi (n = 4m+2)."""
    q = 2 * m + 1
    return (2 * l) % q == 0 and ((2 * l) // q) % 2 == 1


def evengon_case1(m: int, l: int) -> EvenGonCase1:
    """Pair ``(w_0, w_2l)`` in the ``4m``-gon.

    For ``k`` in ``{m-l, m-l+1}``::

        p     = (1 + s cos((4l + 2k + 1) pi/n)) / 2
        p_bar = (1 - s cos((2k + 1) pi/n)) / 2

    and the candidate with the smaller total error is kept (the first one on
    an exact tie).
    """
    if m < 2 or not 1 <= l <= m - 1:
        raise ValueError(f"need m >= 2 and 1 <= l <= m-1, got m={m}, l={l}")
    n = 4 * m
    s = circumradius(n) ** 2
    cands = []
    for k in (m - l, m - l + 1):
        p = 0.5 * (1.0 + s * math.cos((4 * l + 2 * k + 1) * math.pi / n))
        p_bar = 0.5 * (1.0 - s * math.cos((2 * k + 1) * math.pi / n))
        cands.append(EvenGonPair(k, p, p_bar))
    best = min(cands, key=lambda c: c.total)
    return EvenGonCase1(m=m, l=l, n=n, candidates=tuple(cands), best=best)


@dataclass(frozen=True)
class EvenGonCase2:
    """Pair ``(w_0, w_{2l-1})`` in the ``(4m+2)``-gon.

    ``printed`` evaluates the complement error with index ``(2k-1)``;
    ``corrected`` uses ``(2k+1)``, which is what direct evaluation of
    ``1 - p(e_{n-k}|w_0)`` gives.  The direct enumeration is the result of
    record; ``discrepancies`` lists each ``k`` whose printed value disagrees
    with it.
    """

    m: int
    l: int
    n: int
    printed: tuple
    corrected: tuple
    direct: DiscriminationResult
    discrepancies: tuple

    @property
    def pE(self) -> float:
        return self.direct.pE

    @property
    def min_pure_asymmetry(self) -> float:
        return min(mm.asymmetry for mm in self.direct.pure_minimizers)

    @property
    def error_pair(self) -> tuple:
        return self.direct.error_pair


def _direct_pairs(pure_minimizers) -> list:
    return [mm.error_pair for mm in pure_minimizers]


def evengon_case2(m: int, l: int, tol: float = GEOM_TOL) -> EvenGonCase2:
    if m < 1 or not 1 <= l <= m:
        raise ValueError(f"need m >= 1 and 1 <= l <= m, got m={m}, l={l}")
    n = 4 * m + 2
    s = circumradius(n) ** 2
    model = polygon_model(n)
    direct = mesd_polytope(model, model.state(0), model.state(2 * l - 1), tol=tol)
    direct_pairs = _direct_pairs(direct.pure_minimizers)
    printed, corrected, bad = [], [], []
    theta = (2 * l - 1) * 2 * math.pi / n
    for k in (m - l, m - l + 1):
        p = 0.5 * (1.0 + s * math.cos(theta + (2 * k + 1) * math.pi / n))
        pb_printed = 0.5 * (1.0 - s * math.cos((2 * k - 1) * math.pi / n))
        pb_fixed = 0.5 * (1.0 - s * math.cos((2 * k + 1) * math.pi / n))
        pr, co = EvenGonPair(k, p, pb_printed), EvenGonPair(k, p, pb_fixed)
        printed.append(pr)
        corrected.append(co)
        is_opt = abs(0.5 * co.total - direct.pE) <= tol
        if is_opt and not _pair_in(pr.error_pair, direct_pairs, tol):
            bad.append({"k": k, "printed_p_bar": pb_printed, "direct_p_bar": pb_fixed,
                        "printed_pair": pr.error_pair})
    return EvenGonCase2(m=m, l=l, n=n, printed=tuple(printed), corrected=tuple(corrected),
                        direct=direct, discrepancies=tuple(bad))


def _pair_in(pair, pairs, tol) -> bool:
    return any(abs(pair[0] - q[0]) <= tol and abs(pair[1] - q[1]) <= tol for q in pairs)


# ---------------------------------------------------------------------------
# brute-force oracle


def brute_force_oracle(model: ModelSpec, w1, w2, resolution: int = 20,
                       tol: float = GEOM_TOL, samples: int = 0,
                       seed: int = 0) -> DiscriminationResult:
    """Grid search over the effect body.

    The grid holds every point ``(1 - t) g + t h`` with ``t = j/resolution``
    for every pair of distinct generators ``g, h`` (so all vertices, edges
    and segment midpoints are covered), plus ``samples`` random interior
    points with full support.  Each point is read as the "state 1" effect
    and its errors are evaluated directly, complement included, without
    the affine shortcut used by :func:`mesd_polytope`.
    """
    require_kind(model, "polytope")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    w1, w2 = validate_state(model, w1), validate_state(model, w2)
    unit = model.unit_effect
    gens, names, pure, keys = [], [], [], set()
    for g in model.effects:
        if _key(g.coords) in keys:
            continue
        keys.add(_key(g.coords))
        gens.append(g.coords)
        names.append(g.label)
        pure.append(_measurement_kind(model, g))
    gens = np.array(gens)
    ts = np.arange(resolution + 1) / resolution
    pts, tags = [gens], [(i, i, 0.0) for i in range(len(gens))]
    for i, j in itertools.combinations(range(len(gens)), 2):
        inner_t = ts[1:-1]
        if inner_t.size:
            pts.append((1 - inner_t)[:, None] * gens[i] + inner_t[:, None] * gens[j])
            tags += [(i, j, t) for t in inner_t]
    if samples:
        rng = np.random.default_rng(seed)
        lam = rng.dirichlet(np.ones(len(gens)), size=samples)
        pts.append(lam @ gens)
        tags += [(-1, -1, 0.0)] * samples
    pts = np.vstack(pts)
    comp = unit - pts
    p12 = pts @ w2.coords
    p21 = comp @ w1.coords
    pe = 0.5 * (p12 + p21)
    best = float(pe.min())
    idx = np.flatnonzero(pe <= best + tol)
    mins, seen = [], set()
    for ix in idx:
        e = pts[ix]
        if _key(e) in seen:
            continue
        seen.add(_key(e))
        i, j, t = tags[ix]
        if i == j:
            label, kind = names[i], pure[i]
        elif i < 0:
            label, kind = "random", "mixed"
        else:
            label, kind = f"{1 - t:.6g}*{names[i]}+{t:.6g}*{names[j]}", "mixed"
        mins.append(BinaryMeasurement(EffectVec(e, label=label), EffectVec(unit - e),
                                      label, kind, float(p12[ix]), float(p21[ix])))
    pure_first = sorted(mins, key=lambda mm: mm.kind != "pure")
    c = pure_first[0]
    return DiscriminationResult(pE=c.pE, p12=c.p12, p21=c.p21, minimizers=tuple(pure_first))
