"""Information-symmetry audits and the polygon sweeps.

A pair of states passes the symmetry test when an optimal discriminating
measurement splits its error evenly (``p12 == p21``).  The pure-state
audit only looks at pure-effect optimizers: mixing two degenerate pure
optima can balance the errors at no cost (the hexagon does this), and
counting such mixtures would make every polygon with a mirrored optimum
pass.  ``policy="any"`` accepts a pair when some pure optimizer is
balanced, ``policy="all"`` requires all of them to be.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .discrimination import (
    DiscriminationResult,
    case1_symmetric_condition,
    case2_symmetric_condition,
    evengon_case1,
    evengon_case2,
    mesd_polytope,
    mesd_qubit,
    mesd_spekkens,
    oddgon_closed_form,
)
from .geometry import GEOM_TOL
from .models import (
    ModelError,
    ModelSpec,
    distinguishable,
    mixture,
    polygon_model,
    spekkens_model,
)

POLICIES = ("any", "all")


@dataclass(frozen=True, eq=False)
class PairVerdict:
    pair: tuple
    result: DiscriminationResult
    is_satisfied: bool
    asymmetry: float
    witness: tuple

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "pE": self.result.pE,
            "p12": self.result.p12,
            "p21": self.result.p21,
            "asymmetry": self.asymmetry,
            "satisfied": self.is_satisfied,
            "witness": [{"label": m.label, "p12": m.p12, "p21": m.p21}
                        for m in self.witness],
        }


@dataclass(frozen=True, eq=False)
class ISReport:
    model: str
    policy: str
    tolerance: float
    verdicts: tuple

    @property
    def satisfied(self) -> bool:
        return all(v.is_satisfied for v in self.verdicts)

    @property
    def max_asymmetry(self) -> float:
        return max((v.asymmetry for v in self.verdicts), default=0.0)

    def violations(self) -> tuple:
        return tuple(v for v in self.verdicts if not v.is_satisfied)

    def to_dict(self) -> dict:
        return {
            "principle": "IS",
            "model": self.model,
            "policy": self.policy,
            "tolerance": self.tolerance,
            "satisfied": self.satisfied,
            "max_asymmetry": self.max_asymmetry,
            "pairs": [v.to_dict() for v in self.verdicts],
        }


def _verdict(pair, result: DiscriminationResult, tolerance: float,
             policy: str) -> PairVerdict:
    pure = result.pure_minimizers
    if policy == "any":
        asym = min(m.asymmetry for m in pure)
        ok = asym <= tolerance
        witness = tuple(m for m in pure if m.asymmetry == asym)[:1] if ok else pure
    else:
        asym = max(m.asymmetry for m in pure)
        ok = asym <= tolerance
        witness = pure
    return PairVerdict(pair=pair, result=result, is_satisfied=ok, asymmetry=asym,
                       witness=witness)


def qubit_angle_grid(count: int = 50) -> np.ndarray:
    """``count`` equally spaced relative Bloch angles strictly inside (0, pi)."""
    return np.linspace(0.0, math.pi, count + 2)[1:-1]


def qubit_pair(angle: float, length: float = 1.0) -> tuple:
    """Two Bloch vectors of the given length, mirror images across the z axis."""
    s, c = length * math.sin(angle / 2), length * math.cos(angle / 2)
    return np.array([s, 0.0, c]), np.array([-s, 0.0, c])


def audit_is(model: ModelSpec, tolerance: float = GEOM_TOL, policy: str = "any",
             qubit_angles: int = 50) -> ISReport:
    """Audit every unordered pair of distinct pure states.

    The qubit has a continuum of pure states; discrimination depends only
    on their relative angle, so a grid of ``qubit_angles`` angles is used.
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    verdicts = []
    if model.kind == "qubit":
        for a in qubit_angle_grid(qubit_angles):
            b1, b2 = qubit_pair(a)
            res = mesd_qubit(b1, b2)
            verdicts.append(_verdict((f"angle={a:.12g}", "0"), res, tolerance, policy))
    elif model.kind == "measurement_list":
        for s1, s2 in itertools.combinations(model.pure_states, 2):
            res = mesd_spekkens(s1.label, s2.label)
            verdicts.append(_verdict((s1.label, s2.label), res, tolerance, policy))
    else:
        for w1, w2 in itertools.combinations(model.pure_states, 2):
            res = mesd_polytope(model, w1, w2)
            verdicts.append(_verdict((w1.label, w2.label), res, tolerance, policy))
    return ISReport(model=model.name, policy=policy, tolerance=tolerance,
                    verdicts=tuple(verdicts))


def audit_spekkens(tolerance: float = GEOM_TOL, policy: str = "any") -> ISReport:
    return audit_is(spekkens_model(), tolerance=tolerance, policy=policy)


# ---------------------------------------------------------------------------
# mixed-state (GIS) audit


@dataclass(frozen=True)
class GISEntry:
    """One mixed pair ``w = p w_i + (1-p) w_j``, ``w' = p w_k + (1-p) w_i``.

    ``min_error`` is the optimum over the whole effect body and
    ``best_symmetric_error`` the smallest error among measurements with
    ``p12 == p21``.  ``asymmetry`` is the smallest ``|p12 - p21|`` over
    all optimal measurements.
    """

    p: float
    pair: tuple
    min_error: float
    best_symmetric_error: float
    asymmetry: float
    satisfied: bool

    @property
    def gap(self) -> float:
        return self.best_symmetric_error - self.min_error

    def to_dict(self) -> dict:
        return {"p": self.p, "pair": list(self.pair), "min_error": self.min_error,
                "best_symmetric_error": self.best_symmetric_error,
                "asymmetry": self.asymmetry, "satisfied": self.satisfied}


@dataclass(frozen=True, eq=False)
class GISReport:
    model: str
    tolerance: float
    entries: tuple
    policy: str = "full_body"

    @property
    def satisfied(self) -> bool:
        return all(e.satisfied for e in self.entries)

    @property
    def max_asymmetry(self) -> float:
        return max((e.asymmetry for e in self.entries), default=0.0)

    @property
    def max_gap(self) -> float:
        """Largest excess error paid for insisting on balanced errors."""
        return max((max(e.gap, 0.0) for e in self.entries), default=0.0)

    def entry(self, p: float, pair: tuple) -> GISEntry:
        for e in self.entries:
            if abs(e.p - p) <= 1e-15 and tuple(e.pair) == tuple(pair):
                return e
        raise KeyError((p, pair))

    def to_dict(self) -> dict:
        return {
            "principle": "GIS",
            "model": self.model,
            "policy": self.policy,
            "tolerance": self.tolerance,
            "satisfied": self.satisfied,
            "max_asymmetry": self.max_asymmetry,
            "max_gap": self.max_gap,
            "entries": [e.to_dict() for e in self.entries],
        }


def best_symmetric_error(values: np.ndarray, signed: np.ndarray,
                         tol: float = 1e-15) -> float:
    """Smallest error over mixtures of generators with zero signed asymmetry.

    Both quantities are affine in the mixing weights, so the constrained
    optimum is a generator with ``signed == 0`` or the balanced point of a
    segment between two generators of opposite sign.
    """
    best = math.inf
    zero = np.abs(signed) <= tol
    if np.any(zero):
        best = float(values[zero].min())
    neg, pos = np.flatnonzero(signed < -tol), np.flatnonzero(signed > tol)
    for i in neg:
        for j in pos:
            t = signed[i] / (signed[i] - signed[j])
            best = min(best, float((1 - t) * values[i] + t * values[j]))
    return best


def gis_entry(model: ModelSpec, i, j, k, p: float, tolerance: float = GEOM_TOL) -> GISEntry:
    """Evaluate one mixed pair of a polytope model over its full effect body."""
    wi, wj, wk = model.state(i), model.state(j), model.state(k)
    w = mixture([wi, wj], [p, 1 - p])
    wp = mixture([wk, wi], [p, 1 - p])
    gens = np.array([g.coords for g in model.effects])
    unit = model.unit_effect
    # each generator read as the "w" outcome; the body is closed under u - g
    p12 = gens @ wp.coords
    p21 = (unit - gens) @ w.coords
    values = 0.5 * (p12 + p21)
    signed = p12 - p21
    best = float(values.min())
    sym = best_symmetric_error(values, signed)
    opt = signed[values <= best + tolerance]
    # the optimal face is the hull of the optimal generators
    asym = 0.0 if opt.min() <= 0.0 <= opt.max() else float(np.abs(opt).min())
    return GISEntry(p=p, pair=(wi.label, wj.label, wk.label), min_error=best,
                    best_symmetric_error=sym, asymmetry=asym,
                    satisfied=sym <= best + tolerance)


def _check_grid(p_grid) -> list:
    grid = [float(p) for p in p_grid]
    if not grid:
        raise ValueError("empty p grid")
    for p in grid:
        if not 0.0 < p < 1.0:
            raise ValueError(f"grid values must lie in (0, 1), got {p}")
    return grid


def audit_gis(model: ModelSpec, p_grid, tolerance: float = GEOM_TOL,
              qubit_angles: int = 50) -> GISReport:
    """Audit mixed pairs of identical minimal ignorance.

    Polytope models use every ordered triple ``(i, j, k)`` of distinct pure
    states with ``(i, j)`` and ``(k, i)`` perfectly distinguishable.  For
    the qubit, a mixture of two orthogonal pure states with weight ``p``
    has Bloch length ``|2p - 1|``, so pairs of that length are sampled over
    relative angles; there the optimum is the Helstrom measurement and the
    entry records its error balance.
    """
    grid = _check_grid(p_grid)
    entries = []
    if model.kind == "qubit":
        for p in grid:
            length = abs(2 * p - 1)
            for a in qubit_angle_grid(qubit_angles):
                b1, b2 = qubit_pair(a, length)
                res = mesd_qubit(b1, b2)
                # the Helstrom optimum is unique up to its reading, so it
                # is the only candidate for a balanced optimum
                sym = res.pE if res.asymmetry <= tolerance else math.inf
                entries.append(GISEntry(p=p, pair=(f"angle={a:.12g}", f"len={length:.12g}"),
                                        min_error=res.pE, best_symmetric_error=sym,
                                        asymmetry=res.asymmetry,
                                        satisfied=res.asymmetry <= tolerance))
        return GISReport(model=model.name, tolerance=tolerance, entries=tuple(entries),
                         policy="helstrom")
    if model.kind != "polytope":
        raise ModelError(f"GIS audit needs a polytope or qubit model, got {model.kind}")
    labels = [w.label for w in model.pure_states]
    dist = {}
    for a, b in itertools.permutations(labels, 2):
        dist[a, b] = distinguishable(model, [model.state(a), model.state(b)])
    triples = [(i, j, k) for i, j, k in itertools.permutations(labels, 3)
               if dist[i, j] and dist[k, i]]
    if not triples:
        raise ModelError(f"{model.name} has no minimal-ignorance pairs to audit")
    for p in grid:
        for i, j, k in triples:
            entries.append(gis_entry(model, i, j, k, p, tolerance))
    return GISReport(model=model.name, tolerance=tolerance, entries=tuple(entries))


# ---------------------------------------------------------------------------
# polygon sweeps


@dataclass(frozen=True)
class SweepRow:
    m: int
    n: int
    p: float
    p_bar: float
    abs_diff: float
    matches_direct: bool = True


@dataclass(frozen=True)
class Case1Row:
    m: int
    l: int
    n: int
    p: float
    p_bar: float
    abs_diff: float
    matches_direct: bool = True
    symmetric_condition: bool = False


@dataclass(frozen=True)
class Case2Row:
    m: int
    l: int
    n: int
    pE: float
    min_pure_asymmetry: float
    discrepancies: tuple = field(default=())
    symmetric_condition: bool = False


def _unordered_match(pair, result: DiscriminationResult, tol: float) -> bool:
    return any(abs(pair[0] - q[0]) <= tol and abs(pair[1] - q[1]) <= tol
               for q in (m.error_pair for m in result.pure_minimizers))


def sweep_odd(m_min: int = 2, m_max: int = 50, tol: float = GEOM_TOL) -> list:
    """Closed-form error pairs for the ``(2m+1)``-gons, each checked by enumeration."""
    if m_min < 2 or m_max < m_min:
        raise ValueError(f"need 2 <= m_min <= m_max, got {m_min}..{m_max}")
    rows = []
    for m in range(m_min, m_max + 1):
        cf = oddgon_closed_form(2 * m + 1)
        model = polygon_model(cf.n)
        res = mesd_polytope(model, model.state(0), model.state(1))
        ok = abs(res.pE - cf.pE) <= tol and _unordered_match(cf.error_pair, res, tol)
        rows.append(SweepRow(m=m, n=cf.n, p=cf.p, p_bar=cf.p_bar,
                             abs_diff=abs(cf.p - cf.p_bar), matches_direct=ok))
    return rows


def sweep_even_case1(m_max: int = 10, m_min: int = 2, tol: float = GEOM_TOL) -> list:
    if m_min < 2 or m_max < m_min:
        raise ValueError(f"need 2 <= m_min <= m_max, got {m_min}..{m_max}")
    rows = []
    for m in range(m_min, m_max + 1):
        model = polygon_model(4 * m)
        for l in range(1, m):
            cf = evengon_case1(m, l)
            res = mesd_polytope(model, model.state(0), model.state(2 * l))
            ok = abs(res.pE - cf.pE) <= tol and _unordered_match(cf.best.error_pair, res, tol)
            rows.append(Case1Row(m=m, l=l, n=cf.n, p=cf.p, p_bar=cf.p_bar,
                                 abs_diff=abs(cf.p - cf.p_bar), matches_direct=ok,
                                 symmetric_condition=case1_symmetric_condition(m, l)))
    return rows


def sweep_even_case2(m_max: int = 10, m_min: int = 1, tol: float = GEOM_TOL) -> list:
    if m_min < 1 or m_max < m_min:
        raise ValueError(f"need 1 <= m_min <= m_max, got {m_min}..{m_max}")
    rows = []
    for m in range(m_min, m_max + 1):
        for l in range(1, m + 1):
            c2 = evengon_case2(m, l, tol=tol)
            rows.append(Case2Row(m=m, l=l, n=c2.n, pE=c2.pE,
                                 min_pure_asymmetry=c2.min_pure_asymmetry,
                                 discrepancies=c2.discrepancies,
                                 symmetric_condition=case2_symmetric_condition(m, l)))
    return rows


def is_strictly_decreasing(values) -> bool:
    values = list(values)
    return all(b < a for a, b in zip(values, values[1:]))
