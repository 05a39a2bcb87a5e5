"""Minimum-error discrimination and information-symmetry audits for
finite-dimensional probabilistic models."""

from .audit import (
    GISReport,
    ISReport,
    audit_gis,
    audit_is,
    audit_spekkens,
    sweep_even_case1,
    sweep_even_case2,
    sweep_odd,
)
from .discrimination import (
    DiscriminationResult,
    brute_force_oracle,
    evengon_case1,
    evengon_case2,
    helstrom,
    mesd_polytope,
    mesd_qubit,
    mesd_spekkens,
    oddgon_closed_form,
)
from .geometry import (
    EffectClass,
    EffectVec,
    StateVec,
    check_self_duality,
    classify_effect,
    hat_decompose,
    inner,
    validate_effect,
)
from .models import (
    ModelError,
    ModelSpec,
    classical_model,
    distinguishable,
    load_model,
    model_from_selector,
    polygon_model,
    qubit_model,
    spekkens_model,
    squit_model,
)

__version__ = "0.1.0"
