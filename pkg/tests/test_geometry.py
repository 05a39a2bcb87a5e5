import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import r_sq
from infosym.geometry import (
    DimensionError,
    EffectClass,
    EffectVec,
    UnsupportedModelError,
    as_vector,
    check_self_duality,
    classify_effect,
    effect_weight,
    hat_decompose,
    inner,
    probability,
    scale_to_plane,
    validate_effect,
)
from infosym.models import classical_model, polygon_model, qubit_model, spekkens_model

U3 = np.array([0.0, 0.0, 1.0])


class TestInner:
    def test_unit_on_normalized_state(self):
        r5 = math.sqrt(r_sq(5))
        assert inner([0, 0, 1], [r5, 0, 1]) == 1.0

    def test_orthogonal_axes(self):
        assert inner([1, 0, 0], [0, 1, 0]) == 0.0

    def test_pentagon_pure_pairing(self, pentagon):
        # direct arithmetic: (r^2 + 1) / (1 + r^2)
        assert inner(pentagon.state(0), pentagon.effect("e0")) == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            inner([1, 0, 0], [1, 0])

    def test_rejects_scalars_and_nan(self):
        with pytest.raises(DimensionError):
            as_vector([1.0])
        with pytest.raises(ValueError):
            as_vector([1.0, float("nan")])

    @given(st.lists(st.floats(-5, 5), min_size=3, max_size=3),
           st.lists(st.floats(-5, 5), min_size=3, max_size=3),
           st.floats(-3, 3))
    def test_symmetric_and_linear(self, a, b, c):
        assert inner(a, b) == inner(b, a)
        lhs = inner(np.array(a) * c, b)
        assert lhs == pytest.approx(c * inner(a, b), abs=1e-9)


class TestHatDecompose:
    def test_pure_state(self):
        r5 = math.sqrt(r_sq(5))
        dec = hat_decompose([r5, 0, 1], U3)
        assert dec.unit_component == 1.0
        np.testing.assert_allclose(dec.hat_part, [r5, 0, 0], atol=1e-15)

    def test_unit_itself(self):
        dec = hat_decompose(U3, U3)
        assert dec.unit_component == 1.0
        assert not dec.hat_part.any()

    def test_zero_vector(self):
        dec = hat_decompose([0, 0, 0], U3)
        assert dec.unit_component == 0.0
        assert not dec.hat_part.any()

    def test_zero_unit_rejected(self):
        with pytest.raises(ValueError):
            hat_decompose([1, 0, 0], [0, 0, 0])

    @given(st.lists(st.floats(-10, 10), min_size=4, max_size=4))
    def test_recompose(self, v):
        unit = np.array([0.0, 0.0, 0.0, 1.0])
        dec = hat_decompose(v, unit)
        np.testing.assert_allclose(dec.recompose(unit), v, atol=1e-12)
        assert abs(dec.hat_part @ unit) <= 1e-12


class TestProbability:
    def test_unit_effect(self, pentagon):
        for w in pentagon.pure_states:
            assert probability(pentagon.unit_effect, w) == pytest.approx(1.0, abs=1e-12)

    def test_squit_adjacent_vertex(self, squit):
        # the effect at hat-angle pi/4 sits between w0 and w1 and clicks on both
        e = next(g for g in squit.effects if g.pure and abs(g.angle - math.pi / 4) < 1e-12)
        assert probability(e, squit.state(0)) == pytest.approx(1.0, abs=1e-12)
        assert probability(e, squit.state(1)) == pytest.approx(1.0, abs=1e-12)

    def test_pentagon_e4_on_w1(self, pentagon):
        s = r_sq(5)
        expected = (1 + s * math.cos(4 * math.pi / 5)) / (1 + s)
        assert expected == pytest.approx(0.0, abs=1e-12)
        assert probability(pentagon.effect("e4"), pentagon.state(1)) == pytest.approx(
            expected, abs=1e-12)

    def test_invalid_pair_rejected(self):
        with pytest.raises(ValueError):
            probability([0, 0, 2], [0, 0, 1])


class TestScaleToPlane:
    def test_pentagon_effect(self, pentagon):
        r5 = math.sqrt(r_sq(5))
        e0 = np.array([r5, 0, 1]) / (1 + r_sq(5))
        np.testing.assert_allclose(pentagon.effect("e0").coords, e0, atol=1e-15)
        scaled = scale_to_plane(e0, U3)
        np.testing.assert_allclose(scaled.coords, [r5, 0, 1], atol=1e-12)
        assert scaled.coords[2] == 1.0
        assert effect_weight(e0, U3) == pytest.approx(1 / (1 + r_sq(5)), abs=1e-15)

    def test_unit_fixed(self):
        np.testing.assert_array_equal(scale_to_plane(U3, U3).coords, U3)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            scale_to_plane([0, 0, 0], U3)


class TestValidateEffect:
    def test_unit_valid(self, pentagon):
        assert validate_effect(pentagon, pentagon.unit_effect)

    def test_double_unit_invalid(self, pentagon):
        v = validate_effect(pentagon, 2 * pentagon.unit_effect)
        assert not v
        assert len(v.violations) == 5
        assert all(p == pytest.approx(2.0) for _, p in v.violations)

    def test_pentagon_e2(self, pentagon):
        assert validate_effect(pentagon, pentagon.effect("e2"))

    def test_qubit_ball_rule(self):
        q = qubit_model()
        assert validate_effect(q, [0, 0, 0.5, 0.5])
        assert not validate_effect(q, [0, 0, 0.6, 0.5])

    def test_dimension_checked(self, pentagon):
        with pytest.raises(DimensionError):
            validate_effect(pentagon, [0, 1])

    def test_all_generators_valid(self):
        for n in range(3, 21):
            model = polygon_model(n)
            assert all(validate_effect(model, e) for e in model.effects)


class TestClassify:
    def test_pure_effect_is_ray_extremal(self, pentagon):
        assert classify_effect(pentagon, pentagon.effect("e3")) is EffectClass.RAY_EXTREMAL

    def test_odd_complement_is_extremal_off_rays(self, pentagon):
        comp = pentagon.unit_effect - pentagon.effect("e3").coords
        assert classify_effect(pentagon, comp) is EffectClass.EXTREMAL_NOT_RAY

    def test_half_unit_interior(self, pentagon):
        assert classify_effect(pentagon, 0.5 * pentagon.unit_effect) is EffectClass.INTERIOR

    def test_zero_and_unit(self, pentagon):
        assert classify_effect(pentagon, [0, 0, 0]) is EffectClass.EXTREMAL_NOT_RAY
        assert classify_effect(pentagon, U3) is EffectClass.EXTREMAL_NOT_RAY

    def test_scaled_pure_effect_stays_on_ray(self, pentagon):
        e = 0.5 * pentagon.effect("e1").coords
        assert classify_effect(pentagon, e) is EffectClass.RAY_EXTREMAL

    def test_boundary_mixed(self, pentagon):
        # e0 and u share a facet; e0 and its complement average to u/2
        edge = 0.5 * (pentagon.effect("e0").coords + U3)
        across = 0.5 * (pentagon.effect("e0").coords + pentagon.effect("~e0").coords)
        assert classify_effect(pentagon, edge) is EffectClass.BOUNDARY_MIXED
        assert classify_effect(pentagon, across) is EffectClass.INTERIOR

    def test_invalid(self, pentagon):
        assert classify_effect(pentagon, 2 * U3) is EffectClass.INVALID

    def test_even_complement_is_pure(self, hexagon):
        comp = hexagon.unit_effect - hexagon.effect("e0").coords
        assert classify_effect(hexagon, comp) is EffectClass.RAY_EXTREMAL

    def test_unsupported_kinds(self):
        with pytest.raises(UnsupportedModelError):
            classify_effect(qubit_model(), [0, 0, 0.5, 0.5])
        with pytest.raises(UnsupportedModelError):
            check_self_duality(spekkens_model())


class TestSelfDuality:
    def test_pentagon(self, pentagon):
        assert check_self_duality(pentagon)

    def test_squit(self, squit):
        assert not check_self_duality(squit)

    def test_classical_bit(self):
        assert check_self_duality(classical_model(2))

    def test_parity_rule(self):
        for n in range(3, 42):
            assert check_self_duality(polygon_model(n)) == (n % 2 == 1), n


class TestPolygonIdentities:
    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 12, 17, 40])
    def test_normalization_and_complement(self, n):
        model = polygon_model(n)
        u = model.unit_effect
        for w in model.pure_states:
            assert abs(inner(u, w) - 1.0) <= 1e-12
            for e in model.effects:
                assert abs(inner(e, w) + inner(u - e.coords, w) - 1.0) <= 1e-12

    @pytest.mark.parametrize("n", [3, 5, 6, 9, 16])
    def test_hat_probability_consistency(self, n):
        model = polygon_model(n)
        u = model.unit_effect
        for e in model.effects:
            if not e.pure:
                continue
            weight = effect_weight(e, u)
            e_hat = hat_decompose(scale_to_plane(e, u), u).hat_part
            for w in model.pure_states:
                w_hat = hat_decompose(w, u).hat_part
                assert inner(e, w) == pytest.approx(weight * (1 + e_hat @ w_hat), abs=1e-12)

    @settings(max_examples=40)
    @given(st.integers(3, 30), st.lists(st.floats(0, 1), min_size=3, max_size=3))
    def test_hat_norm_bound(self, n, weights):
        model = polygon_model(n)
        r = math.sqrt(r_sq(n))
        for w in model.pure_states:
            assert np.linalg.norm(hat_decompose(w, U3).hat_part) == pytest.approx(r, abs=1e-12)
        lam = np.array(weights) + 1e-3
        lam /= lam.sum()
        mixed = sum(l * model.state(i).coords for l, i in zip(lam, (0, 1, n // 2)))
        assert np.linalg.norm(hat_decompose(mixed, U3).hat_part) <= r + 1e-12


def test_effect_complement_roundtrip():
    e = EffectVec([0.2, 0.1, 0.4], label="e1")
    c = e.complement(U3)
    assert c.label == "~e1" and c.is_complement
    back = c.complement(U3)
    assert back.label == "e1"
    np.testing.assert_allclose(back.coords, e.coords, atol=1e-15)
