import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import r_sq
from infosym.geometry import check_self_duality, inner, probability
from infosym.models import (
    ModelError,
    ToyEpistemicState,
    bloch_from_ket,
    bloch_state,
    classical_model,
    density_matrix,
    distinguishable,
    load_model,
    mix_states,
    mixture,
    model_from_dict,
    model_from_selector,
    polygon_model,
    pure_qubit_state,
    qubit_effect,
    qubit_effect_valid,
    qubit_model,
    spekkens_model,
    squit_model,
    toy_measurements,
    toy_mixed_state,
    toy_probability,
    toy_states,
)


class TestPolygon:
    def test_square_angles_and_radius(self):
        model = polygon_model(4)
        assert len(model.pure_states) == 4
        assert model.params["r"] == pytest.approx(2 ** 0.25, abs=1e-15)
        angles = sorted(math.degrees(math.atan2(w.coords[1], w.coords[0])) % 360
                        for w in model.pure_states)
        np.testing.assert_allclose(angles, [0, 90, 180, 270], atol=1e-12)

    def test_triangle_is_a_simplex(self):
        model = polygon_model(3)
        assert r_sq(3) == pytest.approx(2.0)
        for i in range(3):
            for j in range(3):
                p = probability(model.effect(f"e{i}"), model.state(j))
                assert p == pytest.approx(float(i == j), abs=1e-12)

    def test_pentagon_self_dual(self):
        assert check_self_duality(polygon_model(5))

    def test_rejects_small_n(self):
        with pytest.raises(ModelError):
            polygon_model(2)

    def test_generator_count(self):
        for n in (5, 6):
            model = polygon_model(n)
            assert len(model.effects) == 2 * n + 2
            assert len(model.pure_effects) == (n if n % 2 else 2 * n)

    @pytest.mark.parametrize("n", [3, 5, 8, 13, 40])
    def test_rotation_permutes_states_and_effects(self, n):
        a = 2 * math.pi / n
        rot = np.array([[math.cos(a), -math.sin(a), 0], [math.sin(a), math.cos(a), 0], [0, 0, 1]])
        states = np.array([w.coords for w in polygon_model(n).pure_states])
        np.testing.assert_allclose(states @ rot.T, np.roll(states, -1, axis=0), atol=1e-12)
        effects = np.array([e.coords for e in polygon_model(n).effects
                            if e.pure and not e.is_complement])
        rotated = effects @ rot.T
        for row in rotated:
            assert np.min(np.linalg.norm(effects - row, axis=1)) <= 1e-12

    def test_squit_alias(self):
        assert squit_model().to_json() == polygon_model(4).to_json()


class TestClassical:
    def test_bit(self):
        model = classical_model(2)
        assert len(model.pure_states) == 2
        assert distinguishable(model, model.pure_states)

    def test_trit_mutually_distinguishable(self):
        model = classical_model(3)
        assert distinguishable(model, model.pure_states)
        for a in range(3):
            for b in range(a + 1, 3):
                assert distinguishable(model, [model.state(a), model.state(b)])

    @pytest.mark.parametrize("d", range(2, 7))
    def test_full_set_distinguishable(self, d):
        model = classical_model(d)
        assert distinguishable(model, model.pure_states)


class TestSquit:
    def test_four_states(self, squit):
        assert len(squit.pure_states) == 4

    def test_all_pairs_distinguishable(self, squit):
        for i in range(4):
            for j in range(i + 1, 4):
                assert distinguishable(squit, [squit.state(i), squit.state(j)])

    def test_not_self_dual(self, squit):
        assert not check_self_duality(squit)

    def test_opposite_pair(self, squit):
        assert distinguishable(squit, [squit.state(0), squit.state(2)])


class TestDistinguishable:
    def test_pentagon_neighbours(self, pentagon):
        assert not distinguishable(pentagon, [pentagon.state(0), pentagon.state(1)])

    @pytest.mark.parametrize("eta", [0, 0.25, 0.5, 1])
    def test_pentagon_opposite_edge(self, pentagon, eta):
        w = mixture([pentagon.state(2), pentagon.state(3)], [eta, 1 - eta])
        assert distinguishable(pentagon, [pentagon.state(0), w])

    @pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
    def test_odd_gon_opposite_edges(self, n):
        model = polygon_model(n)
        etas = np.linspace(0, 1, 11)
        for i in range(n):
            partners = [(j, j + 1) for j in range(n)
                        if all(distinguishable(model, [model.state(i),
                                                       mixture([model.state(j),
                                                                model.state((j + 1) % n)],
                                                               [e, 1 - e])])
                               for e in etas)]
            assert len(partners) == 1
            assert {partners[0][0] % n, partners[0][1] % n} == {(i + (n - 1) // 2) % n,
                                                                (i + (n + 1) // 2) % n}

    def test_qubit(self):
        q = qubit_model()
        up, down = bloch_state([0, 0, 1]), bloch_state([0, 0, -1])
        assert distinguishable(q, [up, down])
        assert not distinguishable(q, [up, bloch_state([1, 0, 0])])

    def test_spekkens(self):
        model = spekkens_model()
        assert distinguishable(model, [model.state("1v2"), model.state("3v4")])
        assert not distinguishable(model, [model.state("1v2"), model.state("1v3")])

    def test_classical_needs_set(self):
        model = classical_model(4)
        assert distinguishable(model, model.pure_states)
        mixed = mixture([model.state(0), model.state(1)], [0.5, 0.5])
        assert not distinguishable(model, [model.state(0), mixed])


class TestMixStates:
    def test_endpoint(self, squit):
        w = mix_states(squit, 0, 2, 1.0)
        np.testing.assert_allclose(w.coords, squit.state(0).coords, atol=1e-15)

    def test_squit_counterexample_state(self, squit):
        w = mix_states(squit, 1, 2, 0.75)
        expected = 0.75 * squit.state(1).coords + 0.25 * squit.state(2).coords
        np.testing.assert_allclose(w.coords, expected, atol=1e-15)

    def test_classical_maximally_mixed(self):
        w = mix_states(classical_model(2), 0, 1, 0.5)
        np.testing.assert_allclose(w.coords, [0.5, 0.5], atol=1e-15)

    def test_rejects_non_distinguishable(self, pentagon):
        with pytest.raises(ModelError):
            mix_states(pentagon, 0, 1, 0.5)
        # the unchecked constructor still works
        mixture([pentagon.state(0), pentagon.state(1)], [0.5, 0.5])

    def test_rejects_bad_weight(self, squit):
        with pytest.raises(ModelError):
            mix_states(squit, 0, 2, 1.5)


class TestQubit:
    def test_projector_on_eigenstate(self):
        e = qubit_effect(0.5, [0, 0, 0.5])
        assert inner(e, bloch_state([0, 0, 1])) == pytest.approx(1.0, abs=1e-15)

    def test_overlap_identity(self):
        for theta in (math.pi / 8, 0.3, 1.1):
            psi = np.array([math.cos(theta), math.sin(theta)])
            phi = np.array([math.cos(theta), -math.sin(theta)])
            overlap = abs(psi @ phi) ** 2
            b1, b2 = bloch_from_ket(psi), bloch_from_ket(phi)
            assert overlap == pytest.approx((1 + b1 @ b2) / 2, abs=1e-12)
            rho = np.outer(psi, psi)
            np.testing.assert_allclose(density_matrix(b1), rho, atol=1e-12)

    def test_pure_state_parametrization(self):
        w = pure_qubit_state(math.pi / 2, 0.0)
        np.testing.assert_allclose(w.coords, [1, 0, 0, 1], atol=1e-15)

    def test_rejects_outside_ball(self):
        with pytest.raises(ModelError):
            bloch_state([1, 1, 0])

    @settings(max_examples=200)
    @given(st.floats(0, 1), st.lists(st.floats(-1, 1), min_size=3, max_size=3),
           st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.floats(0, 1))
    def test_valid_effects_give_probabilities(self, alpha, m, polar, azim, length):
        m = np.array(m)
        valid = qubit_effect_valid(alpha, m)
        norm = float(np.linalg.norm(m))
        assert valid == (alpha - norm >= -1e-12 and alpha + norm <= 1 + 1e-12)
        if valid:
            b = length * np.array([math.sin(polar) * math.cos(azim),
                                   math.sin(polar) * math.sin(azim), math.cos(polar)])
            p = inner(qubit_effect(alpha, m), bloch_state(b))
            assert -1e-12 <= p <= 1 + 1e-12


class TestToyBit:
    def test_outcome_probabilities(self):
        s12, s13 = ToyEpistemicState.parse("1v2"), ToyEpistemicState.parse("1v3")
        m1, _, m3 = toy_measurements()
        assert toy_probability(m1.outcomes[0], s12) == 1.0
        assert toy_probability(m1.outcomes[0], s13) == 0.5
        assert toy_probability(frozenset({1, 4}), s12) == 0.5
        assert m3.outcomes[0] == frozenset({1, 4})

    def test_outcomes_sum_to_one(self):
        for s in toy_states() + (toy_mixed_state(),):
            for m in toy_measurements():
                assert sum(toy_probability(o, s) for o in m.outcomes) == 1.0

    def test_six_maximal_states(self):
        assert len(toy_states()) == 6
        assert all(s.is_maximal for s in toy_states())
        assert not toy_mixed_state().is_maximal

    def test_parse_errors(self):
        with pytest.raises(ModelError):
            ToyEpistemicState.parse("1v5")

    def test_model_kind(self):
        model = spekkens_model()
        assert model.kind == "measurement_list"
        assert len(model.measurements) == 3


class TestSerialization:
    @pytest.mark.parametrize("selector", ["polygon:5", "polygon:8", "classical:3", "squit"])
    def test_round_trip(self, selector):
        model = model_from_selector(selector)
        back = model_from_dict(json.loads(model.to_json()))
        assert back.name == model.name and back.kind == model.kind
        for a, b in zip(model.pure_states, back.pure_states):
            assert np.max(np.abs(a.coords - b.coords)) <= 1e-15
        for a, b in zip(model.effects, back.effects):
            assert np.max(np.abs(a.coords - b.coords)) <= 1e-15
            assert a.label == b.label and a.pure == b.pure
        assert back.to_json() == model.to_json()

    @pytest.mark.parametrize("selector", ["qubit", "spekkens"])
    def test_only_polytopes_load(self, selector):
        data = json.loads(model_from_selector(selector).to_json())
        assert data["kind"] != "polytope"
        with pytest.raises(ModelError):
            model_from_dict(data)

    def test_load_file(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(polygon_model(7).to_json())
        assert load_model(path).to_json() == polygon_model(7).to_json()
        assert model_from_selector(f"file:{path}").name == "polygon:7"

    def test_minimal_user_model(self):
        data = {"name": "bit", "kind": "polytope", "dim": 2, "unit_effect": [1, 1],
                "pure_states": [[1, 0], [0, 1]],
                "effects": [[0, 0], [1, 0], [0, 1], [1, 1]]}
        model = model_from_dict(data)
        assert [e.pure for e in model.effects] == [False, True, True, False]

    @pytest.mark.parametrize("bad", [
        {"name": "x", "kind": "polytope", "dim": 2, "unit_effect": [1, 1],
         "pure_states": [[2, 0]], "effects": [[1, 0]]},
        {"name": "x", "kind": "polytope", "dim": 2, "unit_effect": [1, 1],
         "pure_states": [[1, 0]], "effects": [[2, 0]]},
        {"name": "x", "kind": "nonsense", "dim": 2, "unit_effect": [1, 1]},
        {"name": "x"},
    ])
    def test_invalid_user_models(self, bad):
        with pytest.raises(ModelError):
            model_from_dict(bad)

    def test_corrupted_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ModelError):
            load_model(path)

    @pytest.mark.parametrize("selector", ["bogus:9", "polygon:x", "polygon:", "squit:3", ""])
    def test_bad_selectors(self, selector):
        with pytest.raises(ModelError):
            model_from_selector(selector)
