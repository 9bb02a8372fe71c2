"""Tests for the completed-algebra matrix models and the leaf pipeline."""

import json
import random
from fractions import Fraction

import pytest

from cherednik.completion import (
    CentralizerModel,
    InvariantShift,
    TensorSplit,
    TruncatedModel,
    cuspidal_reduction_report,
    dimension_ledger,
    ideal_image_check,
    mirror_base_point,
    verify_relations,
)
from cherednik.cyclotomic import Cyclotomic
from cherednik.groups import cyclic_group, dihedral_group
from cherednik.polynomials import MultiPoly, TPoly
from cherednik.rca import Algebra


@pytest.fixture(scope="module")
def model3():
    alg = Algebra(dihedral_group(3), [Fraction(2, 3)])
    b = mirror_base_point(alg.group, alg.group.reflections[0].element)
    return CentralizerModel(alg, b, 3)


@pytest.fixture(scope="module")
def model4():
    alg = Algebra(dihedral_group(4), [Fraction(1, 2), Fraction(1, 3)])
    b = mirror_base_point(alg.group, alg.group.reflections[0].element)
    return CentralizerModel(alg, b, 2)


@pytest.fixture(scope="module")
def whole_group_model():
    # base point 0 is fixed by everything, so the model is one-by-one
    alg = Algebra(cyclic_group(3), [Fraction(1, 2), Fraction(1, 3)])
    return CentralizerModel(alg, [Fraction(0)], 2)


def random_pbw(alg, rng, nterms=3, max_exp=2):
    out = alg.zero()
    n = alg.n
    for _ in range(nterms):
        a = tuple(rng.randrange(max_exp + 1) for _ in range(n))
        b = tuple(rng.randrange(max_exp + 1) for _ in range(n))
        w = rng.randrange(alg.group.order)
        out = out + alg.monomial(a, w, b, Fraction(rng.randint(-3, 3)))
    return out


class TestTruncatedModel:
    def test_rejects_nonpositive_order(self, model3):
        with pytest.raises(ValueError):
            TruncatedModel(model3.sub_algebra, model3.sub_invariants, 0)

    def test_generator_products_vanish(self, model3):
        trunc = model3.model
        alg = trunc.algebra
        p0, p1 = trunc.gens
        for combo in (p0 * p0 * p0, p0 * p0 * p1, p1 * p1 * p1):
            assert trunc.vanishes(alg.x_poly(combo))

    def test_reduce_is_idempotent(self, model3):
        trunc = model3.model
        alg = trunc.algebra
        rng = random.Random(7)
        for _ in range(5):
            e = random_pbw(alg, rng, max_exp=3)
            once = trunc.reduce(e)
            assert trunc.reduce(once) == once

    def test_reduce_keeps_group_and_y_legs(self, model3):
        trunc = model3.model
        alg = trunc.algebra
        e = alg.monomial((3, 1), 1, (1, 0))
        reduced = trunc.reduce(e)
        assert not reduced.is_zero
        for (_, w, b) in reduced.terms:
            assert w == 1
            assert b == (1, 0)

    def test_first_order_dimension_is_group_order(self, model3):
        assert model3.model.x_dimension(1) == 2
        assert model3.parent_model.x_dimension(1) == 6


class TestMirrorBasePoint:
    def test_point_lies_on_the_mirror(self):
        group = dihedral_group(4)
        for refl in group.reflections:
            b = mirror_base_point(group, refl.element)
            mat = group.elements[refl.element]
            n = group.n
            for r in range(n):
                moved = sum((mat[r][c] * b[c] for c in range(n)), Cyclotomic.zero(group.conductor))
                assert moved == b[r]

    def test_leading_coordinate_is_one(self):
        group = dihedral_group(3)
        b = mirror_base_point(group, group.reflections[0].element)
        lead = next(v for v in b if not v.is_zero)
        assert lead == Cyclotomic.one(group.conductor)

    def test_rotation_has_no_mirror(self):
        group = dihedral_group(3)
        reflections = {r.element for r in group.reflections}
        rotation = next(g for g in range(1, group.order) if g not in reflections)
        with pytest.raises(ValueError):
            mirror_base_point(group, rotation)


class TestCentralizerModel:
    def test_matrix_sizes(self, model3, model4, whole_group_model):
        assert model3.r == 3
        assert model4.r == 4
        assert whole_group_model.r == 1
        assert model3.coset_reps[0] == 0

    def test_rejects_nonpositive_order(self, model3):
        with pytest.raises(ValueError):
            CentralizerModel(model3.algebra, model3.base_point, 0)

    def test_stabilizer_parameters_restrict(self, model4):
        # the chosen mirror lies in the first reflection class of the parent
        assert model4.sub_group.order == 2
        assert len(model4.sub_algebra.params) == 1

    def test_identity_maps_to_identity(self, model3):
        assert model3.image(model3.algebra.one()) == model3.identity()
        assert model3.image_of_group(0) == model3.identity()

    def test_group_images_are_multiplicative(self, model3):
        group = model3.algebra.group
        images = [model3.image_of_group(u) for u in range(group.order)]
        for u in range(group.order):
            for v in range(group.order):
                assert images[u] * images[v] == images[group.mult[u][v]]

    def test_x_images_commute(self, model4):
        a = model4.image_of_x(0)
        b = model4.image_of_x(1)
        assert a * b == b * a

    def test_image_is_t_linear(self, model3):
        alg = model3.algebra
        t = TPoly.t(alg.conductor)
        e = alg.x(0) * alg.y(1) + alg.w(2)
        assert model3.image(e.scale(t)) == model3.image(e).scale(t)

    def test_matrix_arithmetic(self, model3):
        a = model3.image_of_x(0)
        b = model3.image_of_y(1)
        c = model3.image_of_group(model3.algebra.group.reflections[0].element)
        assert (a - a).is_zero()
        assert ((a + b) * c - (a * c + b * c)).is_zero()
        assert (a * (b * c) - (a * b) * c).is_zero()


class TestRegularPointModel:
    def test_trivial_stabilizer_gives_group_sized_model(self):
        # (1, 5) avoids every mirror, so the model is |W| by |W|
        alg = Algebra(dihedral_group(3), [Fraction(2, 3)])
        model = CentralizerModel(alg, [Fraction(1), Fraction(5)], 2)
        assert model.r == 6
        assert model.sub_group.order == 1
        records = verify_relations(model)
        assert all(rec["ok"] for rec in records)
        ledger = dimension_ledger(model)
        assert ledger["equal"]
        assert ledger["parent_rank"] == 108


class TestWholeGroupModel:
    def test_generators_map_to_themselves(self, whole_group_model):
        model = whole_group_model
        sub = model.sub_algebra
        assert (model.image_of_x(0).entry(0, 0) - sub.x(0)).is_zero
        assert (model.image_of_y(0).entry(0, 0) - sub.y(0)).is_zero
        for g in range(sub.group.order):
            assert (model.image_of_group(g).entry(0, 0) - sub.w(g)).is_zero

    def test_ledger(self, whole_group_model):
        ledger = dimension_ledger(whole_group_model)
        assert ledger["equal"]
        assert ledger["parent_rank"] == 18
        assert ledger["matrix_rank"] == 18


class TestRelations:
    def test_dihedral3_relations_hold(self, model3):
        records = verify_relations(model3)
        assert len(records) == 36
        assert all(rec["ok"] for rec in records)
        # the order-lowering pairs still agree exactly once t is set to zero
        lossy = [rec for rec in records if "t0_exact" in rec]
        assert lossy
        assert all(rec["t0_exact"] for rec in lossy)

    def test_dihedral4_relations_hold_for_both_mirror_classes(self, model4):
        records = verify_relations(model4)
        assert all(rec["ok"] for rec in records)

        group = model4.algebra.group
        other = next(r for r in group.reflections if r.class_index == 1)
        alg = model4.algebra
        model_b = CentralizerModel(alg, mirror_base_point(group, other.element), 2)
        records_b = verify_relations(model_b)
        assert all(rec["ok"] for rec in records_b)


class TestDimensionLedger:
    def test_dihedral3(self, model3):
        ledger = dimension_ledger(model3)
        assert ledger["equal"]
        assert ledger["parent_rank"] == 216
        assert ledger["matrix_rank"] == 216

    def test_dihedral4(self, model4):
        ledger = dimension_ledger(model4)
        assert ledger["equal"]
        assert ledger["parent_rank"] == 192


class TestIdealImages:
    def test_dihedral3_lower_powers(self, model3):
        for j in (1, 2):
            result = ideal_image_check(model3, j)
            assert result["forward"], f"forward failed at power {j}"
            assert result["reverse"], f"reverse failed at power {j}"
            assert result["ok"]

    def test_dihedral4_first_power(self, model4):
        result = ideal_image_check(model4, 1)
        assert result["ok"]

    def test_power_out_of_range(self, model3):
        with pytest.raises(ValueError):
            ideal_image_check(model3, 0)
        with pytest.raises(ValueError):
            ideal_image_check(model3, 4)


class TestInvariantShift:
    def test_certified_on_dihedral_models(self, model3, model4):
        assert InvariantShift(model3).certified
        assert InvariantShift(model4).certified

    def test_shift_at_origin_is_identity(self, whole_group_model):
        shift = InvariantShift(whole_group_model)
        k = len(shift.forward)
        N = whole_group_model.algebra.conductor
        for i in range(k):
            assert shift.forward[i] == MultiPoly.variable(i, k, N)
            assert shift.inverse[i] == MultiPoly.variable(i, k, N)


class TestTensorSplit:
    def test_split_dimensions(self, model3):
        split = TensorSplit(model3.sub_algebra)
        assert split.core_dim == 1
        assert split.flat_dim == 1
        assert split.core_algebra.n == 1
        assert split.core_algebra.group.order == 2

    def test_transport_is_a_homomorphism(self, model3):
        split = TensorSplit(model3.sub_algebra)
        sub = model3.sub_algebra
        rng = random.Random(11)
        for _ in range(6):
            a = random_pbw(sub, rng)
            b = random_pbw(sub, rng)
            assert split.to_adapted(a * b) == split.to_adapted(a) * split.to_adapted(b)
        assert split.to_adapted(sub.one()) == split.adapted_algebra.one()

    def test_flat_coordinates_are_central_and_paired(self, model3):
        split = TensorSplit(model3.sub_algebra)
        adapted = split.adapted_algebra
        x_flat, y_flat = adapted.x(1), adapted.y(1)
        assert adapted.is_central(x_flat, at_t0=True)
        assert adapted.is_central(y_flat, at_t0=True)
        bracket = adapted.poisson_bracket(x_flat, y_flat)
        assert bracket == adapted.one()

    def test_core_component_drops_flat_factors(self, model3):
        split = TensorSplit(model3.sub_algebra)
        adapted = split.adapted_algebra
        core = split.core_algebra
        assert split.core_component(adapted.x(0)) == core.x(0)
        assert split.core_component(adapted.x(1)).is_zero
        assert split.core_component(adapted.x(0) * adapted.x(1)).is_zero
        assert split.core_component(adapted.x(0) + adapted.x(1)) == core.x(0)

    def test_group_with_full_core_has_no_flat_part(self):
        split = TensorSplit(Algebra(dihedral_group(3), [Fraction(2, 3)]))
        assert split.core_dim == 2
        assert split.flat_dim == 0


@pytest.fixture(scope="module")
def report4():
    alg = Algebra(dihedral_group(4), [Fraction(0), Fraction(1, 3)])
    return cuspidal_reduction_report(alg, order=2)


class TestCuspidalReport:
    def test_sizes_and_dimensions(self, report4):
        assert report4.matrix_size == 4
        assert report4.stabilizer_order == 2
        assert report4.core_quotient_dim == 6
        assert report4.predicted_dim == 96
        assert report4.radical_power_dims == [4, 0]
        assert report4.semisimple_quotient_dim == 2
        assert not report4.matrix_size_is_six

    def test_simple_modules(self, report4):
        assert len(report4.simple_modules) == 2
        for rec in report4.simple_modules:
            assert rec["degree"] == 4
            assert rec["multiplicity"] == 1
            assert rec["function_action_is_representation"]
            assert rec["character_matches_induction"]

    def test_central_elements_act_by_scalars(self, report4):
        scalars = {rec["label"]: rec["scalar"] for rec in report4.central_elements}
        assert all(rec["is_scalar"] for rec in report4.central_elements)
        assert scalars["x-invariant degree 2"] == "1"
        assert scalars["x-invariant degree 4"] == "2"
        assert scalars["y-invariant degree 2"] == "0"
        assert scalars["y-invariant degree 4"] == "0"
        assert scalars["grading element"] == "-2/3"

    def test_relations_and_ledger(self, report4):
        assert report4.relation_summary == {"checked": 36, "failed": 0}
        assert report4.ledger["equal"]
        assert report4.notes == []

    def test_report_serializes(self, report4):
        blob = json.dumps(report4.as_dict(), sort_keys=True)
        assert "predicted_dim" in blob
        text = report4.text()
        assert "r = 4" in text
        assert "six-by-six: no" in text

    def test_rejects_non_cuspidal_parameters(self):
        alg = Algebra(dihedral_group(4), [Fraction(1, 3), Fraction(0)])
        with pytest.raises(ValueError):
            cuspidal_reduction_report(alg, order=2)

    def test_rejects_non_reflection(self):
        alg = Algebra(dihedral_group(4), [Fraction(0), Fraction(1, 3)])
        reflections = {r.element for r in alg.group.reflections}
        rotation = next(g for g in range(1, alg.group.order) if g not in reflections)
        with pytest.raises(ValueError):
            cuspidal_reduction_report(alg, order=2, reflection=rotation)

    def test_rejects_groups_without_mirror_points(self):
        alg = Algebra(cyclic_group(3), [Fraction(0), Fraction(0)])
        with pytest.raises(ValueError):
            cuspidal_reduction_report(alg, order=2)
