import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcheck.errors import SolverError
from convexcheck.geometry import (HalfspaceSystem, strict_feasible, implicit_equalities,
                                  face_dimension, face_dimension_at_least)


def coefficients():
    return st.integers(min_value=-20, max_value=20).map(lambda k: k / 10.0)


@st.composite
def boxed_systems(draw, max_dim=3, max_rows=4):
    """Strict systems inside [-1, 1]^d with a few random cuts."""
    d = draw(st.integers(min_value=1, max_value=max_dim))
    m = draw(st.integers(min_value=0, max_value=max_rows))
    coef = coefficients()
    rows = [(draw(st.lists(coef, min_size=d, max_size=d)), draw(coef), True) for _ in range(m)]
    sys = HalfspaceSystem.box(-np.ones(d), np.ones(d))
    if rows:
        sys = sys.stack(HalfspaceSystem.from_rows(rows))
    return sys


class TestHalfspaceSystem:

    def test_box(self):
        sys = HalfspaceSystem.box([-1.0, -2.0], [1.0, 2.0])
        assert len(sys) == 4 and sys.dim == 2
        assert sys.contains([0.5, 1.5])
        assert not sys.contains([0.5, 2.0])
        assert sys.has_box_rows()

    def test_non_strict_rows_use_tolerance(self):
        sys = HalfspaceSystem.box([-1.0], [1.0], strict=False)
        assert sys.contains([1.0])
        assert not sys.contains([1.0 + 1e-6])

    def test_validation(self):
        with pytest.raises(ValueError):
            HalfspaceSystem(np.ones((2, 2)), np.ones(3), True)
        with pytest.raises(ValueError):
            HalfspaceSystem.from_rows([])
        with pytest.raises(ValueError):
            HalfspaceSystem([[np.inf, 0.0]], [0.0], True)

    def test_normalized(self):
        sys = HalfspaceSystem.from_rows([([3.0, 4.0], 10.0, True), ([0.0, 0.0], 1.0, False)])
        norm = sys.normalized()
        np.testing.assert_allclose(norm.A[0], [0.6, 0.8])
        assert norm.b[0] == pytest.approx(2.0)
        np.testing.assert_allclose(norm.A[1], [0.0, 0.0])

    def test_stack_dimension_mismatch(self):
        with pytest.raises(ValueError):
            HalfspaceSystem.box([0.0], [1.0]).stack(HalfspaceSystem.box([0.0, 0.0], [1.0, 1.0]))


class TestStrictFeasible:

    def test_interval(self):
        witness = strict_feasible(HalfspaceSystem.box([-1.0], [1.0]))
        assert witness.point == pytest.approx([0.0], abs=1e-9)
        assert witness.margin == pytest.approx(1.0)

    def test_contradictory_strict_rows(self):
        sys = HalfspaceSystem.box([-1.0], [1.0]).stack(
            HalfspaceSystem.from_rows([([1.0], 0.0, True), ([-1.0], 0.0, True)]))
        assert strict_feasible(sys) is None

    def test_empty_system(self):
        sys = HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0]).stack(
            HalfspaceSystem.from_rows([([1.0, 1.0], -3.0, True)]))
        assert strict_feasible(sys) is None

    def test_facet_witness(self):
        box = HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0])
        witness = strict_feasible(box, equalities=[([1.0, 0.0], 0.0)])
        assert witness.point[0] == pytest.approx(0.0, abs=1e-9)
        assert witness.margin == pytest.approx(1.0)

    def test_thin_slab_below_margin_tol(self):
        sys = HalfspaceSystem.box([-1.0], [1.0]).stack(
            HalfspaceSystem.from_rows([([1.0], 1e-9, True), ([-1.0], 1e-9, True)]))
        assert strict_feasible(sys) is None
        assert strict_feasible(sys, margin_tol=1e-12) is not None

    def test_requires_box_rows(self):
        sys = HalfspaceSystem.from_rows([([1.0, 0.0], 1.0, True)])
        with pytest.raises(SolverError):
            strict_feasible(sys)

    @given(boxed_systems())
    @settings(max_examples=80, deadline=None)
    def test_witness_is_validated(self, sys):
        witness = strict_feasible(sys)
        if witness is None:
            return
        assert sys.contains(witness.point)
        slack = sys.normalized().slack(witness.point)
        assert np.all(slack >= witness.margin - 1e-9)

    @given(boxed_systems(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_extra_row_never_widens(self, sys, data):
        coef = coefficients()
        row = (data.draw(st.lists(coef, min_size=sys.dim, max_size=sys.dim)),
               data.draw(coef), True)
        before = strict_feasible(sys)
        after = strict_feasible(sys.stack(HalfspaceSystem.from_rows([row])))
        if before is None:
            assert after is None
        elif after is not None:
            assert after.margin <= before.margin + 1e-9


class TestFaceDimension:

    def test_full_box(self):
        assert face_dimension(HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0])) == 2

    def test_point(self):
        box = HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0])
        equalities = [([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0)]
        assert face_dimension(box, equalities) == 0
        assert not face_dimension_at_least(box, equalities, 1)

    def test_box_facet(self):
        box = HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0])
        equalities = [([1.0, 0.0], 1.0)]
        assert face_dimension_at_least(box, equalities, 1)
        assert not face_dimension_at_least(box, equalities, 2)

    def test_empty(self):
        box = HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0])
        assert face_dimension(box, [([1.0, 0.0], 5.0)]) == -1
        assert implicit_equalities(box, [([1.0, 0.0], 5.0)]) is None

    def test_implicit_equalities_of_thin_slab(self):
        sys = HalfspaceSystem.box([-1.0, -1.0], [1.0, 1.0], strict=False).stack(
            HalfspaceSystem.from_rows([([1.0, 0.0], 0.0, False), ([-1.0, 0.0], 0.0, False)]))
        assert list(implicit_equalities(sys)) == [4, 5]
        assert face_dimension(sys) == 1

    def test_dimension_range(self):
        box = HalfspaceSystem.box([-1.0], [1.0])
        with pytest.raises(ValueError):
            face_dimension_at_least(box, (), 2)
