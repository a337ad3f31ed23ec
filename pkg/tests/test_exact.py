from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_qs3, points, qs3
from hatgroup.exact import (BOUNDARY, INSIDE, ONE, OUTSIDE, ZERO, DegeneratePolygon, IsometryMatrix,
                            Point, Polygon, QS3, point_in_polygon, polygon_area)
from hatgroup.grid import KITE_POLYGON, hat_polygon

R = Fraction(1, 2)


def test_scalar_examples():
    s = QS3(0, 1)
    assert s * s == QS3(3, 0)
    assert QS3(1) + QS3(1) == QS3(2)
    assert QS3(2, -1).sign() == 1
    assert QS3(-2, 1).sign() == -1
    assert QS3(0).sign() == 0


def test_lowest_terms_and_no_floats():
    x = QS3(Fraction(4, 8), Fraction(-6, 4))
    assert (x.a.numerator, x.a.denominator) == (1, 2)
    assert (x.b.numerator, x.b.denominator) == (-3, 2)
    with pytest.raises(TypeError):
        QS3(0.5)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QS3(1, 1) / QS3(0)


def test_isometry_examples():
    ident = IsometryMatrix.identity()
    assert ident.apply(Point.of(1, 0)) == Point.of(1, 0)
    r = IsometryMatrix.rotation(1)
    assert r.apply(Point.of(2, 0)) == Point(QS3(1), QS3(0, 1))
    f = IsometryMatrix.reflection_x()
    assert f.apply(Point(QS3(R * 3), QS3(0, R))) == Point(QS3(R * 3), QS3(0, -R))
    assert f.det == -1 and r.det == 1


def test_non_orthogonal_rejected():
    with pytest.raises(ValueError):
        IsometryMatrix(((QS3(2), ZERO), (ZERO, ONE)), Point.of(0, 0))


def test_polygon_examples():
    assert polygon_area(KITE_POLYGON) == QS3(0, 1)
    assert hat_polygon().area() == QS3(0, 8)
    assert point_in_polygon(KITE_POLYGON, Point.of(0, 0)) == BOUNDARY
    assert point_in_polygon(KITE_POLYGON, Point.of(1, 0)) == INSIDE
    assert point_in_polygon(KITE_POLYGON, Point.of(3, 0)) == OUTSIDE


def test_polygon_orientation_normalized():
    vs = KITE_POLYGON.vertices
    assert Polygon(tuple(reversed(vs))).vertices == Polygon(vs).vertices
    assert Polygon(tuple(reversed(vs))).area() == KITE_POLYGON.area()


def test_degenerate_polygons():
    with pytest.raises(DegeneratePolygon):
        Polygon((Point.of(0, 0), Point.of(1, 0)))
    with pytest.raises(DegeneratePolygon):
        Polygon((Point.of(0, 0), Point.of(1, 0), Point.of(2, 0)))


# ----------------------------------------------------------- properties

@given(qs3, qs3, qs3)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == ZERO


@given(nonzero_qs3)
def test_multiplicative_inverse(x):
    assert x * x.inverse() == ONE


@given(qs3)
def test_sign_matches_high_precision(x):
    getcontext().prec = 50
    v = Decimal(x.a.numerator) / Decimal(x.a.denominator) + \
        Decimal(x.b.numerator) / Decimal(x.b.denominator) * Decimal(3).sqrt()
    if abs(v) > Decimal("1e-6"):
        assert x.sign() == (1 if v > 0 else -1)


@given(qs3, qs3)
def test_order_total_and_compatible(x, y):
    assert (x < y) + (y < x) + (x == y) == 1
    assert (x < y) == ((y - x).sign() > 0)


def _isometries():
    return st.builds(
        lambda k, flip, p: (IsometryMatrix.translation(p) @ IsometryMatrix.rotation(k)
                            @ (IsometryMatrix.reflection_x() if flip else IsometryMatrix.identity())),
        st.integers(0, 5), st.booleans(), points)


@given(_isometries(), points, points)
def test_isometry_preserves_distance(m, p, q):
    assert (m.apply(p) - m.apply(q)).norm2() == (p - q).norm2()


@given(_isometries(), _isometries(), points)
def test_composition_and_inverse(m, n, p):
    assert (m @ n).apply(p) == m.apply(n.apply(p))
    assert m.inverse().apply(m.apply(p)) == p


@given(_isometries())
def test_area_invariant(m):
    assert hat_polygon().transformed(m).area() == hat_polygon().area()
    assert KITE_POLYGON.transformed(m).area() == KITE_POLYGON.area()
