"""Exact arithmetic in Q(sqrt 3), plane points, affine isometries and polygons.

Every coordinate the package manipulates lives in Q(sqrt 3): the Kitegrid has
edges of length 1, sqrt 3 and 2, and its rotations are by multiples of 60
degrees, so the field is closed under everything we do.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not exact; pass int, Fraction or str")
    return Fraction(v)


_R3F = 3.0 ** 0.5


@total_ordering
class QS3:
    """The number a + b*sqrt(3) with rational a, b."""

    __slots__ = ("a", "b", "_f")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("QS3 is immutable")

    @staticmethod
    def coerce(v) -> "QS3":
        if isinstance(v, QS3):
            return v
        return QS3(v, 0)

    # field operations
    def __add__(self, o):
        o = QS3.coerce(o)
        return QS3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QS3(-self.a, -self.b)

    def __sub__(self, o):
        o = QS3.coerce(o)
        return QS3(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return QS3.coerce(o) - self

    def __mul__(self, o):
        o = QS3.coerce(o)
        return QS3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QS3":
        return QS3(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 - 3 b^2 (rational)."""
        return self.a * self.a - 3 * self.b * self.b

    def inverse(self) -> "QS3":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QS3 division by zero")
        return QS3(self.a / n, -self.b / n)

    def __truediv__(self, o):
        return self * QS3.coerce(o).inverse()

    def __rtruediv__(self, o):
        return QS3.coerce(o) * self.inverse()

    # ordering
    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa >= 0 and sb >= 0:
            return 1 if (sa or sb) else 0
        if sa <= 0 and sb <= 0:
            return -1
        # opposite signs: compare a^2 with 3 b^2
        d = a * a - 3 * b * b
        return sa if d > 0 else -sa

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        if not isinstance(o, QS3):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, o):
        return (self - QS3.coerce(o)).sign() < 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        try:
            return self._f
        except AttributeError:
            f = float(self.a) + float(self.b) * _R3F
            object.__setattr__(self, "_f", f)
            return f

    def to_decimal(self, places: int = 6) -> Decimal:
        """Round to a fixed number of decimals, half-even, deterministically."""
        with localcontext() as ctx:
            ctx.prec = 60
            r3 = Decimal(3).sqrt()
            v = (Decimal(self.a.numerator) / Decimal(self.a.denominator)
                 + Decimal(self.b.numerator) / Decimal(self.b.denominator) * r3)
            q = v.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
        if q == 0:
            q = abs(q)
        return q

    def __repr__(self):
        if self.b == 0:
            return f"QS3({self.a})"
        return f"QS3({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*r3"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*r3"

    def to_json(self):
        return [str(self.a), str(self.b)]

    @staticmethod
    def from_json(v) -> "QS3":
        if isinstance(v, (int, str)):
            return QS3(Fraction(v))
        a, b = v
        return QS3(Fraction(a), Fraction(b))


ZERO = QS3(0)
ONE = QS3(1)
HALF = QS3(Fraction(1, 2))
SQRT3 = QS3(0, 1)
HALF_SQRT3 = QS3(0, Fraction(1, 2))


@dataclass(frozen=True, order=True)
class Point:
    x: QS3
    y: QS3

    @staticmethod
    def of(x, y) -> "Point":
        return Point(QS3.coerce(x), QS3.coerce(y))

    def __add__(self, o: "Point") -> "Point":
        return Point(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Point") -> "Point":
        return Point(self.x - o.x, self.y - o.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def scale(self, k) -> "Point":
        k = QS3.coerce(k)
        return Point(self.x * k, self.y * k)

    def dot(self, o: "Point") -> QS3:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "Point") -> QS3:
        return self.x * o.y - self.y * o.x

    def norm2(self) -> QS3:
        return self.dot(self)

    def __iter__(self):
        yield self.x
        yield self.y

    def to_json(self):
        return [self.x.to_json(), self.y.to_json()]

    @staticmethod
    def from_json(v) -> "Point":
        return Point(QS3.from_json(v[0]), QS3.from_json(v[1]))


ORIGIN = Point(ZERO, ZERO)


# Floating-point filters: a float result far enough from zero decides the
# sign; otherwise the exact computation runs.  Coordinates are at most a few
# thousand, where float errors are many orders below the tolerance.

def _tol(*vals) -> float:
    m = max(abs(v) for v in vals) + 1.0
    return 1e-9 * m * m


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the turn a -> b -> c (+1 counter-clockwise)."""
    ax, ay, bx, by, cx, cy = float(a.x), float(a.y), float(b.x), float(b.y), float(c.x), float(c.y)
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if abs(d) > _tol(ax, ay, bx, by, cx, cy):
        return 1 if d > 0 else -1
    return (b - a).cross(c - a).sign()


def compare(u: QS3, v: QS3) -> int:
    """Sign of u - v."""
    fu, fv = float(u), float(v)
    if abs(fu - fv) > _tol(fu, fv):
        return 1 if fu > fv else -1
    return (u - v).sign()


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """p lies on the closed segment [a, b]."""
    px, py = float(p.x), float(p.y)
    ax, ay, bx, by = float(a.x), float(a.y), float(b.x), float(b.y)
    t = 1e-9 * (max(abs(ax), abs(ay), abs(bx), abs(by), abs(px), abs(py)) + 1.0)
    if px < min(ax, bx) - t or px > max(ax, bx) + t or py < min(ay, by) - t or py > max(ay, by) + t:
        return False
    if orient(a, b, p) != 0:
        return False
    return (p - a).dot(p - b).sign() <= 0


@dataclass(frozen=True)
class IsometryMatrix:
    """Affine isometry p -> linear . p + offset, with exact orthogonal linear part."""

    linear: tuple  # ((m00, m01), (m10, m11)) of QS3
    offset: Point

    def __post_init__(self):
        (a, b), (c, d) = self.linear
        if not (a * a + c * c == ONE and b * b + d * d == ONE and a * b + c * d == ZERO):
            raise ValueError("linear part is not orthogonal")

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.linear
        v = a * d - b * c
        return 1 if v == ONE else -1

    def apply(self, p: Point) -> Point:
        (a, b), (c, d) = self.linear
        return Point(a * p.x + b * p.y + self.offset.x, c * p.x + d * p.y + self.offset.y)

    def apply_linear(self, v: Point) -> Point:
        (a, b), (c, d) = self.linear
        return Point(a * v.x + b * v.y, c * v.x + d * v.y)

    def __matmul__(self, o: "IsometryMatrix") -> "IsometryMatrix":
        """Composition: (self @ o)(p) = self(o(p))."""
        (a, b), (c, d) = self.linear
        (e, f), (g, h) = o.linear
        lin = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return IsometryMatrix(lin, self.apply(o.offset))

    def inverse(self) -> "IsometryMatrix":
        (a, b), (c, d) = self.linear
        lin = ((a, c), (b, d))  # orthogonal: inverse is transpose
        t = IsometryMatrix(lin, ORIGIN)
        return IsometryMatrix(lin, -t.apply(self.offset))

    @staticmethod
    def identity() -> "IsometryMatrix":
        return IsometryMatrix(((ONE, ZERO), (ZERO, ONE)), ORIGIN)

    @staticmethod
    def translation(v: Point) -> "IsometryMatrix":
        return IsometryMatrix(((ONE, ZERO), (ZERO, ONE)), v)

    @staticmethod
    def rotation(sixths: int, center: Point = ORIGIN) -> "IsometryMatrix":
        """Counter-clockwise rotation by sixths * 60 degrees about center."""
        c, s = _COS_SIN[sixths % 6]
        lin = ((c, -s), (s, c))
        rot = IsometryMatrix(lin, ORIGIN)
        return IsometryMatrix(lin, center - rot.apply(center))

    @staticmethod
    def reflection_x() -> "IsometryMatrix":
        return IsometryMatrix(((ONE, ZERO), (ZERO, -ONE)), ORIGIN)

    @staticmethod
    def match_segments(p1: Point, q1: Point, p2: Point, q2: Point) -> "IsometryMatrix":
        """The direct isometry taking p1 -> p2 and q1 -> q2 (segments of equal length)."""
        u, v = q1 - p1, q2 - p2
        n = u.norm2()
        if n != v.norm2():
            raise ValueError("segments differ in length")
        c = u.dot(v) / n
        s = u.cross(v) / n
        lin = ((c, -s), (s, c))
        rot = IsometryMatrix(lin, ORIGIN)
        return IsometryMatrix(lin, p2 - rot.apply(p1))


_COS_SIN = [
    (ONE, ZERO),
    (HALF, HALF_SQRT3),
    (-HALF, HALF_SQRT3),
    (-ONE, ZERO),
    (-HALF, -HALF_SQRT3),
    (HALF, -HALF_SQRT3),
]


class DegeneratePolygon(ValueError):
    pass


INSIDE, BOUNDARY, OUTSIDE = "inside", "boundary", "outside"


@dataclass(frozen=True)
class Polygon:
    """Simple counter-clockwise polygon with exact vertices."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(vs) < 3:
            raise DegeneratePolygon("fewer than three vertices")
        for i, v in enumerate(vs):
            if v == vs[i - 1]:
                raise DegeneratePolygon(f"repeated vertex {i}")
        a = _signed_area2(vs)
        if a.sign() == 0:
            raise DegeneratePolygon("zero area")
        if a.sign() < 0:
            vs = tuple(reversed(vs))
        object.__setattr__(self, "vertices", vs)

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[i], vs[(i + 1) % len(vs)]

    def area(self) -> QS3:
        return _signed_area2(self.vertices) * HALF

    def centroid(self) -> Point:
        """Area centroid (exact)."""
        vs = self.vertices
        cx = cy = ZERO
        a2 = ZERO
        for i in range(len(vs)):
            p, q = vs[i], vs[(i + 1) % len(vs)]
            w = p.cross(q)
            a2 = a2 + w
            cx = cx + (p.x + q.x) * w
            cy = cy + (p.y + q.y) * w
        k = (a2 * 3).inverse()
        return Point(cx * k, cy * k)

    def transformed(self, m: IsometryMatrix) -> "Polygon":
        return Polygon(tuple(m.apply(v) for v in self.vertices))

    def locate(self, p: Point) -> str:
        return point_in_polygon(self, p)

    def bbox(self):
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def is_simple(self) -> bool:
        es = list(self.edges())
        n = len(es)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if segments_intersect(*es[i], *es[j]):
                    return False
        return True


def _signed_area2(vs: Sequence[Point]) -> QS3:
    s = ZERO
    for i in range(len(vs)):
        s = s + vs[i].cross(vs[(i + 1) % len(vs)])
    return s


def polygon_area(poly: Polygon) -> QS3:
    return poly.area()


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (on_segment(c, a, b) or on_segment(d, a, b)
            or on_segment(a, c, d) or on_segment(b, c, d))


def point_in_polygon(poly: Polygon, p: Point) -> str:
    """Exact location of p: inside, boundary or outside (crossing number)."""
    inside = False
    for a, b in poly.edges():
        if on_segment(p, a, b):
            return BOUNDARY
        ay, by = compare(a.y, p.y) > 0, compare(b.y, p.y) > 0
        if ay != by:
            # does the edge cross the horizontal ray to the right of p?
            o = orient(a, b, p)
            if (by and o > 0) or (ay and o < 0):
                inside = not inside
    return INSIDE if inside else OUTSIDE


def triangle_clip_area(tri: Sequence[Point], poly: Sequence[Point]) -> QS3:
    """Area of (convex, ccw) tri intersected with convex ccw poly."""
    out = list(poly)
    n = len(tri)
    for i in range(n):
        a, b = tri[i], tri[(i + 1) % n]
        inp, out = out, []
        if not inp:
            break
        for j in range(len(inp)):
            cur, prev = inp[j], inp[j - 1]
            cin = orient(a, b, cur) >= 0
            pin = orient(a, b, prev) >= 0
            if cin:
                if not pin:
                    out.append(_line_cross(prev, cur, a, b))
                out.append(cur)
            elif pin:
                out.append(_line_cross(prev, cur, a, b))
    if len(out) < 3:
        return ZERO
    return _signed_area2(out) * HALF


def _line_cross(p: Point, q: Point, a: Point, b: Point) -> Point:
    d = q - p
    e = b - a
    t = (a - p).cross(e) / d.cross(e)
    return p + d.scale(t)


def triangulate(poly: Polygon) -> list:
    """Ear-clipping triangulation of a simple ccw polygon (exact)."""
    vs = list(poly.vertices)
    tris = []
    guard = 0
    while len(vs) > 3:
        n = len(vs)
        for i in range(n):
            a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
            if orient(a, b, c) <= 0:
                continue
            if any(_in_closed_triangle(p, a, b, c) for p in vs if p not in (a, b, c)):
                continue
            tris.append((a, b, c))
            del vs[i]
            break
        else:
            # only collinear remnants left: drop a straight vertex
            for i in range(n):
                if orient(vs[i - 1], vs[i], vs[(i + 1) % n]) == 0:
                    del vs[i]
                    break
            else:
                raise DegeneratePolygon("triangulation failed")
        guard += 1
        if guard > 10000:
            raise DegeneratePolygon("triangulation did not terminate")
    if orient(*vs) > 0:
        tris.append(tuple(vs))
    return tris


def _in_closed_triangle(p, a, b, c) -> bool:
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


def merge_collinear(vs: Iterable[Point]) -> list:
    """Drop vertices whose two incident edges are collinear and same-direction."""
    vs = list(vs)
    changed = True
    while changed and len(vs) > 3:
        changed = False
        for i in range(len(vs)):
            a, b, c = vs[i - 1], vs[i], vs[(i + 1) % len(vs)]
            if orient(a, b, c) == 0 and (b - a).dot(c - b).sign() > 0:
                del vs[i]
                changed = True
                break
    return vs
