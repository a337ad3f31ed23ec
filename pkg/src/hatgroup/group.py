"""The symmetry group Gamma of the Kitegrid and its subgroups.

An element is stored as g = T(tx*t1 + ty*t2) o R6^rot o beta^flip, where R6 is
the rotation by 60 degrees about the Kite tail (the origin), beta the
reflection in the tail-head axis (the x-axis) and t1, t2 the lattice basis
t1 = R6^-1 R3 R6^-1, t2 = R6^-2 R3.  Group arithmetic is integer-only; the
point-group action on lattice coordinates is read off the exact geometry once
at import time.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable

from .exact import HALF, ORIGIN, ONE, ZERO, IsometryMatrix, Point, QS3

KITE_TAIL = ORIGIN
KITE_HEAD = Point.of(2, 0)

_R6_GEO = IsometryMatrix.rotation(1, KITE_TAIL)
_R3_GEO = IsometryMatrix.rotation(2, KITE_HEAD)
_BETA_GEO = IsometryMatrix.reflection_x()

T1_VEC = (_R6_GEO.inverse() @ _R3_GEO @ _R6_GEO.inverse()).offset
T2_VEC = (_R6_GEO.inverse() @ _R6_GEO.inverse() @ _R3_GEO).offset


def lattice_coords(v: Point) -> tuple:
    """Coordinates (x, y) of v = x*t1 + y*t2 (exact, possibly non-integral)."""
    det = T1_VEC.cross(T2_VEC)
    x = v.cross(T2_VEC) / det
    y = T1_VEC.cross(v) / det
    return x, y


def _int_coords(v: Point) -> tuple:
    x, y = lattice_coords(v)
    if not (x.is_rational() and y.is_rational() and x.a.denominator == 1 and y.a.denominator == 1):
        raise ValueError(f"{v} is not a lattice vector")
    return int(x.a), int(y.a)


def _derive_point_group():
    # integer matrix of a linear map in basis (t1, t2), columns = images of t1, t2
    mats = {}
    for flip in (0, 1):
        for rot in range(6):
            m = IsometryMatrix.rotation(rot)
            if flip:
                m = m @ _BETA_GEO
            c1 = _int_coords(m.apply_linear(T1_VEC))
            c2 = _int_coords(m.apply_linear(T2_VEC))
            mats[rot, flip] = ((c1[0], c2[0]), (c1[1], c2[1]))
    return mats


POINT_GROUP = _derive_point_group()


@dataclass(frozen=True, order=True)
class GammaElement:
    tx: int = 0
    ty: int = 0
    rot: int = 0
    flip: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rot", self.rot % 6)
        if self.flip not in (0, 1):
            raise ValueError("flip must be 0 or 1")

    def __mul__(self, o: "GammaElement") -> "GammaElement":
        (a, b), (c, d) = POINT_GROUP[self.rot, self.flip]
        tx = self.tx + a * o.tx + b * o.ty
        ty = self.ty + c * o.tx + d * o.ty
        rot = self.rot - o.rot if self.flip else self.rot + o.rot
        return GammaElement(tx, ty, rot, self.flip ^ o.flip)

    def inverse(self) -> "GammaElement":
        # (T A)^-1 = A^-1 T^-1 = T(-A^-1 t) A^-1
        rot = self.rot if self.flip else -self.rot
        (a, b), (c, d) = POINT_GROUP[rot % 6, self.flip]
        return GammaElement(-(a * self.tx + b * self.ty), -(c * self.tx + d * self.ty), rot, self.flip)

    def __pow__(self, n: int) -> "GammaElement":
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out * base
        return out

    @property
    def is_identity(self) -> bool:
        return self == IDENTITY

    def astuple(self) -> tuple:
        return (self.tx, self.ty, self.rot, self.flip)

    def translation_vector(self) -> Point:
        return T1_VEC.scale(self.tx) + T2_VEC.scale(self.ty)

    def to_isometry(self) -> IsometryMatrix:
        return to_isometry(self)

    def apply(self, p: Point) -> Point:
        return to_isometry(self).apply(p)

    def __str__(self):
        return f"s^{self.flip} r^{self.rot} t({self.tx},{self.ty})"

    def __repr__(self):
        return f"GammaElement({self.tx}, {self.ty}, {self.rot}, {self.flip})"


IDENTITY = GammaElement()
R6 = GammaElement(0, 0, 1, 0)
BETA = GammaElement(0, 0, 0, 1)


@lru_cache(maxsize=None)
def _point_part(rot: int, flip: int) -> IsometryMatrix:
    m = IsometryMatrix.rotation(rot)
    return m @ _BETA_GEO if flip else m


def to_isometry(g: GammaElement) -> IsometryMatrix:
    lin = _point_part(g.rot, g.flip)
    return IsometryMatrix(lin.linear, g.translation_vector())


def from_isometry(m: IsometryMatrix) -> GammaElement:
    """Inverse of to_isometry; raises ValueError if m is not in Gamma."""
    flip = 0 if m.det == 1 else 1
    for rot in range(6):
        if _point_part(rot, flip).linear == m.linear:
            tx, ty = _int_coords(m.offset)
            return GammaElement(tx, ty, rot, flip)
    raise ValueError("linear part is not in the point group D6")


R3 = from_isometry(_R3_GEO)
T1 = from_isometry(IsometryMatrix.translation(T1_VEC))
T2 = from_isometry(IsometryMatrix.translation(T2_VEC))
ALPHA = R6.inverse() * BETA
GAMMA = R3 * BETA

LETTERS = {
    "α": ALPHA, "alpha": ALPHA, "a": ALPHA,
    "β": BETA, "beta": BETA, "b": BETA,
    "γ": GAMMA, "gamma": GAMMA, "c": GAMMA,
    "R3": R3, "R3⁻¹": R3.inverse(), "R3^-1": R3.inverse(), "R3'": R3.inverse(),
    "R6": R6, "R6⁻¹": R6.inverse(), "R6^-1": R6.inverse(), "R6'": R6.inverse(),
}
COXETER_NAMES = ("α", "β", "γ")
COXETER_GENERATORS = (ALPHA, BETA, GAMMA)


class UnknownLetter(ValueError):
    pass


def tokenize_word(word) -> list:
    if isinstance(word, str):
        word = word.strip()
        if not word or word in ("1", "id", "e"):
            return []
        if "." in word:
            return [t.strip() for t in word.split(".") if t.strip()]
        # bare Greek letters may be written without separators
        if all(ch in "αβγ" for ch in word):
            return list(word)
        return [word]
    return list(word)


def eval_word(word) -> GammaElement:
    """Left-to-right product of the letters of word."""
    g = IDENTITY
    for tok in tokenize_word(word):
        try:
            g = g * LETTERS[tok]
        except KeyError:
            raise UnknownLetter(f"unknown letter {tok!r}") from None
    return g


_ELEM_RE = re.compile(r"^\s*s\^([01])\s+r\^(-?\d+)\s+t\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_element(text: str) -> GammaElement:
    """Accepts the canonical text form or a word."""
    m = _ELEM_RE.match(text)
    if m:
        flip, rot, tx, ty = (int(v) for v in m.groups())
        return GammaElement(tx, ty, rot, flip)
    return eval_word(text)


# ---------------------------------------------------------------- subgroups

GAMMA_PLUS, LATTICE, GAMMA_PRIME, GAMMA_FULL = "Γ⁺", "L", "Γ′", "Γ"
_SUB_ALIASES = {
    "Γ⁺": GAMMA_PLUS, "gamma+": GAMMA_PLUS, "G+": GAMMA_PLUS, "plus": GAMMA_PLUS,
    "L": LATTICE, "lattice": LATTICE,
    "Γ′": GAMMA_PRIME, "Γ'": GAMMA_PRIME, "gamma'": GAMMA_PRIME, "prime": GAMMA_PRIME,
    "Γ": GAMMA_FULL, "gamma": GAMMA_FULL, "G": GAMMA_FULL,
}


def subgroup_name(sub: str) -> str:
    try:
        return _SUB_ALIASES[sub]
    except KeyError:
        raise ValueError(f"unknown subgroup {sub!r}") from None


def subgroup_membership(g: GammaElement, sub: str) -> bool:
    sub = subgroup_name(sub)
    if sub == GAMMA_FULL:
        return True
    if g.flip:
        return False
    if sub == GAMMA_PLUS:
        return True
    if sub == LATTICE:
        return g.rot == 0
    return g.rot in (0, 3)


# ------------------------------------------------------------ classification

@dataclass(frozen=True)
class IsometryClass:
    kind: str  # identity, translation, rotation, reflection, glide
    order: int = 1
    center: Point | None = None
    axis_point: Point | None = None
    axis_direction: Point | None = None
    glide_vector: Point | None = None


def _axis_direction(rot: int) -> Point:
    # R6^rot o beta is the reflection in the line at angle rot*30 degrees
    dirs = [
        (ONE, ZERO), (QS3(0, HALF.a), HALF), (HALF, QS3(0, HALF.a)),
        (ZERO, ONE), (-HALF, QS3(0, HALF.a)), (QS3(0, -HALF.a), HALF),
    ]
    x, y = dirs[rot % 6]
    return Point(x, y)


def classify(g: GammaElement) -> IsometryClass:
    t = g.translation_vector()
    if not g.flip:
        if g.rot == 0:
            if g.tx == 0 and g.ty == 0:
                return IsometryClass("identity")
            return IsometryClass("translation", order=0)
        m = to_isometry(g)
        # fixed point c: (I - A) c = t
        (a, b), (c, d) = m.linear
        p, q, r, s = ONE - a, -b, -c, ONE - d
        det = p * s - q * r
        cx = (s * t.x - q * t.y) / det
        cy = (p * t.y - r * t.x) / det
        return IsometryClass("rotation", order=6 // gcd(g.rot, 6), center=Point(cx, cy))
    u = _axis_direction(g.rot)
    along = t.dot(u)
    perp = t - u.scale(along)
    base = perp.scale(HALF)
    if along == ZERO:
        return IsometryClass("reflection", order=2, axis_point=base, axis_direction=u)
    return IsometryClass("glide", order=0, axis_point=base, axis_direction=u,
                         glide_vector=u.scale(along))


# -------------------------------------------------------------- Cayley balls

class EmptyGenerators(ValueError):
    pass


def cayley_ball(generators: Iterable[GammaElement], radius: int) -> dict:
    """Elements of word length <= radius, mapped to their word length."""
    gens = list(generators)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if not gens and radius > 0:
        raise EmptyGenerators("empty generator set")
    dist = {IDENTITY: 0}
    frontier = [IDENTITY]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in dist:
                    dist[h] = r
                    nxt.append(h)
        frontier = nxt
    return dist


def cayley_sphere_sizes(generators, radius: int) -> list:
    d = cayley_ball(generators, radius)
    sizes = [0] * (radius + 1)
    for v in d.values():
        sizes[v] += 1
    return sizes


def shortlex_word(g: GammaElement, max_length: int = 40) -> list:
    """Shortlex-least word over (α, β, γ) for g, by breadth-first search."""
    if g == IDENTITY:
        return []
    parent = {IDENTITY: None}
    queue = deque([IDENTITY])
    while queue:
        h = queue.popleft()
        depth = _depth(parent, h)
        if depth >= max_length:
            break
        for name, s in zip(COXETER_NAMES, COXETER_GENERATORS):
            k = h * s
            if k in parent:
                continue
            parent[k] = (h, name)
            if k == g:
                out = []
                while parent[k] is not None:
                    k, letter = parent[k]
                    out.append(letter)
                return out[::-1]
            queue.append(k)
    raise ValueError(f"no word of length <= {max_length} for {g}")


def _depth(parent, h) -> int:
    d = 0
    while parent[h] is not None:
        h = parent[h][0]
        d += 1
    return d


def word_string(letters) -> str:
    return ".".join(letters) if letters else "1"
