"""Exact rational geometry of the Farey triangle and its transfer map.

The triangle is T = {(x, y) in [0,1]^2 : x + y > 1}.  The transfer map

    T(x, y) = (y, ky - x),   k = floor((1 + x) / y),

permutes T, acting as the unimodular matrix (0 1; -1 k) on the slab where
the branch index floor((1+x)/y) equals k.  Scaled by Q, the coprime lattice
points of T are exactly the consecutive-denominator pairs of F_Q, and the
branch index along their orbit reproduces the nu_2 string.

Everything in this module is exact: coordinates are Fractions, areas are
Fractions, and no floating point appears anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Point(NamedTuple):
    x: Fraction
    y: Fraction


def _pt(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise vertex list; empty tuple means the empty region."""

    vertices: tuple[Point, ...]

    def __bool__(self) -> bool:
        return bool(self.vertices)

    def contains(self, p: Point) -> bool:
        """Closed membership test."""
        vs = self.vertices
        if not vs:
            return False
        px, py = Fraction(p[0]), Fraction(p[1])
        n = len(vs)
        for i in range(n):
            ax, ay = vs[i]
            bx, by = vs[(i + 1) % n]
            if (bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0:
                return False
        return True

    def centroid(self) -> Point:
        vs = self.vertices
        if not vs:
            raise ValueError("empty polygon has no centroid")
        n = len(vs)
        return Point(sum(v.x for v in vs) / n, sum(v.y for v in vs) / n)


EMPTY = ConvexPolygon(())


def polygon(points: Iterable[tuple]) -> ConvexPolygon:
    return _normalize([_pt(x, y) for x, y in points])


def _raw_area2(vs: Sequence[Point]) -> Fraction:
    """Twice the signed area."""
    n = len(vs)
    s = Fraction(0)
    for i in range(n):
        ax, ay = vs[i]
        bx, by = vs[(i + 1) % n]
        s += ax * by - bx * ay
    return s


def _normalize(vs: list[Point]) -> ConvexPolygon:
    """Drop repeated and collinear vertices; empty out zero-area chains."""
    if len(vs) >= 2:
        out = [vs[0]]
        for v in vs[1:]:
            if v != out[-1]:
                out.append(v)
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        vs = out
    if len(vs) < 3 or _raw_area2(vs) == 0:
        return EMPTY
    changed = True
    while changed and len(vs) >= 3:
        changed = False
        n = len(vs)
        for i in range(n):
            a, b, c = vs[(i - 1) % n], vs[i], vs[(i + 1) % n]
            if (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) == 0:
                vs.pop(i)
                changed = True
                break
    if len(vs) < 3:
        return EMPTY
    return ConvexPolygon(tuple(vs))


def area(poly: ConvexPolygon) -> Fraction:
    """Exact area (shoelace)."""
    if not poly:
        return Fraction(0)
    return abs(_raw_area2(poly.vertices)) / 2


class HalfPlane(NamedTuple):
    """The set a*x + b*y <= c."""

    a: Fraction
    b: Fraction
    c: Fraction


def clip(poly: ConvexPolygon, half: tuple) -> ConvexPolygon:
    """Intersect a convex polygon with the half-plane a x + b y <= c."""
    if not poly:
        return EMPTY
    a, b, c = (Fraction(t) for t in half)
    vs = poly.vertices
    out: list[Point] = []
    n = len(vs)
    vals = [a * v.x + b * v.y - c for v in vs]
    for i in range(n):
        cur, nxt = vs[i], vs[(i + 1) % n]
        fc, fn = vals[i], vals[(i + 1) % n]
        if fc <= 0:
            out.append(cur)
        if (fc < 0 < fn) or (fn < 0 < fc):
            t = fc / (fc - fn)
            out.append(Point(cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)))
    return _normalize(out)


@dataclass(frozen=True)
class UnimodularMap:
    """Integer matrix (a b; c d) with det 1, acting on points as
    (x, y) -> (a x + b y, c x + d y)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("matrix must have determinant 1")

    def apply(self, p: Point) -> Point:
        x, y = Fraction(p[0]), Fraction(p[1])
        return Point(self.a * x + self.b * y, self.c * x + self.d * y)

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """self after other (matrix product self @ other)."""
        return UnimodularMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMap":
        return UnimodularMap(self.d, -self.b, -self.c, self.a)


IDENTITY_MAP = UnimodularMap(1, 0, 0, 1)


def branch_matrix(k: int) -> UnimodularMap:
    """Action of the transfer map on the branch-k slab: (x,y) -> (y, ky - x)."""
    return UnimodularMap(0, 1, -1, k)


def map_polygon(poly: ConvexPolygon, m: UnimodularMap) -> ConvexPolygon:
    """Image polygon; unimodularity keeps orientation and area."""
    if not poly:
        return EMPTY
    return ConvexPolygon(tuple(m.apply(v) for v in poly.vertices))


# ---------------------------------------------------------------------------
# the triangle and its slabs

def farey_triangle() -> ConvexPolygon:
    return ConvexPolygon((_pt(0, 1), _pt(1, 0), _pt(1, 1)))


def in_triangle(p: Point) -> bool:
    """Membership in T with its native boundary convention: the square's
    edges are closed, the hypotenuse x + y = 1 is excluded."""
    x, y = Fraction(p[0]), Fraction(p[1])
    return 0 <= x <= 1 and 0 <= y <= 1 and x + y > 1


def branch_index(p: Point, step: int = 1) -> int:
    """kappa_step(p): the branch index floor((1+x)/y) after step-1
    applications of the transfer map."""
    if step < 1:
        raise ValueError("step must be >= 1")
    for _ in range(step - 1):
        p = transfer(p)
    if not in_triangle(p):
        raise ValueError(f"point {p} is not in the Farey triangle")
    x, y = Fraction(p[0]), Fraction(p[1])
    return ((x.numerator + x.denominator) * y.denominator) // (x.denominator * y.numerator)


def transfer(p: Point) -> Point:
    """One step of the transfer map T(x,y) = (y, ky - x), k = floor((1+x)/y)."""
    if not in_triangle(p):
        raise ValueError(f"point {p} is not in the Farey triangle")
    x, y = Fraction(p[0]), Fraction(p[1])
    k = ((x.numerator + x.denominator) * y.denominator) // (x.denominator * y.numerator)
    return Point(y, k * y - x)


def itinerary(p: Point, depth: int) -> tuple[int, ...]:
    """The first `depth` branch indices along the orbit of p."""
    out = []
    for _ in range(depth):
        if not in_triangle(p):
            raise ValueError(f"orbit left the Farey triangle at {p}")
        x, y = Fraction(p[0]), Fraction(p[1])
        k = ((x.numerator + x.denominator) * y.denominator) // (x.denominator * y.numerator)
        out.append(k)
        p = Point(y, k * y - x)
    return tuple(out)


def branch_region(k: int) -> ConvexPolygon:
    """The closed polygon carrying branch index k (interior where
    floor((1+x)/y) = k); area 1/6 for k = 1, else 4/(k(k+1)(k+2))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    poly = clip(farey_triangle(), (-1, k, 1))  # k y <= 1 + x
    return clip(poly, (1, -(k + 1), -1))  # (k+1) y >= 1 + x

def tail_region(k: int) -> ConvexPolygon:
    """The closed polygon where the branch index is at least k, i.e.
    T intersected with k y <= 1 + x.  Area 2/(k(k+1)) for k >= 2; for k = 1
    this is all of T with area 1/2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return clip(farey_triangle(), (-1, k, 1))


# ---------------------------------------------------------------------------
# cylinder cells

@dataclass(frozen=True)
class CylinderCell:
    """Maximal polygon on which a fixed branch itinerary holds.

    region lives in original coordinates; forward_image is its image under
    depth-1 steps of the transfer map; composed_map is the product of the
    branch matrices along the itinerary (full depth)."""

    itinerary: tuple[int, ...]
    region: ConvexPolygon
    forward_image: ConvexPolygon
    composed_map: UnimodularMap

    @property
    def depth(self) -> int:
        return len(self.itinerary)


def _branch_range(poly: ConvexPolygon, kappa_max: int) -> tuple[int, int]:
    """Range of branch indices with mass inside poly: (1+x)/y is a ratio of
    affine functions, so its extrema over a convex polygon sit at vertices.
    Vertices with y = 0 push the upper end to kappa_max."""
    lo_f: Optional[Fraction] = None
    hi_unbounded = False
    hi_f: Optional[Fraction] = None
    for v in poly.vertices:
        if v.y == 0:
            hi_unbounded = True
            continue
        r = (1 + v.x) / v.y
        if lo_f is None or r < lo_f:
            lo_f = r
        if hi_f is None or r > hi_f:
            hi_f = r
    if lo_f is None:
        return (1, 0)  # degenerate: no branches
    lo = max(1, lo_f.numerator // lo_f.denominator)
    if hi_unbounded:
        return lo, kappa_max
    hi = hi_f.numerator // hi_f.denominator
    if Fraction(hi) == hi_f and hi > 1:
        # boundary value exactly an integer: the slab above it has no mass
        hi -= 1
    return lo, min(hi, kappa_max)


def enumerate_cells(depth: int, kappa_max: int) -> list[CylinderCell]:
    """All depth-`depth` cylinder cells whose itinerary entries are all at
    most kappa_max and whose region has positive area, in lexicographic
    itinerary order.

    DFS on forward images: the running polygon P is the image of the cell
    under the branch maps applied so far; the child for branch k clips P to
    the branch-k slab and pushes it forward by (0 1; -1 k)."""
    if depth < 1 or kappa_max < 1:
        raise ValueError("depth and kappa_max must be >= 1")
    out: list[CylinderCell] = []

    def rec(word: tuple[int, ...], P: ConvexPolygon, composed: UnimodularMap) -> None:
        d = len(word)
        if d == depth:
            inv = composed.inverse()
            region = map_polygon(P, inv)
            fwd = map_polygon(P, branch_matrix(word[-1]).inverse())
            out.append(CylinderCell(word, region, fwd, composed))
            return
        lo, hi = _branch_range(P, kappa_max)
        rem = P  # P carries no mass below branch lo by construction
        for k in range(lo, hi + 1):
            piece = clip(rem, (1, -(k + 1), -1))  # (k+1) y >= 1 + x
            if piece and area(piece) > 0:
                rec(word + (k,), map_polygon(piece, branch_matrix(k)), branch_matrix(k).compose(composed))
            rem = clip(rem, (-1, k + 1, 1))  # keep (k+1) y <= 1 + x
            if not rem:
                break

    rec((), farey_triangle(), IDENTITY_MAP)
    return out


def covered_area(cells: Iterable[CylinderCell]) -> Fraction:
    return sum((area(c.region) for c in cells), Fraction(0))


# ---------------------------------------------------------------------------
# visible lattice points

_spf_cache: "np.ndarray | None" = None


def _grow_spf(limit: int):
    """Smallest-prime-factor table up to limit."""
    global _spf_cache
    import numpy as np

    if _spf_cache is not None and len(_spf_cache) > limit:
        return _spf_cache
    limit = max(limit, 4096)
    spf = np.zeros(limit + 1, dtype=np.int64)
    spf[1] = 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i::i][spf[i::i] == 0] = i
    _spf_cache = spf
    return spf


def _distinct_primes(n: int, spf) -> list[int]:
    out = []
    while n > 1:
        p = int(spf[n])
        out.append(p)
        while n % p == 0:
            n //= p
    return out


def _coprime_count_in_range(a0: int, a1: int, primes: list[int]) -> int:
    """#{a in [a0, a1] : no p in primes divides a} by inclusion-exclusion."""
    if a1 < a0:
        return 0
    total = 0
    m = len(primes)
    for mask in range(1 << m):
        d = 1
        bits = 0
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                d *= primes[i]
                bits += 1
            mm >>= 1
            i += 1
        cnt = a1 // d - (a0 - 1) // d
        total += -cnt if bits % 2 else cnt
    return total


def _row_span(poly: ConvexPolygon, y: Fraction) -> Optional[tuple[Fraction, Fraction]]:
    """Exact x-extent of the polygon at height y, or None if the line misses."""
    xs: list[Fraction] = []
    vs = poly.vertices
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        ylo, yhi = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
        if y < ylo or y > yhi:
            continue
        if a.y == b.y:
            xs.extend((a.x, b.x))
        else:
            t = (y - a.y) / (b.y - a.y)
            xs.append(a.x + t * (b.x - a.x))
    if not xs:
        return None
    return min(xs), max(xs)


def visible_count(poly: ConvexPolygon, Q: int) -> int:
    """Number of coprime integer pairs (a, b) with (a/Q, b/Q) in the closed
    polygon, except that points on the line x + y = 1 (the open hypotenuse
    of the triangle's boundary convention) are excluded.

    Row sweep over b with a per-row divisor inclusion-exclusion count."""
    if Q < 1:
        raise ValueError("order must be >= 1")
    if not poly:
        return 0
    spf = _grow_spf(Q)
    ys = [v.y for v in poly.vertices]
    lo_frac = min(ys) * Q
    hi_frac = max(ys) * Q
    b_lo = -((-lo_frac.numerator) // lo_frac.denominator)  # ceil
    b_hi = hi_frac.numerator // hi_frac.denominator  # floor
    total = 0
    for b in range(max(b_lo, 0), b_hi + 1):
        span = _row_span(poly, Fraction(b, Q))
        if span is None:
            continue
        xlo, xhi = span[0] * Q, span[1] * Q
        a0 = -((-xlo.numerator) // xlo.denominator)
        a1 = xhi.numerator // xhi.denominator
        if a1 < a0:
            continue
        if b == 0:
            # gcd(a, 0) = a: only a = 1 is coprime
            cnt = 1 if a0 <= 1 <= a1 else 0
            if a0 <= Q <= a1 and Q == 1:
                cnt -= 1  # (1, 0) sits on x + y = Q only when Q = 1
            total += cnt
            continue
        primes = _distinct_primes(b, spf)
        cnt = _coprime_count_in_range(a0, a1, primes)
        a_h = Q - b  # the excluded hypotenuse point of this row, if present
        if a0 <= a_h <= a1 and a_h >= 0:
            ok = a_h == 0 and b == 1
            if a_h > 0:
                ok = all(a_h % p for p in primes)
            if ok:
                cnt -= 1
        total += cnt
    return total


# ---------------------------------------------------------------------------
# cell cache file

def _frac_token(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def save_cells(path, cells: Sequence[CylinderCell], depth: int, kappa_max: int) -> None:
    """Write cells as decimal-free text: per cell one line with the itinerary
    as space-separated integers followed by the region vertices as x,y pairs
    of p/q rationals."""
    with open(path, "w") as fh:
        fh.write("# fareylab cylinder cells\n")
        fh.write(f"# depth={depth} kappa_max={kappa_max}\n")
        for c in cells:
            itin = " ".join(str(k) for k in c.itinerary)
            verts = " ".join(
                f"{_frac_token(v.x)},{_frac_token(v.y)}" for v in c.region.vertices
            )
            fh.write(f"{itin} {verts}\n")


def load_cells(path) -> tuple[list[CylinderCell], int, int]:
    """Read a cell cache written by save_cells, rebuilding forward images and
    composed maps from the itineraries. Returns (cells, depth, kappa_max)."""
    depth = kappa_max = -1
    cells: list[CylinderCell] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("depth="):
                        depth = int(token[6:])
                    elif token.startswith("kappa_max="):
                        kappa_max = int(token[10:])
                continue
            itin: list[int] = []
            verts: list[Point] = []
            for token in line.split():
                if "," in token:
                    xs, ys = token.split(",")
                    xn, xd = xs.split("/")
                    yn, yd = ys.split("/")
                    verts.append(Point(Fraction(int(xn), int(xd)), Fraction(int(yn), int(yd))))
                else:
                    itin.append(int(token))
            word = tuple(itin)
            region = ConvexPolygon(tuple(verts))
            fwd = region
            composed = IDENTITY_MAP
            for k in word[:-1]:
                m = branch_matrix(k)
                fwd = map_polygon(fwd, m)
                composed = m.compose(composed)
            composed = branch_matrix(word[-1]).compose(composed)
            cells.append(CylinderCell(word, region, fwd, composed))
    if depth < 0 or kappa_max < 0:
        raise ValueError(f"cell cache {path} is missing its depth/kappa_max header")
    return cells, depth, kappa_max
