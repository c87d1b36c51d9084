"""Lattice polytopes in dimension <= 4 with exact integer predicates.

Hulls are computed in the affine hull of the input (projected onto pivot
coordinates, which is an affine isomorphism onto its image): monotone chain
in 2D, beneath-beyond with integer hyperplanes in 3D and 4D. The boundary is
kept as a list of simplices, which is what the volume fan needs; true facets
are recovered by grouping simplices by their (gcd-normalized) hyperplane.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from . import _intmath

MAX_DIM = 4

Point = tuple[int, ...]


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane normal . x <= offset, in projected coordinates."""

    normal: tuple[int, ...]
    offset: int
    vertices: frozenset[int]  # indices into LatticePolytope.vertices


@dataclass(frozen=True, eq=False)
class LatticePolytope:
    ambient_dim: int
    vertices: tuple[Point, ...]
    affine_dim: int
    _coords: tuple[int, ...] = field(repr=False, default=())
    # boundary simplices (indices into vertices) in projected coordinates
    _simplices: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    _extra: tuple[Point, ...] = field(repr=False, default=())

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return f"LatticePolytope(dim={self.affine_dim}/{self.ambient_dim}, vertices={list(self.vertices)})"

    def project(self, p: Sequence[int]) -> Point:
        return tuple(p[c] for c in self._coords)

    @cached_property
    def _boundary_points(self) -> tuple[Point, ...]:
        # projected vertices followed by non-extreme points that appear in the triangulation
        return tuple(self.project(v) for v in self.vertices) + self._extra

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        """True facets (codimension one inside the affine hull)."""
        k = self.affine_dim
        pts = [self.project(v) for v in self.vertices]
        if k == 0:
            return ()
        if k == 1:
            lo, hi = (0, 1) if pts[0][0] < pts[1][0] else (1, 0)
            return (
                Facet((-1,), -pts[lo][0], frozenset([lo])),
                Facet((1,), pts[hi][0], frozenset([hi])),
            )
        planes = {}
        allpts = self._boundary_points
        interior = _interior_reference(pts)
        for simplex in self._simplices:
            normal, offset = _oriented_plane([allpts[i] for i in simplex], interior)
            planes[(normal, offset)] = None
        out = []
        for normal, offset in planes:
            verts = frozenset(i for i, p in enumerate(pts) if _dot(normal, p) == offset)
            out.append(Facet(normal, offset, verts))
        return tuple(sorted(out, key=lambda f: (f.normal, f.offset)))

    def faces(self) -> list[frozenset[int]]:
        """All nonempty faces, as vertex-index sets, including the polytope itself."""
        whole = frozenset(range(len(self.vertices)))
        found = {whole}
        frontier = {f.vertices for f in self.facets}
        while frontier:
            found |= frontier
            new = set()
            for a, b in itertools.combinations(found, 2):
                c = a & b
                if c and c not in found:
                    new.add(c)
            frontier = new
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def face_dimension(self, face: Iterable[int]) -> int:
        return _intmath.affine_rank([self.vertices[i] for i in face])

    def contains(self, p: Sequence[int]) -> bool:
        return self._locate(p) >= 0

    def _locate(self, p: Sequence[int]) -> int:
        """-1 outside, 0 on the relative boundary, 1 in the relative interior."""
        p = tuple(p)
        v0 = self.vertices[0]
        # must lie in the affine hull
        if self.affine_dim < self.ambient_dim:
            rows = [_sub(v, v0) for v in self.vertices[1:]]
            if _intmath.rank(rows + [_sub(p, v0)]) > self.affine_dim:
                return -1
        if self.affine_dim == 0:
            return 1 if p == v0 else -1
        q = self.project(p)
        on_boundary = False
        for f in self.facets:
            s = _dot(f.normal, q)
            if s > f.offset:
                return -1
            if s == f.offset:
                on_boundary = True
        return 0 if on_boundary else 1

    def lattice_points(self) -> list[Point]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        return [p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))) if self.contains(p)]

    def normalized_volume(self) -> int:
        return normalized_volume(self)


def _interior_reference(points: Sequence[Point]) -> tuple[tuple[int, ...], int]:
    """Scaled centroid (sum of points, count) of a full-dimensional point set."""
    total = tuple(sum(c) for c in zip(*points))
    return total, len(points)


def _oriented_plane(simplex: Sequence[Point], interior) -> tuple[tuple[int, ...], int]:
    normal = _intmath.hyperplane_normal(simplex)
    offset = _dot(normal, simplex[0])
    total, count = interior
    if _dot(normal, total) > count * offset:
        normal = [-x for x in normal]
        offset = -offset
    return tuple(normal), offset


def _hull_1d(pts: list[Point]) -> tuple[list[int], list[tuple[int, ...]]]:
    lo = min(range(len(pts)), key=lambda i: pts[i])
    hi = max(range(len(pts)), key=lambda i: pts[i])
    return [lo, hi], [(lo,), (hi,)]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts: list[Point]) -> tuple[list[int], list[tuple[int, ...]]]:
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and _cross(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and _cross(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    ring = lower[:-1] + upper[:-1]
    edges = [(ring[j], ring[(j + 1) % len(ring)]) for j in range(len(ring))]
    return ring, edges


def _hull_general(pts: list[Point], k: int) -> tuple[list[int], list[tuple[int, ...]]]:
    """Beneath-beyond in Z^k for a full-dimensional point set."""
    # initial simplex: greedily add affinely independent points
    base = [0]
    for i in range(1, len(pts)):
        if _intmath.affine_rank([pts[j] for j in base] + [pts[i]]) == len(base):
            base.append(i)
            if len(base) == k + 1:
                break
    interior = _interior_reference([pts[i] for i in base])
    facets: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}

    def add_facet(idx):
        idx = tuple(sorted(idx))
        facets[idx] = _oriented_plane([pts[i] for i in idx], interior)

    for drop in range(k + 1):
        add_facet([b for j, b in enumerate(base) if j != drop])

    in_base = set(base)
    for i, p in enumerate(pts):
        if i in in_base:
            continue
        visible = [f for f, (nrm, off) in facets.items() if _dot(nrm, p) > off]
        if not visible:
            continue
        ridge_count: dict[tuple[int, ...], int] = {}
        for f in visible:
            for ridge in itertools.combinations(f, k - 1):
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        for f in visible:
            del facets[f]
        for ridge, cnt in ridge_count.items():
            if cnt == 1:
                add_facet(ridge + (i,))

    simplices = list(facets)
    used = sorted({i for s in simplices for i in s})
    # drop points that sit in the relative interior of a facet or lower face
    planes_at: dict[int, set] = {i: set() for i in used}
    for s, (nrm, off) in facets.items():
        for i in s:
            planes_at[i].add(nrm)
    extreme = [i for i in used if _intmath.rank([list(n) for n in planes_at[i]]) == k]
    return extreme, simplices


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points have inconsistent dimensions")
    if d > MAX_DIM:
        raise ValueError(f"ambient dimension {d} exceeds the cap of {MAX_DIM}")
    if d == 0:
        raise ValueError("points must have positive dimension")
    p0 = pts[0]
    diffs = [_sub(p, p0) for p in pts[1:]]
    k = _intmath.rank(diffs) if diffs else 0
    coords = tuple(_intmath.pivot_columns(diffs)) if k else ()
    proj = [tuple(p[c] for c in coords) for p in pts]
    if k == 0:
        return LatticePolytope(d, (p0,), 0, coords, (), ())
    if k == 1:
        ext, simplices = _hull_1d(proj)
    elif k == 2:
        ext, simplices = _hull_2d(proj)
    else:
        ext, simplices = _hull_general(proj, k)
    ext = sorted(ext, key=lambda i: pts[i])
    vertices = tuple(pts[i] for i in ext)
    # re-index simplices against (vertices + extra non-extreme points)
    index = {i: j for j, i in enumerate(ext)}
    extra_ids = sorted({i for s in simplices for i in s if i not in index})
    for j, i in enumerate(extra_ids):
        index[i] = len(ext) + j
    extra = tuple(proj[i] for i in extra_ids)
    simp = tuple(tuple(index[i] for i in s) for s in simplices)
    return LatticePolytope(d, vertices, k, coords, simp, extra)


def newton_polytope(f) -> LatticePolytope:
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    return convex_hull(f.support)


def normalized_volume(P: LatticePolytope) -> int:
    """d! times the Euclidean volume; 0 unless P is full-dimensional."""
    d = P.ambient_dim
    if P.affine_dim < d:
        return 0
    if d == 1:
        return P.vertices[-1][0] - P.vertices[0][0]
    pts = P._boundary_points
    # vertices are sorted lexicographically, so index 0 is the least one
    v0 = pts[0]
    total = 0
    for s in P._simplices:
        if 0 in s:
            continue
        total += abs(_intmath.det([_sub(pts[i], v0) for i in s]))
    return total


def lattice_point_counts(P: LatticePolytope) -> tuple[int, int]:
    """(interior, boundary) lattice point counts of a polygon in Z^2."""
    if P.ambient_dim != 2:
        raise ValueError("lattice point counts are implemented for d = 2 only")
    interior = boundary = 0
    lo = [min(v[i] for v in P.vertices) for i in range(2)]
    hi = [max(v[i] for v in P.vertices) for i in range(2)]
    for p in itertools.product(range(lo[0], hi[0] + 1), range(lo[1], hi[1] + 1)):
        loc = P._locate(p)
        if loc < 0:
            continue
        if loc == 1 and P.affine_dim == 2:
            interior += 1
        else:
            boundary += 1
    return interior, boundary


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("Minkowski sum of polytopes in different dimensions")
    return convex_hull(tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices)


def mixed_volume(*polytopes: LatticePolytope) -> int:
    """Mixed volume normalized so that MV(P, ..., P) = normalized_volume(P)."""
    if len(polytopes) == 1 and not isinstance(polytopes[0], LatticePolytope):
        polytopes = tuple(polytopes[0])
    d = len(polytopes)
    if d == 0 or any(P.ambient_dim != d for P in polytopes):
        raise ValueError("mixed volume needs d polytopes in ambient dimension d")
    if d > MAX_DIM:
        raise ValueError(f"ambient dimension {d} exceeds the cap of {MAX_DIM}")
    sums: dict[tuple[int, ...], LatticePolytope] = {}
    total = 0
    for r in range(1, d + 1):
        for subset in itertools.combinations(range(d), r):
            if r == 1:
                S = polytopes[subset[0]]
            else:
                S = minkowski_sum(sums[subset[:-1]], polytopes[subset[-1]])
            sums[subset] = S
            total += (-1) ** (d - r) * normalized_volume(S)
    mv, rem = divmod(total, factorial(d))
    assert rem == 0, "inclusion-exclusion produced a non-integral mixed volume"
    return mv
