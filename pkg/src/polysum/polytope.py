"""V-polytopes over the rationals, their facets and face lattices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from operator import mul
from typing import Iterable, Optional, Sequence

from .errors import GeometryError, PreconditionError
from .exact import (QVec, bareiss_rank, integer_rows, inverse,
                    nullspace, primitive, qvec, rref, vsub)
from .report import VerifierReport


@dataclass(frozen=True)
class Facet:
    """``normal . x <= offset`` on the polytope, tight exactly on ``vertices``."""

    normal: QVec
    offset: Fraction
    vertices: frozenset


@dataclass(frozen=True, order=True)
class Face:
    dim: int
    vertices: frozenset

    def __repr__(self):
        return f"Face(dim={self.dim}, vertices={sorted(self.vertices)})"


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _dd_facets(pts: Sequence[Sequence[int]], k: int) -> list[tuple[tuple[int, ...], int]]:
    """Facets of the hull of integer points spanning R^k, by double description.

    Each point p becomes the constraint ``b - a.p >= 0`` on the homogenized
    cone of valid inequalities ``(b, -a)``; its extreme rays are the facets.
    Returns ``(ray, tight_mask)`` pairs, ``ray = (b, -a_1, ..., -a_k)``.
    """
    gens = [(1,) + tuple(p) for p in pts]
    basis, rows = [], []
    for j, g in enumerate(gens):
        if bareiss_rank(rows + [g]) > len(rows):
            rows.append(g)
            basis.append(j)
            if len(basis) == k + 1:
                break
    if len(basis) != k + 1:
        raise GeometryError("points do not span the expected dimension")
    inv = inverse(rows)
    rays = []
    all_basis = _mask(basis)
    for i in range(k + 1):
        h = primitive([inv[r][i] for r in range(k + 1)])
        rays.append((h, all_basis & ~(1 << basis[i])))

    in_basis = set(basis)
    for j, g in enumerate(gens):
        if j in in_basis:
            continue
        bit = 1 << j
        pos, neg, zero = [], [], []
        for h, z in rays:
            s = sum(a * b for a, b in zip(h, g))
            if s > 0:
                pos.append((h, z, s))
            elif s < 0:
                neg.append((h, z, s))
            else:
                zero.append((h, z | bit))
        if not neg:
            rays = [(h, z) for h, z, _ in pos] + zero
            continue
        zs = [z for _, z in rays]
        new = []
        for hp, zp, sp in pos:
            for hn, zn, sn in neg:
                inter = zp & zn
                if inter.bit_count() < k - 1:
                    continue
                # combinatorial adjacency: only the pair itself contains inter
                count = 0
                for z in zs:
                    if z & inter == inter:
                        count += 1
                        if count > 2:
                            break
                if count > 2:
                    continue
                h = [sp * b - sn * a for a, b in zip(hp, hn)]
                g0 = 0
                for x in h:
                    g0 = gcd(g0, x)
                new.append((tuple(x // g0 for x in h), inter | bit))
        rays = [(h, z) for h, z, _ in pos] + zero + new
    return rays


def facets_exhaustive(points: Sequence[QVec]) -> list[tuple[QVec, Fraction]]:
    """All facet hyperplanes of a full-dimensional point set by trying every
    d-subset of points. O(n^(d+1)); kept as an independent check of ``hull``.
    Returns sorted ``(primitive_normal, offset)`` pairs.
    """
    pts = [qvec(p) for p in points]
    d = len(pts[0])
    found = set()
    for subset in combinations(pts, d):
        sol = nullspace([list(p) + [Fraction(-1)] for p in subset])
        if len(sol) != 1:
            continue
        a, b = sol[0][:-1], sol[0][-1]
        if all(x == 0 for x in a):
            continue
        vals = [sum((x * y for x, y in zip(a, p)), Fraction(0)) - b for p in pts]
        if all(v <= 0 for v in vals):
            sign = 1
        elif all(v >= 0 for v in vals):
            sign = -1
        else:
            continue
        normal = primitive([sign * x for x in a])
        lam = next(Fraction(x) / (sign * y) for x, y in zip(normal, a) if y != 0)
        found.add((tuple(Fraction(x) for x in normal), sign * b * lam))
    return sorted(found)


class VPolytope:
    """Convex hull of finitely many rational points.

    The constructor reduces its input to the irredundant vertex list and
    computes the facets; lower-dimensional inputs are handled in coordinates
    of their affine hull.
    """

    def __init__(self, points: Iterable, name: str = ""):
        pts = sorted({qvec(p) for p in points})
        if not pts:
            raise GeometryError("a polytope needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise GeometryError("points have mixed ambient dimension")
        self.name = name
        self.ambient_dim = n

        p0 = pts[0]
        _, pivots = rref([vsub(p, p0) for p in pts[1:]]) if len(pts) > 1 else ([], [])
        self.dim = len(pivots)
        self._pivots = tuple(pivots)
        eqs = nullspace([list(p) + [Fraction(-1)] for p in pts])
        self.equations = tuple(
            (tuple(Fraction(x) for x in v[:-1]), Fraction(v[-1]))
            for v in (primitive(e) for e in eqs))

        if self.dim == 0:
            keep, raw = [0], []
        else:
            local = [[p[c] for c in pivots] for p in pts]
            scale = lcm(*(x.denominator for p in local for x in p))
            ints = [[int(x * scale) for x in p] for p in local]
            raw = _dd_facets(ints, self.dim)
            everything = (1 << len(pts)) - 1
            keep = []
            for j in range(len(pts)):
                meet = everything
                for _, z in raw:
                    if z >> j & 1:
                        meet &= z
                if meet == 1 << j:
                    keep.append(j)

        self.vertices: tuple[QVec, ...] = tuple(pts[j] for j in keep)
        remap = {j: i for i, j in enumerate(keep)}
        facets = []
        for h, z in raw:
            a_local = [-x for x in h[1:]]
            g = 0
            for x in a_local:
                g = gcd(g, x)
            normal = [Fraction(0)] * n
            for c, x in zip(pivots, a_local):
                normal[c] = Fraction(x // g)
            offset = Fraction(h[0], g * scale)
            verts = frozenset(remap[j] for j in _bits(z) if j in remap)
            facets.append(Facet(tuple(normal), offset, verts))
        facets.sort(key=lambda f: (f.normal, f.offset))
        self.facets: tuple[Facet, ...] = tuple(facets)

        self._scale = lcm(*(x.denominator for v in self.vertices for x in v))
        self._ivertices = [tuple(int(x * self._scale) for x in v) for v in self.vertices]

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<VPolytope{label} dim={self.dim} ambient={self.ambient_dim} vertices={len(self.vertices)}>"

    def __eq__(self, other):
        return isinstance(other, VPolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def vertex_index(self, point) -> int:
        return self.vertices.index(qvec(point))

    def argmax(self, c) -> frozenset:
        """Indices of the vertices maximizing ``c . x``."""
        ic = integer_rows([c])[0]
        vals = [sum(map(mul, ic, v)) for v in self._ivertices]
        best = max(vals)
        return frozenset(i for i, v in enumerate(vals) if v == best)

    @cached_property
    def lattice(self) -> "FaceLattice":
        return face_lattice(self)

    def transformed(self, matrix, name: Optional[str] = None) -> "VPolytope":
        pts = [tuple(sum((m * x for m, x in zip(row, v)), Fraction(0)) for row in matrix)
               for v in self.vertices]
        return VPolytope(pts, name=self.name if name is None else name)


def hull(points: Iterable) -> tuple[VPolytope, list[Facet]]:
    p = VPolytope(points)
    return p, list(p.facets)


class FaceLattice:
    """Faces (vertex-index sets) ordered by inclusion, with cover relations.

    ``faces`` is sorted by dimension, then by sorted vertex list. Index
    bookkeeping uses bitmasks over face indices.
    """

    def __init__(self, faces: Sequence[Face], covers: Optional[Iterable] = None,
                 polytope: Optional[VPolytope] = None):
        order = sorted(range(len(faces)), key=lambda i: (faces[i].dim, sorted(faces[i].vertices)))
        self.faces: tuple[Face, ...] = tuple(faces[i] for i in order)
        self.polytope = polytope
        self._index = {f.vertices: i for i, f in enumerate(self.faces)}
        if covers is None:
            covers = [(lo, hi) for lo, f in enumerate(self.faces) for hi, g in enumerate(self.faces)
                      if g.dim == f.dim + 1 and f.vertices < g.vertices]
        else:
            where = {old: new for new, old in enumerate(order)}
            covers = [(where[lo], where[hi]) for lo, hi in covers]
        self.covers = tuple(sorted(covers))
        children = [[] for _ in self.faces]
        for lo, hi in self.covers:
            children[hi].append(lo)
        self._children = children
        down = [0] * len(self.faces)
        for i in range(len(self.faces)):
            m = 1 << i
            for c in children[i]:
                m |= down[c]
            down[i] = m
        self._down = down
        self.bottom = 0
        self.top = len(self.faces) - 1
        self.d = self.faces[-1].dim
        self._dim_masks = {}
        for i, f in enumerate(self.faces):
            self._dim_masks[f.dim] = self._dim_masks.get(f.dim, 0) | 1 << i

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def index(self, face) -> int:
        key = face.vertices if isinstance(face, Face) else frozenset(face)
        return self._index[key]

    def __contains__(self, face) -> bool:
        key = face.vertices if isinstance(face, Face) else frozenset(face)
        return key in self._index

    def faces_of_dim(self, k: int) -> list[int]:
        return _bits(self._dim_masks.get(k, 0))

    def below(self, i: int) -> list[int]:
        """Indices of faces contained in face ``i`` (including itself)."""
        return _bits(self._down[i])

    def leq(self, i: int, j: int) -> bool:
        return bool(self._down[j] >> i & 1)

    def face_counts(self, i: int) -> list[int]:
        """``[f_0(F), ..., f_dim(F)(F)]`` for face ``i``."""
        down = self._down[i]
        return [(down & self._dim_masks.get(k, 0)).bit_count() for k in range(self.faces[i].dim + 1)]

    def nonempty(self) -> list[int]:
        return [i for i, f in enumerate(self.faces) if f.vertices]


def face_lattice(p: VPolytope, facets: Optional[Sequence[Facet]] = None) -> FaceLattice:
    """All faces of ``p`` as intersections of facet vertex sets.

    Works top-down: the facets of a face F are the inclusion-maximal sets
    among ``F & G`` over facets G not containing F.
    """
    facets = p.facets if facets is None else facets
    nv = len(p.vertices)
    top = (1 << nv) - 1
    d = p.dim
    fmasks = sorted({_mask(f.vertices) for f in facets})
    masks = {top: d}
    covers = []
    level = [top]
    for k in range(d, 0, -1):
        nxt = {}
        for F in level:
            if k == d:
                maximal = fmasks
            else:
                cands = {F & g for g in fmasks if F & g != F}
                cands.discard(0)
                maximal = []
                for c in sorted(cands, key=lambda m: (-m.bit_count(), m)):
                    if not any(c & m == c for m in maximal):
                        maximal.append(c)
            for c in maximal:
                nxt.setdefault(c, k - 1)
                covers.append((c, F))
        for c in nxt:
            masks[c] = k - 1
        level = sorted(nxt)
    for v in range(nv):
        if (1 << v) not in masks or masks[1 << v] != 0:
            raise GeometryError("face lattice construction lost a vertex")
        covers.append((0, 1 << v))
    masks[0] = -1
    keys = list(masks)
    pos = {m: i for i, m in enumerate(keys)}
    faces = [Face(masks[m], frozenset(_bits(m))) for m in keys]
    return FaceLattice(faces, [(pos[a], pos[b]) for a, b in covers], polytope=p)


@dataclass(frozen=True)
class FVector:
    """Face numbers ``f_0, ..., f_{d-1}``; the polytope itself is not listed."""

    counts: tuple
    dim: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(x) for x in self.counts))
        if self.dim is None:
            object.__setattr__(self, "dim", len(self.counts))

    def __getitem__(self, k):
        return self.counts[k]

    def __len__(self):
        return len(self.counts)

    def __str__(self):
        if self.dim == 0:
            return "(1)"
        return "(" + ", ".join(str(x) for x in self.counts) + ")"


def f_vector(lattice: FaceLattice) -> FVector:
    d = lattice.d
    return FVector(tuple(len(lattice.faces_of_dim(k)) for k in range(d)), d)


def euler_check(f: FVector) -> VerifierReport:
    d = f.dim
    lhs = sum((-1) ** k * f.counts[k] for k in range(d))
    return VerifierReport("euler", Fraction(lhs), Fraction(1 - (-1) ** d),
                          diagnostics=[{"f": list(f.counts), "d": d}])


def interval(lattice: FaceLattice, g, f) -> FaceLattice:
    """The faces H with ``g <= H <= f``."""
    gi, fi = lattice.index(g), lattice.index(f)
    if not lattice.leq(gi, fi):
        raise GeometryError("interval bounds are not ordered")
    gv = lattice.faces[gi].vertices
    keep = [i for i in lattice.below(fi) if gv <= lattice.faces[i].vertices]
    pos = {old: new for new, old in enumerate(keep)}
    covers = [(pos[a], pos[b]) for a, b in lattice.covers if a in pos and b in pos]
    return FaceLattice([lattice.faces[i] for i in keep], covers, polytope=lattice.polytope)


class CharPoly:
    """Polynomial with exact coefficients, lowest degree first."""

    def __init__(self, coeffs: Iterable):
        c = [Fraction(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c) if c else (Fraction(0),)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return CharPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return CharPoly(-x for x in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CharPoly(out)

    def derivative(self) -> "CharPoly":
        return CharPoly(k * c for k, c in enumerate(self.coeffs) if k) if len(self.coeffs) > 1 else CharPoly([0])

    def __eq__(self, other):
        return isinstance(other, CharPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}x^{k}")
        return "CharPoly(" + (" + ".join(terms) or "0") + ")"


def char_poly(f) -> CharPoly:
    """``f_0 + f_1 x + ... + f_d x^d`` with the top coefficient ``f_d = 1``.

    Accepts an FVector or a full count list ``[f_0, ..., f_d]``.
    """
    if isinstance(f, FVector):
        return CharPoly(list(f.counts) + [1])
    return CharPoly(f)


def polar_dual(p: VPolytope, name: Optional[str] = None) -> VPolytope:
    """``{y : <y, x> <= 1 for all x in p}`` from the facets of ``p``."""
    if not p.is_full_dimensional:
        raise PreconditionError("polar dual needs a full-dimensional polytope")
    for f in p.facets:
        if f.offset <= 0:
            raise PreconditionError(
                f"origin is not interior: facet {tuple(map(str, f.normal))} . x <= {f.offset}")
    return VPolytope([tuple(x / f.offset for x in f.normal) for f in p.facets],
                     name=name if name is not None else (p.name + "*" if p.name else ""))


def dual_face_map(lattice: FaceLattice, dual_lattice: FaceLattice, face) -> Face:
    """The face of the polar dual whose vertices are the facets containing ``face``."""
    p, q = lattice.polytope, dual_lattice.polytope
    f = lattice.faces[lattice.index(face)]
    if not f.vertices or f.dim == p.dim:
        raise GeometryError("dual_face_map is defined on nontrivial faces only")
    verts = frozenset(q.vertex_index(tuple(x / fa.offset for x in fa.normal))
                      for fa in p.facets if f.vertices <= fa.vertices)
    return dual_lattice.faces[dual_lattice.index(verts)]
