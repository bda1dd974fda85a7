"""Minkowski sums, face decomposition and the f-delta identities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Optional, Sequence

from .errors import GeometryError, PerturbationError, PreconditionError
from .exact import QVec, identity, integer_rows, inverse, mat_mul, rank, vadd
from .polytope import CharPoly, Face, FaceLattice, VPolytope, char_poly, f_vector
from .report import VerifierReport


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class NormalCone:
    """Closed outer normal cone of a face.

    ``generators`` are outer facet normals; for a polytope that is not
    full-dimensional the cone additionally contains ``span(lineality)``.
    """

    face: Face
    generators: tuple
    lineality: tuple = ()

    @cached_property
    def dim(self) -> int:
        return (rank(list(self.generators)) if self.generators else 0) + len(self.lineality)


@dataclass
class MinkowskiSum:
    summands: tuple
    polytope: VPolytope

    @property
    def d(self) -> int:
        return self.polytope.dim

    @property
    def r(self) -> int:
        return len(self.summands)

    @property
    def lattice(self) -> FaceLattice:
        return self.polytope.lattice

    @cached_property
    def decomposition(self) -> "SumDecomposition":
        return decompose_faces(self)


@dataclass
class SumDecomposition:
    """``parts[F]`` holds, for each nonempty face index F of the sum, the
    face index of ``t_i(F)`` in the lattice of each summand."""

    ms: MinkowskiSum
    parts: dict
    exact: dict
    witnesses: dict = field(default_factory=dict)

    def part_faces(self, i: int) -> list[Face]:
        return [s.lattice.faces[j] for s, j in zip(self.ms.summands, self.parts[i])]


@dataclass(frozen=True)
class DeltaVector:
    """``f_k(F) - sum_i f_k(t_i(F))`` for ``k = 0..dim(F)``."""

    values: tuple

    def __getitem__(self, k):
        return self.values[k] if 0 <= k < len(self.values) else 0

    def __len__(self):
        return len(self.values)


def minkowski_sum(summands: Sequence[VPolytope], name: str = "") -> MinkowskiSum:
    """Hull of all vertex sums, accumulated one summand at a time."""
    summands = tuple(summands)
    if not summands:
        raise GeometryError("need at least one summand")
    n = summands[0].ambient_dim
    if any(s.ambient_dim != n for s in summands):
        raise GeometryError("summands live in different ambient dimensions")
    acc = summands[0]
    for s in summands[1:]:
        acc = VPolytope([vadd(u, v) for u in acc.vertices for v in s.vertices])
    if len(summands) == 1:
        acc = VPolytope(acc.vertices)
    acc.name = name or " + ".join(s.name or "P" for s in summands)
    return MinkowskiSum(summands, acc)


def _poly(obj) -> VPolytope:
    return obj.polytope if isinstance(obj, MinkowskiSum) else obj


def normal_cone(obj, face) -> NormalCone:
    p = _poly(obj)
    lat = p.lattice
    f = lat.faces[lat.index(face)]
    if not f.vertices:
        raise GeometryError("the empty face has no normal cone")
    gens = tuple(fa.normal for fa in p.facets if f.vertices <= fa.vertices)
    return NormalCone(f, gens, tuple(a for a, _ in p.equations))


def relint_witness(cone: NormalCone, polytope: Optional[VPolytope] = None,
                   weights: Optional[Sequence[Fraction]] = None) -> QVec:
    """Sum of the cone's generators (optionally positively weighted),
    scaled to an integer vector.

    With ``polytope`` given, checks that the witness is maximized exactly on
    the cone's face.
    """
    n = len(cone.generators[0]) if cone.generators else (polytope.ambient_dim if polytope else 0)
    if weights is None:
        weights = [1] * len(cone.generators)
    else:
        # a positive rescaling keeps the maximizers, so clear denominators
        den = lcm(*(Fraction(w).denominator for w in weights))
        weights = [int(Fraction(w) * den) for w in weights]
    c = [0] * n
    for w, g in zip(weights, cone.generators):
        for t, x in enumerate(g):
            # facet normals are integral, so stay in int arithmetic when possible
            c[t] += w * (x.numerator if getattr(x, "denominator", 0) == 1 else x)
    c = tuple(integer_rows([c])[0])
    if polytope is not None and polytope.argmax(c) != cone.face.vertices:
        raise GeometryError(f"witness {c} does not expose {cone.face}")
    return c


def decompose_faces(ms: MinkowskiSum, rng: Optional[random.Random] = None) -> SumDecomposition:
    """Decompose every nonempty face of the sum into summand faces.

    A relative-interior normal vector of F is maximized over each summand on
    exactly ``t_i(F)``. ``rng`` reweights the generators by random positive
    rationals, which must not change the result.
    """
    p = ms.polytope
    lat = p.lattice
    parts, exact, witnesses = {}, {}, {}
    for i in lat.nonempty():
        cone = normal_cone(p, lat.faces[i])
        weights = None
        if rng is not None:
            weights = [Fraction(rng.randint(1, 64), rng.randint(1, 64)) for _ in cone.generators]
        c = relint_witness(cone, p, weights)
        idx = []
        dims = 0
        for s in ms.summands:
            j = s.lattice.index(s.argmax(c))
            idx.append(j)
            dims += s.lattice.faces[j].dim
        parts[i] = tuple(idx)
        exact[i] = lat.faces[i].dim == dims
        witnesses[i] = c
    return SumDecomposition(ms, parts, exact, witnesses)


def check_reconstruction(sd: SumDecomposition) -> list[int]:
    """Faces F whose vertex sums over ``t_i(F)`` do not span exactly F.

    The sums all lie on F's supporting hyperplane and cover F's vertices
    iff their hull is F. Returns the offending face indices (empty if fine).
    """
    p = sd.ms.polytope
    lat = p.lattice
    bad = []
    for i, idx in sd.parts.items():
        sums = [()]
        for s, j in zip(sd.ms.summands, idx):
            pts = [s.vertices[v] for v in s.lattice.faces[j].vertices]
            sums = [vadd(u, v) if u else v for u in sums for v in pts]
        sums = set(sums)
        verts = {p.vertices[v] for v in lat.faces[i].vertices}
        c = sd.witnesses[i]
        top = max(sum((a * b for a, b in zip(c, v)), Fraction(0)) for v in p.vertices)
        on_face = all(sum((a * b for a, b in zip(c, s)), Fraction(0)) == top for s in sums)
        if not (verts <= sums and on_face):
            bad.append(i)
    return bad


def is_relatively_general_position(sd: SumDecomposition) -> bool:
    lat = sd.ms.lattice
    return all(sd.exact[i] for i in lat.faces_of_dim(sd.ms.d - 1))


def delta_vector(face, sd: SumDecomposition) -> DeltaVector:
    lat = sd.ms.lattice
    i = lat.index(face)
    if not lat.faces[i].vertices:
        raise GeometryError("f-delta is defined for nonempty faces")
    out = list(lat.face_counts(i))
    for s, j in zip(sd.ms.summands, sd.parts[i]):
        for k, c in enumerate(s.lattice.face_counts(j)):
            out[k] -= c
    return DeltaVector(tuple(out))


def _mainthm_lhs(sd: SumDecomposition, a=0) -> Fraction:
    delta = delta_vector(sd.ms.lattice.faces[-1], sd)
    return Fraction(sum(_sign(k) * (k + Fraction(a)) * delta[k] for k in range(sd.ms.d)))


def _violations(ms: MinkowskiSum, sd: SumDecomposition, full_dim: bool) -> list[str]:
    out = []
    if full_dim:
        low = [i for i, s in enumerate(ms.summands) if s.dim < ms.d]
        if low:
            out.append(f"summands {low} are not full-dimensional")
    if not is_relatively_general_position(sd):
        out.append("summands are not relatively in general position")
    return out


def verify_mainthm(ms: MinkowskiSum, sd: Optional[SumDecomposition] = None) -> VerifierReport:
    sd = sd or ms.decomposition
    delta = delta_vector(ms.lattice.faces[-1], sd)
    return VerifierReport("mainthm", _mainthm_lhs(sd), Fraction(0),
                          diagnostics=[{"f_delta": list(delta.values[:ms.d])}],
                          violations=_violations(ms, sd, True))


def verify_maincor(ms: MinkowskiSum, a, sd: Optional[SumDecomposition] = None) -> VerifierReport:
    sd = sd or ms.decomposition
    a = Fraction(a)
    d, r = ms.d, ms.r
    rhs = a * (1 - r) * (1 - _sign(d))
    return VerifierReport("maincor", _mainthm_lhs(sd, a), rhs,
                          diagnostics=[{"a": str(a)}],
                          violations=_violations(ms, sd, True))


def verify_maincor2(ms: MinkowskiSum, sd: Optional[SumDecomposition] = None) -> VerifierReport:
    sd = sd or ms.decomposition
    d = ms.d
    low = [s.dim for s in ms.summands if s.dim < d]
    rhs = Fraction(-_sign(d) * sum(low))
    return VerifierReport("maincor2", _mainthm_lhs(sd), rhs,
                          diagnostics=[{"low_dims": low}],
                          violations=_violations(ms, sd, False))


def verify_thm_delta(ms: MinkowskiSum, k: int, sd: Optional[SumDecomposition] = None) -> VerifierReport:
    """Alternating sum of f-delta_k over all nonempty faces, including P."""
    d = ms.d
    if not 0 <= k < d:
        raise PreconditionError(f"k must satisfy 0 <= k < d = {d}")
    sd = sd or ms.decomposition
    lat = ms.lattice
    lhs = 0
    for i in lat.nonempty():
        lhs += _sign(d - lat.faces[i].dim) * delta_vector(lat.faces[i], sd)[k]
    count = sum(1 for s in ms.summands if s.dim == k)
    return VerifierReport("thm_delta", Fraction(lhs), Fraction(-_sign(d - k) * count),
                          diagnostics=[{"k": k}])


def verify_lemface(face, sd: SumDecomposition) -> VerifierReport:
    lat = sd.ms.lattice
    i = lat.index(face)
    f = lat.faces[i]
    if not f.vertices:
        raise PreconditionError("lemface needs a nonempty face")
    if not sd.exact[i]:
        raise PreconditionError(f"{f} does not decompose exactly")
    p = char_poly(lat.face_counts(i))
    p_parts = [char_poly(s.lattice.face_counts(j)) for s, j in zip(sd.ms.summands, sd.parts[i])]
    prod = CharPoly([1])
    total = CharPoly([0])
    for q in p_parts:
        prod = prod * q
        total = total + q
    p_delta = p - total
    delta = delta_vector(f, sd)
    lhs = Fraction(sum(_sign(k) * k * delta[k] for k in range(f.dim + 1)))
    return VerifierReport(
        "lemface", lhs, Fraction(0),
        checks={"product": p == prod, "derivative": lhs == -p_delta.derivative()(-1)},
        diagnostics=[{"face": sorted(f.vertices), "p_delta": [str(c) for c in p_delta.coeffs]}])


def verify_lem_euler(lattice: FaceLattice, k: int) -> VerifierReport:
    d = lattice.d
    if not 0 <= k < d:
        raise PreconditionError(f"k must satisfy 0 <= k < d = {d}")
    lhs = 0
    for i in lattice.nonempty():
        counts = lattice.face_counts(i)
        if k < len(counts):
            lhs += _sign(d - lattice.faces[i].dim) * counts[k]
    return VerifierReport("lem_euler", Fraction(lhs), Fraction(0), diagnostics=[{"k": k}])


def verify_lem_summand(ms: MinkowskiSum, i: int, k: int,
                       sd: Optional[SumDecomposition] = None) -> VerifierReport:
    """Alternating sum of ``f_k(t_i(F))``; ``i`` is a 0-based summand index."""
    d = ms.d
    if not 0 <= i < ms.r:
        raise PreconditionError(f"summand index {i} out of range")
    if not 0 <= k < d:
        raise PreconditionError(f"k must satisfy 0 <= k < d = {d}")
    sd = sd or ms.decomposition
    lat = ms.lattice
    s = ms.summands[i]
    lhs = 0
    for fi in lat.nonempty():
        counts = s.lattice.face_counts(sd.parts[fi][i])
        if k < len(counts):
            lhs += _sign(d - lat.faces[fi].dim) * counts[k]
    rhs = _sign(d - s.dim) if k == s.dim else 0
    return VerifierReport("lem_summand", Fraction(lhs), Fraction(rhs),
                          diagnostics=[{"i": i, "k": k, "dim_summand": s.dim}])


# -- perturbation -------------------------------------------------------------

def cayley_rotation(skew) -> list[list[Fraction]]:
    """``(I - A)^-1 (I + A)``: exactly orthogonal for skew-symmetric A."""
    n = len(skew)
    eye = identity(n)
    minus = [[eye[i][j] - skew[i][j] for j in range(n)] for i in range(n)]
    plus = [[eye[i][j] + skew[i][j] for j in range(n)] for i in range(n)]
    return mat_mul(inverse(minus), plus)


def random_skew(n: int, eps: Fraction, rng: random.Random, grid: int = 8) -> list[list[Fraction]]:
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = eps * Fraction(rng.randint(-grid, grid), grid)
            a[i][j], a[j][i] = x, -x
    return a


def _padded(f, n):
    return list(f.counts) + [0] * (n - len(f.counts))


def perturb_to_general_position(summands: Sequence[VPolytope], seed: int,
                                max_retries: int = 16, eps=Fraction(1, 64)) -> list[VPolytope]:
    """Rotate summands 2..r by small rational rotations until the sum is
    relatively in general position without losing faces.

    Inputs already in relative general position come back unchanged.
    Every retry halves the rotation scale.
    """
    summands = list(summands)
    if len(summands) < 2:
        raise PreconditionError("perturbation needs at least two summands")
    base = minkowski_sum(summands)
    if is_relatively_general_position(base.decomposition):
        return summands
    before = f_vector(base.lattice)
    rng = random.Random(seed)
    eps = Fraction(eps)
    n = summands[0].ambient_dim
    last = {"attempt": None, "eps": None, "general_position": False,
            "f_before": list(before.counts), "f_after": list(before.counts)}
    for attempt in range(max_retries):
        rotated = [summands[0]]
        for s in summands[1:]:
            q = cayley_rotation(random_skew(n, eps, rng))
            rotated.append(s.transformed(q))
        ms = minkowski_sum(rotated)
        after = f_vector(ms.lattice)
        width = max(len(before), len(after))
        gp = is_relatively_general_position(ms.decomposition)
        grew = all(x >= y for x, y in zip(_padded(after, width), _padded(before, width)))
        last = {"attempt": attempt, "eps": str(eps), "general_position": gp,
                "f_before": list(before.counts), "f_after": list(after.counts)}
        if gp and grew:
            return rotated
        eps /= 2
    raise PerturbationError(f"no general position after {max_retries} retries", last)
