"""Perfectly centered polytopes and the faces of P + P*."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError, PreconditionError
from .exact import solve_strict_feasibility, vadd
from .flag import flag_vector, from_face_lattice, fvthm_predict, verify_nestthm
from .minkowski import minkowski_sum
from .polytope import Face, FaceLattice, VPolytope, dual_face_map, f_vector, polar_dual
from .report import VerifierReport


@dataclass(frozen=True)
class PcSumFace:
    g: Face
    f: Face
    realized: Face


def relint_meets_cone(p: VPolytope, face: Face):
    """A point of relint(face) that is a nonnegative combination of the
    outer normals of the facets containing it, or None.

    Variables are barycentric weights on the face's vertices (strictly
    positive, summing to one) and cone weights (nonnegative).
    """
    verts = [p.vertices[v] for v in sorted(face.vertices)]
    gens = [fa.normal for fa in p.facets if face.vertices <= fa.vertices]
    m, g, n = len(verts), len(gens), p.ambient_dim
    nvars = m + g
    eqs = []
    for t in range(n):
        eqs.append([v[t] for v in verts] + [-x[t] for x in gens] + [Fraction(0)])
    eqs.append([Fraction(1)] * m + [Fraction(0)] * g + [Fraction(1)])
    unit = lambda j: [Fraction(int(j == c)) for c in range(nvars)] + [Fraction(0)]
    sol = solve_strict_feasibility(eqs, [unit(j) for j in range(m)],
                                   [unit(m + j) for j in range(g)], nvars=nvars)
    if sol is None:
        return None
    return tuple(sum((lam * v[t] for lam, v in zip(sol[:m], verts)), Fraction(0)) for t in range(n))


def is_perfectly_centered(p: VPolytope) -> VerifierReport:
    """lhs counts faces whose relative interior misses their normal cone."""
    if not p.is_full_dimensional:
        raise PreconditionError("perfect centering is tested on full-dimensional polytopes")
    bad_facets = [f for f in p.facets if f.offset <= 0]
    if bad_facets:
        return VerifierReport("perfectly_centered", Fraction(1), Fraction(0),
                              violations=["origin is not in the interior"],
                              diagnostics=[{"facet": [str(x) for x in bad_facets[0].normal],
                                            "offset": str(bad_facets[0].offset)}])
    lat = p.lattice
    failing = []
    for i in lat.nonempty():
        if relint_meets_cone(p, lat.faces[i]) is None:
            failing.append(sorted(lat.faces[i].vertices))
    return VerifierReport("perfectly_centered", Fraction(len(failing)), Fraction(0),
                          diagnostics=[{"failing_face": f} for f in failing])


def _require_pc(p: VPolytope):
    rep = is_perfectly_centered(p)
    if not rep.passed:
        raise PreconditionError(f"{p.name or 'polytope'} is not perfectly centered")


def pc_sum_faces(p: VPolytope, check: bool = True) -> tuple[VPolytope, list[PcSumFace]]:
    """Realize every ``G + F^D`` for nontrivial faces ``G <= F`` of ``p``.

    Returns the polytope spanned by the realized vertices and one
    ``PcSumFace`` per chain, with ``realized`` indexing into that polytope.
    """
    if check:
        _require_pc(p)
    q = polar_dual(p)
    lat, dlat = p.lattice, q.lattice
    nontrivial = [i for i in lat.nonempty() if lat.faces[i].dim < p.dim]
    chains = []
    for fi in nontrivial:
        f = lat.faces[fi]
        fd = dual_face_map(lat, dlat, f)
        fd_pts = [q.vertices[v] for v in fd.vertices]
        for gi in lat.below(fi):
            g = lat.faces[gi]
            if not g.vertices:
                continue
            sums = VPolytope([vadd(p.vertices[u], w) for u in g.vertices for w in fd_pts])
            chains.append((g, f, sums))
    points = sorted({s.vertices[0] for _, _, s in chains if s.dim == 0})
    whole = VPolytope(points, name=f"{p.name}+{p.name}*" if p.name else "")
    if len(whole.vertices) != len(points):
        raise GeometryError("a realized vertex is not a vertex of P + P*")
    out = []
    for g, f, s in chains:
        verts = frozenset(whole.vertex_index(v) for v in s.vertices)
        out.append(PcSumFace(g, f, Face(s.dim, verts)))
    return whole, out


def pc_sum_lattice(p: VPolytope) -> FaceLattice:
    """Face lattice of P + P* assembled from the chain description,
    ordered by containment of realized vertex sets."""
    whole, faces = pc_sum_faces(p)
    realized = {pf.realized.vertices: pf.realized for pf in faces}
    if len(realized) != len(faces):
        raise GeometryError("two chains realize the same face")
    members = [Face(-1, frozenset())] + list(realized.values()) + \
              [Face(p.dim, frozenset(range(len(whole.vertices))))]
    lat = FaceLattice(members, polytope=whole)
    predicted = fvthm_predict(flag_vector(from_face_lattice(p.lattice)))
    if f_vector(lat) != predicted:
        raise GeometryError(f"chain faces {f_vector(lat)} disagree with prediction {predicted}")
    return lat


def verify_fvthm(p: VPolytope) -> VerifierReport:
    """Compare the flag prediction, the chain construction and the direct sum.

    lhs and rhs are the number of routes that agree with the prediction
    and the number of routes (3).
    """
    _require_pc(p)
    predicted = fvthm_predict(flag_vector(from_face_lattice(p.lattice)))
    chain = f_vector(pc_sum_lattice(p))
    direct = f_vector(minkowski_sum([p, polar_dual(p)]).lattice)
    routes = [predicted, chain, direct]
    agree = sum(1 for r in routes if r == predicted)
    return VerifierReport("fvthm", Fraction(agree), Fraction(3), diagnostics=[
        {"predicted": list(predicted.counts), "chains": list(chain.counts),
         "direct": list(direct.counts)}])


def verify_mainthm_pc(p: VPolytope) -> VerifierReport:
    rep = verify_nestthm(flag_vector(from_face_lattice(p.lattice)))
    rep.identity = "mainthm_pc"
    if p.is_full_dimensional and not is_perfectly_centered(p).passed:
        rep.violations.append("polytope is not perfectly centered")
    return rep
