"""Seeded random instances."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Union

from .errors import GeometryError
from .polytope import VPolytope

DENOM = 2 ** 16


def _rng(seed: Union[int, random.Random]) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_point(d: int, rng: random.Random, denom: int = DENOM):
    return tuple(Fraction(rng.randint(-denom, denom), denom) for _ in range(d))


def rand_polytope(d: int, n_vertices: int, seed, name: str = "", tries: int = 100) -> VPolytope:
    """Hull of ``n_vertices`` uniform grid points in ``[-1, 1]^d``,
    resampled until full-dimensional."""
    if not 1 <= d <= 4:
        raise ValueError("d must be between 1 and 4")
    if n_vertices < d + 1:
        raise ValueError("need at least d + 1 points")
    rng = _rng(seed)
    for _ in range(tries):
        p = VPolytope([random_point(d, rng) for _ in range(n_vertices)], name=name)
        if p.dim == d:
            return p
    raise GeometryError("could not sample a full-dimensional polytope")


def rand_low_dim(d: int, k: int, n_vertices: int, seed, name: str = "") -> VPolytope:
    """A random k-polytope placed in a random k-flat of R^d."""
    rng = _rng(seed)
    for _ in range(100):
        base = random_point(d, rng)
        dirs = [random_point(d, rng, 16) for _ in range(k)]
        pts = []
        for _ in range(max(n_vertices, k + 1)):
            coef = [Fraction(rng.randint(-DENOM, DENOM), DENOM) for _ in range(k)]
            pts.append(tuple(b + sum((c * v[t] for c, v in zip(coef, dirs)), Fraction(0))
                             for t, b in enumerate(base)))
        p = VPolytope(pts, name=name)
        if p.dim == k:
            return p
    raise GeometryError("could not sample a polytope of the requested dimension")


def rand_box(d: int, seed, name: str = "") -> VPolytope:
    """Origin-centred box with random rational half-widths."""
    from itertools import product
    rng = _rng(seed)
    half = [Fraction(rng.randint(1, 16), rng.randint(1, 8)) for _ in range(d)]
    return VPolytope([tuple(s * h for s, h in zip(signs, half))
                      for signs in product((-1, 1), repeat=d)], name=name)


def rand_cross(d: int, seed, name: str = "") -> VPolytope:
    """Cross-polytope ``conv{+-a_i e_i}`` with random rational semi-axes."""
    rng = _rng(seed)
    pts = []
    for i in range(d):
        a = Fraction(rng.randint(1, 16), rng.randint(1, 8))
        for s in (-1, 1):
            pts.append(tuple(s * a if t == i else Fraction(0) for t in range(d)))
    return VPolytope(pts, name=name)
