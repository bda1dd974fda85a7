"""Graded posets, flag vectors and the relations they satisfy.

Externally everything is indexed by dimension, ``dim = rank - 1``, so a
d-polytope's face lattice has dimensions -1 (empty face) through d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import PolysumError, PreconditionError
from .polytope import FaceLattice, FVector
from .report import VerifierReport


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class GradedPoset:
    """Finite poset given by element ranks and cover relations."""

    def __init__(self, ranks: Sequence[int], covers: Iterable[Sequence[int]]):
        self.ranks = tuple(int(r) for r in ranks)
        n = len(self.ranks)
        self.covers = tuple(sorted((int(a), int(b)) for a, b in covers))
        for lo, hi in self.covers:
            if not (0 <= lo < n and 0 <= hi < n):
                raise PolysumError(f"cover ({lo}, {hi}) refers to a missing element")
            if self.ranks[hi] != self.ranks[lo] + 1:
                raise PolysumError(f"cover ({lo}, {hi}) does not raise the rank by one")
        lo_rank, hi_rank = min(self.ranks), max(self.ranks)
        bottoms = [i for i, r in enumerate(self.ranks) if r == lo_rank]
        tops = [i for i, r in enumerate(self.ranks) if r == hi_rank]
        if len(bottoms) != 1 or len(tops) != 1 or lo_rank != 0:
            raise PolysumError("poset needs a unique bottom of rank 0 and a unique top")
        self.bottom, self.top = bottoms[0], tops[0]
        self.rank = hi_rank
        children = [[] for _ in range(n)]
        for lo, hi in self.covers:
            children[hi].append(lo)
        down = [0] * n
        for i in sorted(range(n), key=lambda i: self.ranks[i]):
            m = 1 << i
            for c in children[i]:
                m |= down[c]
            down[i] = m
        self._down = down
        if any(not (down[i] >> self.bottom & 1) for i in range(n)) or \
                any(not (down[self.top] >> i & 1) for i in range(n)):
            raise PolysumError("every element must lie between bottom and top")
        self._rank_masks = {}
        for i, r in enumerate(self.ranks):
            self._rank_masks[r] = self._rank_masks.get(r, 0) | 1 << i

    def __len__(self):
        return len(self.ranks)

    @property
    def d(self) -> int:
        """Dimension of the top element."""
        return self.rank - 1

    def leq(self, a: int, b: int) -> bool:
        return bool(self._down[b] >> a & 1)

    def elements_of_dim(self, k: int) -> list[int]:
        m = self._rank_masks.get(k + 1, 0)
        return [i for i in range(len(self.ranks)) if m >> i & 1]

    def to_json(self) -> dict:
        return {"ranks": list(self.ranks), "covers": [list(c) for c in self.covers]}

    @classmethod
    def from_json(cls, data: dict) -> "GradedPoset":
        try:
            return cls(data["ranks"], data["covers"])
        except (KeyError, TypeError) as exc:
            raise PolysumError(f"malformed poset JSON: {exc}") from exc


def from_face_lattice(lattice: FaceLattice) -> GradedPoset:
    ranks = [f.dim + 1 - (lattice.faces[0].dim + 1) for f in lattice.faces]
    return GradedPoset(ranks, lattice.covers)


def is_eulerian(p: GradedPoset) -> bool:
    """Every interval [x, y] with x < y has as many even- as odd-rank elements."""
    n = len(p)
    even = sum(1 << i for i, r in enumerate(p.ranks) if r % 2 == 0)
    up = [0] * n
    for i in range(n):
        m = p._down[i]
        j = 0
        while m:
            if m & 1:
                up[j] |= 1 << i
            m >>= 1
            j += 1
    for x in range(n):
        above = up[x] & ~(1 << x)
        y = 0
        while above:
            if above & 1:
                seg = up[x] & p._down[y]
                ev = (seg & even).bit_count()
                if 2 * ev != seg.bit_count():
                    return False
            above >>= 1
            y += 1
    return True


def count_chains(p: GradedPoset, dims: Iterable[int]) -> int:
    """Number of chains with one element in each listed dimension.

    Unlike ``FlagVector`` lookups, -1 and d are taken literally here: they
    select the bottom and top elements.
    """
    dims = sorted(set(dims))
    if not dims:
        return 1
    counts = {i: 1 for i in p.elements_of_dim(dims[0])}
    for k in dims[1:]:
        nxt = {}
        for y in p.elements_of_dim(k):
            below = p._down[y]
            nxt[y] = sum(c for x, c in counts.items() if below >> x & 1)
        counts = nxt
    return sum(counts.values())


@dataclass(frozen=True)
class FlagVector:
    """Chain counts ``f_S`` for ``S`` a subset of ``{0, ..., d-1}``.

    Lookups may include -1 and d; they are dropped, since the empty face and
    the top extend every chain in exactly one way.
    """

    d: int
    counts: dict

    def __getitem__(self, dims) -> int:
        if isinstance(dims, int):
            dims = (dims,)
        s = frozenset(k for k in dims if k not in (-1, self.d))
        if any(not 0 <= k < self.d for k in s):
            raise KeyError(f"dimension set {sorted(s)} outside -1..{self.d}")
        return self.counts[s]

    def f_vector(self) -> FVector:
        return FVector(tuple(self[k] for k in range(self.d)), self.d)

    def to_json(self, max_size: int | None = None) -> list:
        rows = sorted(self.counts.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        return [{"S": sorted(s), "count": c} for s, c in rows
                if max_size is None or len(s) <= max_size]


def flag_vector(p: GradedPoset) -> FlagVector:
    """All ``f_S`` by dynamic programming over the rank levels."""
    d = p.d
    counts = {frozenset(): 1}
    # extend each chain by a new top element; prefix counts keyed by top element
    layers = {(): {p.bottom: 1}}
    for size in range(1, d + 1):
        for dims in combinations(range(d), size):
            prev = layers[dims[:-1]]
            cur = {}
            for y in p.elements_of_dim(dims[-1]):
                below = p._down[y]
                total = sum(c for x, c in prev.items() if below >> x & 1)
                if total:
                    cur[y] = total
            layers[dims] = cur
            counts[frozenset(dims)] = sum(cur.values())
    return FlagVector(d, counts)


def bayer_billera_instances(fv: FlagVector):
    """Yield ``(S, i, k, lhs, rhs)`` for every Bayer-Billera relation."""
    d = fv.d
    for size in range(d + 1):
        for s in combinations(range(d), size):
            ext = [-1] + list(s) + [d]
            for i, k in zip(ext, ext[1:]):
                if k - i < 2:
                    continue
                lhs = sum(_sign(j - i - 1) * fv[set(s) | {j}] for j in range(i + 1, k))
                rhs = fv[s] * (1 - _sign(k - i - 1))
                yield s, i, k, lhs, rhs


def verify_bayer_billera(fv: FlagVector) -> VerifierReport:
    """All relations at once; lhs is the total absolute residual."""
    residual = 0
    diags = []
    n = 0
    for s, i, k, lhs, rhs in bayer_billera_instances(fv):
        n += 1
        if lhs != rhs:
            residual += abs(lhs - rhs)
            diags.append({"S": list(s), "i": i, "k": k, "lhs": lhs, "rhs": rhs})
    diags.insert(0, {"relations": n})
    return VerifierReport("bayer_billera", Fraction(residual), Fraction(0), diagnostics=diags)


def verify_dsrshort(fv: FlagVector, i: int, k: int) -> VerifierReport:
    if not -1 <= i < k <= fv.d:
        raise PreconditionError(f"need -1 <= i < k <= {fv.d}, got ({i}, {k})")
    lhs = sum(_sign(j) * fv[{i, j, k}] for j in range(i, k + 1))
    return VerifierReport("dsrshort", Fraction(lhs), Fraction(0), diagnostics=[{"i": i, "k": k}])


def dsrshort_pairs(d: int):
    return [(i, k) for i in range(-1, d + 1) for k in range(i + 1, d + 1)]


def verify_nestthm(fv: FlagVector) -> VerifierReport:
    d = fv.d
    lhs = 0
    terms = []
    for k in range(d):
        inner = sum(fv[{i, i + d - 1 - k}] for i in range(k + 1)) - fv[k] - fv[d - 1 - k]
        term = _sign(k) * k * inner
        terms.append(term)
        lhs += term
    return VerifierReport("nestthm", Fraction(lhs), Fraction(0), diagnostics=[{"terms": terms}])


def fvthm_predict(fv: FlagVector) -> FVector:
    """Face numbers of P + P* for a perfectly centered P, from P's flags."""
    d = fv.d
    return FVector(tuple(sum(fv[{i, i + d - 1 - k}] for i in range(k + 1)) for k in range(d)), d)
