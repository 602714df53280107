"""Clique (flag) simplicial complex of a graph and its simplex counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import TruncationError
from .graph import Graph


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """All inclusion-maximal cliques, each as a sorted tuple, in sorted order.

    Bron-Kerbosch with Tomita pivoting over a degeneracy ordering; vertex
    sets are int bitmasks.  Isolated vertices are maximal 1-cliques.
    """
    n = g.n
    nbr = [0] * n
    for i, j in g.edges:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i

    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            return
        px = p | x
        # pivot: vertex of P|X with most neighbours in P
        best, pivot = -1, 0
        while px:
            low = px & -px
            u = low.bit_length() - 1
            c = (p & nbr[u]).bit_count()
            if c > best:
                best, pivot = c, u
            px ^= low
        cand = p & ~nbr[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            expand(r + (v,), p & nbr[v], x & nbr[v])
            p &= ~low
            x |= low
            cand ^= low

    for v, later, earlier in _degeneracy_split(n, nbr):
        expand((v,), later, earlier)
    return sorted(tuple(sorted(c)) for c in out)


def _degeneracy_split(n, nbr):
    """Yield (v, later-neighbour mask, earlier-neighbour mask) in degeneracy order."""
    deg = [m.bit_count() for m in nbr]
    remaining = set(range(n))
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (deg[u], u))
        order.append(v)
        remaining.discard(v)
        for u in _bits(nbr[v]):
            if u in remaining:
                deg[u] -= 1
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        later = earlier = 0
        for u in _bits(nbr[v]):
            if pos[u] > pos[v]:
                later |= 1 << u
            else:
                earlier |= 1 << u
        yield v, later, earlier


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SimplicialComplex:
    """Clique complex truncated at dimension ``p_max_built``.

    ``simplices[p]`` is the lexicographically sorted tuple of p-simplices,
    each a strictly increasing vertex tuple.  ``dim`` is the dimension of
    the full (untruncated) complex, known from the largest maximal clique.
    """

    n: int
    p_max_built: int
    simplices: tuple
    dim: int

    @property
    def complete(self) -> bool:
        return self.dim <= self.p_max_built

    @property
    def nu(self) -> tuple[int, ...]:
        """Simplex counts nu_p for p = 0 .. p_max_built."""
        return tuple(len(s) for s in self.simplices)

    def simplices_of(self, p: int) -> tuple:
        if p < 0:
            return ()
        if p > self.p_max_built:
            raise TruncationError(f"complex built to dimension {self.p_max_built}, asked for {p}")
        return self.simplices[p]

    def index(self, p: int) -> dict:
        return {s: k for k, s in enumerate(self.simplices_of(p))}

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "p_max_built": self.p_max_built,
            "dim": self.dim,
            "simplices": [[list(s) for s in level] for level in self.simplices],
        })

    @classmethod
    def from_json(cls, text: str) -> SimplicialComplex:
        d = json.loads(text)
        levels = tuple(tuple(tuple(s) for s in level) for level in d["simplices"])
        return cls(d["n"], d["p_max_built"], levels, d["dim"])


@dataclass(frozen=True)
class ComplexSummary:
    nu: tuple
    dim: int
    chi: int | None


def clique_complex(g: Graph, p_max: int) -> SimplicialComplex:
    """Clique complex of ``g`` with simplices up to dimension ``p_max``."""
    if p_max < 0:
        raise ValueError("p_max must be non-negative")
    cliques = maximal_cliques(g)
    dim = max((len(c) for c in cliques), default=0) - 1
    levels = [set() for _ in range(p_max + 1)]
    for c in cliques:
        for size in range(1, min(len(c), p_max + 1) + 1):
            levels[size - 1].update(combinations(c, size))
    simplices = tuple(tuple(sorted(level)) for level in levels)
    return SimplicialComplex(g.n, p_max, simplices, dim)


def euler_characteristic(s: SimplicialComplex) -> int:
    """Alternating simplex count; 0 for the empty complex.

    Raises
    ------
    TruncationError
        If the complex was truncated below its dimension.
    """
    if not s.complete:
        raise TruncationError("chi undefined under truncation "
                              f"(p_max_built={s.p_max_built} < dim={s.dim})")
    return sum((-1) ** p * count for p, count in enumerate(s.nu))


def summarize(s: SimplicialComplex) -> ComplexSummary:
    chi = euler_characteristic(s) if s.complete else None
    return ComplexSummary(s.nu, s.dim, chi)
