"""Boundary operators and Betti numbers of clique complexes.

Betti numbers are unreduced: rank of the augmentation map is taken as 0, so
``beta_0`` counts connected components.  Only free ranks are computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
import scipy.sparse as sp

from .complex import SimplicialComplex
from .errors import TruncationError
from .graph import Graph

MERSENNE_31 = 2**31 - 1
EXACT_SIZE_LIMIT = 2000


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse matrix of the boundary map from p-chains to (p-1)-chains.

    Rows follow the sorted (p-1)-simplices, columns the sorted p-simplices;
    orientation is increasing vertex order.
    """

    p: int
    shape: tuple
    rows: np.ndarray
    cols: np.ndarray
    data: np.ndarray

    def to_sparse(self) -> sp.csc_matrix:
        return sp.csc_matrix((self.data, (self.rows, self.cols)), shape=self.shape, dtype=np.int64)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[self.rows, self.cols] = self.data
        return out


def boundary_matrix(s: SimplicialComplex, p: int) -> BoundaryMatrix:
    if not 1 <= p <= s.p_max_built:
        raise TruncationError(f"boundary map d_{p} needs 1 <= p <= p_max_built={s.p_max_built}")
    faces = s.index(p - 1)
    simplices = s.simplices_of(p)
    rows, cols, data = [], [], []
    for c, simplex in enumerate(simplices):
        for i in range(p + 1):
            rows.append(faces[simplex[:i] + simplex[i + 1:]])
            cols.append(c)
            data.append(-1 if i % 2 else 1)
    shape = (len(faces), len(simplices))
    return BoundaryMatrix(p, shape, np.array(rows, dtype=np.int64),
                          np.array(cols, dtype=np.int64), np.array(data, dtype=np.int64))


def rank_mod_p(M, prime: int = MERSENNE_31) -> int:
    """Rank over GF(prime) by Gaussian elimination on a dense int64 copy."""
    A = np.array(M.to_dense() if isinstance(M, BoundaryMatrix) else M, dtype=np.int64)
    if A.size == 0:
        return 0
    if prime >= 2**31:
        raise ValueError("prime must be below 2**31 to keep products inside int64")
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    A %= prime
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), prime - 2, prime) % prime
        below = r + 1 + np.flatnonzero(A[r + 1:, c])
        if below.size:
            A[below] = (A[below] - A[below, c][:, None] * A[r]) % prime
        r += 1
    return r


def rank_exact(M) -> int:
    """Rank over the rationals by integer row elimination on sparse rows.

    Rows are rescaled by the gcd of their entries after each update so that
    integers stay small.
    """
    A = M.to_dense() if isinstance(M, BoundaryMatrix) else np.asarray(M)
    rows = []
    for row in A.tolist():
        d = {j: int(v) for j, v in enumerate(row) if v}
        if d:
            rows.append(d)
    rank = 0
    while rows:
        pivot_row = min(rows, key=lambda d: (min(d), len(d)))
        rows.remove(pivot_row)
        col = min(pivot_row)
        a = pivot_row[col]
        rank += 1
        nxt = []
        for d in rows:
            b = d.get(col)
            if b is None:
                nxt.append(d)
                continue
            new = {}
            for j in set(d) | set(pivot_row):
                v = a * d.get(j, 0) - b * pivot_row.get(j, 0)
                if v:
                    new[j] = v
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                nxt.append({j: v // g for j, v in new.items()})
        rows = nxt
    return rank


@dataclass(frozen=True)
class BettiVector:
    beta: tuple
    field_char: int


def boundary_ranks(s: SimplicialComplex, top: int, exact: bool = False) -> list[int]:
    """``[rank d_0, rank d_1, ..., rank d_top]`` with rank d_0 = 0."""
    ranks = [0]
    for p in range(1, top + 1):
        if p > s.p_max_built:
            if not s.complete:
                raise TruncationError(
                    f"rank of d_{p} needs a complex built to dimension {p}; "
                    f"rebuild with p_max >= {p}")
            ranks.append(0)
            continue
        B = boundary_matrix(s, p)
        ranks.append(rank_exact(B) if exact else rank_mod_p(B))
    return ranks


def betti_numbers(s: SimplicialComplex, up_to: int, exact: bool = False) -> BettiVector:
    """Betti numbers beta_0 .. beta_up_to.

    Needs the boundary map one dimension above ``up_to``: the complex must be
    built to ``up_to + 1`` unless it is already complete.
    """
    if up_to < 0:
        raise ValueError("up_to must be non-negative")
    if up_to + 1 > s.p_max_built and not s.complete:
        raise TruncationError(
            f"Betti numbers up to {up_to} need p_max_built >= {up_to + 1}, "
            f"complex has {s.p_max_built}")
    ranks = boundary_ranks(s, up_to + 1, exact=exact)
    nu = list(s.nu) + [0] * (up_to + 1)
    beta = tuple(nu[p] - ranks[p] - ranks[p + 1] for p in range(up_to + 1))
    return BettiVector(beta, 0 if exact else MERSENNE_31)


def connected_components(g: Graph) -> int:
    """Component count by union-find with path halving."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = g.n
    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            count -= 1
    return count


def cycle_rank(g: Graph) -> int:
    return g.num_edges - g.n + connected_components(g)
