"""Simple undirected graphs: representation, edge-list I/O, relabeling and
the two random ensembles (uniform G(n, k) and power-law degree graphs).

Vertices are the dense integer labels ``0 .. n-1``; an edge is stored as the
pair ``(i, j)`` with ``i < j``.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeSequenceError, EdgeListError
from .rng import generator

logger = logging.getLogger(__name__)

POWER_LAW_GAMMA_RANGE = (2.0, 5.0)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices ``0 .. n-1``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        canon = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) has a label outside [0, {self.n})")
            canon.add((i, j) if i < j else (j, i))
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def from_adjacency(cls, A) -> Graph:
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ValueError("adjacency matrix must have a zero diagonal")
        if not np.all((A == 0) | (A == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        i, j = np.nonzero(np.triu(A, 1))
        return cls(A.shape[0], frozenset(zip(i.tolist(), j.tolist())))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self, dtype=float) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=dtype)
        if self.edges:
            i, j = np.array(self.sorted_edges()).T
            A[i, j] = 1
            A[j, i] = 1
        return A

    def neighbors(self) -> list[set[int]]:
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


# --------------------------------------------------------------------------
# edge-list text format

def parse_edge_list(source) -> Graph:
    """Parse the edge-list text format.

    One ``i j`` pair per line; ``#`` starts a comment line; blank lines are
    skipped.  An optional ``n <count>`` header (before any edge) fixes the
    vertex count, otherwise ``n = max label + 1``.  Duplicate and reversed
    edges collapse.

    Parameters
    ----------
    source : str or text stream
        Text content or an object with ``read()``.

    Raises
    ------
    EdgeListError
        On self-loops, non-integer or negative tokens, malformed lines, or a
        label not below the declared ``n``.
    """
    text = source.read() if hasattr(source, "read") else source
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared_n = None
    edges = set()
    max_label = -1
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2:
                raise EdgeListError("header must read 'n <count>'", lineno)
            if declared_n is not None or edges:
                raise EdgeListError("header must precede all edges and appear once", lineno)
            declared_n = _parse_int(tokens[1], lineno)
            continue
        if len(tokens) != 2:
            raise EdgeListError(f"expected two integers, got {len(tokens)} tokens", lineno)
        i, j = (_parse_int(t, lineno) for t in tokens)
        if i == j:
            raise EdgeListError(f"self-loop on vertex {i}", lineno)
        if declared_n is not None and max(i, j) >= declared_n:
            raise EdgeListError(f"label {max(i, j)} not below declared n={declared_n}", lineno)
        max_label = max(max_label, i, j)
        edges.add((min(i, j), max(i, j)))
    n = declared_n if declared_n is not None else max_label + 1
    return Graph(n, frozenset(edges))


def _parse_int(token, lineno):
    try:
        value = int(token)
    except ValueError:
        raise EdgeListError(f"non-integer token {token!r}", lineno) from None
    if value < 0:
        raise EdgeListError(f"negative label {value}", lineno)
    return value


def serialize_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_edge_list(fh)


def write_edge_list(g: Graph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_edge_list(g))


# --------------------------------------------------------------------------
# relabeling

def permute(g: Graph, pi) -> Graph:
    """Relabel vertex ``i`` as ``pi[i]``."""
    pi = [int(p) for p in pi]
    if len(pi) != g.n or sorted(pi) != list(range(g.n)):
        raise ValueError("pi must be a bijection on 0..n-1")
    return Graph(g.n, frozenset((pi[i], pi[j]) for i, j in g.edges))


# --------------------------------------------------------------------------
# ensembles

def generate_gnk(n: int, k: int, seed: int) -> Graph:
    """Uniform sample from the graphs with ``n`` vertices and exactly ``k`` edges."""
    total = n * (n - 1) // 2
    if n < 0 or not 0 <= k <= total:
        raise ValueError(f"need 0 <= k <= n(n-1)/2 = {total}, got k={k}")
    rng = generator(seed)
    chosen = rng.choice(total, size=k, replace=False)
    iu, ju = np.triu_indices(n, 1)
    return Graph(n, frozenset(zip(iu[chosen].tolist(), ju[chosen].tolist())))


@dataclass(frozen=True)
class PowerLawGraph:
    """A realized power-law graph plus its sampling record.

    ``erased`` is True when the configuration model never produced a simple
    graph within the retry budget and self-loops / multi-edges were dropped,
    so the realized degrees may fall short of ``degrees``.
    """

    graph: Graph
    degrees: tuple
    gamma: float
    alpha: float
    attempts: int
    erased: bool

    @property
    def realized_k_over_n(self) -> float:
        return self.graph.num_edges / self.graph.n


def power_law_pmf(n: int, gamma: float) -> np.ndarray:
    """P(d) proportional to d**-gamma on d = 1 .. n-1."""
    d = np.arange(1, n, dtype=float)
    w = d ** -gamma
    return w / w.sum()


def generate_power_law(n: int, gamma: float, alpha: float = 0.0, seed: int = 0, *,
                       max_retries: int = 100, fallback: str = "erase") -> PowerLawGraph:
    """Random simple graph with a power-law degree sequence.

    Degrees are drawn i.i.d. from P(d) ~ e**alpha * d**-gamma on
    ``1 .. n-1`` (``alpha`` cancels on normalization), redrawn until their sum
    is even, then wired by the configuration model.  Wirings containing a
    self-loop or a repeated edge are rejected; after ``max_retries`` rejected
    wirings the last one is kept with the offending stubs erased
    (``fallback="erase"``) or :class:`DegreeSequenceError` is raised
    (``fallback="error"``).
    """
    if n < 2:
        raise ValueError("power-law graphs need n >= 2")
    if not gamma > 1:
        raise ValueError(f"gamma must exceed 1, got {gamma}")
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    if fallback not in ("erase", "error"):
        raise ValueError("fallback must be 'erase' or 'error'")
    lo, hi = POWER_LAW_GAMMA_RANGE
    if not lo <= gamma <= hi:
        logger.warning("gamma=%s lies outside the supported range [%s, %s]", gamma, lo, hi)

    rng = generator(seed)
    pmf = power_law_pmf(n, gamma)
    support = np.arange(1, n)
    for _ in range(10_000):
        degrees = rng.choice(support, size=n, p=pmf)
        if degrees.sum() % 2 == 0:
            break
    else:  # pragma: no cover - parity fails with probability ~2**-10000
        raise DegreeSequenceError("could not draw an even degree sum", degrees)

    stubs = np.repeat(np.arange(n), degrees)
    for attempt in range(1, max_retries + 1):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        u, v = pairs.min(axis=1), pairs.max(axis=1)
        loops = u == v
        keys = u * n + v
        simple = not loops.any() and np.unique(keys).size == keys.size
        if simple:
            g = Graph(n, frozenset(zip(u.tolist(), v.tolist())))
            return PowerLawGraph(g, tuple(degrees.tolist()), gamma, alpha, attempt, False)

    if fallback == "error":
        raise DegreeSequenceError(
            f"no simple wiring in {max_retries} configuration-model attempts", degrees)
    keep = ~loops
    g = Graph(n, frozenset(zip(u[keep].tolist(), v[keep].tolist())))
    logger.warning("power-law wiring fell back to erased edges (n=%d, gamma=%s)", n, gamma)
    return PowerLawGraph(g, tuple(degrees.tolist()), gamma, alpha, max_retries, True)


def in_window(value: float, window) -> bool:
    lo, hi = window
    return lo <= value <= hi
