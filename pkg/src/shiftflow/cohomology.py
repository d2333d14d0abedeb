"""Locally constant functions on a shift, Birkhoff sums, coboundaries and
order units of the ordered cohomology group."""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import NotIntegerValued, NotOrderUnit, ShiftMismatch
from .shift import BlockGraph, Point, ShiftSpace, Word, format_word, higher_block

DEFAULT_M_MAX = 64


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; use int, Fraction or 'p/q' strings")
    return Fraction(v)


class LocallyConstantFn:
    """A function on X_A that depends on the first ``depth`` symbols only.

    ``table`` maps every allowed ``depth``-word (0-based tuple) to an exact
    rational.  Two functions compare equal when they agree pointwise, even if
    stored at different depths.
    """

    __slots__ = ("shift", "depth", "table", "_integer")

    def __init__(self, shift: ShiftSpace, depth: int, table: Mapping, integer: Optional[bool] = None):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        words = shift.words(depth)
        tab = {tuple(k): _frac(v) for k, v in table.items()}
        if set(tab) != set(words):
            missing = [w for w in words if w not in tab]
            extra = [w for w in tab if w not in set(words)]
            raise ValueError(f"table must cover exactly the allowed {depth}-words "
                             f"(missing {missing[:3]}, extra {extra[:3]})")
        integral = all(v.denominator == 1 for v in tab.values())
        if integer and not integral:
            raise NotIntegerValued("declared integer-valued but has non-integral entries")
        self.shift = shift
        self.depth = depth
        self.table = {w: tab[w] for w in words}
        self._integer = integral if integer is None else (integer and integral)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, shift: ShiftSpace, value=0) -> "LocallyConstantFn":
        v = _frac(value)
        return cls(shift, 1, {w: v for w in shift.words(1)})

    @classmethod
    def from_symbols(cls, shift: ShiftSpace, values) -> "LocallyConstantFn":
        """Depth-1 function; ``values[i]`` is the value on the cylinder of symbol i+1."""
        return cls(shift, 1, {(i,): values[i] for i in range(shift.n)})

    @classmethod
    def from_function(cls, shift: ShiftSpace, depth: int, fn: Callable[[Word], object]) -> "LocallyConstantFn":
        return cls(shift, depth, {w: fn(w) for w in shift.words(depth)})

    # -- evaluation ---------------------------------------------------------
    @property
    def is_integer(self) -> bool:
        return self._integer

    def on_word(self, word) -> Fraction:
        return self.table[tuple(word[: self.depth])]

    def __call__(self, x: Point) -> Fraction:
        return self.table[x.prefix(self.depth)]

    def values(self):
        return self.table.values()

    def min(self) -> Fraction:
        return min(self.table.values())

    def max(self) -> Fraction:
        return max(self.table.values())

    # -- depth handling ----------------------------------------------------
    def refine(self, depth: int) -> "LocallyConstantFn":
        if depth < self.depth:
            raise ValueError("cannot refine to a smaller depth")
        if depth == self.depth:
            return self
        d = self.depth
        return LocallyConstantFn(self.shift, depth,
                                 {w: self.table[w[:d]] for w in self.shift.words(depth)},
                                 integer=self._integer)

    def reduced(self) -> "LocallyConstantFn":
        """The same function at the smallest depth that represents it."""
        f = self
        while f.depth > 1:
            d = f.depth - 1
            coarse = {}
            ok = True
            for w, v in f.table.items():
                prev = coarse.setdefault(w[:d], v)
                if prev != v:
                    ok = False
                    break
            if not ok:
                break
            f = LocallyConstantFn(f.shift, d, coarse, integer=f._integer)
        return f

    # -- algebra -------------------------------------------------------------
    def _aligned(self, other):
        if not isinstance(other, LocallyConstantFn):
            other = LocallyConstantFn.constant(self.shift, other)
        if other.shift != self.shift:
            raise ShiftMismatch("functions live on different shifts")
        d = max(self.depth, other.depth)
        return self.refine(d), other.refine(d), d

    def __add__(self, other):
        a, b, d = self._aligned(other)
        return LocallyConstantFn(self.shift, d, {w: a.table[w] + b.table[w] for w in a.table})

    __radd__ = __add__

    def __sub__(self, other):
        a, b, d = self._aligned(other)
        return LocallyConstantFn(self.shift, d, {w: a.table[w] - b.table[w] for w in a.table})

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LocallyConstantFn(self.shift, self.depth, {w: -v for w, v in self.table.items()})

    def scale(self, q) -> "LocallyConstantFn":
        q = _frac(q)
        return LocallyConstantFn(self.shift, self.depth, {w: q * v for w, v in self.table.items()})

    def __mul__(self, q):
        return self.scale(q)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LocallyConstantFn):
            return NotImplemented
        if other.shift != self.shift:
            return False
        a, b, _ = self._aligned(other)
        return a.table == b.table

    __hash__ = None

    def __repr__(self):
        items = ", ".join(f"{format_word(w, self.shift.n)}:{v}" for w, v in self.table.items())
        return f"LocallyConstantFn(depth={self.depth}, {{{items}}})"


def combine(f: LocallyConstantFn, g: Optional[LocallyConstantFn], op: str, scalar=None) -> LocallyConstantFn:
    """Pointwise algebra: op is one of add, sub, negate, scale."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "negate":
        return -f
    if op == "scale":
        return f.scale(scalar)
    raise ValueError(f"unknown op {op!r}")


def eval_fn(f: LocallyConstantFn, x: Point) -> Fraction:
    return f(x)


def birkhoff(f: LocallyConstantFn, x: Point, m: int) -> Fraction:
    """sum_{i<m} f(sigma^i x)"""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return Fraction(0)
    d = f.depth
    seq = x.prefix(m + d - 1)
    tab = f.table
    return sum((tab[seq[i:i + d]] for i in range(m)), Fraction(0))


def compose_shift(f: LocallyConstantFn) -> LocallyConstantFn:
    """f o sigma, one level deeper."""
    return LocallyConstantFn(f.shift, f.depth + 1,
                             {w: f.table[w[1:]] for w in f.shift.words(f.depth + 1)},
                             integer=f.is_integer)


def coboundary_of(g: LocallyConstantFn) -> LocallyConstantFn:
    """g - g o sigma"""
    return g - compose_shift(g)


def _require_integer(f: LocallyConstantFn):
    if not f.is_integer:
        raise NotIntegerValued("function must be integer valued")


def _bfs_tree(n, adj, root=0):
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, e in adj[u]:
            if v not in parent:
                parent[v] = (u, e)
                order.append(v)
                queue.append(v)
    return parent, order


def is_coboundary(f: LocallyConstantFn):
    """Decide whether f = g - g o sigma for an integer locally constant g.

    Returns ``(True, g)`` with g at depth max(d-1, 1), or ``(False, (word, s))``
    where ``word`` is a cyclic word whose periodic point has f-sum ``s != 0``
    over one traversal.
    """
    _require_integer(f)
    D = max(f.depth, 2)
    f = f.refine(D)
    G = higher_block(f.shift, D - 1)
    idx = G.index
    nv = len(G.vertices)
    out_adj = [[] for _ in range(nv)]
    in_adj = [[] for _ in range(nv)]
    edges = []
    for w, val in f.table.items():
        u, v = idx[w[:-1]], idx[w[1:]]
        edges.append((u, v, val))
        out_adj[u].append((v, len(edges) - 1))
        in_adj[v].append((u, len(edges) - 1))

    parent, order = _bfs_tree(nv, out_adj)
    pot = {0: Fraction(0)}
    for v in order[1:]:
        u, e = parent[v]
        pot[v] = pot[u] - edges[e][2]
    if all(pot[u] - pot[v] == val for u, v, val in edges):
        g = LocallyConstantFn(f.shift, D - 1, {G.vertices[i]: pot[i] for i in range(nv)}, integer=True)
        return True, g

    # Closed walks root -> u -> v -> root; one of them has nonzero sum.
    back, _ = _bfs_tree(nv, in_adj)

    def path_from_root(u):
        seq = []
        while u != 0:
            seq.append(u)
            u = parent[u][0]
        return [0] + seq[::-1]

    def path_to_root(v):
        seq = []
        while v != 0:
            seq.append(v)
            v = back[v][0]
        return seq

    for u, v, val in edges:
        walk = path_from_root(u) + path_to_root(v)
        total = sum(
            (f.table[G.vertices[walk[i]] + G.vertices[walk[(i + 1) % len(walk)]][-1:]]
             for i in range(len(walk))), Fraction(0))
        if total != 0:
            return False, (G.walk_to_word(walk), total)
    raise AssertionError("inconsistent potential but every closed walk sums to zero")


def cohomologous(f: LocallyConstantFn, g: LocallyConstantFn) -> bool:
    if f.shift != g.shift:
        raise ShiftMismatch("functions live on different shifts")
    return is_coboundary(f - g)[0]


# ---------------------------------------------------------------------------
# minimum cycle mean and order units

def _vertex_weights(c: LocallyConstantFn):
    G = higher_block(c.shift, c.depth)
    return G, [c.table[w] for w in G.vertices]


def min_cycle_mean(G: BlockGraph, weight):
    """Karp's algorithm; edge u->v carries weight[u].  Returns (mu, cycle)
    with ``cycle`` a list of vertex indices realizing the minimum mean."""
    n = len(G.vertices)
    pred = G.pred
    INF = None
    D = [[Fraction(0)] * n]
    for k in range(1, n + 1):
        prev = D[-1]
        row = []
        for v in range(n):
            best = INF
            for u in pred[v]:
                if prev[u] is not INF:
                    cand = prev[u] + weight[u]
                    if best is INF or cand < best:
                        best = cand
            row.append(best)
        D.append(row)
    mu = None
    for v in range(n):
        if D[n][v] is INF:
            continue
        worst = None
        for k in range(n):
            if D[k][v] is INF:
                continue
            val = (D[n][v] - D[k][v]) / (n - k)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (mu is None or worst < mu):
            mu = worst
    return mu, _tight_cycle(G, weight, mu)


def _tight_cycle(G: BlockGraph, weight, mu):
    n = len(G.vertices)
    pot = [Fraction(0)] * n
    for _ in range(n + 1):
        changed = False
        for u, v in G.edges:
            cand = pot[u] + weight[u] - mu
            if cand < pot[v]:
                pot[v] = cand
                changed = True
        if not changed:
            break
    tight = [[] for _ in range(n)]
    for u, v in G.edges:
        if pot[u] + weight[u] - mu == pot[v]:
            tight[u].append(v)
    # iterative DFS for a cycle in the tight subgraph
    color = [0] * n
    for s in range(n):
        if color[s]:
            continue
        stack = [(s, iter(tight[s]))]
        path = [s]
        color[s] = 1
        while stack:
            u, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[u] = 2
                stack.pop()
                path.pop()
            elif color[nxt] == 1:
                return path[path.index(nxt):]
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(tight[nxt])))
                path.append(nxt)
    raise AssertionError("no tight cycle found")


def _least_witness(G: BlockGraph, weight, limit):
    """Least m (<= limit, or unbounded) with every m-vertex walk summing to >= 1."""
    n = len(G.vertices)
    best = list(weight)
    m = 1
    while True:
        if min(best) >= 1:
            return m
        if limit is not None and m >= limit:
            return None
        m += 1
        best = [weight[v] + min(best[u] for u in G.succ[v]) for v in range(n)]


@dataclass(frozen=True)
class OrderUnitCertificate:
    is_order_unit: bool
    witness_m: Optional[int]
    min_cycle_mean: Fraction
    violating_cycle: Optional[Word]
    mean_cycle: Word

    def cycle_sum(self):
        return self.min_cycle_mean * len(self.mean_cycle)


def order_unit(c: LocallyConstantFn, m_max: int = DEFAULT_M_MAX) -> OrderUnitCertificate:
    _require_integer(c)
    G, weight = _vertex_weights(c)
    mu, cyc = min_cycle_mean(G, weight)
    word = G.walk_to_word(cyc)
    if mu <= 0:
        return OrderUnitCertificate(False, None, mu, word, word)
    m = _least_witness(G, weight, m_max)
    if m is None:
        warnings.warn(f"order unit (mean {mu}) but no positivity witness m <= {m_max}")
    return OrderUnitCertificate(True, m, mu, None, word)


def positivity_witness(c: LocallyConstantFn, m: int) -> int:
    """n_m with c^{n_m} >= m everywhere, built as m times the least window
    length p making c^p >= 1."""
    cert = order_unit(c)
    if not cert.is_order_unit:
        raise NotOrderUnit(f"minimum cycle mean {cert.min_cycle_mean} <= 0")
    p = cert.witness_m
    if p is None:
        G, weight = _vertex_weights(c)
        p = _least_witness(G, weight, None)
    return m * p


def min_window_sum(c: LocallyConstantFn, m: int) -> Fraction:
    """min over allowed (m+d-1)-words of the m-term Birkhoff sum (brute force)."""
    d = c.depth
    return min(sum((c.table[w[i:i + d]] for i in range(m)), Fraction(0))
               for w in c.shift.words(m + d - 1))
