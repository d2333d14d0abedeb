"""Integer matrix invariants: Smith normal form, the pointed Bowen-Franks
group coker(I - A) with the class of the all-ones vector, and the one-sided
flow equivalence decision."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

from .errors import OrbitBoundExceeded
from .shift import ShiftSpace, mat_identity

DEFAULT_ORBIT_BOUND = 10 ** 6


@dataclass(frozen=True)
class SNFResult:
    """U @ M @ V == D, U and V unimodular, D diagonal with d1 | d2 | ... >= 0."""

    U: list
    V: list
    D: list

    @property
    def diagonal(self) -> list:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def _row_op(mat, dst, src, q):
    # row[dst] -= q * row[src]
    rs, rd = mat[src], mat[dst]
    for j in range(len(rd)):
        rd[j] -= q * rs[j]


def _col_op(mat, dst, src, q):
    for row in mat:
        row[dst] -= q * row[src]


def smith_normal_form(M) -> SNFResult:
    A = [list(map(int, r)) for r in M]
    n = len(A)
    m = len(A[0]) if n else 0
    U = mat_identity(n)
    V = mat_identity(m)

    for t in range(min(n, m)):
        while True:
            piv = None
            for i in range(t, n):
                for j in range(t, m):
                    a = A[i][j]
                    if a and (piv is None or abs(a) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return SNFResult(U, V, A)
            i, j = piv
            if i != t:
                A[t], A[i] = A[i], A[t]
                U[t], U[i] = U[i], U[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
                for row in V:
                    row[t], row[j] = row[j], row[t]
            p = A[t][t]
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    q = A[i][t] // p
                    _row_op(A, i, t, q)
                    _row_op(U, i, t, q)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, m):
                if A[t][j]:
                    q = A[t][j] // p
                    _col_op(A, j, t, q)
                    _col_op(V, j, t, q)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if A[i][j] % p), None)
            if bad is None:
                break
            _row_op(A, t, bad[0], -1)
            _row_op(U, t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
    return SNFResult(U, V, A)


def determinant(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointedAbelianGroup:
    """Z^free_rank + sum Z/d_i with a marked element (free part, torsion part)."""

    free_rank: int
    invariant_factors: tuple
    marked_free: tuple
    marked_torsion: tuple

    def __post_init__(self):
        assert len(self.marked_free) == self.free_rank
        assert len(self.marked_torsion) == len(self.invariant_factors)
        assert all(0 <= t < d for t, d in zip(self.marked_torsion, self.invariant_factors))

    @classmethod
    def make(cls, free_rank, factors, free, torsion) -> "PointedAbelianGroup":
        factors = tuple(int(d) for d in factors)
        return cls(free_rank, factors, tuple(int(a) for a in free),
                   tuple(int(t) % d for t, d in zip(torsion, factors)))

    @property
    def order(self):
        """Order of the torsion subgroup."""
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "invariant_factors": [str(d) for d in self.invariant_factors],
            "marked": {"free": [str(a) for a in self.marked_free],
                       "torsion": [str(t) for t in self.marked_torsion]},
            "description": self.describe(),
        }


def bowen_franks(S: ShiftSpace):
    """(coker(I - A) pointed by [1,...,1], det(I - A))."""
    n = S.n
    M = [[int(i == j) - S.matrix[i][j] for j in range(n)] for i in range(n)]
    snf = smith_normal_form(M)
    marked = [sum(snf.U[i][j] for j in range(n)) for i in range(n)]
    factors, torsion, free = [], [], []
    for i, d in enumerate(snf.diagonal):
        if d == 1:
            continue
        if d == 0:
            free.append(marked[i])
        else:
            factors.append(d)
            torsion.append(marked[i] % d)
    group = PointedAbelianGroup.make(len(free), factors, free, torsion)
    return group, determinant(M)


# ---------------------------------------------------------------------------
# pointed isomorphism decision

def _factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _unit_generators(p, e):
    """Generators of the unit group of Z/p^e."""
    q = p ** e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [q - 1]
        return [q - 1, 5]
    g = next(g for g in range(2, p)
             if all(pow(g, (p - 1) // r, p) != 1 for r in _factorize(p - 1)))
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return [g]


def _primary_components(factors):
    """{p: [(exponent, source coordinate), ...]} for the torsion factors."""
    comps = {}
    for i, d in enumerate(factors):
        for p, e in _factorize(d).items():
            comps.setdefault(p, []).append((e, i))
    return comps


def _generators(p, exps, g):
    """Labelled maps generating Aut(T_p) extended by translations by g*T_p."""
    mods = [p ** e for e in exps]
    k = len(exps)
    gens = []
    for i in range(k):
        for u in _unit_generators(p, exps[i]):
            def scale(t, i=i, u=u):
                t = list(t)
                t[i] = t[i] * u % mods[i]
                return tuple(t)
            gens.append(({"op": "scale", "coord": i, "unit": u}, scale))
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            coef = p ** max(0, exps[i] - exps[j])
            if coef % mods[i] == 0:
                continue

            def transvect(t, i=i, j=j, coef=coef):
                t = list(t)
                t[i] = (t[i] + coef * t[j]) % mods[i]
                return tuple(t)
            gens.append(({"op": "transvect", "target": i, "source": j, "coef": coef}, transvect))
    if g:
        for i in range(k):
            if g % mods[i] == 0:
                continue

            def translate(t, i=i):
                t = list(t)
                t[i] = (t[i] + g) % mods[i]
                return tuple(t)
            gens.append(({"op": "translate", "coord": i, "by": g}, translate))
    return gens


def _orbit_search(start, target, gens, budget):
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == target:
            word = []
            while parent[s] is not None:
                s, label = parent[s]
                word.append(label)
            return word[::-1], len(parent)
        for label, fn in gens:
            t = fn(s)
            if t not in parent:
                parent[t] = (s, label)
                if len(parent) > budget:
                    raise OrbitBoundExceeded(f"torsion orbit exceeded {budget} elements")
                queue.append(t)
    return None, len(parent)


def _content(vec):
    g = 0
    for a in vec:
        g = gcd(g, a)
    return g


def pointed_iso_exists(G: PointedAbelianGroup, H: PointedAbelianGroup, orbit_bound: int = DEFAULT_ORBIT_BOUND):
    """Decide whether some isomorphism G -> H sends marked to marked.

    Returns ``(True, word)`` where ``word`` lists the generator steps, or
    ``(False, reason)``.
    """
    if G.free_rank != H.free_rank or G.invariant_factors != H.invariant_factors:
        return False, f"group mismatch: {G.describe()} vs {H.describe()}"
    g = _content(G.marked_free)
    if g != _content(H.marked_free):
        return False, f"free part of marked element has content {g} vs {_content(H.marked_free)}"
    word = []
    if G.free_rank:
        word.append({"op": "normalize_free", "content": g,
                     "from": list(G.marked_free), "to": list(H.marked_free)})
    comps = _primary_components(G.invariant_factors)
    budget = orbit_bound
    for p in sorted(comps):
        exps = [e for e, _ in comps[p]]
        src = tuple(G.marked_torsion[i] % p ** e for e, i in comps[p])
        dst = tuple(H.marked_torsion[i] % p ** e for e, i in comps[p])
        steps, explored = _orbit_search(src, dst, _generators(p, exps, g), budget)
        budget -= explored
        if steps is None:
            return False, f"marked elements lie in different Aut-orbits at prime {p}"
        word.extend({"prime": p, **s} for s in steps)
    return True, word


def one_sided_floweq(SA: ShiftSpace, SB: ShiftSpace, orbit_bound: int = DEFAULT_ORBIT_BOUND):
    """EQUIVALENT iff the pointed groups are isomorphic and det(I-A) = det(I-B)."""
    GA, detA = bowen_franks(SA)
    GB, detB = bowen_franks(SB)
    iso_ok, info = pointed_iso_exists(GA, GB, orbit_bound)
    report = {
        "equivalent": False,
        "detA": str(detA),
        "detB": str(detB),
        "groupA": GA.to_json(),
        "groupB": GB.to_json(),
        "isomorphism": None,
        "obstruction": None,
    }
    if not iso_ok:
        report["obstruction"] = info
    elif detA != detB:
        report["obstruction"] = f"determinant mismatch: {detA} vs {detB}"
    else:
        report["equivalent"] = True
        report["isomorphism"] = info
    return report["equivalent"], report
