"""Topological Markov shifts: transition matrices, words, eventually periodic
points, periodic-point enumeration and higher block presentations.

Symbols are stored internally as 0-based ints.  The external (printed and
parsed) alphabet is "1".."N".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import InvalidPoint, NonBinaryEntry, NotIrreducible, PermutationMatrix

Word = tuple  # tuple[int, ...], 0-based symbols


# ---------------------------------------------------------------------------
# exact integer matrices (nested lists of python ints)

def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        row = a[i]
        orow = out[i]
        for k in range(m):
            aik = row[k]
            if aik:
                brow = b[k]
                for j in range(p):
                    orow[j] += aik * brow[j]
    return out


def mat_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_pow(a, e):
    result = mat_identity(len(a))
    base = [list(r) for r in a]
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def trace(a):
    return sum(a[i][i] for i in range(len(a)))


# ---------------------------------------------------------------------------
# words

def parse_word(text: str, n: int) -> Word:
    """Parse a 1-based word.  Space separated, or concatenated when N <= 9."""
    text = text.strip()
    if not text:
        return ()
    parts = text.split() if (" " in text or n > 9) else list(text)
    try:
        word = tuple(int(s) - 1 for s in parts)
    except ValueError:
        raise InvalidPoint(f"bad symbol in word {text!r}") from None
    for s in word:
        if not 0 <= s < n:
            raise InvalidPoint(f"symbol {s + 1} outside alphabet 1..{n}")
    return word


def format_word(word: Sequence[int], n: int | None = None, sep: str | None = None) -> str:
    if sep is None:
        sep = "" if (n is None or n <= 9) else " "
    return sep.join(str(s + 1) for s in word)


def primitive_root(word: Word) -> Word:
    p = len(word)
    for q in range(1, p + 1):
        if p % q == 0 and word[:q] * (p // q) == word:
            return word[:q]
    return word


def min_rotation(word: Word) -> Word:
    return min(word[i:] + word[:i] for i in range(len(word)))


# ---------------------------------------------------------------------------
# shift spaces

@dataclass(frozen=True)
class ShiftSpace:
    """A validated irreducible, non-permutation 0-1 matrix.  Use
    :func:`validate_shift` to construct one."""

    matrix: tuple

    @property
    def n(self) -> int:
        return len(self.matrix)

    @cached_property
    def successors(self) -> tuple:
        return tuple(tuple(j for j in range(self.n) if self.matrix[i][j]) for i in range(self.n))

    def allowed(self, i: int, j: int) -> bool:
        return self.matrix[i][j] == 1

    def is_allowed(self, word: Sequence[int]) -> bool:
        if any(not 0 <= s < self.n for s in word):
            return False
        return all(self.matrix[a][b] for a, b in zip(word, word[1:]))

    def is_cyclic(self, word: Sequence[int]) -> bool:
        return bool(word) and self.is_allowed(word) and self.matrix[word[-1]][word[0]] == 1

    def words(self, d: int) -> tuple:
        """All allowed words of length d, in lexicographic order."""
        return _allowed_words(self, d)

    def as_lists(self):
        return [list(r) for r in self.matrix]

    def check_point(self, x: "Point") -> "Point":
        seq = x.prefix(len(x.pre) + 2 * len(x.per))
        if not self.is_allowed(seq):
            raise InvalidPoint(f"{x} is not a point of this shift")
        return x

    def fmt(self, word) -> str:
        return format_word(word, self.n)

    def __repr__(self):
        return f"ShiftSpace({self.as_lists()})"


_WORD_CACHE: dict = {}


def _allowed_words(S: ShiftSpace, d: int) -> tuple:
    key = (S.matrix, d)
    hit = _WORD_CACHE.get(key)
    if hit is not None:
        return hit
    if d <= 0:
        out = ((),)
    else:
        out = tuple(w + (j,) for w in _allowed_words(S, d - 1) for j in
                    (S.successors[w[-1]] if w else range(S.n)))
    _WORD_CACHE[key] = out
    return out


def _reachable(succ, start):
    seen = {start}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in succ[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return seen


def validate_shift(matrix, size: int | None = None) -> ShiftSpace:
    rows = [list(r) for r in matrix]
    n = len(rows)
    if size is not None and size != n:
        raise ValueError(f"declared size {size} but matrix has {n} rows")
    if any(len(r) != n for r in rows):
        raise ValueError("transition matrix must be square")
    if n < 2:
        raise ValueError("need at least two symbols")
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if isinstance(v, bool) or v not in (0, 1):
                raise NonBinaryEntry(f"entry ({i + 1},{j + 1}) = {v!r} is not 0 or 1")
    succ = [[j for j in range(n) if rows[i][j]] for i in range(n)]
    for i in range(n):
        reach = _reachable(succ, i)
        if len(reach) < n:
            j = min(set(range(n)) - reach)
            raise NotIrreducible(f"no path from {i + 1} to {j + 1}", pair=(i + 1, j + 1))
    rowsums = [sum(r) for r in rows]
    colsums = [sum(rows[i][j] for i in range(n)) for j in range(n)]
    if all(s == 1 for s in rowsums) and all(s == 1 for s in colsums):
        raise PermutationMatrix("permutation matrix: condition (I) fails")
    return ShiftSpace(tuple(tuple(int(v) for v in r) for r in rows))


# ---------------------------------------------------------------------------
# points

@dataclass(frozen=True)
class Point:
    """The eventually periodic sequence ``pre + per + per + ...``.

    Construction canonicalizes: ``per`` becomes primitive and ``pre`` as short
    as possible, so dataclass equality is equality of sequences.
    """

    pre: Word
    per: Word

    def __post_init__(self):
        per = primitive_root(tuple(self.per))
        if not per:
            raise InvalidPoint("period word must be nonempty")
        pre = tuple(self.pre)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def periodic(cls, word) -> "Point":
        return cls((), tuple(word))

    @property
    def period(self) -> int:
        return len(self.per)

    def symbol(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> Word:
        if n <= len(self.pre):
            return self.pre[:n]
        k = n - len(self.pre)
        p = len(self.per)
        return self.pre + self.per * (k // p) + self.per[: k % p]

    def shift(self) -> "Point":
        return self.shifted(1)

    def shifted(self, m: int) -> "Point":
        if m <= len(self.pre):
            return Point(self.pre[m:], self.per)
        k = (m - len(self.pre)) % len(self.per)
        return Point((), self.per[k:] + self.per[:k])

    def is_periodic(self) -> bool:
        return not self.pre

    def __str__(self):
        per = format_word(self.per)
        return f"{format_word(self.pre)}({per})^inf" if self.pre else f"({per})^inf"


def shift(x: Point) -> Point:
    return x.shift()


@dataclass(frozen=True, order=True)
class PeriodicOrbit:
    """A primitive periodic orbit, represented by its least rotation."""

    rep: Word
    period: int = field(compare=False)

    @classmethod
    def of(cls, x: Point) -> "PeriodicOrbit":
        if x.pre:
            raise InvalidPoint(f"{x} is not periodic")
        rep = min_rotation(x.per)
        return cls(rep, len(rep))

    @property
    def representative(self) -> Point:
        return Point((), self.rep)

    def points(self) -> list:
        x = self.representative
        return [x.shifted(i) for i in range(self.period)]

    def __str__(self):
        return "{" + ", ".join(str(p) for p in self.points()) + "}"


def _cyclic_words(S: ShiftSpace, n: int) -> Iterator[Word]:
    for w in S.words(n):
        if S.matrix[w[-1]][w[0]]:
            yield w


def periodic_points(S: ShiftSpace, n: int) -> list:
    """All x with sigma^n(x) = x, one per cyclically allowed n-word."""
    if n < 1:
        raise ValueError("n must be positive")
    return [Point((), w) for w in _cyclic_words(S, n)]


def count_periodic(S: ShiftSpace, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return trace(mat_pow(S.as_lists(), n))


def periodic_orbits(S: ShiftSpace, p: int) -> list:
    """Primitive orbits of exact period p, sorted by representative."""
    out = []
    for w in _cyclic_words(S, p):
        if primitive_root(w) == w and min_rotation(w) == w:
            out.append(PeriodicOrbit(w, p))
    return out


def orbits_up_to(S: ShiftSpace, pmax: int) -> list:
    return [g for p in range(1, pmax + 1) for g in periodic_orbits(S, p)]


# ---------------------------------------------------------------------------
# higher block presentation

@dataclass(frozen=True)
class BlockGraph:
    """Vertices are allowed d-words; w -> w' iff they overlap in d-1 symbols
    and the glued (d+1)-word is allowed."""

    shift: ShiftSpace
    d: int
    vertices: tuple
    edges: tuple

    @cached_property
    def index(self) -> dict:
        return {w: i for i, w in enumerate(self.vertices)}

    @cached_property
    def succ(self) -> tuple:
        out = [[] for _ in self.vertices]
        for i, j in self.edges:
            out[i].append(j)
        return tuple(tuple(s) for s in out)

    @cached_property
    def pred(self) -> tuple:
        out = [[] for _ in self.vertices]
        for i, j in self.edges:
            out[j].append(i)
        return tuple(tuple(s) for s in out)

    def adjacency(self):
        m = [[0] * len(self.vertices) for _ in self.vertices]
        for i, j in self.edges:
            m[i][j] = 1
        return m

    def cycle_count(self, n: int) -> int:
        return trace(mat_pow(self.adjacency(), n))

    def is_strongly_connected(self) -> bool:
        if not self.vertices:
            return False
        return (len(_reachable(self.succ, 0)) == len(self.vertices)
                and len(_reachable(self.pred, 0)) == len(self.vertices))

    def walk_to_word(self, walk: Sequence[int]) -> Word:
        """Cyclic symbol word traced by a closed walk given as vertex indices."""
        return tuple(self.vertices[v][0] for v in walk)


def higher_block(S: ShiftSpace, d: int) -> BlockGraph:
    if d < 1:
        raise ValueError("block length must be >= 1")
    verts = S.words(d)
    index = {w: i for i, w in enumerate(verts)}
    edges = tuple((index[w[:-1]], index[w[1:]]) for w in S.words(d + 1))
    return BlockGraph(S, d, verts, edges)
