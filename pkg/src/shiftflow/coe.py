"""Continuous orbit equivalences given by finite-state transducers.

A :class:`COEPair` bundles h: X_A -> X_B, its inverse, and the cocycles
(k1, l1) on X_A and (k2, l2) on X_B.  From it we build the cocycle transfer
map Psi_h on potentials and the periodic-orbit correspondence xi_h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cohomology import LocallyConstantFn, birkhoff
from .errors import DepthInconsistency, IncompleteTransition, InvalidPoint, PeriodMismatch
from .shift import PeriodicOrbit, Point, ShiftSpace, orbits_up_to, validate_shift

DEFAULT_DEPTH_CAP = 32


@dataclass(frozen=True)
class Transducer:
    """Deterministic letter-to-word transducer.

    ``transitions[(state, symbol)] = (output_word, next_state)`` with 0-based
    symbols.  Missing entries are allowed for inputs that never occur.
    """

    states: tuple
    initial: str
    transitions: dict = field(hash=False)

    def step(self, state, symbol):
        try:
            return self.transitions[(state, symbol)]
        except KeyError:
            raise IncompleteTransition(f"no rule for symbol {symbol + 1} in state {state!r}") from None

    def run(self, word, state=None):
        """Feed a finite word; returns (output emitted so far, final state)."""
        state = self.initial if state is None else state
        out = []
        for s in word:
            o, state = self.step(state, s)
            out.extend(o)
        return tuple(out), state

    def apply(self, x: Point) -> Point:
        out, state = self.run(x.pre)
        seen = {}
        passes = []
        while state not in seen:
            seen[state] = len(passes)
            o, state = self.run(x.per, state)
            passes.append(o)
        start = seen[state]
        head = out + sum(passes[:start], ())
        loop = sum(passes[start:], ())
        if not loop:
            raise InvalidPoint(f"transducer output on {x} is finite")
        return Point(head, loop)

    def __call__(self, x: Point) -> Point:
        return self.apply(x)

    def delay_bound(self) -> int:
        """Longest run of consecutive empty-output transitions, plus one."""
        empty = {}
        for (st, _), (o, nxt) in self.transitions.items():
            if not o:
                empty.setdefault(st, set()).add(nxt)
        memo = {}

        def longest(st, stack):
            if st in stack:
                raise InvalidPoint("transducer has a cycle of empty outputs")
            if st not in memo:
                stack.add(st)
                memo[st] = max((1 + longest(n, stack) for n in empty.get(st, ())), default=0)
                stack.discard(st)
            return memo[st]

        return 1 + max((longest(st, set()) for st in self.states), default=0)

    @classmethod
    def identity(cls, n: int) -> "Transducer":
        return cls(("q",), "q", {("q", s): ((s,), "q") for s in range(n)})

    @classmethod
    def substitution(cls, images) -> "Transducer":
        """One-state transducer sending symbol i to the word images[i]."""
        return cls(("q",), "q", {("q", s): (tuple(w), "q") for s, w in enumerate(images)})


def apply(T: Transducer, x: Point) -> Point:
    return T.apply(x)


@dataclass(frozen=True)
class COEPair:
    A: ShiftSpace
    B: ShiftSpace
    h: Transducer
    h_inv: Transducer
    k1: LocallyConstantFn = field(compare=False)
    l1: LocallyConstantFn = field(compare=False)
    k2: LocallyConstantFn = field(compare=False)
    l2: LocallyConstantFn = field(compare=False)

    @property
    def c1(self) -> LocallyConstantFn:
        return (self.l1 - self.k1).reduced()

    @property
    def c2(self) -> LocallyConstantFn:
        return (self.l2 - self.k2).reduced()

    def reversed(self) -> "COEPair":
        """The same equivalence read from X_B to X_A."""
        return COEPair(self.B, self.A, self.h_inv, self.h, self.k2, self.l2, self.k1, self.l1)


def paper_example() -> COEPair:
    """Full 2-shift and golden mean shift, h substituting 21 for each 2."""
    A = validate_shift([[1, 1], [1, 1]])
    B = validate_shift([[1, 1], [1, 0]])
    h = Transducer.substitution([(0,), (1, 0)])
    h_inv = Transducer(("s", "t"), "s", {
        ("s", 0): ((0,), "s"),
        ("s", 1): ((1,), "t"),
        ("t", 0): ((), "s"),
    })
    sym = LocallyConstantFn.from_symbols
    return COEPair(A, B, h, h_inv,
                   k1=sym(A, [0, 0]), l1=sym(A, [1, 2]),
                   k2=sym(B, [0, 1]), l2=sym(B, [1, 1]))


def identity_pair(S: ShiftSpace) -> COEPair:
    zero = LocallyConstantFn.constant(S, 0)
    one = LocallyConstantFn.constant(S, 1)
    ident = Transducer.identity(S.n)
    return COEPair(S, S, ident, ident, zero, one, zero, one)


# ---------------------------------------------------------------------------
# verification

def sample_points(S: ShiftSpace, depth: int, max_period: int) -> list:
    """Distinct points u.v^inf with |u| <= depth and v running over one
    representative word per periodic orbit of period <= max_period, ordered
    by |u|, then u, then orbit."""
    return list(iter_sample_points(S, depth, max_period))


def iter_sample_points(S: ShiftSpace, depth: int, max_period: int):
    orbits = orbits_up_to(S, max_period)
    seen = set()
    for m in range(depth + 1):
        for u in S.words(m):
            for g in orbits:
                v = g.rep
                if u and not S.allowed(u[-1], v[0]):
                    continue
                x = Point(u, v)
                if x not in seen:
                    seen.add(x)
                    yield x


@dataclass
class VerificationReport:
    passed: bool
    depth: int
    max_period: int
    checked_A: int = 0
    checked_B: int = 0
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "depth": self.depth,
            "max_period": self.max_period,
            "points_checked_A": self.checked_A,
            "points_checked_B": self.checked_B,
            "counterexample": self.counterexample,
        }


def _nonneg_int(f: LocallyConstantFn) -> bool:
    return f.is_integer and f.min() >= 0


def _check_side(S, T, h, h_inv, k, l, points, side):
    """First failure of sigma^{k(x)} h(sigma x) = sigma^{l(x)} h(x) or of
    h_inv(h(x)) = x on the sample, as (report dict or None, points checked)."""
    count = 0
    for x in points:
        count += 1
        try:
            hx = h(x)
            T.check_point(hx)
            lhs = h(x.shift()).shifted(int(k(x)))
            rhs = hx.shifted(int(l(x)))
            back = h_inv(hx)
        except (IncompleteTransition, InvalidPoint) as exc:
            return {"side": side, "point": str(x), "identity": "evaluation", "detail": str(exc)}, count
        if lhs != rhs:
            return {"side": side, "point": str(x), "identity": "cocycle",
                    "lhs": str(lhs), "rhs": str(rhs)}, count
        if back != x:
            return {"side": side, "point": str(x), "identity": "inverse",
                    "image": str(hx), "back": str(back)}, count
    return None, count


def verify_coe(P: COEPair, depth: int = 10, max_period: int = 8) -> VerificationReport:
    report = VerificationReport(True, depth, max_period)
    for name in ("k1", "l1", "k2", "l2"):
        if not _nonneg_int(getattr(P, name)):
            report.passed = False
            report.counterexample = {"identity": "cocycle-range", "detail": f"{name} is not nonnegative integer valued"}
            return report
    bad, report.checked_A = _check_side(P.A, P.B, P.h, P.h_inv, P.k1, P.l1,
                                        iter_sample_points(P.A, depth, max_period), "A")
    if bad is None:
        bad, report.checked_B = _check_side(P.B, P.A, P.h_inv, P.h, P.k2, P.l2,
                                            iter_sample_points(P.B, depth, max_period), "B")
    if bad is not None:
        report.passed = False
        report.counterexample = bad
    return report


# ---------------------------------------------------------------------------
# Psi_h

def _transfer_tables(P: COEPair, f: LocallyConstantFn, d: int):
    """Tables of l_f(x) = f^{l1(x)}(h x) and k_f(x) = f^{k1(x)}(h sigma x)
    on allowed d-words, computed from the output prefix h emits on each word.
    Returns None when some prefix is too short to decide."""
    df = f.depth
    tf = f.table
    lf, kf = {}, {}
    for w in P.A.words(d):
        l, k = int(P.l1.on_word(w)), int(P.k1.on_word(w))
        o1, _ = P.h.run(w)
        o2, _ = P.h.run(w[1:])
        if len(o1) < l + df - 1 or len(o2) < k + df - 1:
            return None
        lf[w] = sum((tf[o1[i:i + df]] for i in range(l)), Fraction(0))
        kf[w] = sum((tf[o2[i:i + df]] for i in range(k)), Fraction(0))
    return lf, kf


def transfer_ceilings(P: COEPair, f: LocallyConstantFn, depth_cap: int = DEFAULT_DEPTH_CAP):
    """(l_f, k_f) on X_A with Psi_h(f) = l_f - k_f."""
    if f.shift != P.B:
        raise ValueError("potential must live on the target shift")
    dc = max(P.l1.depth, P.k1.depth)
    cmax = int(max(P.l1.max(), P.k1.max()))
    d = dc + cmax * f.depth + P.h.delay_bound()
    while True:
        if d > depth_cap:
            raise DepthInconsistency(f"no consistent table up to depth {depth_cap}")
        tabs = _transfer_tables(P, f, d)
        if tabs is not None and _refinements_agree(P, f, d, tabs):
            lf, kf = tabs
            return (LocallyConstantFn(P.A, d, lf).reduced(),
                    LocallyConstantFn(P.A, d, kf).reduced())
        d *= 2


def _refinements_agree(P, f, d, tabs):
    finer = _transfer_tables(P, f, d + 1)
    if finer is None:
        return False
    for side, fine in zip(tabs, finer):
        for w, v in fine.items():
            if side[w[:d]] != v:
                return False
    return True


def psi(P: COEPair, f: LocallyConstantFn, depth_cap: int = DEFAULT_DEPTH_CAP) -> LocallyConstantFn:
    """Psi_h(f)(x) = f^{l1(x)}(h(x)) - f^{k1(x)}(h(sigma x))"""
    lf, kf = transfer_ceilings(P, f, depth_cap)
    return (lf - kf).reduced()


def psi_inverse(P: COEPair, g: LocallyConstantFn, depth_cap: int = DEFAULT_DEPTH_CAP) -> LocallyConstantFn:
    return psi(P.reversed(), g, depth_cap)


def birkhoff_transfer_check(P: COEPair, f: LocallyConstantFn, m: int, x: Point, psi_f=None) -> bool:
    """Psi_h(f)^m(x) == f^{l1^m(x)}(h x) - f^{k1^m(x)}(h sigma^m x)"""
    if psi_f is None:
        psi_f = psi(P, f)
    lhs = birkhoff(psi_f, x, m)
    L = int(birkhoff(P.l1, x, m))
    K = int(birkhoff(P.k1, x, m))
    rhs = birkhoff(f, P.h(x), L) - birkhoff(f, P.h(x.shifted(m)), K)
    return lhs == rhs


def xi(P: COEPair, gamma: PeriodicOrbit) -> PeriodicOrbit:
    """Orbit of sigma_B^{k1^p(x)} h(x), of period l1^p(x) - k1^p(x)."""
    x = gamma.representative
    p = gamma.period
    L = int(birkhoff(P.l1, x, p))
    K = int(birkhoff(P.k1, x, p))
    period = L - K
    y = P.h(x).shifted(K)
    if period < 1 or y.pre or y.shifted(period) != y or y.period != period:
        raise PeriodMismatch(f"image of {gamma} does not have period {period}")
    return PeriodicOrbit.of(y)


def beta(gamma: PeriodicOrbit, f: LocallyConstantFn) -> Fraction:
    return birkhoff(f, gamma.representative, gamma.period)
