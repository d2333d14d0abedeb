"""One-sided suspensions of a Markov shift and their flows.

A point (x, r) with r >= b(x) is identified with (sigma x, r - c(x)) whenever
r >= l(x), where c = l - k.  Every class has a unique representative with
b(z) <= s < l(z); all computations go through that representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coe import COEPair, transfer_ceilings
from .cohomology import LocallyConstantFn, OrderUnitCertificate, birkhoff, compose_shift, order_unit
from .errors import BelowBase, NegativeCeiling, NotIntegerDifference, NotOrderUnit, ReturnCheckFailed, ShiftMismatch
from .shift import PeriodicOrbit, Point, ShiftSpace


def _as_fn(S: ShiftSpace, f) -> LocallyConstantFn:
    if isinstance(f, LocallyConstantFn):
        if f.shift != S:
            raise ShiftMismatch("function lives on a different shift")
        return f
    return LocallyConstantFn.constant(S, f)


def _nonneg_integral(f: LocallyConstantFn) -> bool:
    return all(v.denominator == 1 and v >= 0 for v in f.values())


@dataclass(frozen=True)
class SuspensionTriplet:
    l: LocallyConstantFn
    k: LocallyConstantFn
    b: LocallyConstantFn
    c: LocallyConstantFn
    unit_cert: OrderUnitCertificate

    @property
    def shift(self) -> ShiftSpace:
        return self.l.shift


def validate_triplet(S: ShiftSpace, l, k, b=0) -> SuspensionTriplet:
    l, k, b = _as_fn(S, l), _as_fn(S, k), _as_fn(S, b)
    if l.min() < 0 or k.min() < 0:
        raise NegativeCeiling("l and k must be nonnegative")
    c = (l - k).reduced()
    if not c.is_integer:
        raise NotIntegerDifference("l - k is not integer valued")
    if not _nonneg_integral(l - b):
        raise NotIntegerDifference("l - b is not nonnegative integer valued")
    if not _nonneg_integral(k - compose_shift(b)):
        raise NotIntegerDifference("k - b o sigma is not nonnegative integer valued")
    cert = order_unit(c)
    if not cert.is_order_unit:
        raise NotOrderUnit(f"[l - k] is not an order unit (minimum cycle mean {cert.min_cycle_mean})")
    return SuspensionTriplet(l, k, b, c, cert)


def standard_triplet(S: ShiftSpace) -> SuspensionTriplet:
    return validate_triplet(S, 1, 0, 0)


@dataclass(frozen=True)
class SuspensionPoint:
    base: Point
    height: Fraction

    def __post_init__(self):
        object.__setattr__(self, "height", Fraction(self.height))

    def __str__(self):
        return f"[{self.base}, {self.height}]"


def in_domain(T: SuspensionTriplet, p: SuspensionPoint) -> bool:
    """b(x) <= r < l(x)"""
    return T.b(p.base) <= p.height < T.l(p.base)


def normalize(T: SuspensionTriplet, p: SuspensionPoint):
    """(representative in the fundamental domain, number n of shift steps)."""
    x, r = p.base, p.height
    if r < T.b(x):
        raise BelowBase(f"height {r} below base value {T.b(x)} at {x}")
    l, c = T.l, T.c
    n = 0
    while r >= l(x):
        if not x.pre:
            r, x, n = _skip_periods(x, r, n, l, c)
            if r < l(x):
                break
        r -= c(x)
        x = x.shift()
        n += 1
    return SuspensionPoint(x, r), n


def _skip_periods(x, r, n, l, c):
    # whole periods can be skipped while r stays above every c^j + l(sigma^j x)
    p = x.period
    partial = Fraction(0)
    top = None
    for j in range(p):
        v = partial + l(x.shifted(j))
        top = v if top is None else max(top, v)
        partial += c(x.shifted(j))
    if r < top or partial <= 0:
        return r, x, n
    q = int((r - top) // partial) + 1
    return r - q * partial, x, n + q * p


def canonical_form(T: SuspensionTriplet, p: SuspensionPoint) -> SuspensionPoint:
    return normalize(T, p)[0]


def flow(T: SuspensionTriplet, p: SuspensionPoint, t) -> SuspensionPoint:
    t = Fraction(t)
    if t < 0:
        raise ValueError("the flow is only defined for nonnegative times")
    return canonical_form(T, SuspensionPoint(p.base, p.height + t))


def equivalent(T: SuspensionTriplet, p: SuspensionPoint, q: SuspensionPoint) -> bool:
    return canonical_form(T, p) == canonical_form(T, q)


def base_point(T: SuspensionTriplet, x: Point) -> SuspensionPoint:
    """[x, b(x)]"""
    return SuspensionPoint(x, T.b(x))


def cycle_point(T: SuspensionTriplet, gamma: PeriodicOrbit) -> SuspensionPoint:
    """A point of the closed flow orbit over gamma.

    The flow is only a semiflow: (x, b(x)) may be transient, with heights
    over some sigma^i x that the closed orbit never revisits.  Flowing by the
    period length again and again climbs onto the closed orbit; the number
    of attempts is bounded by the period."""
    x = gamma.representative
    length = birkhoff(T.c, x, gamma.period)
    u = flow(T, base_point(T, x), T.l(x) - T.b(x))
    for _ in range(gamma.period + 1):
        v = flow(T, u, length)
        if v == u:
            return u
        u = v
    raise ReturnCheckFailed(f"no closed flow orbit found over {gamma}")


def orbit_length(T: SuspensionTriplet, gamma: PeriodicOrbit) -> Fraction:
    """Primitive length of the closed flow orbit over gamma: the c-sum over
    one period.  Checks the return and that no shorter partial sum returns."""
    x = gamma.representative
    length = birkhoff(T.c, x, gamma.period)
    if length <= 0:
        raise ReturnCheckFailed(f"nonpositive c-sum {length} over {gamma}")
    u = cycle_point(T, gamma)
    for j in range(1, gamma.period):
        s = birkhoff(T.c, u.base, j)
        if 0 < s < length and flow(T, u, s) == u:
            raise ReturnCheckFailed(f"flow over {gamma} returns early at {s}")
    return length


def retime(T: SuspensionTriplet, d: LocallyConstantFn):
    """Triplet (l + d, k + d o sigma, b + d) and the conjugacy (x, r) -> (x, r + d(x))."""
    d = _as_fn(T.shift, d)
    if not _nonneg_integral(d):
        raise ValueError("retiming function must be nonnegative integer valued")
    T2 = validate_triplet(T.shift, T.l + d, T.k + compose_shift(d), T.b + d)

    def phi(p: SuspensionPoint) -> SuspensionPoint:
        return SuspensionPoint(p.base, p.height + d(p.base))

    return T2, phi


class Transport:
    """Phi_f: S_A^{l_f,k_f} -> S_B^f, (x, r) -> (h(x), r)."""

    def __init__(self, P: COEPair, f: LocallyConstantFn):
        self.pair = P
        self.f = f
        l_f, k_f = transfer_ceilings(P, f)
        self.source = validate_triplet(P.A, l_f, k_f, 0)
        self.target = validate_triplet(P.B, f, 0, 0)

    def __call__(self, p: SuspensionPoint) -> SuspensionPoint:
        if p.height < 0:
            raise BelowBase(f"height {p.height} below base 0")
        return canonical_form(self.target, SuspensionPoint(self.pair.h(p.base), p.height))


def transport(P: COEPair, f: LocallyConstantFn, p: SuspensionPoint) -> SuspensionPoint:
    return Transport(P, f)(p)

