"""Dynamical zeta functions of integer potentials, as exact power series in
t = exp(-s).

The exponential formula over periodic points is the reference definition;
the transfer-matrix determinant is a cross-check for nonnegative potentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .cohomology import LocallyConstantFn, order_unit
from .errors import BadConstantTerm, NotIntegerValued, NotOrderUnit
from .shift import ShiftSpace, higher_block


class LaurentPoly:
    """Finite sum of c_e t^e with exact rational c_e; e may be negative."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {int(e): Fraction(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def from_coeffs(cls, coeffs) -> "LaurentPoly":
        return cls({i: c for i, c in enumerate(coeffs)})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in _lp(other).terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lp(other))

    def __rsub__(self, other):
        return _lp(other) - self

    def __mul__(self, other):
        other = _lp(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def truncate(self, K: int) -> "LaurentPoly":
        return LaurentPoly({e: c for e, c in self.terms.items() if e <= K})

    def coeff(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    def min_exponent(self):
        return min(self.terms) if self.terms else None

    def max_exponent(self):
        return max(self.terms) if self.terms else None

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)})"

    def to_json(self) -> dict:
        return {str(e): str(self.terms[e]) for e in sorted(self.terms)}


def _lp(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly({0: x})


@dataclass(frozen=True)
class FormalSeries:
    """a_0 + a_1 t + ... + a_K t^K + O(t^{K+1})"""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def as_ints(self) -> list:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("series has non-integral coefficients")
        return [int(c) for c in self.coeffs]

    def to_json(self) -> dict:
        return {"variable": "t", "order": self.order, "coeffs": [str(c) for c in self.coeffs]}


def exp_series(s, K: int) -> list:
    """Coefficients of exp(s) up to t^K; s[0] must be 0."""
    s = [Fraction(x) for x in s] + [Fraction(0)] * max(0, K + 1 - len(s))
    if s[0] != 0:
        raise ValueError("exp needs a series without constant term")
    e = [Fraction(1)] + [Fraction(0)] * K
    for n in range(1, K + 1):
        e[n] = sum((k * s[k] * e[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return e


def series_of_reciprocal(p: LaurentPoly, K: int) -> FormalSeries:
    if not p.is_polynomial() or p.coeff(0) != 1:
        raise BadConstantTerm("need a polynomial with constant term 1")
    q = [Fraction(1)] + [Fraction(0)] * K
    for n in range(1, K + 1):
        q[n] = -sum((p.coeff(i) * q[n - i] for i in range(1, n + 1)), Fraction(0))
    return FormalSeries(tuple(q))


# ---------------------------------------------------------------------------
# transfer matrices

def transfer_matrix(S: ShiftSpace, c: LocallyConstantFn):
    """Block-graph matrix with entry t^{c(w)} on each edge w -> w'."""
    if c.shift != S:
        raise ValueError("potential lives on a different shift")
    if not c.is_integer:
        raise NotIntegerValued("potential must be integer valued")
    G = higher_block(S, c.depth)
    n = len(G.vertices)
    M = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
    for u, v in G.edges:
        M[u][v] = LaurentPoly.monomial(int(c.table[G.vertices[u]]))
    return M


def _matmul(a, b, K=None):
    n = len(a)
    out = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if not a[i][k].terms:
                continue
            for j in range(n):
                if b[k][j].terms:
                    out[i][j] = out[i][j] + a[i][k] * b[k][j]
        if K is not None:
            out[i] = [x.truncate(K) for x in out[i]]
    return out


def _trace(m) -> LaurentPoly:
    total = LaurentPoly()
    for i in range(len(m)):
        total = total + m[i][i]
    return total


def _traces(S, c, nmax, K=None):
    M = transfer_matrix(S, c)
    P = M
    out = [_trace(P)]
    for _ in range(1, nmax):
        P = _matmul(P, M, K)
        out.append(_trace(P))
    return out


def weighted_trace(S: ShiftSpace, c: LocallyConstantFn, n: int) -> LaurentPoly:
    """sum over x in Per_n of t^{c^n(x)}"""
    if n < 1:
        raise ValueError("n must be positive")
    return _traces(S, c, n)[-1]


def truncation_bound(K: int, mu) -> int:
    return ceil(Fraction(K) / mu) if K > 0 else 0


def zeta_series(S: ShiftSpace, c: LocallyConstantFn, K: int) -> FormalSeries:
    """exp(sum_n weighted_trace(S, c, n) / n) to order t^K."""
    cert = order_unit(c)
    if not cert.is_order_unit:
        raise NotOrderUnit(f"potential is not an order unit (minimum cycle mean {cert.min_cycle_mean})")
    nmax = truncation_bound(K, cert.min_cycle_mean)
    if nmax == 0:
        return FormalSeries((Fraction(1),))
    # exponents only grow along walks when c >= 0, so entries past t^K can go
    trunc = K if c.min() >= 0 else None
    s = [Fraction(0)] * (K + 1)
    for n, tr in enumerate(_traces(S, c, nmax, trunc), start=1):
        for e, coef in tr.terms.items():
            if e <= K:
                s[e] += coef / n
    return FormalSeries(tuple(exp_series(s, K)))


def _det_faddeev(M) -> LaurentPoly:
    """det(I - M) via Faddeev-LeVerrier, exact over Q[t, 1/t]."""
    n = len(M)
    # char poly  det(x I - M) = sum coef[k] x^k
    coef = [LaurentPoly() for _ in range(n + 1)]
    coef[n] = LaurentPoly({0: 1})
    Mk = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
    for k in range(1, n + 1):
        AM = _matmul(M, Mk)
        for i in range(n):
            AM[i][i] = AM[i][i] + coef[n - k + 1]
        Mk = AM
        coef[n - k] = _trace(_matmul(M, Mk)) * Fraction(-1, k)
    total = LaurentPoly()
    for cf in coef:
        total = total + cf
    return total


def zeta_det(S: ShiftSpace, c: LocallyConstantFn):
    """(det(I - M_c(t)), valid); valid iff c >= 0 so 1/det is the zeta series."""
    M = transfer_matrix(S, c)
    return _det_faddeev(M), c.min() >= 0


def zeta_series_det(S: ShiftSpace, c: LocallyConstantFn, K: int) -> FormalSeries:
    den, valid = zeta_det(S, c)
    if not valid:
        raise ValueError("determinant expansion is only claimed for nonnegative potentials")
    return series_of_reciprocal(den, K)
