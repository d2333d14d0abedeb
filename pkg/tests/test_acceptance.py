"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see the verdict lines
interleaved with the normal pytest report; they are printed even without -s.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import FULL2, FULL3, GOLDEN, random_fn
from test_cohomology import _check_order_unit_against_search
from test_coe import corrupted_l1
from test_invariants import check_random_marked_pair, check_snf
from test_suspension import (
    L2K2,
    check_equivalence_against_chains,
    random_suspension_point,
    random_triplet,
    raw_move,
)
from shiftflow import (
    LocallyConstantFn,
    Transport,
    beta,
    birkhoff,
    canonical_form,
    coboundary_of,
    cohomologous,
    compose_shift,
    cycle_point,
    equivalent,
    flow,
    is_coboundary,
    normalize,
    one_sided_floweq,
    order_unit,
    orbit_length,
    orbits_up_to,
    paper_example,
    psi,
    retime,
    verify_coe,
    xi,
    zeta_series,
    zeta_series_det,
)
from shiftflow.suspension import in_domain

PAIR = paper_example()
F = Fraction
CASES = 100


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, budget=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            late = budget is not None and elapsed >= budget
            verdict = "PASS" if ok and not late else "FAIL"
            note = f" (over the {budget} s budget)" if ok and late else ""
            with capsys.disabled():
                print(f"\ncriterion {n}: {verdict} in {elapsed:.2f} s{note}")
        assert not late, f"criterion {n} took {elapsed:.2f} s, budget {budget} s"
    return run


def fib(n):
    a, b, out = 1, 1, []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


def test_criterion_01_flow_equivalence(criterion):
    with criterion(1, budget=1.0):
        ok, rep = one_sided_floweq(FULL2, GOLDEN)
        assert ok and rep["equivalent"]
        assert rep["groupA"]["description"] == rep["groupB"]["description"] == "0"
        assert rep["detA"] == rep["detB"] == "-1"
        ok, rep = one_sided_floweq(FULL2, FULL3)
        assert not ok
        assert rep["groupB"]["description"] == "Z/2"
        assert rep["obstruction"] == "group mismatch: 0 vs Z/2"


def test_criterion_02_classical_zeta(criterion):
    with criterion(2, budget=5.0):
        one2, oneg = LocallyConstantFn.constant(FULL2, 1), LocallyConstantFn.constant(GOLDEN, 1)
        z2, zg = zeta_series(FULL2, one2, 12), zeta_series(GOLDEN, oneg, 12)
        assert z2.as_ints() == [2 ** n for n in range(13)]
        assert zg.as_ints() == fib(13)
        assert zeta_series_det(FULL2, one2, 12) == z2
        assert zeta_series_det(GOLDEN, oneg, 12) == zg


def test_criterion_03_cocycle_zeta_identities(criterion):
    with criterion(3):
        one2, oneg = LocallyConstantFn.constant(FULL2, 1), LocallyConstantFn.constant(GOLDEN, 1)
        assert zeta_series(FULL2, PAIR.c1, 12) == zeta_series(GOLDEN, oneg, 12)
        assert zeta_series(GOLDEN, PAIR.c2, 12) == zeta_series(FULL2, one2, 12)


def test_criterion_04_zeta_transport(criterion):
    with criterion(4):
        rng = random.Random(2024)
        fs = [LocallyConstantFn.constant(GOLDEN, 1)]
        while len(fs) < 5:
            f = random_fn(rng, GOLDEN, 2, -1, 3)
            if f.depth == 2 and order_unit(f).is_order_unit and f not in fs:
                fs.append(f)
        for f in fs:
            assert zeta_series(FULL2, psi(PAIR, f), 10) == zeta_series(GOLDEN, f, 10)


def test_criterion_05_length_spectrum(criterion):
    with criterion(5):
        orbits = orbits_up_to(GOLDEN, 8)
        assert len(orbits) > 0
        for g in orbits:
            length = beta(g, PAIR.c2)
            assert orbit_length(L2K2, g) == length
            u = cycle_point(L2K2, g)
            assert flow(L2K2, u, length) == u
            for j in range(1, g.period):
                s = birkhoff(PAIR.c2, u.base, j)
                if 0 < s < length:
                    assert flow(L2K2, u, s) != u


def test_criterion_06_orbit_correspondence(criterion):
    with criterion(6):
        L = 8
        src = [g for g in orbits_up_to(FULL2, L) if beta(g, PAIR.c1) <= L]
        images = [xi(PAIR, g) for g in src]
        assert len(set(images)) == len(images)
        assert set(images) == set(orbits_up_to(GOLDEN, L))
        rng = random.Random(6)
        for _ in range(10):
            f = random_fn(rng, GOLDEN, rng.randint(1, 2))
            pf = psi(PAIR, f)
            for g, img in zip(src, images):
                assert beta(g, pf) == beta(img, f)


def test_criterion_07_coe_verification(criterion):
    with criterion(7):
        rep = verify_coe(PAIR, 10, 8)
        assert rep.passed and rep.counterexample is None
        rep = verify_coe(corrupted_l1(), 10, 8)
        assert not rep.passed
        assert rep.counterexample["point"] == "(2)^inf"


def test_criterion_08_smith_normal_form(criterion):
    with criterion(8, budget=10.0):
        rng = random.Random(8)
        for _ in range(500):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            check_snf([[rng.randint(-4, 4) for _ in range(m)] for _ in range(n)])


def test_criterion_09_pointed_iso(criterion):
    with criterion(9):
        rng = random.Random(9)
        verdicts = [check_random_marked_pair(rng) for _ in range(200)]
        # both answers are exercised
        assert any(verdicts) and not all(verdicts)


def test_criterion_10_cohomology(criterion):
    with criterion(10):
        rng = random.Random(10)
        for S in (FULL2, GOLDEN):
            for _ in range(200):
                g = random_fn(rng, S, rng.randint(1, 3), -5, 5)
                f = coboundary_of(g)
                ok, g2 = is_coboundary(f)
                assert ok and coboundary_of(g2) == f
            for _ in range(200):
                _check_order_unit_against_search(random_fn(rng, S, rng.randint(1, 2), -2, 3))


def test_criterion_11_suspension_algebra(criterion):
    with criterion(11):
        rng = random.Random(11)
        shifts = (FULL2, GOLDEN)
        for i in range(CASES):
            S = shifts[i % 2]
            T = random_triplet(rng, S)
            p = random_suspension_point(rng, T)
            # semigroup law
            s, t = F(rng.randint(0, 40), rng.randint(1, 4)), F(rng.randint(0, 40), rng.randint(1, 4))
            assert flow(T, flow(T, p, s), t) == flow(T, p, s + t)
            # canonical form is idempotent and lands in the domain
            q = canonical_form(T, p)
            assert in_domain(T, q) and canonical_form(T, q) == q and normalize(T, q)[1] == 0
        for i in range(CASES):
            # equivalence axioms and the bounded chain oracle
            check_equivalence_against_chains(rng, shifts[i % 2])
        for i in range(CASES):
            S = shifts[i % 2]
            T = random_triplet(rng, S)
            d = random_fn(rng, S, rng.randint(1, 2), 0, 3)
            T2, phi = retime(T, d)
            assert T2.c == T.c + d - compose_shift(d)
            assert cohomologous(T2.c, T.c)
            p, q = random_suspension_point(rng, T), random_suspension_point(rng, T)
            q = raw_move(rng, T, q) if rng.random() < 0.5 else q
            assert equivalent(T, p, q) == equivalent(T2, phi(p), phi(q))
            t = F(rng.randint(0, 30), rng.randint(1, 3))
            assert canonical_form(T2, phi(flow(T, p, t))) == flow(T2, phi(p), t)
        for _ in range(CASES):
            while True:
                f = random_fn(rng, GOLDEN, rng.randint(1, 2), 0, 3)
                if order_unit(f).is_order_unit:
                    break
            Phi = Transport(PAIR, f)
            p = random_suspension_point(rng, Phi.source)
            t = F(rng.randint(0, 30), rng.randint(1, 4))
            assert Phi(flow(Phi.source, p, t)) == flow(Phi.target, Phi(p), t)
            assert Phi(canonical_form(Phi.source, p)) == Phi(p)
