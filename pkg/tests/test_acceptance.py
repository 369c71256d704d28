"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import time

import pytest

from unitlab.algebra import AlgebraElement, power, random_unit, sample_rng, unit_power_sums
from unitlab.catalog import builtin_catalog
from unitlab.checks import check_brauer, satisfies_recognition_hypotheses
from unitlab.pgroup import build_extraspecial, build_modular_maximal_cyclic
from unitlab.recognizer import berman_matrix, recover_group_invariants, v_invariants
from unitlab.units import (
    center_of_V,
    commutator_exponent_sample,
    derived_sum,
    frobenius_expansion,
    intersection_G_Vp,
    p2_power_identity,
    predicted_exponent_V,
    pth_power_centrality,
    unit_order,
    vp_decomposition,
    vp_product,
    vp_witness,
)

A = AlgebraElement.of


def catalog_groups(primes=(3, 5)):
    seen, out = set(), []
    for p in primes:
        for e in builtin_catalog(p):
            if e.label not in seen:
                seen.add(e.label)
                out.append(e.build())
    return out


def derived_order_p(G):
    return G.p > 2 and G.commutator_subgroup.order == G.p


def test_criterion_01_unit_power_sums(record_criterion):
    start = time.perf_counter()
    bad = []
    for p in (3, 5, 7, 11, 13):
        for r in range(1, p):
            want = p - 1 if r == p - 1 else 0
            if unit_power_sums(p, r) != want:
                bad.append((p, r))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1
    record_criterion(1, ok, f"power sums over F_p^* for p in 3..13, mismatches={bad} time={elapsed:.3f}s")
    assert ok


def test_criterion_02_commutator_criterion(record_criterion):
    start = time.perf_counter()
    results = {}
    for G in catalog_groups():
        ok, _, detail = check_brauer(G, seed=0, samples=100)
        results[G.label] = (ok, detail)
    elapsed = time.perf_counter() - start
    spans = all("span=criterion" in d for G in catalog_groups() if G.order <= 81 for d in [results[G.label][1]])
    ok = all(v[0] for v in results.values()) and spans and elapsed < 60
    failing = [k for k, v in results.items() if not v[0]]
    record_criterion(2, ok, f"{len(results)} groups x 100 pairs, span agreement on |G|<=81, failing={failing} "
                            f"time={elapsed:.1f}s")
    assert ok


def test_criterion_03_center_order(record_criterion):
    rows = {}
    for G in catalog_groups():
        if derived_order_p(G):
            rows[G.label] = center_of_V(G)
    ep27 = rows["Ep27"].log_order_by_rank
    ok = all(r.consistent for r in rows.values()) and ep27 == 10
    summary = " ".join(f"{k}:{r.log_order_by_rank}" for k, r in rows.items())
    record_criterion(3, ok, f"log_p|Z(V)| rank = formula, split V(F_pZ(G)) x N consistent; {summary}")
    assert ok


def test_criterion_04_binomial_expansion(record_criterion):
    start = time.perf_counter()
    groups = [build_extraspecial(3, "p"), build_modular_maximal_cyclic(3, 3),
              build_extraspecial(5, "p"), build_modular_maximal_cyclic(5, 3)]
    failures = 0
    for G in groups:
        rng = sample_rng(4, 0)
        n = 0
        while n < 100:
            a, b = (int(v) for v in rng.integers(0, G.order, size=2))
            if G.mul(a, b) == G.mul(b, a):
                continue
            n += 1
            failures += power(A(G, a) + A(G, b), G.p) != frobenius_expansion(G, a, b)
    E = groups[0]
    a, b = E.generators["a"], E.generators["b"]
    value = 2 + (A(E, E.mul(a, E.power(b, 2))) + A(E, E.mul(E.power(a, 2), b))) * derived_sum(E)
    explicit = power(A(E, a) + A(E, b), 3) == value
    elapsed = time.perf_counter() - start
    ok = failures == 0 and explicit and elapsed < 60
    record_criterion(4, ok, f"400 non-commuting pairs, failures={failures}, (a+b)^3 = 2 + (ab^2+a^2b)G'^: "
                            f"{explicit} time={elapsed:.1f}s")
    assert ok


def test_criterion_05_pth_and_p2_powers(record_criterion):
    failures = []
    groups = [G for G in catalog_groups() if derived_order_p(G)]
    for G in groups:
        exp_p = G.exponent == G.p
        for i in range(200):
            x = random_unit(G, sample_rng(5, i))
            if not pth_power_centrality(x).central or not p2_power_identity(x):
                failures.append((G.label, i))
            elif exp_p and power(x, G.p**2) != 1:
                failures.append((G.label, i))
    ok = not failures
    record_criterion(5, ok, f"200 units in each of {[G.label for G in groups]}, failures={failures[:3]}")
    assert ok


def test_criterion_06_witness_identity(record_criterion):
    groups = [build_extraspecial(3, "p"), build_modular_maximal_cyclic(3, 3), build_extraspecial(5, "p")]
    counts = {}
    for G in groups:
        target_fail = 0
        noncentral = [g for g in G.elements() if g not in G.center]
        for g in noncentral:
            try:
                vp_witness(G, g)
            except Exception:
                target_fail += 1
        counts[G.label] = (len(noncentral), target_fail)
    ok = all(f == 0 for _, f in counts.values())
    detail = " ".join(f"{k}:{n - f}/{n}" for k, (n, f) in counts.items())
    record_criterion(6, ok, f"prod u^p h^-p = 1 - gG'^ for non-central g (holds/total): {detail}")
    assert ok, f"witness identity fails: {counts}"


def test_criterion_07_vp_decomposition(record_criterion):
    want = {"Ep27": 8, "M27": 10}
    got = {}
    for G in (build_extraspecial(3, "p"), build_modular_maximal_cyclic(3, 3)):
        dec = vp_decomposition(G, seed=7, samples=200)
        words = all(w.holds() for w in dec.n_words) and len(dec.n_words) == dec.t
        got[G.label] = (dec.predicted_log_order, words, len(dec.sample_failures), dec.verified)
    ok = all(got[k][0] == v and got[k][1] and got[k][2] == 0 and got[k][3] for k, v in want.items())
    record_criterion(7, ok, "log_3|V^3| (value, generators as cube words, membership failures of 200): "
                     + " ".join(f"{k}={v[0]},{v[1]},{v[2]}" for k, v in got.items()))
    assert ok


def test_criterion_08_group_meets_vp(record_criterion):
    E, M = build_extraspecial(3, "p"), build_modular_maximal_cyclic(3, 3)
    e = intersection_G_Vp(E)
    m = intersection_G_Vp(M)
    a3 = M.power(M.generators["a"], 3)
    ok = e.members == (0,) and m == M.generated([a3])
    record_criterion(8, ok, f"G cap V^p: Ep27 order {e.order}, M27 = <a^3> order {m.order}")
    assert ok


def test_criterion_09_exponent(record_criterion):
    want = {"Ep27": 9, "M27": 9, "M81": 27}
    got = {}
    groups = [build_extraspecial(3, "p"), build_modular_maximal_cyclic(3, 3), build_modular_maximal_cyclic(3, 4)]
    for G in groups:
        cert = predicted_exponent_V(G)
        witness_ok = unit_order(cert.witness) == cert.predicted
        comm = commutator_exponent_sample(G, seed=9, count=200)
        got[G.label] = (cert.predicted, cert.certified and witness_ok, comm)
    ok = all(got[k][0] == v and got[k][1] and got[k][2] for k, v in want.items())
    record_criterion(9, ok, "exp V (value, witness & upper bound, V' exponent p on 200 pairs): "
                     + " ".join(f"{k}={v}" for k, v in got.items()))
    assert ok


def test_criterion_10_recognition(record_criterion):
    start = time.perf_counter()
    groups = [e.build() for e in builtin_catalog(3) if e.hypotheses]
    assert all(satisfies_recognition_hypotheses(G) for G in groups)
    invs = {G.label: v_invariants(G, seed=0, samples=200) for G in groups}
    round_trip = all(recover_group_invariants(invs[G.label]) == G.invariants() for G in groups)
    mat = berman_matrix(groups, seed=0, samples=200)
    n = len(groups)
    all_distinguished = all(mat[i][j] == "distinguished" for i in range(n) for j in range(n) if i != j)
    e, m = invs["Ep27"], invs["M27"]
    same_except_vp = (e.dimension, e.log_center_order, e.center_exponent, e.v_exponent) == (
        m.dimension, m.log_center_order, m.center_exponent, m.v_exponent)
    separated = same_except_vp and (e.log_vp_order, m.log_vp_order) == (8, 10)
    orders = sorted({G.order for G in groups})
    elapsed = time.perf_counter() - start
    ok = n >= 6 and orders[0] == 27 and orders[-1] == 81 and round_trip and all_distinguished \
        and separated and elapsed < 300
    record_criterion(10, ok, f"{n} groups of orders {orders}: all pairs distinguished={all_distinguished}, "
                             f"Ep27/M27 split by log|V^p| 8/10={separated}, round trip={round_trip} "
                             f"time={elapsed:.1f}s")
    assert ok
