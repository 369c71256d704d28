"""Verification runner: one check per identity, one report line per (check, group)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    AlgebraElement,
    commutator_subspace,
    commutator_subspace_test,
    ideal_power_dims,
    power,
    random_central_unit,
    random_unit,
    relative_augmentation_ideal,
    sample_rng,
    unit_power_sums,
)
from .errors import PreconditionError, UnitLabError
from .pgroup import PGroup
from .recognizer import (
    berman_matrix,
    build_from_kyl,
    classify_kyl,
    recover_group_invariants,
    index_reading_check,
    v_invariants,
)
from .units import (
    center_of_V,
    central_unit_factor,
    commutator_exponent_sample,
    frobenius_expansion,
    intersection_G_Vp,
    p2_power_identity,
    predicted_exponent_V,
    pth_power_centrality,
    require_commutator_order_p,
    require_frattini_order_p,
    unit_order,
    vp_decomposition,
    vp_witness,
    vp_witness_exact,
)

PASS, FAIL, SKIP = "pass", "fail", "skipped-precondition"
BRAUER_SPAN_LIMIT = 81
HUPPERT_PRIMES = (3, 5, 7, 11, 13)


@dataclass(frozen=True)
class VerificationReport:
    check: str
    group: str
    status: str
    seed: int
    samples: int
    detail: str

    def line(self) -> str:
        detail = " ".join(self.detail.split())
        return (f"check={self.check} group={self.group} status={self.status} "
                f"seed={self.seed} samples={self.samples} detail={detail}")


# each group check returns (ok, samples actually used, detail)
Outcome = tuple[bool, int, str]


def check_brauer(G: PGroup, seed: int, samples: int) -> Outcome:
    p = G.p
    for i in range(samples):
        rng = sample_rng(seed, i)
        x, y = random_unit(G, rng), random_unit(G, rng)
        d = power(x + y, p) - power(x, p) - power(y, p)
        if not commutator_subspace_test(d) or not commutator_subspace_test(x * y - y * x):
            return False, samples, f"frobenius congruence fails at sample {i}"
    detail = f"pairs={samples}"
    if G.order <= BRAUER_SPAN_LIMIT:
        span = commutator_subspace(G)
        k = len(G.conjugacy_partition)
        rows_ok = all(commutator_subspace_test(AlgebraElement(G, r)) for r in span.basis)
        if not rows_ok or span.dim != G.order - k:
            return False, samples, f"span dim {span.dim} vs {G.order - k} expected"
        rng = np.random.default_rng(seed)
        reps = np.array(G.conjugacy_partition.representatives)
        for _ in range(samples):
            raw = rng.integers(0, p, size=G.order)
            fixed = raw.copy()
            sums = np.bincount(G.class_index, weights=raw).astype(np.int64)
            fixed[reps] -= sums  # every class sum now vanishes
            for v in (AlgebraElement(G, raw), AlgebraElement(G, fixed)):
                if commutator_subspace_test(v) != span.contains(v.coeffs):
                    return False, samples, "criterion disagrees with span membership"
        detail += f" span_dim={span.dim} classes={k} span=criterion"
    else:
        detail += " span=not-built(order>81)"
    return True, samples, detail


def check_center_eq2(G: PGroup, seed: int, samples: int) -> Outcome:
    rep = center_of_V(G)
    ok = rep.log_order_by_rank == rep.log_order_by_formula
    return ok, 0, f"log_p|Z(V)| rank={rep.log_order_by_rank} formula={rep.log_order_by_formula}"


def check_center_eq3(G: PGroup, seed: int, samples: int) -> Outcome:
    rep = center_of_V(G)
    for i in range(samples):
        x = random_central_unit(G, sample_rng(seed, i))
        central_unit_factor(x)
    ok = rep.consistent
    return ok, samples, (f"log|V(F_pZ(G))|={rep.log_group_part} log|N|={rep.log_n_part} "
                         f"sum={rep.log_group_part + rep.log_n_part} log|Z(V)|={rep.log_order_by_rank} "
                         f"trivial_intersection={rep.trivial_intersection} factorizations={samples}")


def check_lemma_abp(G: PGroup, seed: int, samples: int) -> Outcome:
    if G.is_abelian:
        raise PreconditionError(f"{G.label} is abelian: no non-commuting pairs")
    p = G.p
    for i in range(samples):
        rng = sample_rng(seed, i)
        while True:
            a, b = (int(v) for v in rng.integers(0, G.order, size=2))
            if G.mul(a, b) != G.mul(b, a):
                break
        lhs = power(AlgebraElement.of(G, a) + AlgebraElement.of(G, b), p)
        if lhs != frobenius_expansion(G, a, b):
            return False, samples, f"expansion differs for a={a} b={b}"
    return True, samples, f"pairs={samples}"


def check_lemma_center(G: PGroup, seed: int, samples: int) -> Outcome:
    require_commutator_order_p(G, "lemma-center")
    for i in range(samples):
        rep = pth_power_centrality(random_unit(G, sample_rng(seed, i)))
        if not rep.central:
            return False, samples, f"x^p does not commute with element {rep.violator} (sample {i})"
    return True, samples, f"units={samples} all x^p central"


def check_eq_p2(G: PGroup, seed: int, samples: int) -> Outcome:
    require_commutator_order_p(G, "eq-p2")
    q = G.p**2
    trivial = G.exponent <= q
    for i in range(samples):
        x = random_unit(G, sample_rng(seed, i))
        if not p2_power_identity(x):
            return False, samples, f"x^(p^2) != sum a_g g^(p^2) at sample {i}"
        if trivial and power(x, q) != 1:
            return False, samples, f"x^(p^2) != 1 at sample {i}"
    return True, samples, f"units={samples} exp(G)<=p^2:{'yes' if trivial else 'no'}"


def check_exp_v(G: PGroup, seed: int, samples: int) -> Outcome:
    cert = predicted_exponent_V(G)
    if not cert.certified:
        return False, 0, (f"predicted={cert.predicted} witness_order={cert.witness_order} "
                          f"upper={cert.upper_bound}")
    for i in range(samples):
        x = random_unit(G, sample_rng(seed, i))
        try:
            unit_order(x, limit=cert.predicted)
        except UnitLabError:
            return False, samples, f"sample {i} has order above {cert.predicted}"
    return True, samples, (f"exp(V)={cert.predicted} witness={cert.witness_kind} "
                           f"witness_order={cert.witness_order} upper={cert.upper_bound}")


def check_vp_witness(G: PGroup, seed: int, samples: int) -> Outcome:
    require_frattini_order_p(G, "vp-witness")
    noncentral = [g for g in G.elements() if g not in G.center]
    stated_fail, exact_fail = [], []
    for g in noncentral:
        try:
            vp_witness(G, g)
        except UnitLabError:
            stated_fail.append(g)
        try:
            vp_witness_exact(G, g)
        except UnitLabError:
            exact_fail.append(g)
    detail = (f"noncentral={len(noncentral)} identity_failures={len(stated_fail)} "
              f"exact_identity_failures={len(exact_fail)}")
    if stated_fail:
        detail += f" first_failure_g={stated_fail[0]} (defect ((g^-1h)^p-1)^(p-1)h^(-p(p-1)) nonzero)"
    return not stated_fail and not exact_fail, len(noncentral), detail


def check_vp_decomp(G: PGroup, seed: int, samples: int) -> Outcome:
    dec = vp_decomposition(G, seed=seed, samples=samples)
    words = sum(w.holds() for w in dec.n_words)
    ok = dec.verified
    return ok, samples, (f"log_p|V^p|={dec.predicted_log_order} |G^p|={dec.agemo.order} t={dec.t} "
                         f"generators_as_pth_powers={words}/{len(dec.n_words)} "
                         f"torsion_roots={len(dec.torsion_roots)} membership_failures={len(dec.sample_failures)}")


def check_johnson(G: PGroup, seed: int, samples: int) -> Outcome:
    inter = intersection_G_Vp(G)
    return True, G.order, f"|G cap V^p|={inter.order} |G^p|={G.agemo().order}"


def check_comm_exp(G: PGroup, seed: int, samples: int) -> Outcome:
    ok = commutator_exponent_sample(G, seed, samples)
    detail = f"pairs={samples}"
    if G.commutator_subgroup.order == G.p:
        dims = ideal_power_dims(relative_augmentation_ideal(G, G.commutator_subgroup), G, G.p)
        detail += f" ideal_power_dims={','.join(map(str, dims))}"
        ok = ok and dims[-1] == 0
    return ok, samples, detail


def _require_recognizable(G: PGroup) -> None:
    G.require_odd("recognizer")
    if G.is_abelian:
        raise PreconditionError(f"{G.label} is abelian")
    if not G.frattini.is_cyclic:
        raise PreconditionError(f"{G.label} has non-cyclic Frattini subgroup")


def check_recognizer(G: PGroup, seed: int, samples: int) -> Outcome:
    _require_recognizable(G)
    ui = v_invariants(G, seed, samples)
    gi = recover_group_invariants(ui)
    brute = G.invariants()
    kyl = classify_kyl(gi, G.p)
    rebuilt = build_from_kyl(kyl, cap=max(G.order * G.p, 343)).invariants()
    reading = index_reading_check(gi, G.p, kyl)
    ok = gi == brute and rebuilt == gi and reading["K"]
    return ok, samples, (f"unit_invariants={ui.as_tuple()} recovered={gi.as_tuple()} brute={brute.as_tuple()} "
                         f"kyl={kyl.describe()} rebuilt_match={rebuilt == gi} "
                         f"reading_K={reading['K']} reading_L={reading['L']}")


GROUP_CHECKS: dict[str, tuple[Callable[[PGroup, int, int], Outcome], str]] = {
    "brauer": (check_brauer, "commutator_subspace_test, commutator_subspace"),
    "center-eq2": (check_center_eq2, "center_of_V (rank vs closed form)"),
    "center-eq3": (check_center_eq3, "center_of_V, central_unit_factor"),
    "lemma-abp": (check_lemma_abp, "frobenius_expansion"),
    "lemma-center": (check_lemma_center, "pth_power_centrality"),
    "eq-p2": (check_eq_p2, "p2_power_identity"),
    "exp-v": (check_exp_v, "predicted_exponent_V"),
    "vp-witness": (check_vp_witness, "vp_witness"),
    "vp-decomp": (check_vp_decomp, "vp_decomposition"),
    "johnson": (check_johnson, "intersection_G_Vp"),
    "comm-exp": (check_comm_exp, "commutator_exponent_sample"),
    "recognizer": (check_recognizer, "v_invariants, recover_group_invariants, classify_kyl"),
}
SPECIAL_CHECKS = {
    "huppert": "unit_power_sums",
    "berman": "berman_matrix, distinguish",
}
CHECK_IDS = ("brauer", "huppert", "center-eq2", "center-eq3", "lemma-abp", "lemma-center", "eq-p2",
             "exp-v", "vp-witness", "vp-decomp", "johnson", "comm-exp", "recognizer", "berman")


def check_operations() -> dict[str, str]:
    out = {k: v[1] for k, v in GROUP_CHECKS.items()}
    out.update(SPECIAL_CHECKS)
    return {k: out[k] for k in CHECK_IDS}


def resolve_selection(selection: str | Sequence[str]) -> list[str]:
    if isinstance(selection, str):
        selection = [s for s in selection.replace(",", " ").split() if s]
    if list(selection) == ["all"]:
        return list(CHECK_IDS)
    unknown = [s for s in selection if s not in CHECK_IDS]
    if unknown:
        raise UnitLabError(f"unknown check id(s): {', '.join(unknown)}")
    return list(dict.fromkeys(selection))


def _run_group_check(cid: str, label: str, G: PGroup, seed: int, samples: int) -> VerificationReport:
    fn = GROUP_CHECKS[cid][0]
    try:
        ok, used, detail = fn(G, seed, samples)
        status = PASS if ok else FAIL
    except PreconditionError as e:
        status, used, detail = SKIP, 0, str(e)
    except UnitLabError as e:
        status, used, detail = FAIL, samples, f"{type(e).__name__}: {e}"
    return VerificationReport(cid, label, status, seed, used, detail)


def run_huppert(p: int, seed: int) -> VerificationReport:
    label = f"F{p}"
    try:
        values = [unit_power_sums(p, r) for r in range(1, p)]
    except PreconditionError as e:
        return VerificationReport("huppert", label, SKIP, seed, 0, str(e))
    ok = all(v == 0 for v in values[:-1]) and values[-1] == p - 1
    return VerificationReport("huppert", label, PASS if ok else FAIL, seed, p - 1,
                              f"sums r=1..{p - 1}: {','.join(map(str, values))}")


def satisfies_recognition_hypotheses(G: PGroup) -> bool:
    try:
        _require_recognizable(G)
    except PreconditionError:
        return False
    return True


def run_berman(label: str, groups: Sequence[tuple[str, PGroup]], seed: int, samples: int) -> VerificationReport:
    eligible = [(lbl, G) for lbl, G in groups if satisfies_recognition_hypotheses(G)]
    if not eligible:
        return VerificationReport("berman", label, SKIP, seed, 0, "no entry satisfies the hypotheses")
    try:
        mat = berman_matrix([G for _, G in eligible], seed, samples)
    except UnitLabError as e:
        return VerificationReport("berman", label, FAIL, seed, samples, f"{type(e).__name__}: {e}")
    n = len(eligible)
    bad = []
    pairs = dist = 0
    for i in range(n):
        for j in range(n):
            expected = "distinguished" if eligible[i][1].invariants() != eligible[j][1].invariants() else "same-type"
            if mat[i][j] != expected:
                bad.append((eligible[i][0], eligible[j][0]))
            if i < j:
                pairs += 1
                dist += mat[i][j] == "distinguished"
    detail = f"entries={n} distinguished_pairs={dist}/{pairs} mismatches={len(bad)}"
    if bad:
        detail += f" first_mismatch={bad[0][0]}/{bad[0][1]}"
    return VerificationReport("berman", label, FAIL if bad else PASS, seed, samples, detail)


def run_checks(selection, groups: Sequence[tuple[str, PGroup]], p: int, seed: int = 0,
               samples: int = 200, catalog_label: str | None = None) -> list[VerificationReport]:
    """Run the selected checks; reports come back sorted by (check, group)."""
    ids = resolve_selection(selection)
    reports = []
    for cid in ids:
        if cid == "huppert":
            reports.append(run_huppert(p, seed))
        elif cid == "berman":
            reports.append(run_berman(catalog_label or f"catalog-p{p}", groups, seed, samples))
        else:
            for label, G in groups:
                reports.append(_run_group_check(cid, label, G, seed, samples))
    return sorted(reports, key=lambda r: (r.check, r.group))


def summarize(reports: Sequence[VerificationReport]) -> str:
    counts = {s: sum(r.status == s for r in reports) for s in (PASS, FAIL, SKIP)}
    return f"summary total={len(reports)} pass={counts[PASS]} fail={counts[FAIL]} skipped={counts[SKIP]}"
