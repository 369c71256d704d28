"""Power structure of the normalized unit group V(F_pG) when |G'| = p.

Every claim about "all units" is either reduced to an exact algebraic
certificate (coefficient transport, linear algebra over F_p) or checked on
seeded samples whose counts are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraElement,
    augmentation,
    center_subspace,
    class_sum,
    first_noncommuting,
    invert_normalized,
    power,
    random_unit,
    reduced_binomial,
    sample_rng,
)
from .errors import NotAUnit, PreconditionError, UnitLabError, VerificationFailed
from .linalg import Subspace
from .pgroup import PGroup, Subgroup, p_log


# -- preconditions ----------------------------------------------------------


def require_commutator_order_p(G: PGroup, what: str) -> None:
    G.require_odd(what)
    if G.commutator_subgroup.order != G.p:
        raise PreconditionError(f"{what} requires |G'| = p; {G.label} has |G'| = {G.commutator_subgroup.order}")


def require_frattini_order_p(G: PGroup, what: str) -> None:
    G.require_odd(what)
    if G.is_abelian:
        raise PreconditionError(f"{what} requires a nonabelian group")
    if G.frattini.order != G.p:
        raise PreconditionError(f"{what} requires |Phi(G)| = p; {G.label} has |Phi(G)| = {G.frattini.order}")


def derived_sum(G: PGroup) -> AlgebraElement:
    """The sum of all elements of G'."""
    return class_sum(G, G.commutator_subgroup.members)


def restrict(x: AlgebraElement, members) -> AlgebraElement:
    v = np.zeros(x.group.order, dtype=np.int64)
    idx = list(members)
    v[idx] = x.coeffs[idx]
    return AlgebraElement(x.group, v)


# -- center of V --------------------------------------------------------------


@dataclass(frozen=True)
class CentralUnitFactorization:
    z: AlgebraElement
    betas: tuple[int, ...]
    representatives: tuple[int, ...]

    def rebuild(self) -> AlgebraElement:
        G = self.z.group
        gp = derived_sum(G)
        out = self.z
        for g, b in zip(self.representatives, self.betas):
            out = out * power(1 + AlgebraElement.of(G, g) * gp, b)
        return out


def central_unit_factor(x: AlgebraElement) -> CentralUnitFactorization:
    """Split a central normalized unit as z * prod (1 + g_i G'^)^beta_i.

    z is the restriction of x to Z(G); the betas are the class coefficients of
    z^-1 x - 1, which lies in the span of the noncentral class sums.
    """
    G = x.group
    if G.commutator_subgroup.order != G.p:
        raise PreconditionError("central unit factorization requires |G'| = p")
    if augmentation(x) != 1:
        raise PreconditionError("x is not a normalized unit")
    if not x.is_central():
        raise PreconditionError("x is not central")
    part = G.conjugacy_partition
    z = restrict(x, G.center.members)
    rest = invert_normalized(z) * x - 1
    reps = tuple(c[0] for c in part.noncentral)
    betas = tuple(int(rest.coeffs[r]) for r in reps)
    fac = CentralUnitFactorization(z, betas, reps)
    if fac.rebuild() != x:
        raise VerificationFailed("central unit factorization does not reproduce x")
    return fac


@dataclass(frozen=True)
class CenterReport:
    log_order_by_rank: int
    log_order_by_formula: int
    log_group_part: int
    log_n_part: int
    trivial_intersection: bool

    @property
    def consistent(self) -> bool:
        return (
            self.log_order_by_rank == self.log_order_by_formula
            and self.trivial_intersection
            and self.log_group_part + self.log_n_part == self.log_order_by_rank
        )


def center_order_formula(order: int, center_order: int, p: int) -> int:
    """log_p |Z(V)| = (|G| + (p-1)|Z(G)| - p) / p."""
    num = order + (p - 1) * center_order - p
    if num % p:
        raise UnitLabError("center order formula is not integral")
    return num // p


def center_of_V(G: PGroup) -> CenterReport:
    """log_p |Z(V)| two ways, and the split Z(V) = V(F_p Z(G)) x N."""
    require_commutator_order_p(G, "center_of_V")
    p = G.p
    log_rank = center_subspace(G).dim - 1
    zG = G.center
    log_formula = center_order_formula(G.order, zG.order, p)
    # V(F_p Z(G)) lives in the span of Z(G); N - 1 lives in the span of noncentral class sums
    central_span = Subspace(np.eye(G.order, dtype=np.int64)[list(zG.members)], p, G.order)
    n_span = Subspace([class_sum(G, c).coeffs for c in G.conjugacy_partition.noncentral], p, G.order)
    trivial = central_span.sum(n_span).dim == central_span.dim + n_span.dim
    return CenterReport(log_rank, log_formula, zG.order - 1, n_span.dim, trivial)


def center_exponent_V(G: PGroup) -> int:
    """exp Z(V) from nilpotency indices on a basis of the augmentation-zero center.

    In the commutative algebra Z(F_pG), (1+m)^(p^k) = 1 + m^(p^k) and m -> m^p is
    additive, so exp Z(V) is the least p^k killing every basis element.
    """
    p = G.p
    basis = []
    for cls in G.conjugacy_partition.classes:
        if len(cls) == 1:
            if cls[0] != 0:
                basis.append(AlgebraElement.of(G, cls[0]) - 1)
        else:
            basis.append(class_sum(G, cls))
    exp = 1
    for m in basis:
        k = 1
        cur = m
        while not cur.is_zero():
            cur = power(cur, p)
            k *= p
        exp = max(exp, k)
    return exp


# -- p-th and p^2-th powers ----------------------------------------------------


def frobenius_expansion(G: PGroup, a: int, b: int) -> AlgebraElement:
    """Right-hand side a^p + b^p + sum_r C(p,r)/p a^r b^(p-r) H'^ with H = <a, b>."""
    p = G.p
    H = G.generated([a, b])
    comms = {G.commutator(x, y) for x in H.members for y in H.members}
    Hd = G.generated(comms)
    if Hd.order != p:
        raise PreconditionError(f"<a, b> has derived subgroup of order {Hd.order}, need p")
    if any(G.mul(c, h) != G.mul(h, c) for c in Hd.members for h in H.members):
        raise PreconditionError("<a, b>' is not central in <a, b>")
    hd = class_sum(G, Hd.members)
    out = AlgebraElement.of(G, G.power(a, p)) + AlgebraElement.of(G, G.power(b, p))
    for r in range(1, p):
        g = G.mul(G.power(a, r), G.power(b, p - r))
        out = out + AlgebraElement.of(G, g, reduced_binomial(p, r)) * hd
    return out


@dataclass(frozen=True)
class CentralityReport:
    central: bool
    violator: int | None


def pth_power_centrality(x: AlgebraElement) -> CentralityReport:
    """Does x^p commute with every group element? Reports the least violator."""
    require_commutator_order_p(x.group, "pth_power_centrality")
    y = power(x, x.p)
    h = first_noncommuting(y)
    return CentralityReport(h is None, h)


def p2_power_identity(x: AlgebraElement) -> bool:
    """x^(p^2) == sum alpha_g g^(p^2)."""
    G = x.group
    require_commutator_order_p(G, "p2_power_identity")
    q = G.p**2
    return power(x, q) == x.transport(G.power_map(q))


def unit_order(x: AlgebraElement, limit: int | None = None) -> int:
    """Order of a normalized unit (always a power of p)."""
    if augmentation(x) != 1:
        raise NotAUnit("unit_order expects a normalized unit")
    limit = limit or x.p ** x.group.order
    k = 1
    cur = x
    while cur != 1:
        cur = power(cur, x.p)
        k *= x.p
        if k > limit:
            raise UnitLabError(f"unit order exceeds {limit}")
    return k


@dataclass(frozen=True)
class ExponentCertificate:
    predicted: int
    witness: AlgebraElement
    witness_order: int
    upper_bound: int
    witness_kind: str

    @property
    def certified(self) -> bool:
        return self.predicted == self.witness_order == self.upper_bound


def predicted_exponent_V(G: PGroup) -> ExponentCertificate:
    """exp V = exp G if exp G > p, else p^2; certified from both sides.

    Lower bound: an explicit unit of that order. Upper bound: x^(p^2) is the
    transport of x along g -> g^(p^2), which lands in the commutative algebra of
    the central subgroup of p^2-th powers, so every unit order divides
    p^2 * (max order of a p^2-th power).
    """
    require_commutator_order_p(G, "predicted_exponent_V")
    p = G.p
    if G.is_abelian:
        raise PreconditionError("predicted_exponent_V requires a nonabelian group")
    e = G.exponent
    predicted = e if e > p else p * p
    if e > p:
        g = int(np.argmax(G._orders))
        witness = AlgebraElement.of(G, g)
        kind = f"group element {g}"
    else:
        a, b = first_noncommuting_pair(G)
        witness = AlgebraElement.of(G, a) + AlgebraElement.of(G, b) - 1
        kind = f"a+b-1 with a={a}, b={b}"
    q_images = G.power_map(p * p)
    upper = p * p * max(G.element_order(int(g)) for g in np.unique(q_images))
    return ExponentCertificate(predicted, witness, unit_order(witness, upper * p), upper, kind)


def first_noncommuting_pair(G: PGroup) -> tuple[int, int]:
    for a in G.elements():
        for b in G.elements():
            if G.mul(a, b) != G.mul(b, a):
                return a, b
    raise PreconditionError(f"{G.label} is abelian")


def commutator_exponent_sample(G: PGroup, seed: int, count: int) -> bool:
    """(x^-1 y^-1 x y)^p == 1 for ``count`` seeded pairs of random units."""
    if G.commutator_subgroup.order > G.p:
        raise PreconditionError("commutator exponent sampling requires |G'| <= p")
    for i in range(count):
        rng = sample_rng(seed, i)
        x = random_unit(G, rng)
        y = random_unit(G, rng)
        c = invert_normalized(x) * invert_normalized(y) * x * y
        if power(c, G.p) != 1:
            return False
    return True


# -- V^p = V(F_p G^p) x N ---------------------------------------------------------


def vp_units(G: PGroup, g: int, h: int) -> list[AlgebraElement]:
    """The units u_gamma = h + gamma (g^-1 h - 1), gamma = 1 .. p-1."""
    hh = AlgebraElement.of(G, h)
    k = AlgebraElement.of(G, G.mul(G.inv(g), h))
    return [hh + (k - 1) * gamma for gamma in range(1, G.p)]


def _default_partner(G: PGroup, g: int) -> int:
    return next(x for x in G.elements() if G.mul(g, x) != G.mul(x, g))


def vp_product(G: PGroup, g: int, h: int) -> AlgebraElement:
    """prod over gamma of u_gamma^p h^-p (no claim about its value)."""
    p = G.p
    h_inv_p = AlgebraElement.of(G, G.power(h, -p))
    prod = AlgebraElement.one(G)
    for u in vp_units(G, g, h):
        prod = prod * power(u, p) * h_inv_p
    return prod


def vp_defect(G: PGroup, g: int, h: int) -> AlgebraElement:
    """D^(p-1) with D = ((g^-1 h)^p - 1) h^-p.

    The exact value of the witness product is 1 - gG'^ - D^(p-1): the first-order
    expansion misses prod_gamma (1 + gamma D) = 1 - D^(p-1). The defect vanishes
    iff (g^-1 h)^p = 1, and otherwise equals G'^.
    """
    p = G.p
    k = G.mul(G.inv(g), h)
    D = (AlgebraElement.of(G, G.power(k, p)) - 1) * AlgebraElement.of(G, G.power(h, -p))
    return power(D, p - 1)


def _check_witness_pair(G: PGroup, g: int, h: int | None) -> int:
    require_frattini_order_p(G, "vp_witness")
    if g in G.center:
        raise PreconditionError(f"element {g} is central")
    if h is None:
        return _default_partner(G, g)
    if G.mul(g, h) == G.mul(h, g):
        raise PreconditionError(f"elements {g} and {h} commute")
    return h


def vp_witness(G: PGroup, g: int, h: int | None = None) -> AlgebraElement:
    """prod_gamma u_gamma^p h^-p, asserted equal to 1 - g G'^ = (1 + g G'^)^-1.

    h defaults to the least element not commuting with g. Raises
    VerificationFailed when the product differs; this happens exactly when
    (g^-1 h)^p != 1 (see :func:`vp_defect`).
    """
    h = _check_witness_pair(G, g, h)
    prod = vp_product(G, g, h)
    expected = 1 - AlgebraElement.of(G, g) * derived_sum(G)
    if prod != expected:
        raise VerificationFailed(
            f"vp witness product for g={g}, h={h} is not 1 - gG'^ "
            f"((g^-1 h)^p = {G.power(G.mul(G.inv(g), h), G.p)})"
        )
    return prod


def vp_witness_exact(G: PGroup, g: int, h: int | None = None) -> AlgebraElement:
    """The witness product checked against 1 - g G'^ - vp_defect(g, h)."""
    h = _check_witness_pair(G, g, h)
    prod = vp_product(G, g, h)
    expected = 1 - AlgebraElement.of(G, g) * derived_sum(G) - vp_defect(G, g, h)
    if prod != expected:
        raise VerificationFailed(f"exact vp witness identity fails for g={g}, h={h}")
    return prod


@dataclass(frozen=True)
class PthPowerWord:
    """target == prod(r**p for r in roots), evaluated left to right."""

    target: AlgebraElement
    roots: tuple[AlgebraElement, ...]

    def evaluate(self) -> AlgebraElement:
        out = AlgebraElement.one(self.target.group)
        for r in self.roots:
            out = out * power(r, r.p)
        return out

    def holds(self) -> bool:
        return self.evaluate() == self.target


def n_generator_word(G: PGroup, g: int, h: int | None = None) -> PthPowerWord:
    """1 + g G'^ as a product of explicit p-th powers.

    From prod u_gamma^p h^-p = (1 - gG'^)(1 - E) with E = vp_defect (gG'^ E = 0),
    1 + gG'^ = prod (u_gamma^-1)^p * (h^(p-1))^p * (1 - E), and 1 - E lies in
    V(F_p G^p) where it has a Frobenius root. All factors are central.
    """
    h = _check_witness_pair(G, g, h)
    vp_witness_exact(G, g, h)
    roots = [invert_normalized(u) for u in vp_units(G, g, h)]
    roots.append(AlgebraElement.of(G, G.power(h, G.p - 1)))
    E = vp_defect(G, g, h)
    if not E.is_zero():
        roots.append(frobenius_root(1 - E, agemo_generator(G)))
    target = 1 + AlgebraElement.of(G, g) * derived_sum(G)
    return PthPowerWord(target, tuple(roots))


def agemo_generator(G: PGroup) -> int:
    """An element g with <g^p> = G^p (G^p is cyclic under the standing hypotheses)."""
    Gp = G.agemo()
    pm = G.power_map(G.p)
    for g in G.elements():
        if G.element_order(int(pm[g])) == Gp.order:
            return g
    raise PreconditionError(f"G^p of {G.label} is not cyclic")


def frobenius_root(y: AlgebraElement, g: int) -> AlgebraElement:
    """A p-th root of y in F_p<g>, for y supported on <g^p>.

    Coefficients move along the bijection g^(pk) -> g^k (0 <= k < |g|/p);
    since <g> is abelian, (sum b_c r(c))^p = sum b_c c.
    """
    G = y.group
    p = G.p
    n = G.element_order(g)
    v = np.zeros(G.order, dtype=np.int64)
    pmap = {G.power(g, p * k): G.power(g, k) for k in range(max(n // p, 1))}
    for c in y.support():
        if c not in pmap:
            raise PreconditionError(f"support element {c} is not in <g^p>")
        v[pmap[c]] += y.coeffs[c]
    return AlgebraElement(G, v)


def vp_membership(w: AlgebraElement) -> bool:
    """Is w in V(F_p G^p) x N?

    The restriction y of w to Z(G) must be a normalized unit supported on G^p;
    then y^-1 w - 1 must lie in the span of the noncentral class sums.
    """
    G = w.group
    if G.commutator_subgroup.order > G.p:
        raise PreconditionError("membership test requires |G'| <= p")
    y = restrict(w, G.center.members)
    if augmentation(y) != 1:
        return False
    agemo = G.agemo().member_set
    if not set(y.support()) <= agemo:
        return False
    q = invert_normalized(y) * w - 1
    if q.coeffs[list(G.center.members)].any():
        return False
    for cls in G.conjugacy_partition.noncentral:
        vals = q.coeffs[list(cls)]
        if (vals != vals[0]).any():
            return False
    return True


@dataclass
class VpDecomposition:
    agemo: Subgroup
    t: int
    n_generators: list[AlgebraElement]
    n_words: list[PthPowerWord]
    torsion_roots: list[tuple[AlgebraElement, AlgebraElement]]
    samples: int
    seed: int
    sample_failures: list[int] = field(default_factory=list)

    @property
    def predicted_log_order(self) -> int:
        return (self.agemo.order - 1) + self.t

    @property
    def verified(self) -> bool:
        roots_ok = all(power(r, r.p) == y for y, r in self.torsion_roots)
        return roots_ok and all(w.holds() for w in self.n_words) and not self.sample_failures


def vp_decomposition(G: PGroup, seed: int = 0, samples: int = 200, torsion_samples: int = 20) -> VpDecomposition:
    """Constructive check of V^p = V(F_p G^p) x N with |V^p| = p^((|G^p|-1) + t)."""
    require_frattini_order_p(G, "vp_decomposition")
    part = G.conjugacy_partition
    gp = derived_sum(G)
    gens, words = [], []
    for cls in part.noncentral:
        g = cls[0]
        word = n_generator_word(G, g)
        gens.append(1 + AlgebraElement.of(G, g) * gp)
        words.append(word)

    agemo = G.agemo()
    torsion: list[tuple[AlgebraElement, AlgebraElement]] = []
    if agemo.order > 1:
        g = agemo_generator(G)
        for c in agemo.members:
            y = AlgebraElement.of(G, c)
            torsion.append((y, frobenius_root(y, g)))
        for i in range(torsion_samples):
            rng = sample_rng(seed, i)
            v = np.zeros(G.order, dtype=np.int64)
            idx = list(agemo.members)
            v[idx] = rng.integers(0, G.p, size=len(idx))
            v[0] += 1 - v.sum()
            y = AlgebraElement(G, v)
            torsion.append((y, frobenius_root(y, g)))

    failures = []
    for i in range(samples):
        x = random_unit(G, sample_rng(seed, i))
        if not vp_membership(power(x, G.p)):
            failures.append(i)
    return VpDecomposition(agemo, part.t, gens, words, torsion, samples, seed, failures)


def intersection_G_Vp(G: PGroup) -> Subgroup:
    """G cap V^p, decided elementwise by the V(F_p G^p) x N membership test."""
    G.require_odd("intersection_G_Vp")
    if not G.is_abelian:
        require_frattini_order_p(G, "intersection_G_Vp")
    found = G.subgroup(g for g in G.elements() if vp_membership(AlgebraElement.of(G, g)))
    if found != G.agemo():
        raise VerificationFailed(f"G cap V^p has order {found.order}, G^p has order {G.agemo().order}")
    return found


def log_order(n: int, p: int) -> int:
    return p_log(n, p)
