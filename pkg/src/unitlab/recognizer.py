"""Recovering a cyclic-Frattini p-group from invariants of its unit group.

Such a group (p odd) is E x (K Y L) with E elementary abelian, K of order p or
extraspecial of exponent p, and L cyclic or M_{p^n}; its isomorphism type is
fixed by (|G|, exp G, |Z(G)|, exp Z(G)), and each of these is read off from
isomorphism invariants of V(F_pG).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InconsistentInvariants, PreconditionError, UnitLabError
from .algebra import center_subspace
from .pgroup import (
    GroupInvariants,
    PGroup,
    build_cyclic,
    build_elementary_abelian,
    build_extraspecial,
    build_modular_maximal_cyclic,
    central_product,
    direct_product,
    p_log,
    p_log_safe,
)
from .units import (
    center_exponent_V,
    predicted_exponent_V,
    require_commutator_order_p,
    vp_decomposition,
)


@dataclass(frozen=True)
class UnitInvariants:
    p: int
    dimension: int
    log_center_order: int
    center_exponent: int
    v_exponent: int
    log_vp_order: int | None

    def as_tuple(self) -> tuple:
        return (self.p, self.dimension, self.log_center_order, self.center_exponent,
                self.v_exponent, self.log_vp_order)


@dataclass(frozen=True)
class KYLParams:
    p: int
    e_order: int
    k_order: int
    k_kind: str  # "trivial-or-Cp" | "extraspecial"
    l_kind: str  # "cyclic" | "modular"
    l_order: int

    def describe(self) -> str:
        e = f"E{self.e_order}" if self.e_order > 1 else "1"
        k = f"K{self.k_order}" if self.k_kind == "extraspecial" else "Cp"
        l = f"C{self.l_order}" if self.l_kind == "cyclic" else f"M{self.l_order}"
        return f"{e} x ({k} Y {l})"


def v_invariants(G: PGroup, seed: int = 0, samples: int = 50) -> UnitInvariants:
    """Unit-group invariants, each certified on the algebra side."""
    require_commutator_order_p(G, "v_invariants")
    if G.is_abelian:
        raise PreconditionError("v_invariants requires a nonabelian group")
    p = G.p
    cert = predicted_exponent_V(G)
    if not cert.certified:
        raise UnitLabError(f"exponent certificate for {G.label} is not tight")
    log_vp = None
    if G.frattini.order == p:
        dec = vp_decomposition(G, seed=seed, samples=samples)
        if not dec.verified:
            raise UnitLabError(f"V^p decomposition for {G.label} failed verification")
        log_vp = dec.predicted_log_order
    return UnitInvariants(
        p=p,
        dimension=G.order,
        log_center_order=center_subspace(G).dim - 1,
        center_exponent=center_exponent_V(G),
        v_exponent=cert.predicted,
        log_vp_order=log_vp,
    )


def recover_group_invariants(ui: UnitInvariants) -> GroupInvariants:
    """Invert the unit-side invariants to (|G|, exp G, |Z(G)|, exp Z(G))."""
    p = ui.p
    order = ui.dimension
    num = p * ui.log_center_order - order + p
    if num % (p - 1):
        raise InconsistentInvariants(f"|Z(G)| = {num}/{p - 1} is not an integer")
    center_order = num // (p - 1)
    if center_order < 1 or order % center_order or p_log_safe(center_order, p) is None:
        raise InconsistentInvariants(f"recovered |Z(G)| = {center_order} is not a valid center order")
    if ui.v_exponent > p * p:
        exponent = ui.v_exponent
    elif ui.v_exponent == p * p:
        if ui.log_vp_order is None:
            raise InconsistentInvariants("exp V = p^2 but log|V^p| is missing")
        t = (order - center_order) // p
        if ui.log_vp_order == t:
            exponent = p
        elif ui.log_vp_order == t + p - 1:
            exponent = p * p
        else:
            raise InconsistentInvariants(
                f"log|V^p| = {ui.log_vp_order} is neither t = {t} nor t + p - 1 = {t + p - 1}"
            )
    else:
        raise InconsistentInvariants(f"exp V = {ui.v_exponent} is below p^2")
    return GroupInvariants(order, exponent, center_order, ui.center_exponent)


def classify_kyl(gi: GroupInvariants, p: int) -> KYLParams:
    """Kovacs parameters of E x (K Y L) from the four group invariants.

    L cyclic iff exp G = exp Z(G): then |L| = exp G and |K| = p |G:Z(G)|.
    Otherwise L = M_{p^n} with |L| = p exp G and |K| = |G:Z(G)| / p.
    A degenerate L of order p is absorbed into K's center.
    """
    if p == 2:
        raise PreconditionError("classification is for odd p")
    index = gi.order // gi.center_order
    if gi.exponent == gi.center_exponent:
        l_kind, l_order, k_order = "cyclic", gi.exponent, p * index
    else:
        if index % p:
            raise InconsistentInvariants("|G:Z(G)| / p is not an integer")
        l_kind, l_order, k_order = "modular", p * gi.exponent, index // p
    denom = k_order * l_order
    if (p * gi.order) % denom:
        raise InconsistentInvariants("|E| is not an integer")
    e_order = p * gi.order // denom
    for name, v in (("|K|", k_order), ("|L|", l_order), ("|E|", e_order)):
        if p_log_safe(v, p) is None:
            raise InconsistentInvariants(f"{name} = {v} is not a power of {p}")
    if p_log(k_order, p) % 2 == 0:
        raise InconsistentInvariants(f"|K| = {k_order} is not an odd power of {p}")
    if l_kind == "modular" and l_order < p**3:
        raise InconsistentInvariants(f"M_(p^n) needs order >= p^3, got {l_order}")
    k_kind = "extraspecial" if k_order > p else "trivial-or-Cp"
    return KYLParams(p, e_order, k_order, k_kind, l_kind, l_order)


def index_reading_check(gi: GroupInvariants, p: int, kyl: KYLParams) -> dict[str, bool]:
    """For noncyclic L, which of |K| and |L| equals |G:Z(G)| / p."""
    index = gi.order // gi.center_order
    if kyl.l_kind == "cyclic":
        return {"K": True, "L": True}
    return {"K": kyl.k_order == index // p, "L": kyl.l_order == index // p}


def extraspecial_exponent_p(p: int, order: int, cap: int | None = None) -> PGroup:
    """Extraspecial group of exponent p and order p^(2m+1), as iterated central products."""
    m = (p_log(order, p) - 1) // 2
    if m < 1:
        raise PreconditionError(f"no extraspecial group of order {order}")
    K = build_extraspecial(p, "p", cap)
    for _ in range(m - 1):
        K = central_product(K, build_extraspecial(p, "p", cap), cap=cap)
    return K


def build_from_kyl(params: KYLParams, cap: int | None = None) -> PGroup:
    p = params.p
    n = p_log(params.l_order, p)
    if params.l_kind == "cyclic":
        L = build_cyclic(p, n, cap)
    else:
        L = build_modular_maximal_cyclic(p, n, cap)
    if params.k_kind == "extraspecial":
        G = central_product(extraspecial_exponent_p(p, params.k_order, cap), L, cap=cap)
    else:
        G = L
    if params.e_order > 1:
        G = direct_product(build_elementary_abelian(p, p_log(params.e_order, p), cap), G, cap)
    return G


@dataclass(frozen=True)
class Verdict:
    verdict: str  # "distinguished" | "same-type"
    left: UnitInvariants
    right: UnitInvariants
    left_kyl: KYLParams
    right_kyl: KYLParams

    @property
    def differing_fields(self) -> list[str]:
        names = ["p", "dimension", "log_center_order", "center_exponent", "v_exponent", "log_vp_order"]
        return [n for n, a, b in zip(names, self.left.as_tuple(), self.right.as_tuple()) if a != b]


def distinguish(G: PGroup, H: PGroup, seed: int = 0, samples: int = 50) -> Verdict:
    if G.p != H.p:
        raise PreconditionError("groups over different primes")
    for X in (G, H):
        if not X.frattini.is_cyclic:
            raise PreconditionError(f"{X.label} does not have a cyclic Frattini subgroup")
    ui_g = v_invariants(G, seed, samples)
    ui_h = v_invariants(H, seed, samples)
    kg = classify_kyl(recover_group_invariants(ui_g), G.p)
    kh = classify_kyl(recover_group_invariants(ui_h), H.p)
    if ui_g != ui_h:
        verdict = "distinguished"
    elif kg == kh:
        verdict = "same-type"
    else:  # pragma: no cover - classify_kyl is a function of the tuple
        raise UnitLabError("identical unit invariants produced different parameters")
    return Verdict(verdict, ui_g, ui_h, kg, kh)


def berman_matrix(catalog: Sequence[PGroup], seed: int = 0, samples: int = 50) -> list[list[str]]:
    """Pairwise verdicts; invariants are computed once per entry."""
    invs = [v_invariants(G, seed, samples) for G in catalog]
    kyls = [classify_kyl(recover_group_invariants(u), u.p) for u in invs]
    n = len(catalog)
    out = [["" for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if invs[i] != invs[j]:
                out[i][j] = "distinguished"
            elif kyls[i] == kyls[j]:
                out[i][j] = "same-type"
            else:  # pragma: no cover
                raise UnitLabError("identical unit invariants produced different parameters")
    return out
