import itertools

import numpy as np
import pytest

from unitlab.errors import CapExceeded, OddPrimeRequired, UnitLabError
from unitlab.pgroup import (
    DEFAULT_CAP,
    PGroup,
    build_cyclic,
    build_dihedral8,
    build_elementary_abelian,
    build_extraspecial,
    build_modular_maximal_cyclic,
    build_quaternion8,
    central_product,
    default_cap,
    direct_product,
    p_log,
)


def ep27():
    return build_extraspecial(3, "p")


def m27():
    return build_modular_maximal_cyclic(3, 3)


SMALL = {
    "Ep27": ep27,
    "M27": m27,
    "M81": lambda: build_modular_maximal_cyclic(3, 4),
    "Ep27xC3": lambda: direct_product(ep27(), build_cyclic(3, 1)),
    "Ep27YC9": lambda: central_product(ep27(), build_cyclic(3, 2)),
    "C3xC9": lambda: direct_product(build_cyclic(3, 1), build_cyclic(3, 2)),
    "D8": build_dihedral8,
    "Q8": build_quaternion8,
}


def frattini_by_homomorphisms(G: PGroup) -> set[int]:
    """Intersection of the kernels of all homomorphisms G -> Z/p, found by brute force."""
    p = G.p
    gens = G.generating_set()
    kernel = set(G.elements())
    for values in itertools.product(range(p), repeat=len(gens)):
        phi = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for g in frontier:
                for s, v in zip(gens, values):
                    h = G.mul(g, s)
                    val = (phi[g] + v) % p
                    if h not in phi:
                        phi[h] = val
                        nxt.append(h)
                    elif phi[h] != val:
                        ok = False
                        break
            frontier = nxt
        if ok:
            kernel &= {g for g, v in phi.items() if v == 0}
    return kernel


@pytest.mark.parametrize(
    "name, invariants",
    [
        ("Ep27", (27, 3, 3, 3)),
        ("M27", (27, 9, 3, 3)),
        ("M81", (81, 27, 9, 9)),
        ("Ep27xC3", (81, 3, 9, 3)),
        ("Ep27YC9", (81, 9, 9, 9)),
        ("C3xC9", (27, 9, 27, 9)),
        ("D8", (8, 4, 2, 2)),
        ("Q8", (8, 4, 2, 2)),
    ],
)
def test_builder_invariants(name, invariants):
    G = SMALL[name]()
    assert G.invariants().as_tuple() == invariants
    assert G.check_group_law()


@pytest.mark.parametrize("name", sorted(SMALL))
def test_frattini_matches_homomorphism_oracle(name):
    G = SMALL[name]()
    assert set(G.frattini.members) == frattini_by_homomorphisms(G)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_class_equation(name):
    G = SMALL[name]()
    part = G.conjugacy_partition
    assert sum(len(c) for c in part.classes) == G.order
    assert part.t * G.p + G.center.order == G.order or G.p == 2
    # brute-force class of each representative
    for cls in part.classes:
        g = cls[0]
        assert set(cls) == {G.conjugate(g, h) for h in G.elements()}


def test_extraspecial_structure():
    G = ep27()
    assert G.commutator_subgroup == G.center
    assert G.frattini.order == 3
    assert G.conjugacy_partition.t == 8
    a, b = G.generators["a"], G.generators["b"]
    assert G.commutator(a, b) in G.center and G.commutator(a, b) != 0


def test_modular_relation():
    G = m27()
    a, b = G.generators["a"], G.generators["b"]
    assert G.element_order(a) == 9 and G.element_order(b) == 3
    # b a b^-1 = a^(1 - p^(n-2)) = a^-2 for n = 3
    assert G.mul(G.mul(b, a), G.inv(b)) == G.power(a, -2)
    assert G.frattini.members == G.generated([G.power(a, 3)]).members


def test_central_product_of_extraspecials_has_order_243():
    K = central_product(ep27(), ep27())
    assert K.order == 243
    assert K.center.order == 3 and K.commutator_subgroup == K.center
    assert K.exponent == 3


def test_central_product_with_order_p_factor_is_the_other_factor():
    L = build_cyclic(3, 2)
    assert central_product(build_cyclic(3, 1), L).invariants() == L.invariants()


def test_relabel_preserves_invariants():
    rng = np.random.default_rng(5)
    for make in (ep27, m27):
        G = make()
        H = G.random_relabel(rng)
        assert H.invariants() == G.invariants()
        assert H.conjugacy_partition.t == G.conjugacy_partition.t
        assert H.frattini.order == G.frattini.order


def test_power_map_negative_and_orders():
    G = m27()
    for k in (-5, -1, 0, 1, 3, 9):
        pm = G.power_map(k)
        for g in G.elements():
            assert pm[g] == G.power(g, k)
    assert max(G.element_order(g) for g in G.elements()) == G.exponent


def test_cap_rules(monkeypatch):
    assert default_cap() == DEFAULT_CAP
    with pytest.raises(CapExceeded):
        build_cyclic(3, 6)
    assert build_cyclic(3, 6, cap=729).order == 729
    monkeypatch.setenv("UNITLAB_CAP", "729")
    assert build_cyclic(3, 6).order == 729
    monkeypatch.setenv("UNITLAB_CAP", "27")
    with pytest.raises(CapExceeded):
        m27_81 = build_modular_maximal_cyclic(3, 4)  # noqa: F841
    monkeypatch.setenv("UNITLAB_CAP", "lots")
    with pytest.raises(UnitLabError):
        default_cap()


def test_central_product_625_needs_raised_cap():
    K = build_extraspecial(5, "p")
    with pytest.raises(CapExceeded):
        central_product(K, build_cyclic(5, 2))
    assert central_product(K, build_cyclic(5, 2), cap=625).order == 625


def test_rejects_bad_tables():
    with pytest.raises(UnitLabError):
        PGroup(3, np.array([[0, 1], [1, 0]]))  # order 2 for p = 3
    with pytest.raises(UnitLabError):
        PGroup(2, np.array([[0, 1], [0, 1]]))  # not a Latin square
    with pytest.raises(UnitLabError):
        build_modular_maximal_cyclic(2, 3)


def test_p2_controls_flagged():
    for G in (build_dihedral8(), build_quaternion8()):
        assert G.negative_control
        with pytest.raises(OddPrimeRequired):
            G.require_odd()


def test_p_log():
    assert p_log(243, 3) == 5 and p_log(1, 7) == 0
    with pytest.raises(UnitLabError):
        p_log(24, 3)


def test_elementary_abelian():
    E = build_elementary_abelian(5, 2)
    assert E.order == 25 and E.exponent == 5 and E.is_abelian
