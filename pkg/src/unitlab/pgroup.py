"""Finite p-groups as dense multiplication tables.

Elements are integers ``0 .. |G|-1`` and index 0 is always the identity.
Constructions build the table from an explicit normal form and never solve
presentations.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, OddPrimeRequired, PreconditionError, UnitLabError

DEFAULT_CAP = 343
CAP_ENV = "UNITLAB_CAP"


def default_cap() -> int:
    """Order cap, overridable through the ``UNITLAB_CAP`` environment variable."""
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UnitLabError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise UnitLabError(f"{CAP_ENV} must be positive, got {cap}")
    return cap


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise UnitLabError(f"{p!r} is not a prime")
    return int(p)


def p_log(n: int, p: int) -> int:
    """Return k with p**k == n, or raise if n is not a power of p."""
    k = 0
    m = n
    while m > 1 and m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise UnitLabError(f"{n} is not a power of {p}")
    return k


def _check_cap(order: int, cap: int | None) -> None:
    limit = default_cap() if cap is None else cap
    if order > limit:
        raise CapExceeded(f"group order {order} exceeds cap {limit}")


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    exponent: int
    center_order: int
    center_exponent: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.order, self.exponent, self.center_order, self.center_exponent)


@dataclass(frozen=True, eq=False)
class Subgroup:
    members: tuple[int, ...]
    parent: "PGroup"

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return int(g) in self.member_set

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def exponent(self) -> int:
        return max(self.parent.element_order(g) for g in self.members)

    @property
    def is_cyclic(self) -> bool:
        return self.exponent == self.order

    def is_central(self) -> bool:
        z = self.parent.center.member_set
        return self.member_set <= z


@dataclass(frozen=True)
class ConjugacyPartition:
    classes: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)

    @property
    def noncentral(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c in self.classes if len(c) > 1)

    @property
    def t(self) -> int:
        """Number of classes with at least two elements."""
        return len(self.noncentral)

    def __len__(self) -> int:
        return len(self.classes)


class PGroup:
    """A finite p-group given by its Cayley table.

    The table is validated as a Latin square with identity at index 0 and
    p-power order; associativity is checked separately by
    :meth:`check_group_law` because it is cubic in the order.
    """

    def __init__(self, p: int, table, label: str = "G", generators: dict[str, int] | None = None):
        p = check_prime(p)
        table = np.array(table, dtype=np.int64)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise UnitLabError("multiplication table must be a non-empty square array")
        p_log(n, p)
        ar = np.arange(n)
        if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
            raise UnitLabError("index 0 must be the identity")
        srt = np.sort(table, axis=1)
        if not (np.all(srt == ar) and np.all(np.sort(table, axis=0) == ar[:, None])):
            raise UnitLabError("table is not a Latin square")
        table.setflags(write=False)
        inv = np.argmin(table, axis=1)  # position of the 0 entry in each row
        inv.setflags(write=False)
        self.p = p
        self.table = table
        self.inverses = inv
        self.label = label
        self.generators = dict(generators or {})
        bad = [g for g in range(n) if p_log_safe(self.element_order(g), p) is None]
        if bad:
            raise UnitLabError(f"element {bad[0]} does not have p-power order")

    def __repr__(self) -> str:
        return f"PGroup({self.label}, p={self.p}, order={self.order})"

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def negative_control(self) -> bool:
        return self.p == 2

    def require_odd(self, what: str = "this operation") -> None:
        if self.p == 2:
            raise OddPrimeRequired(f"{what} requires p > 2; {self.label} is a 2-group")

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def commutator(self, a: int, b: int) -> int:
        """(a, b) = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[self.inverses[a], self.inverses[b]], t[a, b]])

    def conjugate(self, g: int, h: int) -> int:
        """h^-1 g h."""
        t = self.table
        return int(t[t[self.inverses[h], g], h])

    def power(self, g: int, k: int) -> int:
        return int(self.power_map(k)[g])

    def power_map(self, k: int) -> np.ndarray:
        """Array whose entry g is g**k (k may be negative)."""
        if k < 0:
            return self.power_map(-k)[self.inverses]
        result = np.zeros(self.order, dtype=np.int64)
        base = np.arange(self.order)
        while k:
            if k & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            k >>= 1
        return result

    def element_order(self, g: int) -> int:
        return int(self._orders[g])

    @cached_property
    def _orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        ar = np.arange(self.order)
        k = 1
        done = cur == 0
        while not done.all():
            cur = self.table[cur, ar]
            k += 1
            newly = (cur == 0) & ~done
            orders[newly] = k
            done |= newly
        orders[0] = 1
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(self._orders.max())

    @cached_property
    def left_division(self) -> np.ndarray:
        """ldiv[i, k] = i^-1 k; drives convolution in the group algebra."""
        ld = self.table[self.inverses[:, None], np.arange(self.order)[None, :]]
        ld.setflags(write=False)
        return ld

    @cached_property
    def class_index(self) -> np.ndarray:
        """Entry g is the position of g's class in ``conjugacy_partition``."""
        idx = np.empty(self.order, dtype=np.int64)
        for i, cls in enumerate(self.conjugacy_partition.classes):
            idx[list(cls)] = i
        return idx

    def generating_set(self) -> list[int]:
        """Greedy generating set, each new generator the least element outside."""
        gens: list[int] = []
        current = self.generated([])
        for g in range(self.order):
            if g not in current:
                gens.append(g)
                current = self.generated(gens)
                if current.order == self.order:
                    break
        return gens

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def subgroup(self, members: Iterable[int]) -> Subgroup:
        return Subgroup(tuple(sorted({int(m) for m in members})), self)

    def generated(self, gens: Iterable[int]) -> Subgroup:
        """Closure of ``gens`` under multiplication."""
        gens = sorted({int(g) for g in gens} - {0})
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return self.subgroup(seen)

    @cached_property
    def center(self) -> Subgroup:
        mask = np.all(self.table == self.table.T, axis=1)
        return self.subgroup(np.nonzero(mask)[0])

    @cached_property
    def commutator_subgroup(self) -> Subgroup:
        t = self.table
        inv = self.inverses
        comms = t[t[inv[:, None], inv[None, :]], t]
        return self.generated(np.unique(comms))

    def agemo(self, k: int = 1) -> Subgroup:
        """Subgroup generated by all (p**k)-th powers."""
        return self.generated(np.unique(self.power_map(self.p**k)))

    @cached_property
    def frattini(self) -> Subgroup:
        return self.generated(set(self.agemo().members) | set(self.commutator_subgroup.members))

    @cached_property
    def conjugacy_partition(self) -> ConjugacyPartition:
        t = self.table
        inv = self.inverses
        ar = np.arange(self.order)
        conj = t[t[inv[None, :], ar[:, None]], ar[None, :]]  # conj[g, h] = h^-1 g h
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for g in range(self.order):
            if seen[g]:
                continue
            cls = np.unique(conj[g])
            seen[cls] = True
            classes.append(tuple(int(c) for c in cls))
        return ConjugacyPartition(tuple(classes))

    def invariants(self) -> GroupInvariants:
        z = self.center
        return GroupInvariants(self.order, self.exponent, z.order, z.exponent)

    def check_group_law(self, exhaustive_limit: int = 125, samples: int = 100_000, seed: int = 0) -> bool:
        """Associativity check: exhaustive up to ``exhaustive_limit``, sampled above."""
        t = self.table
        n = self.order
        if n <= exhaustive_limit:
            left = t[t[:, :, None], np.arange(n)[None, None, :]]
            right = t[np.arange(n)[:, None, None], t[None, :, :]]
            return bool(np.array_equal(left, right))
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        return bool(np.array_equal(t[t[a, b], c], t[a, t[b, c]]))

    def relabel(self, perm: Sequence[int], label: str | None = None) -> "PGroup":
        """Isomorphic copy where old element i becomes ``perm[i]``; perm[0] must be 0."""
        perm = np.asarray(perm, dtype=np.int64)
        if perm[0] != 0 or sorted(perm.tolist()) != list(range(self.order)):
            raise UnitLabError("relabeling must be a permutation fixing the identity")
        new = np.empty_like(self.table)
        new[perm[:, None], perm[None, :]] = perm[self.table]
        gens = {k: int(perm[v]) for k, v in self.generators.items()}
        return PGroup(self.p, new, label or self.label, gens)

    def random_relabel(self, rng: np.random.Generator) -> "PGroup":
        perm = np.concatenate([[0], 1 + rng.permutation(self.order - 1)])
        return self.relabel(perm)


def p_log_safe(n: int, p: int) -> int | None:
    try:
        return p_log(n, p)
    except UnitLabError:
        return None


def require_odd_prime(p: int) -> None:
    if p == 2:
        raise OddPrimeRequired("p > 2 required")


# -- constructions ---------------------------------------------------------


def _from_normal_forms(p: int, elements: Sequence[Hashable], mul: Callable, label: str,
                       generators: dict[str, Hashable] | None = None) -> PGroup:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[mul(x, y)]
    gens = {k: index[v] for k, v in (generators or {}).items()}
    return PGroup(p, table, label, gens)


def build_cyclic(p: int, n: int, cap: int | None = None) -> PGroup:
    """C_{p^n}; the generator is element 1 and element k is its k-th power."""
    p = check_prime(p)
    if n < 1:
        raise PreconditionError("cyclic group needs n >= 1")
    m = p**n
    _check_cap(m, cap)
    ar = np.arange(m)
    return PGroup(p, (ar[:, None] + ar[None, :]) % m, f"C{m}", {"a": 1 if m > 1 else 0})


def build_elementary_abelian(p: int, k: int, cap: int | None = None) -> PGroup:
    p = check_prime(p)
    if k < 1:
        raise PreconditionError("elementary abelian group needs rank >= 1")
    _check_cap(p**k, cap)
    g = build_cyclic(p, 1, cap)
    for _ in range(k - 1):
        g = direct_product(g, build_cyclic(p, 1, cap), cap)
    return with_label(g, f"C{p}^{k}" if k > 1 else f"C{p}")


def build_extraspecial(p: int, exponent_kind: str = "p", cap: int | None = None) -> PGroup:
    """Extraspecial group of order p^3.

    ``exponent_kind="p"`` is the Heisenberg group of triples (x, y, z) mod p with
    (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y'); a is (1,0,0) and b is (0,1,0).
    ``exponent_kind="p2"`` is M_{p^3}.
    """
    p = check_prime(p)
    require_odd_prime(p)
    kind = _exponent_kind(exponent_kind)
    if kind == "p2":
        return with_label(build_modular_maximal_cyclic(p, 3, cap), f"Ep2_{p**3}")
    _check_cap(p**3, cap)
    elements = [(x, y, z) for z in range(p) for y in range(p) for x in range(p)]

    def mul(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] + u[0] * v[1]) % p)

    return _from_normal_forms(p, elements, mul, f"Ep{p**3}", {"a": (1, 0, 0), "b": (0, 1, 0)})


def _exponent_kind(kind: str) -> str:
    k = str(kind).replace(" ", "").replace("^", "")
    if k in ("p", "1"):
        return "p"
    if k in ("p2", "2"):
        return "p2"
    raise PreconditionError(f"exponent kind must be 'p' or 'p2', got {kind!r}")


def build_modular_maximal_cyclic(p: int, n: int, cap: int | None = None) -> PGroup:
    """M_{p^n} = <a, b | a^{p^(n-1)} = b^p = 1, (a,b) = a^{p^(n-2)}>.

    Normal form a^i b^j with b a b^-1 = a^r, r = 1 - p^(n-2).
    """
    p = check_prime(p)
    require_odd_prime(p)
    if n < 3:
        raise PreconditionError("M_{p^n} needs n >= 3")
    _check_cap(p**n, cap)
    m = p ** (n - 1)
    r = (1 - p ** (n - 2)) % m
    rpow = [pow(r, j, m) for j in range(p)]
    elements = [(i, j) for j in range(p) for i in range(m)]

    def mul(u, v):
        return ((u[0] + v[0] * rpow[u[1]]) % m, (u[1] + v[1]) % p)

    return _from_normal_forms(p, elements, mul, f"M{p**n}", {"a": (1, 0), "b": (0, 1)})


def build_dihedral8() -> PGroup:
    """Dihedral group of order 8 (negative control, p = 2)."""
    elements = [(i, j) for j in range(2) for i in range(4)]

    def mul(u, v):
        return ((u[0] + v[0] * (-1) ** u[1]) % 4, (u[1] + v[1]) % 2)

    return _from_normal_forms(2, elements, mul, "D8", {"a": (1, 0), "b": (0, 1)})


def build_quaternion8() -> PGroup:
    """Quaternion group of order 8 (negative control, p = 2)."""
    elements = [(i, j) for j in range(2) for i in range(4)]

    def mul(u, v):
        i = u[0] + v[0] * (-1) ** u[1]
        j = u[1] + v[1]
        if j >= 2:
            i, j = i + 2, j - 2
        return (i % 4, j)

    return _from_normal_forms(2, elements, mul, "Q8", {"a": (1, 0), "b": (0, 1)})


def with_label(g: PGroup, label: str) -> PGroup:
    return PGroup(g.p, g.table, label, g.generators)


def direct_product(G: PGroup, H: PGroup, cap: int | None = None) -> PGroup:
    """G x H with (g, h) stored at index g*|H| + h."""
    if G.p != H.p:
        raise PreconditionError(f"direct product of a {G.p}-group and a {H.p}-group")
    _check_cap(G.order * H.order, cap)
    m = H.order
    gi = np.repeat(np.arange(G.order), m)
    hi = np.tile(np.arange(m), G.order)
    table = G.table[gi[:, None], gi[None, :]] * m + H.table[hi[:, None], hi[None, :]]
    gens = {f"{k}1": v * m for k, v in G.generators.items()}
    gens.update({f"{k}2": v for k, v in H.generators.items()})
    return PGroup(G.p, table, f"{G.label}x{H.label}", gens)


def quotient_by_central(G: PGroup, D: Subgroup, label: str | None = None) -> PGroup:
    """G/D for a central subgroup D; cosets are indexed by their minimal element."""
    if not D.is_central():
        raise PreconditionError("quotient subgroup must be central")
    d = np.array(D.members)
    cosets = np.sort(G.table[:, d], axis=1)
    reps = np.unique(cosets[:, 0])
    new_id = np.full(G.order, -1, dtype=np.int64)
    new_id[reps] = np.arange(len(reps))
    of = new_id[cosets[:, 0]]
    table = of[G.table[reps[:, None], reps[None, :]]]
    gens = {k: int(of[v]) for k, v in G.generators.items()}
    return PGroup(G.p, table, label or f"{G.label}/{D.order}", gens)


def central_product(K: PGroup, L: PGroup, amalgam: int | None = None, cap: int | None = None) -> PGroup:
    """K Y L: identify the order-p center of K with a central order-p subgroup of L.

    ``amalgam`` is an element of L generating that subgroup; by default the
    unique order-p subgroup of Z(L) is used, which must then exist. If |K| = p
    the product collapses to L.
    """
    if K.p != L.p:
        raise PreconditionError(f"central product of a {K.p}-group and a {L.p}-group")
    p = K.p
    zk = K.center
    if zk.order != p:
        raise PreconditionError(f"central product needs |Z(K)| = p, got {zk.order}")
    zl = L.center
    if amalgam is None:
        omega = [g for g in zl.members if g != 0 and L.element_order(g) == p]
        if len(omega) != p - 1:
            raise PreconditionError("Z(L) has no unique subgroup of order p; pass an amalgam")
        w = omega[0]
    else:
        w = int(amalgam)
        if w not in zl or L.element_order(w) != p:
            raise PreconditionError("amalgam must be a central element of order p")
    out_order = K.order * L.order // p
    _check_cap(out_order, cap)
    label = f"{K.label}Y{L.label}"
    if K.order == p:
        return with_label(L, label)
    # the intermediate K x L is allowed to exceed the cap
    P = direct_product(K, L, cap=K.order * L.order)
    z = next(g for g in zk.members if g != 0)
    m = L.order
    gen = z * m + L.inv(w)
    return quotient_by_central(P, P.generated([gen]), label)
