"""Exact arithmetic in the group algebra F_pG.

An element is a dense vector of residues mod p indexed by group elements.
Multiplication is convolution over the Cayley table:
``(xy)[k] = sum_i x[i] * y[i^-1 k]``.
"""

from __future__ import annotations

from math import comb
from typing import Iterable

import numpy as np

from .errors import GroupMismatch, NotAUnit, OddPrimeRequired, UnitLabError
from .linalg import Subspace, nullspace
from .pgroup import PGroup, check_prime

SEED_MASK = (1 << 64) - 1


class AlgebraElement:
    """Immutable element of F_pG."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: PGroup, coeffs):
        arr = np.array(coeffs, dtype=np.int64) % group.p
        if arr.shape != (group.order,):
            raise UnitLabError(f"expected {group.order} coefficients, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    # constructors
    @classmethod
    def zero(cls, G: PGroup) -> "AlgebraElement":
        return cls(G, np.zeros(G.order, dtype=np.int64))

    @classmethod
    def one(cls, G: PGroup) -> "AlgebraElement":
        return cls.of(G, 0)

    @classmethod
    def of(cls, G: PGroup, g: int, coeff: int = 1) -> "AlgebraElement":
        v = np.zeros(G.order, dtype=np.int64)
        v[int(g)] = coeff
        return cls(G, v)

    @classmethod
    def from_terms(cls, G: PGroup, terms: dict[int, int]) -> "AlgebraElement":
        v = np.zeros(G.order, dtype=np.int64)
        for g, c in terms.items():
            v[int(g)] += c
        return cls(G, v)

    @property
    def p(self) -> int:
        return self.group.p

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.group is not self.group:
                raise GroupMismatch(f"{self.group.label} vs {other.group.label}")
            return other
        if isinstance(other, (int, np.integer)):
            return AlgebraElement.of(self.group, 0, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.group, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.group, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return AlgebraElement(self.group, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return AlgebraElement(self.group, self.coeffs * (int(other) % self.p))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        nz = np.flatnonzero(self.coeffs)
        if nz.size == 0:
            return AlgebraElement.zero(self.group)
        ldiv = self.group.left_division
        prod = self.coeffs[nz] @ other.coeffs[ldiv[nz]]
        return AlgebraElement(self.group, prod)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self * other
        return NotImplemented

    def __pow__(self, m: int):
        return power(self, m)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self._coerce(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return other.group is self.group and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = [f"{c}*g{g}" for g, c in enumerate(self.coeffs) if c]
        return f"<{self.group.label}: {' + '.join(terms) or '0'}>"

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def support(self) -> list[int]:
        return [int(g) for g in np.flatnonzero(self.coeffs)]

    def augmentation(self) -> int:
        return augmentation(self)

    def conjugate_by(self, h: int) -> "AlgebraElement":
        """h^-1 x h; moves the coefficient of g to h^-1 g h."""
        G = self.group
        t = G.table
        targets = t[t[G.inverses[h], np.arange(G.order)], h]
        v = np.zeros(G.order, dtype=np.int64)
        v[targets] = self.coeffs
        return AlgebraElement(G, v)

    def is_central(self) -> bool:
        return first_noncommuting(self) is None

    def transport(self, power_map: np.ndarray) -> "AlgebraElement":
        """Linear extension of g -> power_map[g]: sum alpha_g * power_map[g]."""
        v = np.zeros(self.group.order, dtype=np.int64)
        np.add.at(v, power_map, self.coeffs)
        return AlgebraElement(self.group, v)


def first_noncommuting(x: AlgebraElement) -> int | None:
    """Least group element h with h^-1 x h != x, or None if x is central."""
    for h in x.group.generating_set():
        if x.conjugate_by(h) != x:
            return next(g for g in x.group.elements() if x.conjugate_by(g) != x)
    return None


def augmentation(x: AlgebraElement) -> int:
    return int(x.coeffs.sum() % x.p)


def power(x: AlgebraElement, m: int) -> AlgebraElement:
    """x**m by square-and-multiply; negative m inverts first."""
    if m < 0:
        return power(invert_normalized(x), -m)
    result = AlgebraElement.one(x.group)
    base = x
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def invert_normalized(x: AlgebraElement) -> AlgebraElement:
    """Two-sided inverse of a unit of F_pG (G a p-group).

    Scale to augmentation 1, write x = 1 + n with n nilpotent and sum the
    series 1 - n + n^2 - ... until the running power vanishes.
    """
    a = augmentation(x)
    if a == 0:
        raise NotAUnit("augmentation 0: not a unit")
    G = x.group
    a_inv = pow(a, -1, x.p)
    n = x * a_inv - 1
    total = AlgebraElement.one(G)
    term = AlgebraElement.one(G)
    for _ in range(G.order):
        term = -(term * n)
        if term.is_zero():
            return total * a_inv
        total = total + term
    raise UnitLabError("augmentation ideal failed to be nilpotent within |G| steps")


def class_sum(G: PGroup, members: Iterable[int]) -> AlgebraElement:
    v = np.zeros(G.order, dtype=np.int64)
    v[list(members)] = 1
    return AlgebraElement(G, v)


def class_sums(G: PGroup) -> list[AlgebraElement]:
    return [class_sum(G, c) for c in G.conjugacy_partition.classes]


def commutator_subspace_test(x: AlgebraElement) -> bool:
    """True iff every conjugacy class carries coefficient sum 0 mod p."""
    sums = np.bincount(x.group.class_index, weights=x.coeffs, minlength=len(x.group.conjugacy_partition))
    return not (sums.astype(np.int64) % x.p).any()


def commutator_subspace(G: PGroup) -> Subspace:
    """Explicit span of all gh - hg over group-element pairs."""
    n = G.order
    rows = np.zeros((n * n, n), dtype=np.int64)
    idx = np.arange(n * n)
    gh = G.table.ravel()
    hg = G.table.T.ravel()
    np.add.at(rows, (idx, gh), 1)
    np.add.at(rows, (idx, hg), -1)
    rows = rows[gh != hg]
    return Subspace(rows, G.p, n)


def center_subspace(G: PGroup) -> Subspace:
    """Z(F_pG) as the span of the class sums."""
    return Subspace([c.coeffs for c in class_sums(G)], G.p, G.order)


def center_subspace_by_commutation(G: PGroup) -> Subspace:
    """Z(F_pG) as the common kernel of x -> xs - sx over a generating set."""
    n = G.order
    blocks = []
    for s in G.generating_set():
        # (xs)[k] = x[k s^-1] and (sx)[k] = x[s^-1 k]
        M = np.zeros((n, n), dtype=np.int64)
        right = G.table[np.arange(n), G.inverses[s]]
        left = G.table[G.inverses[s], np.arange(n)]
        np.add.at(M, (np.arange(n), right), 1)
        np.add.at(M, (np.arange(n), left), -1)
        blocks.append(M)
    if not blocks:
        return Subspace(np.eye(n, dtype=np.int64), G.p, n)
    return Subspace(nullspace(np.vstack(blocks), G.p), G.p, n)


def random_unit(G: PGroup, rng: np.random.Generator) -> AlgebraElement:
    """Uniform coefficients, identity coefficient adjusted to force augmentation 1."""
    v = rng.integers(0, G.p, size=G.order)
    v[0] += 1 - v.sum()
    return AlgebraElement(G, v)


def random_normalized_unit(G: PGroup, seed: int) -> AlgebraElement:
    return random_unit(G, np.random.default_rng(int(seed) & SEED_MASK))


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Per-sample generator; sample i of a run seeded with s uses s XOR i."""
    return np.random.default_rng((int(seed) ^ int(index)) & SEED_MASK)


def random_central_unit(G: PGroup, rng: np.random.Generator) -> AlgebraElement:
    """Random element of Z(V): class-sum combination with augmentation 1."""
    classes = G.conjugacy_partition.classes
    coeffs = rng.integers(0, G.p, size=len(classes))
    v = np.zeros(G.order, dtype=np.int64)
    for c, cls in zip(coeffs, classes):
        v[list(cls)] = c
    v[0] += 1 - v.sum()
    return AlgebraElement(G, v)


def unit_power_sums(p: int, r: int) -> int:
    """Sum of gamma**r over the nonzero residues mod p."""
    p = check_prime(p)
    if p == 2:
        raise OddPrimeRequired("unit power sums are stated for odd p")
    if not 1 <= r <= p - 1:
        raise UnitLabError(f"r must lie in [1, {p - 1}], got {r}")
    return sum(pow(g, r, p) for g in range(1, p)) % p


def reduced_binomial(p: int, r: int) -> int:
    """C(p, r) / p mod p, for 0 < r < p (the division is exact)."""
    c = comb(p, r)
    if c % p:
        raise UnitLabError(f"C({p},{r}) is not divisible by {p}")
    return (c // p) % p


def relative_augmentation_ideal(G: PGroup, N) -> Subspace:
    """The ideal of F_pG generated by {h - 1 : h in N} for N normal."""
    rows = []
    for g in G.elements():
        for h in N:
            if h == 0:
                continue
            v = np.zeros(G.order, dtype=np.int64)
            v[G.table[g, h]] += 1
            v[g] -= 1
            rows.append(v)
    return Subspace(rows, G.p, G.order)


def ideal_power_dims(I: Subspace, G: PGroup, upto: int) -> list[int]:
    """Dimensions of I, I^2, ..., I^upto computed as spans of products of basis elements."""
    base = [AlgebraElement(G, r) for r in I.basis]
    dims = [I.dim]
    cur = base
    for _ in range(upto - 1):
        prods = [(a * b).coeffs for a in cur for b in base]
        sp = Subspace(prods, G.p, G.order) if prods else Subspace([], G.p, G.order)
        dims.append(sp.dim)
        cur = [AlgebraElement(G, r) for r in sp.basis]
    return dims
