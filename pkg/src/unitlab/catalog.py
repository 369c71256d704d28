"""Built-in groups covering every branch of the recognition argument."""

from __future__ import annotations

from dataclasses import dataclass

from .dsl import BinOp, GroupSpec, evaluate, parse_group_spec
from .pgroup import DEFAULT_CAP, PGroup, check_prime, default_cap, with_label

# role: "cyclic-frattini" entries satisfy the recognition hypotheses;
# "abelian-control" and "p2-control" must be refused by the p > 2 / nonabelian checks.
_CURATED: dict[int, list[tuple[str, str, str]]] = {
    3: [
        ("Ep27", "extraspecial(3,p)", "cyclic-frattini"),
        ("M27", "modular(3,3)", "cyclic-frattini"),
        ("M81", "modular(3,4)", "cyclic-frattini"),
        ("Ep27xC3", "extraspecial(3,p) x cyclic(3,1)", "cyclic-frattini"),
        ("Ep27YC9", "extraspecial(3,p) Y cyclic(3,2)", "cyclic-frattini"),
        ("M27xC3", "modular(3,3) x cyclic(3,1)", "cyclic-frattini"),
        ("C3xC9", "cyclic(3,1) x cyclic(3,2)", "abelian-control"),
        ("D8", "dihedral8()", "p2-control"),
    ],
    5: [
        ("Ep125", "extraspecial(5,p)", "cyclic-frattini"),
        ("M125", "modular(5,3)", "cyclic-frattini"),
        ("C5xC25", "cyclic(5,1) x cyclic(5,2)", "abelian-control"),
        ("D8", "dihedral8()", "p2-control"),
    ],
}


def _generic(p: int) -> list[tuple[str, str, str]]:
    return [
        (f"Ep{p**3}", f"extraspecial({p},p)", "cyclic-frattini"),
        (f"M{p**3}", f"modular({p},3)", "cyclic-frattini"),
        (f"M{p**4}", f"modular({p},4)", "cyclic-frattini"),
        (f"Ep{p**3}xC{p}", f"extraspecial({p},p) x cyclic({p},1)", "cyclic-frattini"),
        (f"C{p}xC{p*p}", f"cyclic({p},1) x cyclic({p},2)", "abelian-control"),
    ]


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    spec: GroupSpec
    role: str

    @property
    def hypotheses(self) -> bool:
        return self.role == "cyclic-frattini"

    def build(self, cap: int | None = None) -> PGroup:
        return with_label(evaluate(self.spec, cap), self.label)


def builtin_catalog(p: int, cap: int | None = None) -> list[CatalogEntry]:
    """Catalog for p. p = 3, 5 are curated; other odd primes need a raised cap.

    Entries whose order exceeds the cap are dropped.
    """
    p = check_prime(p)
    limit = default_cap() if cap is None else cap
    if p in _CURATED:
        rows = _CURATED[p]
    elif p == 2 or limit <= DEFAULT_CAP:
        rows = []
    else:
        rows = _generic(p)
    out = []
    for label, text, role in rows:
        entry = CatalogEntry(label, parse_group_spec(text), role)
        if spec_order(entry.spec) <= limit:
            out.append(entry)
    return out


def spec_order(spec: GroupSpec) -> int:
    """Order of the group a spec denotes, without building it."""
    if isinstance(spec, BinOp):
        left, right = spec_order(spec.left), spec_order(spec.right)
        if spec.op == "x":
            return left * right
        p = _spec_prime(spec)
        return left * right // p
    name, a = spec.name, spec.args
    if name in ("dihedral8", "quaternion8"):
        return 8
    if name == "extraspecial":
        return a[0] ** 3
    return a[0] ** a[1]


def _spec_prime(spec: GroupSpec) -> int:
    while isinstance(spec, BinOp):
        spec = spec.left
    return 2 if spec.name in ("dihedral8", "quaternion8") else spec.args[0]
