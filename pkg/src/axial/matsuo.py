"""Permutation groups, closure of 3-transposition classes, and Matsuo algebras."""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .algebra import AlgebraTable
from .scalars import FieldError, Ring

Perm = tuple


class GroupError(ValueError):
    pass


class DegreeMismatch(GroupError):
    pass


class NotInvolution(GroupError):
    def __init__(self, perm):
        super().__init__(f"seed {list(perm)} is not an involution")
        self.perm = perm


class OrderViolation(GroupError):
    def __init__(self, d, e, order):
        super().__init__(f"product of {list(d)} and {list(e)} has order {order} > 3")
        self.d, self.e, self.order = d, e, order


class UnknownGroup(GroupError):
    pass


class CatalogCorrupt(GroupError):
    pass


class FieldCharTwo(FieldError):
    pass


class InvalidEta(ValueError):
    pass


def make_perm(images: Sequence[int]) -> Perm:
    p = tuple(int(i) for i in images)
    if sorted(p) != list(range(len(p))):
        raise GroupError(f"{list(images)} is not a permutation")
    return p


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q``: apply ``q`` first."""
    if len(p) != len(q):
        raise DegreeMismatch(f"degrees {len(p)} and {len(q)} differ")
    return tuple(p[i] for i in q)


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_order(p: Perm) -> int:
    e = perm_identity(len(p))
    q, k = p, 1
    while q != e:
        q = perm_compose(p, q)
        k += 1
    return k


def conjugate(a: Perm, b: Perm) -> Perm:
    """``a^b = b^-1 a b``."""
    return perm_compose(perm_inverse(b), perm_compose(a, b))


def cycle_string(p: Perm) -> str:
    seen, parts = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


@dataclass(frozen=True)
class TranspositionClass:
    name: str
    degree: int
    generators: tuple
    class_D: tuple
    group_order: int | None = None
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {d: i for i, d in enumerate(self.class_D)})

    def __len__(self):
        return len(self.class_D)

    def product_order(self, i: int, j: int) -> int:
        return perm_order(perm_compose(self.class_D[i], self.class_D[j]))


def _group_order(gens, degree) -> int | None:
    from sympy.combinatorics import Permutation, PermutationGroup

    if not gens:
        return 1
    return int(PermutationGroup([Permutation(list(g), size=degree) for g in gens]).order())


def close_class(gens: Sequence[Perm], seeds: Sequence[Perm], name: str = "") -> TranspositionClass:
    """Close ``seeds`` under conjugation and check the 3-transposition property."""
    gens = [make_perm(g) for g in gens]
    seeds = [make_perm(s) for s in seeds]
    if not seeds:
        raise GroupError("at least one seed involution is required")
    degree = len(seeds[0])
    for g in gens + seeds:
        if len(g) != degree:
            raise DegreeMismatch("generators and seeds must share one degree")
    ident = perm_identity(degree)
    for s in seeds:
        if s == ident or perm_compose(s, s) != ident:
            raise NotInvolution(s)
    found = dict.fromkeys(seeds)
    queue = deque(found)
    while queue:
        d = queue.popleft()
        for g in gens + list(found):
            c = conjugate(d, g)
            if c not in found:
                found[c] = None
                queue.append(c)
        if len(found) > 10**4:
            raise GroupError("class exceeds 10^4 elements")
    D = sorted(found)
    for i, d in enumerate(D):
        for e in D[i + 1:]:
            o = perm_order(perm_compose(d, e))
            if o > 3:
                raise OrderViolation(d, e, o)
    order = _group_order(D, degree) if degree <= 64 else None
    return TranspositionClass(name, degree, tuple(gens), tuple(D), order)


def validate_eta(F: Ring, eta):
    eta = F(eta) if not F.contains(eta) else eta
    if F.is_zero(eta) or F.eq(eta, F.one) or F.is_zero(F.reduce(2 * eta)):
        raise InvalidEta(f"eta = {eta} must avoid 0 and 1 and have 2*eta != 0")
    return eta


def build_matsuo(tc: TranspositionClass, field: Ring, eta=None) -> AlgebraTable:
    """The Matsuo algebra on the basis ``class_D`` with parameter ``eta`` (default 1/2)."""
    F = field
    if F.characteristic == 2:
        raise FieldCharTwo("Matsuo algebras need characteristic != 2")
    eta = validate_eta(F, F.half if eta is None else eta)
    D = tc.class_D
    n = len(D)
    half_eta = F.reduce(eta * F.half)
    neg = F.reduce(-half_eta)
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = [F.zero] * n
            if i == j:
                v[i] = F.one
            else:
                prod = perm_compose(D[i], D[j])
                o = perm_order(prod)
                if o == 3:
                    k = tc.index[conjugate(D[i], D[j])]
                    v[i] = F.reduce(v[i] + half_eta)
                    v[j] = F.reduce(v[j] + half_eta)
                    v[k] = F.reduce(v[k] + neg)
            table[i][j] = table[j][i] = tuple(v)
    axes = [tuple(F.one if k == i else F.zero for k in range(n)) for i in range(n)]
    labels = [cycle_string(d) for d in D]
    return AlgebraTable(F, table, labels=labels, axes=axes, eta=eta)


# -- catalog ------------------------------------------------------------------

CATALOG_FILES = {
    "S3": "S3.json",
    "S4": "S4.json",
    "S5": "S5.json",
    "W(D4)": "WD4.json",
    "3^3:S4": "3_3_S4.json",
}


def group_checksum(data: dict) -> str:
    body = {k: v for k, v in data.items() if k != "sha256"}
    blob = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def class_from_group_data(data: dict) -> TranspositionClass:
    """Validate a group JSON object (checksum when present, class size) and close its class."""
    try:
        name = data.get("name", "")
        degree = int(data["degree"])
        gens = [make_perm(g) for g in data["generators"]]
        seeds = [make_perm(s) for s in data["seeds"]]
    except (KeyError, TypeError) as exc:
        raise GroupError(f"malformed group data: {exc}") from exc
    if "sha256" in data and data["sha256"] != group_checksum(data):
        raise CatalogCorrupt(f"checksum mismatch for group {name!r}")
    if any(len(p) != degree for p in gens + seeds):
        raise DegreeMismatch("permutation length differs from the declared degree")
    tc = close_class(gens, seeds, name=name)
    expected = data.get("expected_class_size")
    if expected is not None and expected != len(tc):
        raise CatalogCorrupt(f"{name}: class has {len(tc)} elements, expected {expected}")
    return tc


def catalog_names() -> list[str]:
    return list(CATALOG_FILES)


def catalog_data(name: str) -> dict:
    if name not in CATALOG_FILES:
        raise UnknownGroup(f"{name!r} is not in the catalog {catalog_names()}")
    text = resources.files("axial").joinpath("catalog", CATALOG_FILES[name]).read_text()
    return json.loads(text)


def catalog_load(name: str) -> TranspositionClass:
    return class_from_group_data(catalog_data(name))


def miyamoto_permutation(tc: TranspositionClass, i: int) -> tuple:
    """Basis permutation induced by conjugation with ``class_D[i]``."""
    d = tc.class_D[i]
    return tuple(tc.index[conjugate(e, d)] for e in tc.class_D)
