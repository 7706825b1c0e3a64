"""Almost-Jordan and Jordan identities, and the end-to-end Jordan verdict."""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from .algebra import (
    AlgebraTable,
    AxisRecord,
    CheckResult,
    OrbitCapExceeded,
    certify_axis,
    miyamoto_orbit,
)
from .linalg import is_zero_vec, rank, vadd, vec_eq, vscale, vsub
from .solidity import associator_matrix, is_derivation, require_half


class Verdict(str, enum.Enum):
    JORDAN = "Jordan"
    NOT_JORDAN = "NotJordan"
    INCONCLUSIVE = "Inconclusive"


class ImplicationViolation(AssertionError):
    pass


def _random_vec(A: AlgebraTable, rng: random.Random):
    return tuple(A.field.random(rng) for _ in range(A.dim))


def almost_jordan_defect(A: AlgebraTable, x, y):
    """``2((yx)x)x + y x^3 - 3(y x^2)x`` with ``x^3 = x^2 x``."""
    F = A.field
    yx = A.mul(y, x)
    x2 = A.mul(x, x)
    x3 = A.mul(x2, x)
    lhs = vadd(F, vscale(F, F(2), A.mul(A.mul(yx, x), x)), A.mul(y, x3))
    rhs = vscale(F, F(3), A.mul(A.mul(y, x2), x))
    return vsub(F, lhs, rhs)


@dataclass
class AlmostJordanResult:
    ok: bool
    witness: Any = None
    identity_samples: int = 0
    identity_failures: int = 0

    def __bool__(self):
        return self.ok


def almost_jordan_test(A: AlgebraTable, samples: int = 100, seed: int = 0) -> AlmostJordanResult:
    """All ``D_{e_i, e_j}`` are derivations, cross-checked against the identity
    ``2((yx)x)x + y x^3 = 3(y x^2)x`` on random pairs."""
    n = A.dim
    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            res = is_derivation(A, associator_matrix(A, A.basis(i), A.basis(j)))
            if not res.ok:
                witness = {"pair": (i, j), "leibniz": res.witness["pair"]}
                break
        if witness:
            break
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        x, y = _random_vec(A, rng), _random_vec(A, rng)
        if not is_zero_vec(A.field, almost_jordan_defect(A, x, y)):
            failures += 1
    ok = witness is None
    if ok and failures:
        raise ImplicationViolation("Leibniz form holds but the direct identity fails")
    return AlmostJordanResult(ok, witness, samples, failures)


def linearized_jordan(A: AlgebraTable, a: int, x, y, z):
    """``(yz)(ax) + (xy)(az) + (xz)(ay) - ((yz)a)x - ((xy)a)z - ((xz)a)y`` with
    ``a`` a basis index and ``x, y, z`` vectors."""
    F = A.field
    ea = A.basis(a)
    yz, xy, xz = A.mul(y, z), A.mul(x, y), A.mul(x, z)
    ax, az, ay = A.mul(ea, x), A.mul(ea, z), A.mul(ea, y)
    pos = vadd(F, vadd(F, A.mul(yz, ax), A.mul(xy, az)), A.mul(xz, ay))
    neg = vadd(F, vadd(F, A.mul(A.mul_basis(yz, a), x), A.mul(A.mul_basis(xy, a), z)), A.mul(A.mul_basis(xz, a), y))
    return vsub(F, pos, neg)


def _linearized_from(A: AlgebraTable, a_values: Sequence[int]):
    """Lexicographically first failing ``(a, x, y, z)`` with ``x <= y <= z``, or None."""
    F = A.field
    n = A.dim
    P = [[A.basis_product(i, j) for j in range(n)] for i in range(n)]
    for a in a_values:
        for x in range(n):
            for y in range(x, n):
                for z in range(y, n):
                    pos = vadd(F, vadd(F, A.mul(P[y][z], P[a][x]), A.mul(P[x][y], P[a][z])), A.mul(P[x][z], P[a][y]))
                    neg = vadd(
                        F,
                        vadd(F, A.mul_basis(A.mul_basis(P[y][z], a), x), A.mul_basis(A.mul_basis(P[x][y], a), z)),
                        A.mul_basis(A.mul_basis(P[x][z], a), y),
                    )
                    if not vec_eq(F, pos, neg):
                        return (a, x, y, z), vsub(F, pos, neg)
    return None


def linearized_jordan_test(A: AlgebraTable, threads: int = 1) -> CheckResult:
    """The multilinear Jordan expression on all basis quadruples; the expression
    is symmetric in ``x, y, z`` so only ``x <= y <= z`` is visited."""
    n = A.dim
    if threads > 1 and n > 1:
        from .parallel import parallel_map

        chunks = [[a] for a in range(n)]
        results = parallel_map(_linearized_chunk, [(A, c) for c in chunks], threads)
        hits = [r for r in results if r is not None]
        if not hits:
            return CheckResult(True)
        idx, val = min(hits, key=lambda h: h[0])
        return CheckResult(False, {"quadruple": idx, "value": val})
    hit = _linearized_from(A, range(n))
    if hit is None:
        return CheckResult(True)
    return CheckResult(False, {"quadruple": hit[0], "value": hit[1]})


def _linearized_chunk(args):
    A, a_values = args
    return _linearized_from(A, a_values)


@dataclass
class SampleResult:
    ok: bool
    count: int
    exhaustive: bool
    witness: Any = None

    def __bool__(self):
        return self.ok


def jordan_identity_sample(A: AlgebraTable, trials: int = 500, seed: int = 0) -> SampleResult:
    """``(x^2 y) x = x^2 (y x)`` on random pairs, or on every pair over F_3 and F_5 when
    ``dim <= 3``."""
    F = A.field
    exhaustive = F.order is not None and F.order <= 5 and A.dim <= 3
    if exhaustive:
        elems = list(F.elements())
        vecs = list(itertools.product(elems, repeat=A.dim))
        pairs = itertools.product(vecs, vecs)
    else:
        rng = random.Random(seed)
        pairs = ((_random_vec(A, rng), _random_vec(A, rng)) for _ in range(trials))
    count = 0
    for x, y in pairs:
        count += 1
        x2 = A.mul(x, x)
        lhs = A.mul(A.mul(x2, y), x)
        rhs = A.mul(x2, A.mul(y, x))
        if not vec_eq(F, lhs, rhs):
            return SampleResult(False, count, exhaustive, {"x": x, "y": y})
    return SampleResult(True, count, exhaustive)


def spans_by_axes(A: AlgebraTable, records: Sequence[AxisRecord], cap: int | None = None) -> bool:
    """Whether the Miyamoto orbit closure of the axes spans ``A``.

    Raises ``OrbitCapExceeded`` when the orbit grows beyond ``cap`` (default ``10 * dim``)
    before spanning.
    """
    if not records:
        return False
    orbit = miyamoto_orbit(A, records, cap=cap, until_span=True)
    return rank(A.field, orbit) == A.dim


@dataclass
class IdentityReport:
    almost_jordan: bool
    almost_jordan_witness: Any
    linearized_jordan: bool
    linearized_jordan_witness: Any
    jordan_sampled: bool
    sample_count: int
    sample_exhaustive: bool
    spans_by_axes: bool | None
    all_lines_solid: bool
    non_solid_pairs: list
    final_verdict: Verdict
    notes: list = field(default_factory=list)


def generator_pair_solidity(A: AlgebraTable, records: Sequence[AxisRecord]) -> list:
    """Pairs ``(i, j)`` of generating axes whose associator is not a derivation."""
    bad = []
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            D = associator_matrix(A, records[i].element, records[j].element)
            if not is_derivation(A, D).ok:
                bad.append((i, j))
    return bad


def full_pipeline(
    A: AlgebraTable,
    axes: Sequence | None = None,
    trials: int = 500,
    seed: int = 0,
    cap: int | None = None,
    threads: int = 1,
) -> IdentityReport:
    """Solidity of generator lines, spanning, almost-Jordan, linearized Jordan and the
    sampled Jordan identity, combined into a verdict with its implications checked."""
    require_half(A)
    F = A.field
    axes = list(A.axes if axes is None else axes)
    records = [certify_axis(A, a, F.half) for a in axes]
    bad = generator_pair_solidity(A, records)
    all_solid = not bad
    notes = []
    try:
        spans = spans_by_axes(A, records, cap)
    except OrbitCapExceeded as exc:
        spans = None
        notes.append(f"orbit cap exceeded: {exc}")
    aj = almost_jordan_test(A, seed=seed)
    lj = linearized_jordan_test(A, threads=threads)
    js = jordan_identity_sample(A, trials, seed)

    if all_solid and spans and not aj.ok:
        raise ImplicationViolation("all lines solid and spanning, yet not almost Jordan")
    if aj.ok and spans and not lj.ok:
        raise ImplicationViolation("almost Jordan and spanning, yet linearized identity fails")
    if bad and aj.ok:
        raise ImplicationViolation("a non-solid line in an almost Jordan algebra")

    if not (aj.ok and lj.ok and js.ok):
        verdict = Verdict.NOT_JORDAN
    elif spans is None:
        verdict = Verdict.INCONCLUSIVE
    elif F.characteristic != 3 or js.exhaustive:
        verdict = Verdict.JORDAN
    else:
        verdict = Verdict.INCONCLUSIVE
        notes.append("characteristic 3: the Jordan identity was only sampled")
    if verdict == Verdict.JORDAN and bad:
        raise ImplicationViolation("Jordan verdict with a non-solid generator line")
    return IdentityReport(
        almost_jordan=aj.ok,
        almost_jordan_witness=aj.witness,
        linearized_jordan=lj.ok,
        linearized_jordan_witness=lj.witness,
        jordan_sampled=js.ok,
        sample_count=js.count,
        sample_exhaustive=js.exhaustive,
        spans_by_axes=spans,
        all_lines_solid=all_solid,
        non_solid_pairs=bad,
        final_verdict=verdict,
        notes=notes,
    )


EIGEN_PATTERNS = [p for p in itertools.combinations_with_replacement(("1", "0", "eta"), 3)]


def eigen_triple_coverage(A: AlgebraTable, rec: AxisRecord, per_pattern: int = 4) -> dict:
    """Evaluate the linearized expression at the axis on eigenvector triples for each of
    the ten eigenvalue patterns; maps pattern to the number of triples checked, and
    raises on a nonzero value."""
    d = rec.decomposition
    spaces = {"1": d.basis_1, "0": d.basis_0, "eta": d.basis_half}
    a_vec = rec.element
    F = A.field
    out = {}
    for pat in EIGEN_PATTERNS:
        triples = list(itertools.product(*(spaces[l] for l in pat)))[:per_pattern]
        for x, y, z in triples:
            yz, xy, xz = A.mul(y, z), A.mul(x, y), A.mul(x, z)
            pos = vadd(F, vadd(F, A.mul(yz, A.mul(a_vec, x)), A.mul(xy, A.mul(a_vec, z))), A.mul(xz, A.mul(a_vec, y)))
            neg = vadd(F, vadd(F, A.mul(A.mul(yz, a_vec), x), A.mul(A.mul(xy, a_vec), z)), A.mul(A.mul(xz, a_vec), y))
            if not vec_eq(F, pos, neg):
                raise ImplicationViolation(f"linearized identity fails on pattern {pat}")
        out[pat] = len(triples)
    return out


def orbit_pair_solidity(A: AlgebraTable, records: Sequence[AxisRecord], cap: int | None = None) -> list:
    """Non-solid pairs among all axes in the Miyamoto orbit closure of the generators."""
    orbit = miyamoto_orbit(A, records, cap=cap)
    bad = []
    for i in range(len(orbit)):
        for j in range(i + 1, len(orbit)):
            if not is_derivation(A, associator_matrix(A, orbit[i], orbit[j])).ok:
                bad.append((i, j))
    return bad
