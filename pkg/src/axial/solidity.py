"""Solidity of lines, decided three ways: the associator-derivation criterion,
identical vanishing of the P/Q polynomials, and enumeration of primitive
idempotents over a small finite field."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

from .algebra import (
    AlgebraTable,
    AxisError,
    CheckResult,
    FrobeniusForm,
    ad_matrix,
    certify_axis,
)
from .linalg import (
    lin_comb,
    mat_sub,
    matmul,
    matvec,
    transpose,
    vadd,
    vec_eq,
    vscale,
    vsub,
    is_zero_vec,
    zero_vec,
)
from .lines import (
    LineKind,
    LineRecord,
    classify_line,
    eigenspace_in,
    idempotent_family,
    is_primitive_in,
)
from .scalars import DualNumbers, PrimeField, Ring, finite_extension_of_degree_two
from .vecpoly import VecPoly


class _NotApplicable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NotApplicable"

    def __reduce__(self):
        return (_NotApplicable, ())


NotApplicable = _NotApplicable()


class MethodDisagreement(AssertionError):
    pass


class EtaNotHalf(ValueError):
    pass


def require_half(A: AlgebraTable):
    F = A.field
    if A.eta is not None and not F.eq(A.eta, F.half):
        raise EtaNotHalf("this routine is only valid for eta = 1/2")


# -- derivations ----------------------------------------------------------------

def associator_matrix(A: AlgebraTable, a, b) -> list:
    """Matrix of ``D_{a,b}: x -> a(bx) - b(ax)``."""
    La, Lb = ad_matrix(A, a), ad_matrix(A, b)
    F = A.field
    return mat_sub(F, matmul(F, La, Lb), matmul(F, Lb, La))


def is_derivation(A: AlgebraTable, D) -> CheckResult:
    """Leibniz rule on basis pairs ``i <= j``; the witness is the first failing pair."""
    F = A.field
    n = A.dim
    cols = transpose(D)
    for i in range(n):
        for j in range(i, n):
            lhs = matvec(F, D, A.basis_product(i, j))
            rhs = vadd(F, A.mul_basis(cols[i], j), A.mul_basis(cols[j], i))
            if not vec_eq(F, lhs, rhs):
                return CheckResult(False, {"pair": (i, j), "lhs": lhs, "rhs": rhs})
    return CheckResult(True)


def dual_number_check(A: AlgebraTable, D) -> CheckResult:
    """Whether ``x -> x + eps D(x)`` is an automorphism of ``A`` over the dual numbers."""
    R = DualNumbers(A.field)
    AR = A.lift(R)
    n = A.dim
    cols = transpose(D)
    phi = [tuple(R.make(1 if k == i else 0, cols[i][k]) for k in range(n)) for i in range(n)]

    def apply(x):
        out = zero_vec(R, n)
        for i, xi in enumerate(x):
            if not R.is_zero(xi):
                out = vadd(R, out, vscale(R, xi, phi[i]))
        return out

    for i in range(n):
        for j in range(i, n):
            lhs = apply(AR.basis_product(i, j))
            rhs = AR.mul(phi[i], phi[j])
            if not vec_eq(R, lhs, rhs):
                return CheckResult(False, {"pair": (i, j)})
    return CheckResult(True)


def line_source(line: LineRecord):
    """The algebra, form and generating axes over the base field."""
    A = line.source if line.source is not None else line.algebra
    form = line.source_form if line.source_form is not None else line.form
    a, b = line.source_axes or (line.a, line.b)
    return A, form, a, b


def derivation_test(line: LineRecord) -> CheckResult:
    """The line is solid iff ``D_{a,b}`` is a derivation of the ambient algebra."""
    A, _, a, b = line_source(line)
    require_half(A)
    return is_derivation(A, associator_matrix(A, a, b))


def rho_derivation(line: LineRecord) -> list:
    """``8 [L_a, L_v]`` for ``v`` the 1/2-eigenvector of ``a`` in the line."""
    A = line.algebra
    K = A.field
    vs = eigenspace_in(A, line.basis, line.a, K.half)
    if len(vs) != 1:
        raise ValueError("a has no unique 1/2-eigenvector in the line")
    D = associator_matrix(A, line.a, vs[0])
    return [tuple(K.reduce(8 * x) for x in row) for row in D]


# -- polynomials ----------------------------------------------------------------

def _vp_mul(A: AlgebraTable, P: VecPoly, Q: VecPoly) -> VecPoly:
    K = A.field
    if P.is_zero() or Q.is_zero():
        return VecPoly.zero(K, A.dim)
    out = [zero_vec(K, A.dim)] * (len(P.coeffs) + len(Q.coeffs) - 1)
    for i, p in enumerate(P.coeffs):
        for j, q in enumerate(Q.coeffs):
            out[i + j] = vadd(K, out[i + j], A.mul(p, q))
    return VecPoly(K, A.dim, out)


def _vp_mul_vec(A: AlgebraTable, P: VecPoly, x) -> VecPoly:
    return VecPoly(A.field, A.dim, [A.mul(p, x) for p in P.coeffs])


def _pair_poly(form: FrobeniusForm, P: VecPoly, x) -> tuple:
    """``(P(lambda), x)`` as a scalar polynomial."""
    return tuple(form(p, x) for p in P.coeffs)


@dataclass
class PolynomialPair:
    Q: VecPoly
    P: VecPoly


def _family_polys(line: LineRecord, C: VecPoly, x, y) -> PolynomialPair:
    """The cleared ``Q_x`` and ``P_{x,y}`` along the curve ``C``.

    For toric lines ``C(lambda) = lambda a_lambda``; terms linear in ``c`` then
    pick up a factor ``lambda`` so the result is ``lambda^2`` times the original.
    """
    A, form = line.algebra, line.form
    K = A.field
    h = K.half
    shift = 1 if line.kind == LineKind.TORIC else 0
    cx = _vp_mul_vec(A, C, x)
    cy = _vp_mul_vec(A, C, y)
    xy = A.mul(x, y)
    c_x = _pair_poly(form, C, x)
    c_y = _pair_poly(form, C, y)
    c_xy = _pair_poly(form, C, xy)
    lin = lambda P: P.shift(shift)  # noqa: E731

    q = _vp_mul(A, C, cx) - lin(cx).scale(h) - C.times_scalar_poly(c_x).scale(h)
    p = (
        _vp_mul(A, cx, cy).scale(K(4))
        - cx.times_scalar_poly(c_y)
        - lin(_vp_mul_vec(A, cy, x))
        - cy.times_scalar_poly(c_x)
        - lin(_vp_mul_vec(A, cx, y))
        - C.times_scalar_poly(c_xy)
        + lin(_vp_mul_vec(A, C, xy))
    )
    return PolynomialPair(q, p)


POLY_KINDS = (LineKind.TORIC, LineKind.FLAT3, LineKind.BARIC3)


def solidity_polynomials(line: LineRecord, x_idx: int, y_idx: int, which: str = "a") -> PolynomialPair:
    """``(Q_x, P_{x,y})`` along the idempotent family of the line, for basis vectors
    ``e_x`` and ``e_y`` of the ambient algebra."""
    if line.kind not in POLY_KINDS:
        raise NotApplicableError(f"{line.kind.value} lines have no polynomial test")
    fam = idempotent_family(line)
    A = line.algebra
    return _family_polys(line, fam.polys[which], A.basis(x_idx), A.basis(y_idx))


class NotApplicableError(ValueError):
    pass


DEGREE_BOUND = {LineKind.TORIC: 4, LineKind.FLAT3: 2, LineKind.BARIC3: 4}


def polynomial_test(line: LineRecord):
    """True iff every ``Q_x`` and ``P_{x,y}`` vanishes identically along each family.

    Returns ``(verdict, witness)``; the verdict is ``NotApplicable`` for lines
    without a one-parameter family.
    """
    if line.kind not in POLY_KINDS:
        return NotApplicable, None
    A = line.algebra
    require_half(A)
    fam = idempotent_family(line)
    n = A.dim
    bound = DEGREE_BOUND[line.kind]
    for which, C in fam.polys.items():
        for i in range(n):
            for j in range(i, n):
                pp = _family_polys(line, C, A.basis(i), A.basis(j))
                for name, poly in (("Q", pp.Q), ("P", pp.P)):
                    if name == "Q" and j != i:
                        continue
                    if poly.degree > bound:
                        raise AssertionError(f"{name} has degree {poly.degree} > {bound}")
                    if not poly.is_zero():
                        k = next(k for k, c in enumerate(poly.coeffs) if not is_zero_vec(A.field, c))
                        return False, {
                            "family": which, "poly": name, "x": i, "y": j,
                            "degree": k, "coefficient": poly.coeffs[k],
                        }
    return True, None


# -- enumeration ----------------------------------------------------------------

# number of distinct family members needed before a polynomial of the line's
# degree bound is forced to vanish; below this the search moves to F_{p^2}
ENUM_THRESHOLD = {
    LineKind.TORIC: 5,
    LineKind.BARIC3: 5,
    LineKind.FLAT3: 6,
    LineKind.BARIC2: 3,
    LineKind.FLAT2: 0,
}


@dataclass
class EnumerationResult:
    verdict: Any
    idempotents: list = field(default_factory=list)
    witness: Any = None
    field: Ring | None = None
    escalated: bool = False


def _line_points(line: LineRecord, E: Ring):
    """Ambient algebra over ``E`` and the line span embedded in it."""
    A = line.source if line.source is not None else line.algebra
    if E != A.field:
        AE = A.lift(E) if not (line.extended and E == line.field) else line.algebra
    else:
        AE = A
    span = [tuple(E.embed(c) for c in s) for s in line.span] if line.span else None
    return AE, span


def primitive_idempotents(line: LineRecord, E: Ring) -> tuple[AlgebraTable, list, list]:
    """All idempotents of the line over the finite field ``E`` that are primitive in the line."""
    AE, span = _line_points(line, E)
    sub = AE.subalgebra(span)
    m = len(span)
    found = []
    for t in itertools.product(list(E.elements()), repeat=m):
        if all(E.is_zero(x) for x in t):
            continue
        if not vec_eq(E, sub.mul(t, t), t):
            continue
        c = lin_comb(E, t, span, AE.dim)
        if is_primitive_in(AE, span, c):
            found.append(c)
    return AE, span, found


def enumeration_test(line: LineRecord, p_max: int = 13) -> EnumerationResult:
    """Certify every primitive idempotent of the line as an axis of the ambient algebra.

    Runs over the prime field, and over ``F_{p^2}`` when the prime field holds too
    few idempotents to pin down the solidity polynomials.
    """
    F = line.base_field
    if not isinstance(F, PrimeField) or F.characteristic > p_max:
        return EnumerationResult(NotApplicable)
    if line.kind == LineKind.BARIC1:
        return EnumerationResult(NotApplicable)
    require_half(line.source if line.source is not None else line.algebra)
    E = F
    AE, span, found = primitive_idempotents(line, E)
    escalated = False
    if len(found) < ENUM_THRESHOLD[line.kind]:
        E = line.field if line.extended else finite_extension_of_degree_two(F)
        AE, span, found = primitive_idempotents(line, E)
        escalated = True
    for c in found:
        try:
            certify_axis(AE, c, AE.field.half)
        except AxisError as exc:
            return EnumerationResult(
                False, found, {"idempotent": c, "check": exc.check, "message": str(exc)}, E, escalated
            )
    return EnumerationResult(True, found, None, E, escalated)


# -- automorphism checks --------------------------------------------------------

def phi_c_matrix(A: AlgebraTable, form: FrobeniusForm, c) -> list:
    """Matrix of ``x -> x + 4(c, x) c - 4 c x``."""
    K = A.field
    cols = []
    row_c = form.row(c)
    for j in range(A.dim):
        x = A.basis(j)
        cols.append(vsub(K, vadd(K, x, vscale(K, K.reduce(4 * row_c[j]), c)), vscale(K, K(4), A.mul_basis(c, j))))
    return transpose(cols)


def is_automorphism(A: AlgebraTable, M) -> CheckResult:
    F = A.field
    cols = transpose(M)
    for i in range(A.dim):
        for j in range(i, A.dim):
            lhs = matvec(F, M, A.basis_product(i, j))
            rhs = A.mul(cols[i], cols[j])
            if not vec_eq(F, lhs, rhs):
                return CheckResult(False, {"pair": (i, j)})
    return CheckResult(True)


def phi_c_automorphism_check(A: AlgebraTable, form: FrobeniusForm, c) -> CheckResult:
    if not vec_eq(A.field, A.mul(c, c), c):
        raise ValueError("c must be idempotent")
    return is_automorphism(A, phi_c_matrix(A, form, c))


# -- verdicts -------------------------------------------------------------------

METHODS = ("derivation", "polynomial", "enumerate")


@dataclass
class SolidityVerdict:
    line: LineRecord
    by_derivation: bool
    by_polynomial: Any = NotApplicable
    by_enumeration: Any = NotApplicable
    witnesses: dict = field(default_factory=dict)
    enumeration: EnumerationResult | None = None

    @property
    def solid(self) -> bool:
        return self.by_derivation

    def applicable(self) -> dict:
        out = {"derivation": self.by_derivation}
        if self.by_polynomial is not NotApplicable:
            out["polynomial"] = self.by_polynomial
        if self.by_enumeration is not NotApplicable:
            out["enumerate"] = self.by_enumeration
        return out


def solidity_verdict(line: LineRecord, methods: Sequence[str] = METHODS, p_max: int = 13) -> SolidityVerdict:
    """Run the requested methods (derivation always runs) and insist that they agree."""
    der = derivation_test(line)
    v = SolidityVerdict(line, der.ok)
    if not der.ok:
        v.witnesses["derivation"] = der.witness
    if "polynomial" in methods:
        ok, wit = polynomial_test(line)
        v.by_polynomial = ok
        if wit is not None:
            v.witnesses["polynomial"] = wit
    if "enumerate" in methods:
        res = enumeration_test(line, p_max)
        v.by_enumeration = res.verdict
        v.enumeration = res
        if res.witness is not None:
            v.witnesses["enumerate"] = res.witness
    verdicts = set(v.applicable().values())
    if len(verdicts) > 1:
        raise MethodDisagreement(f"solidity methods disagree: {v.applicable()}")
    return v


def sample_family_axes(line: LineRecord, values: Sequence) -> list:
    """Certify sampled family members as ambient axes; pairs ``(lambda, ok)``."""
    fam = idempotent_family(line)
    A = line.algebra
    K = A.field
    out = []
    for lam in values:
        lamK = K.embed(lam)
        if line.kind == LineKind.TORIC and K.is_zero(lamK):
            continue
        for which in fam.polys:
            from .lines import family_member

            c = family_member(fam, lamK, which)
            try:
                certify_axis(A, c, K.half)
                out.append((lam, which, True))
            except AxisError:
                out.append((lam, which, False))
    return out


RATIONAL_SAMPLE = ["0", "1", "-1", "2", "-2", "1/2", "-1/2", "3", "-3", "1/3", "-1/3", "3/2",
                   "-3/2", "2/3", "-2/3", "4", "-4", "1/4", "-1/4", "5", "-5", "5/2", "-5/2", "7/3", "-7/3"]


def conjugated_line_solidity(A: AlgebraTable, form: FrobeniusForm, recs: Sequence, i: int, j: int, k: int):
    """If ``<<a,b>>`` and ``<<a,c>>`` are solid, so is ``<<a, c^{tau_b}>>``.

    Returns None when the hypothesis fails, else the verdict for the new line.
    """
    a, b, c = recs[i], recs[j], recs[k]
    if not (derivation_test(classify_line(A, a, b, form)).ok and derivation_test(classify_line(A, a, c, form)).ok):
        return None
    ct = b.apply_tau(c.element)
    if vec_eq(A.field, ct, a.element):
        return True
    rec = certify_axis(A, ct, A.field.half)
    return derivation_test(classify_line(A, a, rec, form)).ok
