"""Two-generated subalgebras: classification, canonical bases, idempotent
families and Miyamoto orbits."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .algebra import (
    AlgebraError,
    AlgebraTable,
    AxisRecord,
    FrobeniusForm,
    subalgebra_closure,
)
from .linalg import (
    coordinates,
    kernel,
    lin_comb,
    solve,
    transpose,
    vadd,
    vec_eq,
    vscale,
    vsub,
    is_zero_vec,
)
from .scalars import QuadraticExtension, Ring, multiplicative_order
from .vecpoly import VecPoly


class LineError(AlgebraError):
    pass


class SameAxis(LineError):
    pass


class LineDimZeroOrOne(LineError):
    pass


class ExtensionInsufficient(LineError):
    pass


class ZeroParameter(LineError, ZeroDivisionError):
    pass


class LineKind(str, enum.Enum):
    TORIC = "toric"
    FLAT3 = "flat3"
    FLAT2 = "flat2"
    BARIC3 = "baric3"
    BARIC2 = "baric2"
    BARIC1 = "baric1"

    @property
    def family(self) -> str:
        return self.value.rstrip("123")


@dataclass
class LineRecord:
    """A line ``<<a, b>>``. Vectors are ambient coordinates over ``field``,
    which is the base field or, for some toric lines, a quadratic extension."""

    kind: LineKind
    dim: int
    gram_ab: Any
    a: tuple
    b: tuple
    basis: list
    field: Ring
    algebra: AlgebraTable = field(repr=False)
    form: FrobeniusForm = field(repr=False)
    base_field: Ring = field(repr=False)
    mu: Any = None
    root: int = 0
    indices: tuple | None = None
    source: AlgebraTable | None = field(default=None, repr=False)
    source_form: FrobeniusForm | None = field(default=None, repr=False)
    span: list = field(default_factory=list, repr=False)
    source_axes: tuple = field(default=(), repr=False)

    @property
    def basis_names(self) -> tuple:
        return {
            LineKind.TORIC: ("e", "u", "f"),
            LineKind.FLAT3: ("a", "b", "v"),
            LineKind.FLAT2: ("a", "b"),
            LineKind.BARIC3: ("a", "v", "v2"),
            LineKind.BARIC2: ("a", "v"),
            LineKind.BARIC1: ("a",),
        }[self.kind]

    def vec(self, name: str) -> tuple:
        return self.basis[self.basis_names.index(name)]

    @property
    def extended(self) -> bool:
        return self.field != self.base_field


def _solve_unit(A: AlgebraTable, span: list):
    """The element ``u`` of the span with ``u x = x`` for every ``x`` in the span, or None."""
    F = A.field
    m = len(span)
    prods = [[A.mul(span[k], span[j]) for k in range(m)] for j in range(m)]
    rows, rhs = [], []
    for j in range(m):
        for i in range(A.dim):
            rows.append(tuple(prods[j][k][i] for k in range(m)))
            rhs.append(span[j][i])
    c = solve(F, rows, tuple(rhs))
    if c is None:
        return None
    return lin_comb(F, c, span, A.dim)


def restricted_ad(A: AlgebraTable, span: list, c: tuple) -> list:
    """Matrix of ``x -> c x`` on the subalgebra with basis ``span``."""
    cols = []
    for s in span:
        co = coordinates(A.field, span, A.mul(c, s))
        if co is None:
            raise LineError("element does not preserve the span")
        cols.append(co)
    return transpose(cols)


def eigenspace_in(A: AlgebraTable, span: list, c: tuple, lam) -> list:
    """Eigenvectors of ``ad(c)`` inside ``span``, as ambient vectors."""
    F = A.field
    M = restricted_ad(A, span, c)
    shifted = [tuple(F.reduce(M[i][j] - lam) if i == j else M[i][j] for j in range(len(span))) for i in range(len(span))]
    return [lin_comb(F, k, span, A.dim) for k in kernel(F, shifted, len(span))]


def is_primitive_in(A: AlgebraTable, span: list, c: tuple) -> bool:
    return len(eigenspace_in(A, span, c, A.field.one)) == 1


def classify_line(
    A: AlgebraTable,
    rec_a: AxisRecord,
    rec_b: AxisRecord,
    form: FrobeniusForm,
    root: int = 0,
    indices: tuple | None = None,
) -> LineRecord:
    """Classify ``<<a, b>>`` by ``(a, b)`` and its dimension and build the canonical basis.

    ``root`` picks which solution of the quadratic for ``e`` is used on a toric line.
    """
    F = A.field
    a, b = rec_a.element, rec_b.element
    if vec_eq(F, a, b):
        raise SameAxis("a line needs two distinct axes")
    span = subalgebra_closure(A, [a, b])
    dim = len(span)
    g = form(a, b)
    common = dict(gram_ab=g, base_field=F, indices=indices, source=A, source_form=form, span=span,
                  source_axes=(a, b))
    if F.is_zero(g):
        if dim == 2:
            return LineRecord(LineKind.FLAT2, 2, a=a, b=b, basis=[a, b], field=F, algebra=A, form=form, **common)
        if dim != 3:
            raise LineError(f"flat line of dimension {dim}")
        v = A.mul(a, b)
        _expect(A, A.mul(v, v), None, "v^2 = 0")
        return LineRecord(LineKind.FLAT3, 3, a=a, b=b, basis=[a, b, v], field=F, algebra=A, form=form, **common)
    if F.eq(g, F.one):
        v = vscale(F, F(2), vsub(F, A.mul(a, b), a))
        w = A.mul(v, v)
        if dim == 1:
            return LineRecord(LineKind.BARIC1, 1, a=a, b=b, basis=[a], field=F, algebra=A, form=form, **common)
        if dim == 2:
            _expect(A, w, None, "v^2 = 0 on a 2-dimensional baric line")
            _expect(A, b, vadd(F, a, v), "b = a + v")
            return LineRecord(LineKind.BARIC2, 2, a=a, b=b, basis=[a, v], field=F, algebra=A, form=form, **common)
        if dim != 3:
            raise LineError(f"baric line of dimension {dim}")
        _expect(A, b, vadd(F, vadd(F, a, v), w), "b = a + v + v^2")
        return LineRecord(LineKind.BARIC3, 3, a=a, b=b, basis=[a, v, w], field=F, algebra=A, form=form, **common)
    if dim != 3:
        raise LineError(f"toric line of dimension {dim}")
    return _toric(A, rec_a, rec_b, form, span, g, root, indices)


def _expect(A, x, y, what):
    F = A.field
    ok = is_zero_vec(F, x) if y is None else vec_eq(F, x, y)
    if not ok:
        raise LineError(f"line structure check failed: {what}")


def toric_minpoly(F: Ring, g):
    """Coefficients ``(m0, m1)`` of ``t^2 + m1 t + m0``, the polynomial whose roots
    are ``mu`` and ``1/mu`` for a toric line with ``(a, b) = g``."""
    return F.one, F.reduce(-(4 * g - 2))


def _toric(A, rec_a, rec_b, form, span, g, root, indices) -> LineRecord:
    F = A.field
    m0, m1 = toric_minpoly(F, g)
    K = F
    if isinstance(F, QuadraticExtension) or F.is_field is False:
        has_root = F.sqrt(F.reduce(m1 * m1 - 4 * m0)) is not None
        if not has_root:
            raise ExtensionInsufficient("mu does not lie in the current field")
    else:
        disc = F.reduce(m1 * m1 - 4 * m0)
        if F.sqrt(disc) is None:
            K = QuadraticExtension(F, m0, m1)
    AK, formK = A.lift(K), form.lift(K)
    a = tuple(K.embed(x) for x in rec_a.element)
    b = tuple(K.embed(x) for x in rec_b.element)
    spanK = [tuple(K.embed(x) for x in s) for s in span]
    u = _solve_unit(AK, spanK)
    if u is None:
        raise LineError("toric line has no unit")
    zs = eigenspace_in(AK, spanK, a, K.half)
    if len(zs) != 1:
        raise LineError("a has no unique 1/2-eigenvector in the line")
    z = zs[0]
    # e = (w + s z)/2 with w = a - u/2; e^2 = 0 is s^2 z^2 + 2 s wz + w^2 = 0
    w = vsub(K, a, vscale(K, K.half, u))
    Z, X, W = AK.mul(z, z), AK.mul(w, z), AK.mul(w, w)
    k = next((i for i in range(AK.dim) if not K.is_zero(Z[i])), None)
    if k is None:
        raise LineError("the 1/2-eigenvector squares to zero")
    disc = K.reduce(X[k] * X[k] - Z[k] * W[k])
    r = K.sqrt(disc)
    if r is None:
        raise ExtensionInsufficient("e^2 = 0 has no solution after one quadratic extension")
    inv = K.inv(Z[k])
    roots = [K.reduce((-X[k] + r) * inv), K.reduce((-X[k] - r) * inv)]
    s = roots[root % 2]
    e = vscale(K, K.half, vadd(K, w, vscale(K, s, z)))
    f = vsub(K, w, e)
    _expect(AK, AK.mul(e, e), None, "e^2 = 0")
    _expect(AK, AK.mul(f, f), None, "f^2 = 0")
    _expect(AK, AK.mul(e, f), vscale(K, K.inv(K(8)), u), "ef = u/8")
    c = coordinates(K, [e, u, f], b)
    if c is None or not K.eq(c[1], K.half) or not K.eq(K.reduce(c[0] * c[2]), K.one):
        raise LineError("b is not of the form mu e + u/2 + f/mu")
    return LineRecord(
        LineKind.TORIC, 3, gram_ab=g, a=a, b=b, basis=[e, u, f], field=K, algebra=AK,
        form=formK, base_field=F, mu=c[0], root=root % 2, indices=indices,
        source=A, source_form=form, span=span, source_axes=(rec_a.element, rec_b.element),
    )


# -- families -----------------------------------------------------------------

@dataclass
class IdempotentFamily:
    """``polys[name]`` is ``lambda -> a_lambda`` as a vector polynomial; for toric
    lines the stored polynomial is ``lambda * a_lambda``."""

    line: LineRecord
    polys: dict

    @property
    def kind(self) -> LineKind:
        return self.line.kind

    @property
    def field(self) -> Ring:
        return self.line.field


def idempotent_family(line: LineRecord) -> IdempotentFamily:
    K, n = line.field, line.algebra.dim
    kind = line.kind
    if kind == LineKind.TORIC:
        e, u, f = line.basis
        poly = VecPoly(K, n, [f, vscale(K, K.half, u), e])
        return IdempotentFamily(line, {"a": poly})
    if kind == LineKind.FLAT3:
        a, b, v = line.basis
        return IdempotentFamily(line, {"a": VecPoly(K, n, [a, v]), "b": VecPoly(K, n, [b, v])})
    if kind == LineKind.BARIC3:
        a, v, w = line.basis
        return IdempotentFamily(line, {"a": VecPoly(K, n, [a, v, w])})
    if kind == LineKind.BARIC2:
        a, v = line.basis
        return IdempotentFamily(line, {"a": VecPoly(K, n, [a, v])})
    raise LineDimZeroOrOne(f"{kind.value} lines carry no idempotent family")


def family_member(fam: IdempotentFamily, lam, which: str = "a") -> tuple:
    """Evaluate the family at ``lam`` and confirm the result is idempotent."""
    K = fam.field
    A = fam.line.algebra
    lam = K.embed(lam) if not K.contains(lam) else lam
    x = fam.polys[which](lam)
    if fam.kind == LineKind.TORIC:
        if K.is_zero(lam):
            raise ZeroParameter("toric family members need lambda != 0")
        x = vscale(K, K.inv(lam), x)
    if not vec_eq(K, A.mul(x, x), x):
        raise LineError("family member is not idempotent")
    return x


def miyamoto_action_closed_form(kind: LineKind, lam, mu, field: Ring, cross: bool = False):
    """Parameter of ``a_lam`` after applying the Miyamoto map of the member at ``mu``.

    ``cross`` selects the flat-line action of ``b_mu`` on the ``a``-family.
    """
    K = field
    if kind == LineKind.TORIC:
        if K.is_zero(lam) or K.is_zero(mu):
            raise ZeroParameter("toric parameters must be nonzero")
        if cross:
            raise ValueError("cross-family action is defined only for flat lines")
        return K.reduce(K.inv(lam) * mu * mu)
    if cross:
        if kind != LineKind.FLAT3:
            raise ValueError("cross-family action is defined only for flat lines")
        return K.reduce(-4 - 2 * mu - lam)
    if kind in (LineKind.FLAT3, LineKind.BARIC3, LineKind.BARIC2):
        return K.reduce(2 * mu - lam)
    raise LineDimZeroOrOne(f"no family on a {kind.value} line")


def phi_c(A: AlgebraTable, form: FrobeniusForm, c: tuple, x: tuple) -> tuple:
    """``x + 4(c, x) c - 4 c x``: the Miyamoto map of ``c`` when ``c`` is an axis."""
    K = A.field
    cx = form(c, x)
    return vsub(K, vadd(K, x, vscale(K, K.reduce(4 * cx), c)), vscale(K, K(4), A.mul(c, x)))


# -- orbits -------------------------------------------------------------------

@dataclass
class OrbitSize:
    size: int | None
    explicit: int | None = None
    unproven: bool = False

    @property
    def infinite(self) -> bool:
        return self.size is None

    def to_json(self):
        return "Infinite" if self.size is None else self.size

    def __str__(self):
        return str(self.to_json())


def orbit_seeds(line: LineRecord) -> list:
    """``a^G`` for flat and baric lines; ``a^G`` together with ``b^G`` for toric ones."""
    return [line.a, line.b] if line.kind == LineKind.TORIC else [line.a]


def explicit_line_orbit(line: LineRecord, cap: int) -> list | None:
    """Closure of the orbit seeds under ``phi_a`` and ``phi_b``; None past ``cap``."""
    A, form = line.algebra, line.form
    gens = [line.a, line.b]
    seen = dict.fromkeys(orbit_seeds(line))
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for c in gens:
                y = phi_c(A, form, c, x)
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
                    if len(seen) > cap:
                        return None
        frontier = nxt
    return list(seen)


def orbit_size(line: LineRecord, bound: int = 1000, explicit_cap: int = 2000) -> OrbitSize:
    """Size of the Miyamoto orbit under ``<tau_a, tau_b>``, by closed form and by
    explicit closure; the two must agree.

    Over a field of degree at most 2 over Q every root of unity has order 1, 2, 3,
    4 or 6, so a toric order beyond ``bound`` is infinite there; in positive
    characteristic ``bound`` is raised to the multiplicative group order.
    """
    K = line.field
    p = K.characteristic
    unproven = False
    if line.kind == LineKind.TORIC:
        if K.order is not None:
            bound = max(bound, K.order - 1)
        size = multiplicative_order(K, line.mu, bound)
        unproven = size is None and p != 0
    elif line.kind == LineKind.FLAT2:
        size = 1
    elif line.kind in (LineKind.FLAT3, LineKind.BARIC3, LineKind.BARIC2):
        size = p if p else None
    else:
        raise LineDimZeroOrOne("a 1-dimensional line has no orbit")
    cap = explicit_cap if size is None else min(explicit_cap, size)
    orbit = explicit_line_orbit(line, cap)
    explicit = None if orbit is None else len(orbit)
    if size is not None and size <= explicit_cap and explicit != size:
        raise LineError(f"closed-form orbit size {size} disagrees with explicit closure {explicit}")
    if size is None and explicit is not None:
        raise LineError(f"closed form predicts an infinite orbit, closure found {explicit}")
    return OrbitSize(size, explicit, unproven)


# -- model lines ----------------------------------------------------------------

def toric_model(F: Ring, mu) -> AlgebraTable:
    """The algebra on ``e, u, f`` with ``e^2 = f^2 = 0``, ``ef = u/8``, unit ``u``,
    axes ``a = e + u/2 + f`` and ``b = mu e + u/2 + f/mu``."""
    mu = F.embed(mu) if not F.contains(mu) else mu
    z, o = F.zero, F.one
    eighth = F.inv(F(8))
    table = [
        [(z, z, z), (o, z, z), (z, eighth, z)],
        [(o, z, z), (z, o, z), (z, z, o)],
        [(z, eighth, z), (z, z, o), (z, z, z)],
    ]
    a = (o, F.half, o)
    b = (mu, F.half, F.inv(mu))
    return AlgebraTable(F, table, labels=["e", "u", "f"], axes=[a, b], eta=F.half)


def flat_model(F: Ring) -> AlgebraTable:
    """``a, b, v`` with ``ab = v``, ``av = bv = v/2`` and ``v^2 = 0``."""
    z, o, h = F.zero, F.one, F.half
    table = [
        [(o, z, z), (z, z, o), (z, z, h)],
        [(z, z, o), (z, o, z), (z, z, h)],
        [(z, z, h), (z, z, h), (z, z, z)],
    ]
    return AlgebraTable(F, table, labels=["a", "b", "v"], axes=[(o, z, z), (z, o, z)], eta=h)


def baric_model(F: Ring) -> AlgebraTable:
    """``a, v, w`` with ``av = v/2``, ``v^2 = w`` and every other product of basis
    vectors except ``a^2 = a`` zero; axes ``a`` and ``a + v + w``."""
    z, o, h = F.zero, F.one, F.half
    table = [
        [(o, z, z), (z, h, z), (z, z, z)],
        [(z, h, z), (z, z, o), (z, z, z)],
        [(z, z, z), (z, z, z), (z, z, z)],
    ]
    return AlgebraTable(F, table, labels=["a", "v", "w"], axes=[(o, z, z), (o, o, o)], eta=h)
