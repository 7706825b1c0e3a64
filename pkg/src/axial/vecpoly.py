"""Polynomials in one variable whose coefficients are coordinate vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import is_zero_vec, lin_comb, vadd, vscale, vsub, zero_vec
from .scalars import FieldMismatch, QuadraticExtension, Ring


def _trim(F, coeffs):
    coeffs = list(coeffs)
    while coeffs and is_zero_vec(F, coeffs[-1]):
        coeffs.pop()
    return tuple(tuple(c) for c in coeffs)


def spoly_trim(F, coeffs):
    coeffs = [F.reduce(c) for c in coeffs]
    while coeffs and F.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def spoly_mul(F, p, q):
    if not p or not q:
        return ()
    out = [F.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return spoly_trim(F, out)


@dataclass(frozen=True)
class VecPoly:
    field: Ring
    dim: int
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.field, self.coeffs))
        if any(len(c) != self.dim for c in self.coeffs):
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def zero(cls, F, dim):
        return cls(F, dim, ())

    @classmethod
    def constant(cls, F, v):
        return cls(F, len(v), (tuple(v),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return zero_vec(self.field, self.dim)

    def __add__(self, other: "VecPoly") -> "VecPoly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return VecPoly(F, self.dim, [vadd(F, self.coeff(k), other.coeff(k)) for k in range(n)])

    def __sub__(self, other: "VecPoly") -> "VecPoly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return VecPoly(F, self.dim, [vsub(F, self.coeff(k), other.coeff(k)) for k in range(n)])

    def scale(self, c) -> "VecPoly":
        F = self.field
        return VecPoly(F, self.dim, [vscale(F, c, v) for v in self.coeffs])

    def shift(self, k: int = 1) -> "VecPoly":
        """Multiply by ``λ^k``."""
        z = zero_vec(self.field, self.dim)
        return VecPoly(self.field, self.dim, (z,) * k + self.coeffs)

    def times_scalar_poly(self, p) -> "VecPoly":
        F = self.field
        if not p or not self.coeffs:
            return VecPoly.zero(F, self.dim)
        out = [zero_vec(F, self.dim)] * (len(p) + len(self.coeffs) - 1)
        for i, a in enumerate(p):
            if F.is_zero(a):
                continue
            for j, v in enumerate(self.coeffs):
                out[i + j] = vadd(F, out[i + j], vscale(F, a, v))
        return VecPoly(F, self.dim, out)

    def __call__(self, lam, field: Ring | None = None):
        return vecpoly_eval(self, lam, field)

    def lift(self, ext: Ring) -> "VecPoly":
        return VecPoly(ext, self.dim, [tuple(ext.embed(a) for a in v) for v in self.coeffs])

    @classmethod
    def interpolate(cls, F: Ring, points: Sequence, values: Sequence) -> "VecPoly":
        """Lagrange interpolation through ``(points[i], values[i])``."""
        dim = len(values[0])
        total = VecPoly.zero(F, dim)
        for i, xi in enumerate(points):
            basis = (F.one,)
            denom = F.one
            for j, xj in enumerate(points):
                if i == j:
                    continue
                basis = spoly_mul(F, basis, (F.reduce(-xj), F.one))
                denom = F.reduce(denom * (xi - xj))
            coef = F.inv(denom)
            total = total + VecPoly.constant(F, values[i]).times_scalar_poly(basis).scale(coef)
        return total


def vecpoly_eval(P: VecPoly, lam, field: Ring | None = None):
    """``sum_k coeffs[k] * lam^k``; ``field`` names an extension holding ``lam``."""
    F = P.field
    target = F if field is None else field
    if not target.contains(lam):
        if field is None and isinstance(lam, int) and not isinstance(lam, bool):
            lam = F(lam)
        else:
            raise FieldMismatch(f"{lam!r} is not in {target}")
    if target != F:
        if not (isinstance(target, QuadraticExtension) and target.base == F):
            raise FieldMismatch(f"{target} does not extend {F}")
        P = P.lift(target)
    if not P.coeffs:
        return zero_vec(target, P.dim)
    powers = [target.one]
    for _ in range(len(P.coeffs) - 1):
        powers.append(target.reduce(powers[-1] * lam))
    return lin_comb(target, powers, list(P.coeffs), P.dim)


def vecpoly_is_zero(P: VecPoly) -> bool:
    return P.is_zero()
