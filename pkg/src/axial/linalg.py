"""Dense exact linear algebra over a ``Ring``.

Vectors are tuples, matrices are lists of row tuples. Elimination always
pivots on the first nonzero entry of a column, so every basis returned here
is a deterministic function of the input.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import Ring

Vector = tuple
Matrix = list


class SingularMatrix(ArithmeticError):
    pass


def zero_vec(F: Ring, n: int) -> Vector:
    return (F.zero,) * n


def unit_vec(F: Ring, n: int, i: int) -> Vector:
    v = [F.zero] * n
    v[i] = F.one
    return tuple(v)


def vadd(F, x, y):
    return tuple(F.reduce(a + b) for a, b in zip(x, y))


def vsub(F, x, y):
    return tuple(F.reduce(a - b) for a, b in zip(x, y))


def vneg(F, x):
    return tuple(F.reduce(-a) for a in x)


def vscale(F, c, x):
    return tuple(F.reduce(c * a) for a in x)


def lin_comb(F, coeffs, vecs, n: int | None = None) -> Vector:
    if n is None:
        n = len(vecs[0])
    acc = [F.zero] * n
    for c, v in zip(coeffs, vecs):
        if F.is_zero(c):
            continue
        for k, vk in enumerate(v):
            acc[k] = acc[k] + c * vk
    return tuple(F.reduce(a) for a in acc)


def is_zero_vec(F, x) -> bool:
    return all(F.is_zero(a) for a in x)


def vec_eq(F, x, y) -> bool:
    return all(F.eq(a, b) for a, b in zip(x, y))


def dot(F, x, y):
    acc = F.zero
    for a, b in zip(x, y):
        acc = acc + a * b
    return F.reduce(acc)


def identity(F: Ring, n: int) -> Matrix:
    return [unit_vec(F, n, i) for i in range(n)]


def transpose(M: Matrix) -> Matrix:
    return [tuple(col) for col in zip(*M)]


def matvec(F, M: Matrix, x: Vector) -> Vector:
    return tuple(dot(F, row, x) for row in M)


def matmul(F, A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [tuple(dot(F, row, col) for col in Bt) for row in A]


def mat_add(F, A, B, c=1):
    return [tuple(F.reduce(a + c * b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B)]


def mat_sub(F, A, B):
    return [tuple(F.reduce(a - b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B)]


def mat_scale(F, c, A):
    return [tuple(F.reduce(c * a) for a in row) for row in A]


def mat_is_zero(F, A) -> bool:
    return all(is_zero_vec(F, row) for row in A)


def rref(F: Ring, rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = [list(r) for r in rows]
    if not R:
        return R, []
    ncols = len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if not F.is_zero(R[i][c])), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = F.inv(F.reduce(R[r][c]))
        R[r] = [F.reduce(inv * a) for a in R[r]]
        for i in range(len(R)):
            if i != r and not F.is_zero(R[i][c]):
                f = R[i][c]
                R[i] = [F.reduce(a - f * b) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r] + [list(x) for x in R[r:]], pivots


def rank(F, rows) -> int:
    return len(rref(F, rows)[1])


def row_basis(F, vectors) -> list[Vector]:
    """Echelon basis of the span of ``vectors``."""
    vectors = list(vectors)
    if not vectors:
        return []
    R, piv = rref(F, vectors)
    return [tuple(R[i]) for i in range(len(piv))]


def kernel(F, M: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : M x = 0}``; one vector per free column, that entry set to 1."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [unit_vec(F, ncols, i) for i in range(ncols)]
    R, piv = rref(F, M)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        x = [F.zero] * ncols
        x[fc] = F.one
        for i, pc in enumerate(piv):
            x[pc] = F.reduce(-R[i][fc])
        basis.append(tuple(x))
    return basis


def solve(F, M: Matrix, b: Vector) -> Vector | None:
    """One solution of ``M x = b`` (free variables zero), or None."""
    ncols = len(M[0])
    aug = [tuple(row) + (bi,) for row, bi in zip(M, b)]
    R, piv = rref(F, aug)
    if ncols in piv:
        return None
    x = [F.zero] * ncols
    for i, pc in enumerate(piv):
        x[pc] = R[i][ncols]
    return tuple(x)


def inverse(F, M: Matrix) -> Matrix:
    n = len(M)
    aug = [tuple(row) + unit_vec(F, n, i) for i, row in enumerate(M)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [tuple(R[i][n:]) for i in range(n)]


def coordinates(F, basis: Sequence[Vector], v: Vector) -> Vector | None:
    """Coefficients expressing ``v`` in ``basis`` (assumed independent), or None."""
    if not basis:
        return () if is_zero_vec(F, v) else None
    M = transpose(list(basis))
    x = solve(F, M, v)
    return x


def in_span(F, basis, v) -> bool:
    return coordinates(F, basis, v) is not None
