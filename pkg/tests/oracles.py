"""Independent reference computations built on sympy and fractions only.

Nothing here imports the package under test, so agreement with it is evidence
rather than tautology.
"""

from fractions import Fraction
from itertools import product

import sympy
from sympy.combinatorics import Permutation


def transposition_class(n):
    """All transpositions of S_n, sorted by image array."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            p = list(range(n))
            p[i], p[j] = p[j], p[i]
            out.append(tuple(p))
    return sorted(out)


def conjugacy_closure(gens, seed):
    """Brute-force conjugacy class of ``seed`` in the group generated by ``gens``."""
    G = sympy.combinatorics.PermutationGroup([Permutation(list(g)) for g in gens])
    s = Permutation(list(seed))
    return sorted({tuple((~g * s * g).array_form) for g in G.generate()})


def matsuo_dense(D, eta=Fraction(1, 2)):
    """Dense Matsuo table over Q with sympy doing the permutation arithmetic."""
    perms = [Permutation(list(d)) for d in D]
    index = {tuple(p.array_form): i for i, p in enumerate(perms)}
    n = len(D)
    T = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            if i == j:
                T[i][j][i] = Fraction(1)
            elif (a * b).order() == 3:
                k = index[tuple((~b * a * b).array_form)]
                T[i][j][i] += eta / 2
                T[i][j][j] += eta / 2
                T[i][j][k] -= eta / 2
    return T


def ad_sympy(T, x):
    n = len(T)
    return sympy.Matrix(n, n, lambda i, j: sum(sympy.Rational(x[k]) * sympy.Rational(T[k][j][i]) for k in range(n)))


def projection_coefficient(T, a_index, x):
    """Coefficient of e_a in the 1-eigencomponent of x for the axis e_a, via sympy eigenvectors."""
    n = len(T)
    a = [1 if k == a_index else 0 for k in range(n)]
    M = ad_sympy(T, a)
    basis, labels = [], []
    for val, _, vecs in M.eigenvects():
        for v in vecs:
            basis.append(v)
            labels.append(val)
    B = sympy.Matrix.hstack(*basis)
    c = B.solve(sympy.Matrix(x))
    comp = sympy.zeros(n, 1)
    for k, lab in enumerate(labels):
        if lab == 1:
            comp += c[k] * basis[k]
    return comp[a_index]


def eigenvalues(T, x):
    return ad_sympy(T, x).eigenvals()


def mul_dense(T, x, y, p=None):
    n = len(T)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            if x[i] and y[j]:
                for k in range(n):
                    out[k] += x[i] * y[j] * T[i][j][k]
    if p is not None:
        out = [int(v) % p for v in out]
    return out


def brute_idempotents_mod_p(T, p):
    """All nonzero idempotents of an integer table over F_p."""
    n = len(T)
    return [x for x in product(range(p), repeat=n) if any(x) and mul_dense(T, x, x, p) == list(x)]
