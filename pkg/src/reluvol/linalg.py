"""Small exact linear-algebra routines over the integers and rationals.

Used by the polytope machinery: integer determinants (Bareiss), row
Hermite normal form with a unimodular transform, saturated integer
kernels, and dense Gaussian elimination over Fraction.
"""

from __future__ import annotations

import math
from fractions import Fraction

Vec = tuple[int, ...]


def dot(u, v) -> int | Fraction:
    return sum(a * b for a, b in zip(u, v, strict=True))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c: int, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def primitive(v: Vec) -> Vec:
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    g = math.gcd(*v) if v else 0
    if g <= 1:
        return tuple(v)
    return tuple(a // g for a in v)


def bareiss_det(rows: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf_with_transform(rows: list[Vec]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form: returns (H, U) with U unimodular and U @ M = H.

    H is in row-echelon staircase form with positive pivots and entries
    above each pivot reduced modulo it; zero rows sink to the bottom.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    h = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if h[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # unimodular 2x2 update: det([[x, y], [-q, p]]) = 1
            new_r = [x * h[r][j] + y * h[i][j] for j in range(n)]
            new_i = [-q * h[r][j] + p * h[i][j] for j in range(n)]
            h[r], h[i] = new_r, new_i
            new_ru = [x * u[r][j] + y * u[i][j] for j in range(m)]
            new_iu = [-q * u[r][j] + p * u[i][j] for j in range(m)]
            u[r], u[i] = new_ru, new_iu
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [h[i][j] - q * h[r][j] for j in range(n)]
                u[i] = [u[i][j] - q * u[r][j] for j in range(m)]
        r += 1
    return h, u


def integer_rank(rows) -> int:
    rows = [tuple(r) for r in rows]
    if not rows:
        return 0
    h, _ = hnf_with_transform(rows)
    return sum(1 for row in h if any(row))


def integer_kernel(rows) -> list[Vec]:
    """Basis of the saturated lattice {x in Z^n : r . x = 0 for every row r}.

    The returned basis extends to a basis of Z^n, so the kernel lattice it
    spans equals span_Q(kernel) intersected with Z^n.
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        return []
    n = len(rows[0])
    cols = [tuple(r[j] for r in rows) for j in range(n)]  # transpose, n rows
    h, u = hnf_with_transform(cols)
    return [tuple(u[i]) for i in range(n) if not any(h[i])]


def saturation_basis(rows) -> list[Vec]:
    """Basis of span_Q(rows) intersected with Z^n (the saturation of the row lattice)."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return []
    n = len(rows[0])
    ker = integer_kernel(rows)
    if not ker:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return integer_kernel(ker)


def solve_rational(a_rows, rhs) -> list[Fraction] | None:
    """One exact solution x of A x = b over the rationals, or None if inconsistent.

    Free variables are set to zero.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(a_rows, rhs, strict=True)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c]
        aug[r] = [x / inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in pivots:
        x[c] = aug[i][n]
    return x


def invert_rational(a_rows) -> list[list[Fraction]]:
    """Exact inverse of a square nonsingular matrix, by Gauss-Jordan."""
    n = len(a_rows)
    aug = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(a_rows)
    ]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c]
        aug[c] = [x / inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def adjugate_with_det(rows: list[Vec]) -> tuple[int, list[list[int]]]:
    """(det, adj) for a square integer matrix, with adj @ M = M @ adj = det * I."""
    n = len(rows)
    det = bareiss_det([list(r) for r in rows])
    if n == 1:
        return det, [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = bareiss_det(minor)
            if (i + j) % 2:
                cof = -cof
            adj[j][i] = cof
    return det, adj
