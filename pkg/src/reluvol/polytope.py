"""Lattice polytopes in V-representation with exact polyhedral machinery.

A polytope is stored canonically as the lexicographically sorted tuple of
its vertices, so structural equality coincides with geometric equality.
Vertex reduction is decided by an exact rational feasibility LP, facets by
a double-description sweep over the inequality cone, and lattice charts by
Hermite-normal-form saturation.  No floats enter any computation; the
lattice-point counter uses int64 numpy under an overflow guard purely as a
fast exact integer sweep.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import (
    adjugate_with_det,
    dot,
    integer_kernel,
    integer_rank,
    invert_rational,
    primitive,
    saturation_basis,
    vec_sub,
)

Vec = tuple[int, ...]

MAX_DIM_ENV = "RELUVOL_MAX_DIM"
DEFAULT_MAX_DIM = 8

# int64 stays exact below this bound; the counting sweep checks it
_INT64_SAFE = 2**62


def max_ambient_dim() -> int:
    """Ambient dimension guard; override with the RELUVOL_MAX_DIM env var."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    value = int(raw)
    if value < 1:
        raise ValueError(f"{MAX_DIM_ENV} must be >= 1, got {raw}")
    return value


@dataclass(frozen=True)
class LatticePolytope:
    """Lattice polytope as its canonical (lex-sorted) vertex tuple.

    Construct through hull(); the constructor trusts that the given points
    are in convex position.
    """

    n: int
    vertices: tuple[Vec, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {self.n}")
        limit = max_ambient_dim()
        if self.n > limit:
            raise ValueError(
                f"ambient dimension {self.n} exceeds the guard {limit} "
                f"(set {MAX_DIM_ENV} to raise it)"
            )
        if not self.vertices:
            raise ValueError("a polytope needs at least one vertex")
        for v in self.vertices:
            if len(v) != self.n:
                raise ValueError(f"vertex {v} does not have {self.n} coordinates")
        if any(self.vertices[i] >= self.vertices[i + 1] for i in range(len(self.vertices) - 1)):
            raise ValueError("vertices must be strictly lex-sorted")

    # -- basic queries -------------------------------------------------

    def dim(self) -> int:
        return _dim(self)

    def support(self, u) -> Fraction:
        """Support value max{u . y : y in P}."""
        u = _as_direction(u, self.n)
        return max(Fraction(dot(u, v)) for v in self.vertices)

    def face(self, u) -> "LatticePolytope":
        """The face of P in direction u (vertices attaining the support)."""
        u = _as_direction(u, self.n)
        best = max(dot(u, v) for v in self.vertices)
        verts = tuple(v for v in self.vertices if dot(u, v) == best)
        return LatticePolytope(self.n, verts)

    def faces_of_dim(self, k: int) -> list["LatticePolytope"]:
        """All k-dimensional faces; empty when k exceeds dim(P)."""
        if k < 0:
            raise ValueError(f"face dimension must be >= 0, got {k}")
        return list(_faces_of_dim(self, k))

    def facets(self) -> list["LatticePolytope"]:
        return list(_facet_data(self).facets)

    def chart(self) -> "LatticeChart":
        return lattice_chart(self)

    def lattice_points_count(self) -> int:
        return lattice_points_count(self)

    def contains_point(self, x) -> bool:
        return contains_point(self, x)

    def __add__(self, other: "LatticePolytope") -> "LatticePolytope":
        return minkowski_sum(self, other)

    def to_json_dict(self) -> dict:
        return polytope_to_json_dict(self)


def _as_direction(u, n: int) -> tuple:
    u = tuple(u)
    if len(u) != n:
        raise ValueError(f"direction has {len(u)} coordinates, expected {n}")
    return u


# -- hull ----------------------------------------------------------------


def hull(points) -> LatticePolytope:
    """Convex hull of lattice points, reduced to its canonical vertex set."""
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if not pts:
        raise ValueError("hull of an empty point set")
    n = len(pts[0])
    for p in pts:
        if len(p) != n:
            raise ValueError("points have mixed dimensions")
    if len(pts) == 1:
        return LatticePolytope(n, (pts[0],))

    active = set(pts)
    _midpoint_filter(active)
    certified = _certify_extreme(active, n)
    for q in sorted(active):
        if q in certified:
            continue
        others = [p for p in active if p != q]
        if _feasible_combination(q, others):
            active.remove(q)
    return LatticePolytope(n, tuple(sorted(active)))


def _midpoint_filter(active: set) -> None:
    """Drop points that are midpoints of two other points (sound: non-vertices)."""
    for _ in range(2):
        removed = []
        for q in list(active):
            for a in active:
                if a == q:
                    continue
                b = tuple(2 * qc - ac for qc, ac in zip(q, a))
                if b != q and b in active:
                    removed.append(q)
                    active.remove(q)
                    break
        if not removed:
            return


def _certify_extreme(active: set, n: int) -> set:
    """Points that uniquely maximize some direction are certainly vertices."""
    pts = sorted(active)
    total = [sum(col) for col in zip(*pts)]
    m = len(pts)
    dirs = set()
    for i in range(n):
        e = [0] * n
        e[i] = 1
        dirs.add(tuple(e))
        e[i] = -1
        dirs.add(tuple(e))
    for p in pts:
        w = tuple(m * pc - tc for pc, tc in zip(p, total))
        if any(w):
            dirs.add(w)
    certified = set()
    for u in dirs:
        best = None
        winner = None
        unique = False
        for p in pts:
            val = dot(u, p)
            if best is None or val > best:
                best, winner, unique = val, p, True
            elif val == best:
                unique = False
        if unique:
            certified.add(winner)
    return certified


def _feasible_combination(target: Vec, points: list[Vec]) -> bool:
    """Exact phase-1 simplex: is target a convex combination of points?

    Integer (Edmonds) pivoting: the tableau stays integral, equal to the
    basis determinant times the true tableau, so every division is exact.
    Bland's rule on the lambda columns guarantees termination; artificial
    columns never re-enter, which preserves the feasibility answer.
    """
    if not points:
        return False
    n = len(target)
    m = len(points)
    k = n + 1
    rhs_col = m
    # equality rows: sum_i lam_i * p_i = target, sum_i lam_i = 1, with rhs >= 0
    tab: list[list[int]] = []
    for j in range(n):
        coeffs = [p[j] for p in points]
        b = target[j]
        if b < 0:
            coeffs = [-c for c in coeffs]
            b = -b
        tab.append(coeffs + [b])
    tab.append([1] * m + [1])
    # phase-1 objective row: minimize the artificial sum (value kept negated)
    obj = [0] * (m + 1)
    for row in tab:
        for j in range(m + 1):
            obj[j] -= row[j]
    basis = [m + i for i in range(k)]  # artificial i sits in row i
    denom = 1

    while True:
        enter = -1
        for j in range(m):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return obj[rhs_col] == 0
        leave = -1
        for i in range(k):
            a = tab[i][enter]
            if a <= 0:
                continue
            if leave < 0:
                leave = i
                continue
            lhs = tab[i][rhs_col] * tab[leave][enter]
            rhs = tab[leave][rhs_col] * a
            if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                leave = i
        if leave < 0:
            return False  # unbounded phase-1 cannot happen; defensive
        piv_row = tab[leave]
        piv = piv_row[enter]
        for i in range(k):
            if i == leave:
                continue
            row = tab[i]
            f = row[enter]
            if f:
                tab[i] = [(piv * x - f * y) // denom for x, y in zip(row, piv_row)]
            else:
                tab[i] = [(piv * x) // denom for x in row]
        f = obj[enter]
        if f:
            obj = [(piv * x - f * y) // denom for x, y in zip(obj, piv_row)]
        else:
            obj = [(piv * x) // denom for x in obj]
        basis[leave] = enter
        denom = piv


# -- constructors and binary operations -----------------------------------


def standard_simplex(n: int) -> LatticePolytope:
    """conv{0, e_1, ..., e_n} in Z^n; its normalized n-volume is 1."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    pts = [tuple(0 for _ in range(n))]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        pts.append(tuple(e))
    return LatticePolytope(n, tuple(sorted(pts)))


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.n != q.n:
        raise ValueError(f"ambient dimensions differ: {p.n} vs {q.n}")
    if p == q:
        return dilate(p, 2)
    if q.vertices < p.vertices:
        p, q = q, p
    return _minkowski_sum(p, q)


@lru_cache(maxsize=None)
def _minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    return hull([tuple(x + y for x, y in zip(a, b)) for a in p.vertices for b in q.vertices])


def dilate(p: LatticePolytope, c: int) -> LatticePolytope:
    """The dilate c*P for an integer c >= 0; c = 0 collapses to the origin."""
    if c < 0:
        raise ValueError(f"dilation factor must be >= 0, got {c}")
    if c == 0:
        return LatticePolytope(p.n, (tuple(0 for _ in range(p.n)),))
    if c == 1:
        return p
    return LatticePolytope(p.n, tuple(tuple(c * x for x in v) for v in p.vertices))


def conv_union(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.n != q.n:
        raise ValueError(f"ambient dimensions differ: {p.n} vs {q.n}")
    return hull(p.vertices + q.vertices)


def equal(p: LatticePolytope, q: LatticePolytope) -> bool:
    if p.n != q.n:
        raise ValueError(f"ambient dimensions differ: {p.n} vs {q.n}")
    return p.vertices == q.vertices


@lru_cache(maxsize=None)
def _dim(p: LatticePolytope) -> int:
    v0 = p.vertices[0]
    edges = [vec_sub(v, v0) for v in p.vertices[1:]]
    if not edges:
        return 0
    return integer_rank(edges)


# -- lattice charts --------------------------------------------------------


class LatticeChart:
    """Affine bijection T(z) = base + z @ dirs from Z^d onto aff(P) ∩ Z^n."""

    def __init__(self, n: int, base: Vec, dirs: tuple[Vec, ...]):
        self.n = n
        self.d = len(dirs)
        self.base = base
        self.dirs = dirs
        self._identity = self.d == n and base == tuple(0 for _ in range(n)) and all(
            dirs[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)
        )
        if self.d and not self._identity:
            # pullback matrix: z = (x - base) @ M, with M = D^T (D D^T)^{-1}
            gram = [[dot(a, b) for b in dirs] for a in dirs]
            ginv = invert_rational(gram)
            self._pullback_cols = [
                [sum(Fraction(dirs[k][i]) * ginv[k][j] for k in range(self.d)) for j in range(self.d)]
                for i in range(n)
            ]
        else:
            self._pullback_cols = None

    def to_ambient(self, z) -> Vec:
        z = tuple(z)
        if len(z) != self.d:
            raise ValueError(f"chart point has {len(z)} coordinates, expected {self.d}")
        if self._identity:
            return z
        out = list(self.base)
        for zj, direction in zip(z, self.dirs):
            for i in range(self.n):
                out[i] += zj * direction[i]
        return tuple(out)

    def to_chart(self, x) -> Vec:
        x = tuple(x)
        if len(x) != self.n:
            raise ValueError(f"ambient point has {len(x)} coordinates, expected {self.n}")
        if self._identity:
            return x
        y = vec_sub(x, self.base)
        if self.d == 0:
            if any(y):
                raise ValueError(f"{x} is not on the chart's affine hull")
            return ()
        z = []
        for j in range(self.d):
            val = sum(y[i] * self._pullback_cols[i][j] for i in range(self.n) if y[i])
            if val.denominator != 1:
                raise ValueError(f"{x} is not a lattice point of the chart")
            z.append(int(val))
        # verify: guards both consistency (x on the hull) and exactness
        if self.to_ambient(z) != x:
            raise ValueError(f"{x} is not on the chart's affine hull")
        return tuple(z)

    def pullback_vertices(self, p: LatticePolytope) -> tuple[Vec, ...]:
        return tuple(self.to_chart(v) for v in p.vertices)


@lru_cache(maxsize=None)
def lattice_chart(p: LatticePolytope) -> LatticeChart:
    """Chart for aff(P): identity when P is full-dimensional, else an
    HNF-saturated direction basis anchored at the lex-least vertex."""
    v0 = p.vertices[0]
    edges = [vec_sub(v, v0) for v in p.vertices[1:]]
    dirs = tuple(tuple(row) for row in saturation_basis(edges)) if edges else ()
    if len(dirs) == p.n:
        ident = tuple(tuple(1 if i == j else 0 for j in range(p.n)) for i in range(p.n))
        return LatticeChart(p.n, tuple(0 for _ in range(p.n)), ident)
    return LatticeChart(p.n, v0, dirs)


# -- facets by double description ------------------------------------------


def _independent_rows(rows: list[Vec], need: int) -> list[int]:
    basis: list[list[Fraction]] = []
    chosen: list[int] = []
    for i, row in enumerate(rows):
        if len(chosen) == need:
            break
        vec = [Fraction(x) for x in row]
        for b in basis:
            lead = next((j for j, x in enumerate(b) if x != 0), None)
            if lead is not None and vec[lead] != 0:
                f = vec[lead] / b[lead]
                vec = [x - f * y for x, y in zip(vec, b)]
        if any(vec):
            basis.append(vec)
            chosen.append(i)
    if len(chosen) < need:
        raise ValueError("inequality cone is not pointed (degenerate input)")
    return chosen


def _extreme_rays(rows: list[Vec]) -> list[Vec]:
    """Extreme rays of the pointed cone {y : row . y >= 0 for every row}.

    Double description with the combinatorial adjacency test; rows must
    have full column rank.
    """
    dim = len(rows[0])
    init = _independent_rows(rows, dim)
    b = [rows[i] for i in init]
    det, adj = adjugate_with_det(b)
    sign = 1 if det > 0 else -1
    rays: list[Vec] = []
    masks: list[int] = []
    init_bits = [1 << i for i in init]
    for j in range(dim):
        ray = primitive(tuple(sign * adj[i][j] for i in range(dim)))
        mask = 0
        for pos, i in enumerate(init):
            if pos != j:
                mask |= init_bits[pos]
        rays.append(ray)
        masks.append(mask)
    processed = set(init)

    for i, a in enumerate(rows):
        if i in processed:
            continue
        vals = [dot(a, r) for r in rays]
        if all(v >= 0 for v in vals):
            for t, v in enumerate(vals):
                if v == 0:
                    masks[t] |= 1 << i
            processed.add(i)
            continue
        pos = [t for t, v in enumerate(vals) if v > 0]
        neg = [t for t, v in enumerate(vals) if v < 0]
        zer = [t for t, v in enumerate(vals) if v == 0]
        new_rays: dict[Vec, int] = {}
        for tp in pos:
            for tn in neg:
                common = masks[tp] & masks[tn]
                if common.bit_count() < dim - 2:
                    continue
                blocked = False
                for t3 in range(len(rays)):
                    if t3 == tp or t3 == tn:
                        continue
                    if common & masks[t3] == common:
                        blocked = True
                        break
                if blocked:
                    continue
                vp, vn = vals[tp], vals[tn]
                combo = tuple(vp * rn - vn * rp for rp, rn in zip(rays[tp], rays[tn]))
                new_rays[primitive(combo)] = 0
        processed.add(i)
        kept_rays = [rays[t] for t in pos + zer]
        kept_masks = [masks[t] | ((1 << i) if t in zer else 0) for t in pos + zer]
        for ray in new_rays:
            mask = 0
            for h in processed:
                if dot(rows[h], ray) == 0:
                    mask |= 1 << h
            kept_rays.append(ray)
            kept_masks.append(mask)
        rays, masks = kept_rays, kept_masks
    return rays


@dataclass(frozen=True)
class _FacetData:
    chart: LatticeChart
    pullback: tuple[Vec, ...]
    inequalities: tuple[tuple[Vec, int], ...]
    facets: tuple[LatticePolytope, ...]


@lru_cache(maxsize=None)
def _facet_data(p: LatticePolytope) -> _FacetData:
    chart = lattice_chart(p)
    pullback = chart.pullback_vertices(p)
    d = chart.d
    if d == 0:
        return _FacetData(chart, pullback, (), ())
    cone_rows = [tuple(-c for c in z) + (1,) for z in pullback]
    ineqs = []
    for ray in _extreme_rays(cone_rows):
        normal, offset = ray[:d], ray[d]
        if not any(normal):
            continue  # the trivial 0 <= 1 ray
        ineqs.append((normal, offset))
    ineqs.sort()
    facets = []
    for normal, offset in ineqs:
        verts = tuple(v for v, z in zip(p.vertices, pullback) if dot(normal, z) == offset)
        facets.append(LatticePolytope(p.n, verts))
    return _FacetData(chart, pullback, tuple(ineqs), tuple(facets))


@lru_cache(maxsize=None)
def _faces_of_dim(p: LatticePolytope, k: int) -> tuple[LatticePolytope, ...]:
    dp = _dim(p)
    if k > dp:
        return ()
    if k == dp:
        return (p,)
    seen: dict[tuple, LatticePolytope] = {}
    for facet in _facet_data(p).facets:
        for face in _faces_of_dim(facet, k):
            seen[face.vertices] = face
    return tuple(seen[key] for key in sorted(seen))


def faces_of_dim(p: LatticePolytope, k: int) -> list[LatticePolytope]:
    return p.faces_of_dim(k)


# -- ambient constraints and membership ------------------------------------


@lru_cache(maxsize=None)
def ambient_constraints(p: LatticePolytope):
    """(equations, inequalities) describing P in ambient coordinates.

    Equations are (c, r) with c . x = r for every x in P; inequalities are
    (a, b) with a . x <= b, tight on the corresponding facet.  All vectors
    are primitive integers, deterministically ordered.
    """
    v0 = p.vertices[0]
    edges = [vec_sub(v, v0) for v in p.vertices[1:]]
    if edges:
        normals = integer_kernel(edges)
    else:
        normals = [tuple(1 if i == j else 0 for j in range(p.n)) for i in range(p.n)]
    equations = sorted((tuple(c), dot(c, v0)) for c in normals)

    fd = _facet_data(p)
    chart = fd.chart
    inequalities = []
    for normal, offset in fd.inequalities:
        if chart._identity:
            amb = [Fraction(x) for x in normal]
        else:
            amb = [
                sum(Fraction(normal[j]) * chart._pullback_cols[i][j] for j in range(chart.d))
                for i in range(p.n)
            ]
        rhs = Fraction(offset) + sum(a * c for a, c in zip(amb, chart.base))
        denom = 1
        for x in amb + [rhs]:
            denom = math.lcm(denom, x.denominator)
        ivec = tuple(int(x * denom) for x in amb)
        irhs = int(rhs * denom)
        g = math.gcd(*(abs(c) for c in ivec), abs(irhs))
        if g > 1:
            ivec = tuple(c // g for c in ivec)
            irhs //= g
        inequalities.append((ivec, irhs))
    inequalities.sort()
    return tuple(equations), tuple(inequalities)


def contains_point(p: LatticePolytope, x) -> bool:
    """Exact membership test via the ambient equations and facet inequalities."""
    x = tuple(x)
    if len(x) != p.n:
        raise ValueError(f"point has {len(x)} coordinates, expected {p.n}")
    equations, inequalities = ambient_constraints(p)
    for c, r in equations:
        if dot(c, x) != r:
            return False
    for a, b in inequalities:
        if dot(a, x) > b:
            return False
    return True


def _separating_direction(outside: Vec, p: LatticePolytope) -> Vec:
    """An integer u with u . outside > support(P, u); outside must not be in P."""
    equations, inequalities = ambient_constraints(p)
    for c, r in equations:
        val = dot(c, outside)
        if val > r:
            return c
        if val < r:
            return tuple(-x for x in c)
    for a, b in inequalities:
        if dot(a, outside) > b:
            return a
    raise ValueError("point is inside the polytope; no separating direction")


def support_witness(p: LatticePolytope, q: LatticePolytope):
    """None when P = Q, else (u, support(P, u), support(Q, u)) with the two
    supports different.  Deterministic: the witness comes from the first
    escaping vertex in lex order and the first violated constraint."""
    if p.n != q.n:
        raise ValueError(f"ambient dimensions differ: {p.n} vs {q.n}")
    if p == q:
        return None
    for v in sorted(set(p.vertices) | set(q.vertices)):
        if v in p.vertices and not contains_point(q, v):
            u = _separating_direction(v, q)
            break
        if v in q.vertices and not contains_point(p, v):
            u = _separating_direction(v, p)
            break
    else:
        # each polytope's vertices lie in the other, so the hulls coincide
        raise AssertionError("distinct canonical polytopes with identical hulls")
    return u, p.support(u), q.support(u)


# -- lattice point counting -------------------------------------------------


def lattice_points_count(p: LatticePolytope) -> int:
    """Number of lattice points in P, by an exact bounding-box sweep in chart
    coordinates."""
    fd = _facet_data(p)
    if fd.chart.d == 0:
        return 1
    return _count_in_chart(fd.pullback, fd.inequalities)


def _count_in_chart(points: tuple[Vec, ...], ineqs) -> int:
    d = len(points[0])
    lo = [min(z[i] for z in points) for i in range(d)]
    hi = [max(z[i] for z in points) for i in range(d)]
    max_coord = max(1, *(max(abs(l), abs(h)) for l, h in zip(lo, hi)))
    max_coeff = max(1, *(max(max(abs(c) for c in a), abs(b)) for a, b in ineqs))
    if (max_coord * max_coeff * d + max_coeff) < _INT64_SAFE:
        try:
            return _count_numpy(lo, hi, ineqs)
        except ImportError:
            pass
    total = 0
    for z in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if all(dot(a, z) <= b for a, b in ineqs):
            total += 1
    return total


def _count_numpy(lo, hi, ineqs) -> int:
    import numpy as np

    d = len(lo)
    a_mat = np.array([a for a, _ in ineqs], dtype=np.int64)
    b_vec = np.array([b for _, b in ineqs], dtype=np.int64)
    if d == 1:
        zs = np.arange(lo[0], hi[0] + 1, dtype=np.int64)
        ok = np.all(zs[:, None] * a_mat[:, 0][None, :] <= b_vec[None, :], axis=1)
        return int(np.count_nonzero(ok))
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(1, d)]
    rest = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d - 1)
    partial = rest @ a_mat[:, 1:].T  # K x F, exact under the int64 guard
    total = 0
    for x0 in range(lo[0], hi[0] + 1):
        vals = partial + x0 * a_mat[:, 0][None, :]
        total += int(np.count_nonzero(np.all(vals <= b_vec[None, :], axis=1)))
    return total


# -- JSON -------------------------------------------------------------------

_JSON_INT_LIMIT = 2**53


def _coord_to_json(v: int):
    return v if abs(v) < _JSON_INT_LIMIT else str(v)


def polytope_to_json_dict(p: LatticePolytope) -> dict:
    return {
        "n": p.n,
        "vertices": [[_coord_to_json(c) for c in v] for v in p.vertices],
    }


def polytope_from_json_dict(obj: dict) -> LatticePolytope:
    if "vertices" in obj:
        raw = obj["vertices"]
    elif "points" in obj:
        raw = obj["points"]
    else:
        raise ValueError('polytope JSON needs a "vertices" (or "points") array')
    pts = [[int(c) for c in v] for v in raw]
    if "n" in obj:
        n = int(obj["n"])
        for v in pts:
            if len(v) != n:
                raise ValueError(f"vertex {v} does not match n = {n}")
    return hull(pts)
