"""Normalized and mixed volumes of lattice polytopes, plus divisibility checks.

Normalized d-volume is d! times Lebesgue measure on the polytope's lattice
chart, so the standard simplex has volume 1 and every lattice polytope an
integer volume.  Volumes come from an exact coning triangulation; a second,
independent route interpolates the lattice-point counting function of
dilates.  Mixed volumes use the inclusion-exclusion polarization of the
volume form, validated on the standard simplex the first time each
dimension is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .certificates import (
    VERDICT_FAILS,
    VERDICT_HOLDS,
    VERDICT_INAPPLICABLE,
    Certificate,
    jsonable,
)
from .exact_arith import is_prime
from .linalg import bareiss_det, dot, vec_sub
from .polytope import (
    LatticePolytope,
    Vec,
    _facet_data,
    dilate,
    lattice_chart,
    minkowski_sum,
    standard_simplex,
)

__all__ = [
    "normalized_volume",
    "normalized_volume_counting_oracle",
    "mixed_volume",
    "BinomialExpansion",
    "binomial_expansion_check",
    "modular_additivity_check",
    "join_divisibility_check",
    "face_volume_propagation_check",
]


# -- triangulation route -----------------------------------------------------


@lru_cache(maxsize=None)
def _triangulate(p: LatticePolytope) -> tuple[tuple[Vec, ...], ...]:
    """Coning triangulation: list of dim(P)-simplices given by their vertices.

    Cones each face from its lex-least vertex over the face's facets that
    do not contain it.  A single facet enumeration of P drives the whole
    recursion: the facets of a face G are the maximal proper intersections
    of G with the facets of P, so the descent is purely combinatorial.
    """
    d = p.dim()
    verts = p.vertices
    if len(verts) == d + 1:
        return (verts,)
    fd = _facet_data(p)
    zs = fd.pullback
    facet_sets = [
        frozenset(i for i, z in enumerate(zs) if dot(normal, z) == offset)
        for normal, offset in fd.inequalities
    ]
    cache: dict[frozenset, tuple[tuple[int, ...], ...]] = {}

    def tri(face: frozenset, g: int) -> tuple[tuple[int, ...], ...]:
        got = cache.get(face)
        if got is not None:
            return got
        if len(face) == g + 1:
            out: tuple[tuple[int, ...], ...] = (tuple(sorted(face)),)
        else:
            apex = min(face, key=lambda i: verts[i])
            subs = {face & fs for fs in facet_sets if not face <= fs}
            simplices = []
            for sub in subs:
                if apex in sub or any(sub < other for other in subs):
                    continue
                for s in tri(sub, g - 1):
                    simplices.append(s + (apex,))
            out = tuple(simplices)
        cache[face] = out
        return out

    top = frozenset(range(len(verts)))
    return tuple(tuple(verts[i] for i in s) for s in tri(top, d))


@lru_cache(maxsize=None)
def _volume_full(p: LatticePolytope) -> int:
    """Normalized dim(P)-volume via the chart pullback and triangulation."""
    d = p.dim()
    if d == 0:
        return 1
    chart = lattice_chart(p)
    zmap = {v: chart.to_chart(v) for v in p.vertices}
    total = 0
    for simplex in _triangulate(p):
        z0 = zmap[simplex[0]]
        rows = [list(vec_sub(zmap[v], z0)) for v in simplex[1:]]
        total += abs(bareiss_det(rows))
    return total


def normalized_volume(p: LatticePolytope, d: int | None = None) -> int:
    """Normalized d-volume: d! times Lebesgue measure on the lattice chart.

    Conventions: 0 whenever dim(P) != d (mass lives in dimension dim(P)
    only), and 1 for a point with d = 0.
    """
    if d is None:
        d = p.dim()
    if d < 0:
        raise ValueError(f"d must be >= 0, got {d}")
    if d > p.n:
        raise ValueError(f"d = {d} exceeds the ambient dimension {p.n}")
    if p.dim() != d:
        return 0
    return _volume_full(p)


# -- counting (Ehrhart) route ------------------------------------------------


def normalized_volume_counting_oracle(
    p: LatticePolytope, d: int | None = None, t_max: int | None = None
) -> int:
    """Independent volume oracle: interpolate t -> #lattice points of t*P.

    The counts of the dilates 0*P .. t_max*P determine a polynomial of
    degree dim(P); the normalized volume is its d-th forward difference at
    zero.  Requires dim(P) = d and t_max >= d + 1 so the degree can be
    verified, not assumed.
    """
    if d is None:
        d = p.dim()
    if p.dim() != d:
        raise ValueError(f"counting oracle needs dim(P) = d, got dim {p.dim()} vs d = {d}")
    if t_max is None:
        t_max = d + 2
    if t_max < d + 1:
        raise ValueError(f"t_max must be >= d + 1 = {d + 1}, got {t_max}")
    if d == 0:
        return 1

    fd = _facet_data(p)
    counts = [1]  # the dilate 0*P is the origin
    from .polytope import _count_in_chart

    for t in range(1, t_max + 1):
        scaled_pts = tuple(tuple(t * c for c in z) for z in fd.pullback)
        scaled_ineqs = [(a, t * b) for a, b in fd.inequalities]
        counts.append(_count_in_chart(scaled_pts, scaled_ineqs))

    rows = [counts]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    for k in range(d + 1, len(rows)):
        if any(rows[k]):
            raise ArithmeticError(
                "dilate counts do not fit a degree-d polynomial (engine inconsistency)"
            )
    volume = rows[d][0]
    if volume <= 0:
        raise ArithmeticError("counting oracle produced a non-positive volume")
    return volume


# -- mixed volumes ------------------------------------------------------------


def _translate_to_origin(p: LatticePolytope) -> LatticePolytope:
    v0 = p.vertices[0]
    if not any(v0):
        return p
    return LatticePolytope(p.n, tuple(vec_sub(v, v0) for v in p.vertices))


def _pullback_polytope(chart, p: LatticePolytope) -> LatticePolytope:
    verts = tuple(sorted(chart.to_chart(v) for v in p.vertices))
    return LatticePolytope(chart.d, verts)


@lru_cache(maxsize=None)
def _assert_polarization(d: int) -> None:
    """Freeze the polarization constant: the inclusion-exclusion form must
    give mixed volume 1 on d copies of the standard d-simplex."""
    if d < 1:
        raise ValueError("mixed volume needs at least one polytope")
    simplex = standard_simplex(d) if d >= 1 else None
    total = 0
    for k in range(1, d + 1):
        total += (-1) ** (d - k) * math.comb(d, k) * normalized_volume(dilate(simplex, k), d)
    if total != math.factorial(d):
        raise AssertionError(f"polarization self-check failed in dimension {d}")


def mixed_volume(polytopes) -> int:
    """Mixed volume V(P_1, ..., P_d), normalized so V(P, ..., P) = Vol_d(P).

    The inputs are translated to a common chart (each by its lex-least
    vertex); they must span at most d dimensions jointly, else this raises.
    """
    polys = list(polytopes)
    d = len(polys)
    if d == 0:
        raise ValueError("mixed volume needs at least one polytope")
    n = polys[0].n
    for p in polys:
        if p.n != n:
            raise ValueError("mixed volume inputs must share an ambient dimension")

    translated = [_translate_to_origin(p) for p in polys]
    groups: dict[LatticePolytope, int] = {}
    for p in translated:
        groups[p] = groups.get(p, 0) + 1
    reps = list(groups)
    mults = [groups[r] for r in reps]

    total_sum = None
    for rep, m in zip(reps, mults):
        part = dilate(rep, m)
        total_sum = part if total_sum is None else minkowski_sum(total_sum, part)
    dq = total_sum.dim()
    if dq < d:
        return 0
    if dq > d:
        raise ValueError(
            f"polytopes jointly span {dq} > {d} dimensions; not co-chartable for V_{d}"
        )
    _assert_polarization(d)

    chart = lattice_chart(total_sum)
    pb = [_pullback_polytope(chart, rep) for rep in reps]

    total = 0
    for counts in product(*(range(m + 1) for m in mults)):
        if not any(counts):
            continue
        partial = None
        for q, a in zip(pb, counts):
            if a == 0:
                continue
            piece = dilate(q, a)
            partial = piece if partial is None else minkowski_sum(partial, piece)
        vol = normalized_volume(partial, d)
        if vol:
            coeff = (-1) ** (d - sum(counts))
            for m, a in zip(mults, counts):
                coeff *= math.comb(m, a)
            total += coeff * vol
    value, rem = divmod(total, math.factorial(d))
    if rem != 0 or value < 0:
        raise ArithmeticError("polarization produced a non-integral or negative mixed volume")
    return value


# -- checks -------------------------------------------------------------------


@dataclass(frozen=True)
class BinomialExpansion:
    """Result of expanding Vol_d(A + B) into binomial mixed-volume terms."""

    d: int
    terms: tuple[int, ...]  # term i is C(d, i) * V(A^i, B^(d-i))
    volume_of_sum: int
    ok: bool

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "terms": [str(t) for t in self.terms],
            "sum_of_terms": str(sum(self.terms)),
            "volume_of_sum": str(self.volume_of_sum),
            "ok": self.ok,
        }


def binomial_expansion_check(
    a: LatticePolytope, b: LatticePolytope, d: int | None = None
) -> BinomialExpansion:
    """Check Vol_d(A+B) = sum_i C(d,i) V(A,..,A,B,..,B) with i copies of A."""
    total_poly = minkowski_sum(a, b)
    if d is None:
        d = total_poly.dim()
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    terms = []
    for i in range(d + 1):
        v = mixed_volume([a] * i + [b] * (d - i))
        terms.append(math.comb(d, i) * v)
    vol_sum = normalized_volume(total_poly, d)
    return BinomialExpansion(d, tuple(terms), vol_sum, sum(terms) == vol_sum)


def _power_exponent(value: int, base: int) -> int | None:
    """t with base**t == value, or None."""
    if value < 1:
        return None
    t = 0
    acc = 1
    while acc < value:
        acc *= base
        t += 1
    return t if acc == value else None


def modular_additivity_check(parts, p: int, t: int | None = None) -> Certificate:
    """Certificate for: Vol_d(P_1 + ... + P_k) = sum_i Vol_d(P_i) mod p when d = p^t."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    total = parts[0]
    for q in parts[1:]:
        total = minkowski_sum(total, q)
    d = total.dim()
    inputs = {
        "parts": [q.to_json_dict() for q in parts],
        "p": p,
        "d": d,
    }
    claim = "Vol_d of a Minkowski sum is congruent mod p to the sum of the part volumes when d = p^t"

    exponent = _power_exponent(d, p)
    if t is not None and (exponent is None or exponent != t):
        return Certificate(
            claim,
            inputs | {"t": t},
            {"reason": f"d={d} is not {p}^{t}"},
            VERDICT_INAPPLICABLE,
        )
    if exponent is None or exponent < 1:
        return Certificate(
            claim,
            inputs,
            {"reason": f"d={d} not a power of {p}"},
            VERDICT_INAPPLICABLE,
        )

    vol_total = normalized_volume(total, d)
    vols = [normalized_volume(q, d) for q in parts]
    residue = (vol_total - sum(vols)) % p
    witness = {
        "t": exponent,
        "volume_of_sum": vol_total,
        "part_volumes": vols,
        "residue_difference": residue,
    }
    verdict = VERDICT_HOLDS if residue == 0 else VERDICT_FAILS
    return Certificate(claim, inputs, witness, verdict)


def join_divisibility_check(a: LatticePolytope, b: LatticePolytope) -> Certificate:
    """Certificate for: when conv(A u B) is a join (dim = dim A + dim B + 1),
    Vol_i(A) * Vol_j(B) divides Vol_{i+j+1}(conv(A u B))."""
    from .polytope import conv_union

    i, j = a.dim(), b.dim()
    joined = conv_union(a, b)
    d = i + j + 1
    inputs = {"A": a.to_json_dict(), "B": b.to_json_dict(), "dim_A": i, "dim_B": j}
    claim = "the volume of a join is divisible by the product of the factor volumes"
    if joined.dim() != d:
        return Certificate(
            claim,
            inputs,
            {"reason": f"conv(A u B) has dim {joined.dim()}, join needs {d}"},
            VERDICT_INAPPLICABLE,
        )
    vol_a = normalized_volume(a, i)
    vol_b = normalized_volume(b, j)
    vol_join = normalized_volume(joined, d)
    witness = {
        "volume_of_join": vol_join,
        "volume_A": vol_a,
        "volume_B": vol_b,
        "d": d,
    }
    verdict = VERDICT_HOLDS if vol_join % (vol_a * vol_b) == 0 else VERDICT_FAILS
    return Certificate(claim, inputs, witness, verdict)


def face_volume_propagation_check(p: LatticePolytope, s: int, d: int, m: int) -> Certificate:
    """Certificate for: if every s-face volume of P is divisible by m, then
    so is Vol_d(P).  When the hypothesis is unmet the verdict is
    "inapplicable", never a refutation."""
    if not 0 <= s <= d:
        raise ValueError(f"need 0 <= s <= d, got s={s}, d={d}")
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    inputs = {"P": p.to_json_dict(), "s": s, "d": d, "m": m}
    claim = "divisibility of all s-face volumes propagates to the d-volume"
    if p.dim() != d:
        return Certificate(
            claim, inputs, {"reason": f"dim(P)={p.dim()} differs from d={d}"}, VERDICT_INAPPLICABLE
        )
    face_vols = [normalized_volume(f, s) for f in p.faces_of_dim(s)]
    bad = [v for v in face_vols if v % m != 0]
    if bad:
        return Certificate(
            claim,
            inputs,
            {"reason": "hypothesis not met", "face_volumes": face_vols},
            VERDICT_INAPPLICABLE,
        )
    vol = normalized_volume(p, d)
    witness = {"face_volumes": face_vols, "volume": vol, "residue": vol % m}
    verdict = VERDICT_HOLDS if vol % m == 0 else VERDICT_FAILS
    return Certificate(claim, inputs, witness, verdict)
