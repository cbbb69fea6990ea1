"""Sum-union expression trees over lattice points.

An expression is built from lattice points by Minkowski sums and convex
unions; its depth counts the nesting of convex unions.  Depth-0
expressions are single points, depth-1 evaluations are exactly the lattice
zonotopes reachable from the leaf points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .certificates import (
    VERDICT_FAILS,
    VERDICT_HOLDS,
    VERDICT_INAPPLICABLE,
    Certificate,
)
from .exact_arith import is_prime
from .polytope import (
    LatticePolytope,
    Vec,
    conv_union,
    equal,
    minkowski_sum,
    polytope_to_json_dict,
)
from .volume import normalized_volume

__all__ = [
    "SUExpression",
    "PointExpr",
    "SumExpr",
    "ConvUnionExpr",
    "evaluate",
    "face_expr",
    "random_su",
    "InvariantReport",
    "FaceVolumeRecord",
    "p_invariant_check",
    "membership_as_sum_certificate",
    "su_to_json_dict",
    "su_from_json_dict",
]


class SUExpression:
    """Base class; concrete nodes are PointExpr, SumExpr, ConvUnionExpr."""

    su_depth: int
    n: int


@dataclass(frozen=True)
class PointExpr(SUExpression):
    point: Vec
    su_depth: int = field(init=False, repr=False, compare=False, default=0)
    n: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        pt = tuple(int(c) for c in self.point)
        if not pt:
            raise ValueError("points need at least one coordinate")
        object.__setattr__(self, "point", pt)
        object.__setattr__(self, "n", len(pt))


@dataclass(frozen=True)
class SumExpr(SUExpression):
    children: tuple[SUExpression, ...]
    su_depth: int = field(init=False, repr=False, compare=False, default=0)
    n: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        kids = tuple(self.children)
        if not kids:
            raise ValueError("a sum needs at least one child")
        n = kids[0].n
        for kid in kids:
            if kid.n != n:
                raise ValueError("sum children have mixed ambient dimensions")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "su_depth", max(k.su_depth for k in kids))
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class ConvUnionExpr(SUExpression):
    left: SUExpression
    right: SUExpression
    su_depth: int = field(init=False, repr=False, compare=False, default=0)
    n: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        if self.left.n != self.right.n:
            raise ValueError("convex-union children have mixed ambient dimensions")
        object.__setattr__(self, "su_depth", 1 + max(self.left.su_depth, self.right.su_depth))
        object.__setattr__(self, "n", self.left.n)


@lru_cache(maxsize=None)
def evaluate(expr: SUExpression) -> LatticePolytope:
    """The lattice polytope an expression denotes."""
    if isinstance(expr, PointExpr):
        return LatticePolytope(expr.n, (expr.point,))
    if isinstance(expr, SumExpr):
        acc = evaluate(expr.children[0])
        for kid in expr.children[1:]:
            acc = minkowski_sum(acc, evaluate(kid))
        return acc
    if isinstance(expr, ConvUnionExpr):
        return conv_union(evaluate(expr.left), evaluate(expr.right))
    raise TypeError(f"not an SU expression: {type(expr).__name__}")


def face_expr(expr: SUExpression, u) -> SUExpression:
    """An expression (of no greater depth) evaluating to the u-face of expr.

    Sums recurse into every child; a convex union keeps the side whose
    support in direction u wins, or recurses into both on a tie.
    """
    u = tuple(Fraction(c) for c in u)
    if len(u) != expr.n:
        raise ValueError(f"direction has {len(u)} coordinates, expected {expr.n}")
    return _face_expr(expr, u)


def _face_expr(expr: SUExpression, u) -> SUExpression:
    if isinstance(expr, PointExpr):
        return expr
    if isinstance(expr, SumExpr):
        return SumExpr(tuple(_face_expr(kid, u) for kid in expr.children))
    if isinstance(expr, ConvUnionExpr):
        h_left = evaluate(expr.left).support(u)
        h_right = evaluate(expr.right).support(u)
        if h_left > h_right:
            return _face_expr(expr.left, u)
        if h_right > h_left:
            return _face_expr(expr.right, u)
        return ConvUnionExpr(_face_expr(expr.left, u), _face_expr(expr.right, u))
    raise TypeError(f"not an SU expression: {type(expr).__name__}")


def random_su(
    k: int,
    n: int,
    budget: int = 3,
    coord_range: tuple[int, int] = (-3, 3),
    seed: int = 0,
) -> SUExpression:
    """Seeded random expression of su-depth exactly k in ambient dimension n.

    A fixed fraction of convex unions duplicates its left subtree so the
    tie branch of the face recursion is exercised; the rest are built from
    independent subtrees, which generically hit both strict branches.
    """
    if k < 0:
        raise ValueError(f"depth must be >= 0, got {k}")
    if n < 1:
        raise ValueError(f"ambient dimension must be >= 1, got {n}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    lo, hi = coord_range
    if lo > hi:
        raise ValueError(f"empty coordinate range {coord_range}")
    rng = random.Random(seed)

    def rand_point() -> PointExpr:
        return PointExpr(tuple(rng.randint(lo, hi) for _ in range(n)))

    def subtree(depth: int) -> SUExpression:
        if depth == 0 or rng.random() < 0.2:
            return rand_point()
        return exact(depth)

    def exact(depth: int) -> SUExpression:
        width = rng.randint(1, budget)
        kids = []
        for idx in range(width):
            if idx == 0 and depth > 1:
                left = exact(depth - 1)
            else:
                left = subtree(depth - 1)
            if rng.random() < 0.25:
                right = left
            else:
                right = subtree(depth - 1)
            kids.append(ConvUnionExpr(left, right))
        return SumExpr(tuple(kids))

    if k == 0:
        return rand_point()
    return exact(k)


@dataclass(frozen=True)
class FaceVolumeRecord:
    index: int
    vertices: tuple[Vec, ...]
    volume: int
    residue: int

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "vertices": [list(v) for v in self.vertices],
            "volume": str(self.volume),
            "residue": self.residue,
        }


@dataclass(frozen=True)
class InvariantReport:
    """Outcome of the mod-p face-volume invariant for a depth-k expression."""

    p: int
    k: int
    d: int
    verdict: str
    reason: str | None
    polytope: LatticePolytope | None
    faces: tuple[FaceVolumeRecord, ...]

    @property
    def holds(self) -> bool:
        return self.verdict == VERDICT_HOLDS

    @property
    def exit_code(self) -> int:
        return {VERDICT_HOLDS: 0, VERDICT_FAILS: 1, VERDICT_INAPPLICABLE: 2}[self.verdict]

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "d": self.d,
            "verdict": self.verdict,
            "reason": self.reason,
            "polytope": None if self.polytope is None else polytope_to_json_dict(self.polytope),
            "faces": [r.to_json_dict() for r in self.faces],
        }


def p_invariant_check(expr: SUExpression, p: int) -> InvariantReport:
    """Check that every p^k-dimensional face of the evaluated expression has
    volume divisible by p, where k is the expression's su-depth."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    k = expr.su_depth
    if k < 1:
        raise ValueError(f"expression depth must be >= 1, got {k}")
    d = p**k
    if d > expr.n:
        return InvariantReport(
            p, k, d, VERDICT_INAPPLICABLE,
            f"p^k={d} exceeds the ambient dimension {expr.n}", None, (),
        )
    poly = evaluate(expr)
    records = []
    all_zero = True
    for idx, face in enumerate(poly.faces_of_dim(d)):
        vol = normalized_volume(face, d)
        residue = vol % p
        if residue:
            all_zero = False
        records.append(FaceVolumeRecord(idx, face.vertices, vol, residue))
    verdict = VERDICT_HOLDS if all_zero else VERDICT_FAILS
    return InvariantReport(p, k, d, verdict, None, poly, tuple(records))


def membership_as_sum_certificate(
    p: LatticePolytope, a_expr: SUExpression, b_expr: SUExpression
) -> Certificate:
    """Certificate for: P + evaluate(A) = evaluate(B), which exhibits the
    support function of P as a difference of depth-k sum-union supports."""
    if a_expr.n != p.n or b_expr.n != p.n:
        raise ValueError("expressions and polytope must share an ambient dimension")
    k = max(a_expr.su_depth, b_expr.su_depth)
    left = minkowski_sum(p, evaluate(a_expr))
    right = evaluate(b_expr)
    inputs = {
        "P": p.to_json_dict(),
        "A": su_to_json_dict(a_expr),
        "B": su_to_json_dict(b_expr),
    }
    claim = "P plus the A-polytope equals the B-polytope (support difference representation)"
    witness: dict = {"k": k}
    if equal(left, right):
        return Certificate(claim, inputs, witness, VERDICT_HOLDS)
    from .polytope import support_witness

    found = support_witness(left, right)
    if found is not None:
        u, h_left, h_right = found
        witness |= {
            "direction": list(u),
            "support_P_plus_A": h_left,
            "support_B": h_right,
        }
    return Certificate(claim, inputs, witness, VERDICT_FAILS)


# -- JSON ---------------------------------------------------------------------


def su_to_json_dict(expr: SUExpression) -> dict:
    if isinstance(expr, PointExpr):
        return {"point": list(expr.point)}
    if isinstance(expr, SumExpr):
        return {"sum": [su_to_json_dict(k) for k in expr.children]}
    if isinstance(expr, ConvUnionExpr):
        return {"convunion": [su_to_json_dict(expr.left), su_to_json_dict(expr.right)]}
    raise TypeError(f"not an SU expression: {type(expr).__name__}")


def su_from_json_dict(obj: dict) -> SUExpression:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError("SU expression JSON must be a single-key object")
    key, value = next(iter(obj.items()))
    if key == "point":
        return PointExpr(tuple(int(c) for c in value))
    if key == "sum":
        return SumExpr(tuple(su_from_json_dict(v) for v in value))
    if key == "convunion":
        if len(value) != 2:
            raise ValueError('"convunion" takes exactly two children')
        return ConvUnionExpr(su_from_json_dict(value[0]), su_from_json_dict(value[1]))
    raise ValueError(f"unknown SU expression node {key!r}")
