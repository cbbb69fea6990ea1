"""Depth bounds for exact max computation and the network-claim refuter.

The headline bound: a network whose weights are N-ary fractions needs at
least ceil(log_p(n+1)) hidden layers to compute max(0, x_1, ..., x_n)
exactly, where p is the smallest prime not dividing N.  The binary max
tree gives the matching ceil(log2(n+1)) upper bound.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass, field

from .certificates import jsonable
from .exact_arith import is_prime, smallest_prime_not_dividing
from .network import (
    ReluNetwork,
    clear_denominators,
    is_homogeneous,
    represents_scaled_simplex,
)
from .polytope import LatticePolytope, dilate, standard_simplex
from .volume import normalized_volume, _power_exponent

__all__ = [
    "ceil_log",
    "DepthBoundReport",
    "lower_bound_nary",
    "GrowthRow",
    "gradual_growth_table",
    "ObstructionCertificate",
    "volume_obstruction_check",
    "RefutationReport",
    "refute_network_claim",
]

_POWER_TABLES: dict[int, list[int]] = {}


def ceil_log(base: int, x: int) -> int:
    """Smallest k >= 0 with base**k >= x, computed with integer powers only."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    table = _POWER_TABLES.get(base)
    if table is None:
        table = [1]
        _POWER_TABLES[base] = table
    while table[-1] < x:
        table.append(table[-1] * base)
    return bisect_left(table, x)


@dataclass(frozen=True)
class DepthBoundReport:
    """Hidden-layer bounds for computing max(0, x_1, ..., x_n) exactly."""

    n: int
    weight_base: int | str  # an integer base N, or "Z" for integer weights
    prime: int
    lower_bound: int
    upper_bound: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "weight_base": self.weight_base,
            "prime": self.prime,
            "lower_bound_hidden_layers": self.lower_bound,
            "upper_bound_hidden_layers": self.upper_bound,
        }


def lower_bound_nary(n: int, base: int | str) -> DepthBoundReport:
    """Depth bounds for max(0, x_1, .., x_n) with N-ary fractional weights.

    base = "Z" means integer weights, for which every prime applies and
    p = 2 gives the strongest bound; then the bounds coincide.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if base == "Z":
        p = 2
    else:
        base = int(base)
        if base < 2:
            raise ValueError(f"weight base must be >= 2, got {base}")
        p = smallest_prime_not_dividing(base)
    return DepthBoundReport(n, base, p, ceil_log(p, n + 1), ceil_log(2, n + 1))


@dataclass(frozen=True)
class GrowthRow:
    k: int
    inputs: int  # p**k
    insufficient_depth: int  # k hidden layers cannot compute it
    sufficient_depth: int  # 2k hidden layers can (integer weights)
    binary_tree_depth: int  # the constructive upper bound ceil(log2(inputs+1))

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "inputs": self.inputs,
            "insufficient_depth": self.insufficient_depth,
            "sufficient_depth": self.sufficient_depth,
            "binary_tree_depth": self.binary_tree_depth,
        }


def gradual_growth_table(n: int, base: int = 10) -> list[GrowthRow]:
    """Rows of witnesses max(0, x_1, .., x_{p^k}) for p^k <= n showing the
    depth hierarchy is strict: k hidden layers never suffice, 2k do."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    p = smallest_prime_not_dividing(int(base))
    rows = []
    k = 1
    power = p
    while power <= n:
        rows.append(GrowthRow(k, power, k, 2 * k, ceil_log(2, power + 1)))
        k += 1
        power *= p
    return rows


@dataclass(frozen=True)
class ObstructionCertificate:
    """Mod-p volume obstruction against depth-k representability of h_P."""

    p: int
    claimed_depth: int
    dimension: int
    t: int | None  # dimension = p**t when applicable
    volume: int | None
    residue: int | None
    verdict: str  # "obstructed" | "no obstruction" | "inapplicable"
    reason: str | None = None
    polytope: LatticePolytope | None = field(default=None, repr=False)

    @property
    def obstructed(self) -> bool:
        return self.verdict == "obstructed"

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "claimed_depth": self.claimed_depth,
            "dimension": self.dimension,
            "t": self.t,
            "volume": None if self.volume is None else str(self.volume),
            "residue": self.residue,
            "verdict": self.verdict,
            "reason": self.reason,
            "polytope": None if self.polytope is None else self.polytope.to_json_dict(),
        }


def volume_obstruction_check(p_poly: LatticePolytope, k: int, p: int) -> ObstructionCertificate:
    """Volume obstruction: if dim(P) = p^t with k <= t and p does not divide
    Vol(P), then no depth-k network over a ring avoiding p computes h_P."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 0:
        raise ValueError(f"claimed depth must be >= 0, got {k}")
    d = p_poly.dim()
    t = _power_exponent(d, p)
    if t is None or t < 1:
        return ObstructionCertificate(
            p, k, d, None, None, None, "inapplicable",
            f"dim(P) = {d} is not a positive power of {p}", p_poly,
        )
    if k > t:
        return ObstructionCertificate(
            p, k, d, t, None, None, "inapplicable",
            f"claimed depth {k} exceeds t = {t}; the invariant only reaches depth t", p_poly,
        )
    vol = normalized_volume(p_poly, d)
    residue = vol % p
    verdict = "obstructed" if residue != 0 else "no obstruction"
    return ObstructionCertificate(p, k, d, t, vol, residue, verdict, None, p_poly)


@dataclass(frozen=True)
class RefutationReport:
    """Outcome of checking a shipped network against the claim that it
    computes max(0, x_1, ..., x_n)."""

    n: int
    claimed_hidden_layers: int
    verdict: str  # "represents" | "refuted" | "rejected" | "inconsistent"
    steps: tuple[str, ...]
    prime: int | None = None
    lower_bound: int | None = None
    clearing: dict | None = None
    certificate: object | None = None
    obstruction: ObstructionCertificate | None = None

    @property
    def exit_code(self) -> int:
        return {"represents": 0, "refuted": 1, "rejected": 2, "inconsistent": 3}[self.verdict]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "claimed_hidden_layers": self.claimed_hidden_layers,
            "verdict": self.verdict,
            "steps": list(self.steps),
            "prime": self.prime,
            "lower_bound_hidden_layers": self.lower_bound,
            "clearing": jsonable(self.clearing) if self.clearing else None,
            "certificate": None if self.certificate is None else self.certificate.to_json_dict(),
            "obstruction": None if self.obstruction is None else self.obstruction.to_json_dict(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


def _max_denominator_exponent(net: ReluNetwork, base: int) -> int:
    """Smallest t with base**t clearing every weight denominator."""
    t = 0
    for layer in net.layers:
        for row in layer.weights:
            for w in row:
                e = 0
                acc = 1
                while acc % w.denominator != 0:
                    acc *= base
                    e += 1
                t = max(t, e)
    return t


def refute_network_claim(net: ReluNetwork, n: int, lam: int | str = "auto") -> RefutationReport:
    """Decide whether a shipped network computes max(0, x_1, ..., x_n).

    Denominators are cleared with M = N^t (t the largest weight
    denominator exponent), the cleared integer network is compared
    exactly against M^(k+1) times the max function as a polytope
    equality, and the claimed depth is checked against the prime lower
    bound.  lam = "auto" uses the scale M^(k+1); an explicit integer is
    taken as the scaled-simplex factor for the cleared network.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    k = net.hidden_layers
    steps = []

    if net.n_inputs != n:
        return RefutationReport(
            n, k, "rejected",
            (f"network has {net.n_inputs} inputs, claim is about {n}",),
        )
    if not is_homogeneous(net):
        return RefutationReport(
            n, k, "rejected",
            ("network is not homogeneous (nonzero bias); the exact-max claim needs zero biases",),
        )
    if net.ring.kind == "Q":
        return RefutationReport(
            n, k, "rejected",
            ("weight ring Q carries no divisibility obstruction; declare Z or an N-ary ring",),
        )

    if net.ring.kind == "Z":
        p = 2
        m_clear = 1
        t = 0
        steps.append("integer weights: every prime applies, p = 2 is strongest")
    else:
        base = net.ring.base
        p = smallest_prime_not_dividing(base)
        t = _max_denominator_exponent(net, base)
        m_clear = base**t
        steps.append(f"base N = {base}: smallest prime not dividing N is p = {p}")
        steps.append(f"largest denominator exponent t = {t}; clearing with M = N^t = {m_clear}")

    cleared = clear_denominators(net, m_clear) if m_clear > 1 else net
    scale = m_clear ** (k + 1) if lam == "auto" else int(lam)
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    steps.append(f"comparing the cleared network against {scale} * max(0, x_1..x_{n})")

    cert = represents_scaled_simplex(cleared, scale)
    k_lo = ceil_log(p, n + 1)
    clearing = {"M": m_clear, "t": t, "lambda": scale}

    if not cert.holds:
        steps.append("polytope comparison failed: the network does not compute the claimed max")
        return RefutationReport(
            n, k, "refuted", tuple(steps),
            prime=p, lower_bound=k_lo, clearing=clearing, certificate=cert,
        )

    if k >= k_lo:
        steps.append(
            f"representation verified; depth {k} is consistent with the lower bound {k_lo}"
        )
        return RefutationReport(
            n, k, "represents", tuple(steps),
            prime=p, lower_bound=k_lo, clearing=clearing, certificate=cert,
        )

    # A verified representation below the proven lower bound contradicts the
    # volume obstruction; surface the contradiction location and fail loudly.
    restricted = p**k
    witness_poly = dilate(standard_simplex(restricted), scale)
    obstruction = volume_obstruction_check(witness_poly, k, p)
    steps.append(
        f"representation verified at depth {k} below the bound {k_lo}: impossible; "
        f"the scaled simplex on {restricted} inputs carries a mod-{p} volume obstruction"
    )
    return RefutationReport(
        n, k, "inconsistent", tuple(steps),
        prime=p, lower_bound=k_lo, clearing=clearing,
        certificate=cert, obstruction=obstruction,
    )
