"""ReLU networks with exact rational weights, and their polytope compilation.

A network is an alternating chain of affine maps and coordinatewise ReLU,
evaluated exactly over Fraction.  Homogeneous integer networks compile to
a pair of sum-union expressions (A, B) with f = support(B) - support(A),
which turns function questions into polytope equalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certificates import (
    VERDICT_FAILS,
    VERDICT_HOLDS,
    Certificate,
)
from .polytope import (
    LatticePolytope,
    dilate,
    equal,
    minkowski_sum,
    standard_simplex,
    support_witness,
)
from .su import (
    ConvUnionExpr,
    PointExpr,
    SUExpression,
    SumExpr,
    evaluate,
    su_to_json_dict,
)

__all__ = [
    "WeightRing",
    "RING_Z",
    "RING_Q",
    "nary_ring",
    "Layer",
    "ReluNetwork",
    "evaluate_network",
    "is_homogeneous",
    "clear_denominators",
    "max_network",
    "PolytopePair",
    "compile_to_polytopes",
    "functions_equal",
    "represents_scaled_simplex",
    "network_to_json_dict",
    "network_from_json_dict",
]


@dataclass(frozen=True)
class WeightRing:
    kind: str  # "Z", "nary", or "Q"
    base: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("Z", "nary", "Q"):
            raise ValueError(f"unknown weight ring kind {self.kind!r}")
        if self.kind == "nary":
            if self.base is None or self.base < 2:
                raise ValueError(f"an N-ary ring needs a base >= 2, got {self.base}")
        elif self.base is not None:
            raise ValueError(f"ring {self.kind} takes no base")

    def contains(self, q: Fraction) -> bool:
        if self.kind == "Q":
            return True
        if self.kind == "Z":
            return q.denominator == 1
        den = q.denominator
        while True:
            g = math.gcd(den, self.base)
            if g == 1:
                break
            while den % g == 0:
                den //= g
        return den == 1

    def to_json(self):
        if self.kind == "nary":
            return {"nary": self.base}
        return self.kind


RING_Z = WeightRing("Z")
RING_Q = WeightRing("Q")


def nary_ring(base: int) -> WeightRing:
    return WeightRing("nary", base)


@dataclass(frozen=True)
class Layer:
    weights: tuple[tuple[Fraction, ...], ...]  # fan_out rows of fan_in entries
    biases: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(w) for w in row) for row in self.weights)
        biases = tuple(Fraction(b) for b in self.biases)
        if not rows:
            raise ValueError("a layer needs at least one output")
        fan_in = len(rows[0])
        if fan_in < 1:
            raise ValueError("a layer needs at least one input")
        for row in rows:
            if len(row) != fan_in:
                raise ValueError("weight rows have mixed lengths")
        if len(biases) != len(rows):
            raise ValueError("bias count must match the output count")
        object.__setattr__(self, "weights", rows)
        object.__setattr__(self, "biases", biases)

    @property
    def fan_in(self) -> int:
        return len(self.weights[0])

    @property
    def fan_out(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ReluNetwork:
    """t^(k+1) o relu o t^(k) o ... o relu o t^(1), scalar output."""

    layers: tuple[Layer, ...]
    ring: WeightRing

    def __post_init__(self) -> None:
        layers = tuple(self.layers)
        if not layers:
            raise ValueError("a network needs at least one affine layer")
        for prev, nxt in zip(layers, layers[1:]):
            if nxt.fan_in != prev.fan_out:
                raise ValueError(
                    f"layer fan-in {nxt.fan_in} does not match previous fan-out {prev.fan_out}"
                )
        if layers[-1].fan_out != 1:
            raise ValueError("the output layer must have a single output")
        for layer in layers:
            for row in layer.weights:
                for w in row:
                    if not self.ring.contains(w):
                        raise ValueError(f"weight {w} is outside the declared ring")
            for b in layer.biases:
                if not self.ring.contains(b):
                    raise ValueError(f"bias {b} is outside the declared ring")
        object.__setattr__(self, "layers", layers)

    @property
    def n_inputs(self) -> int:
        return self.layers[0].fan_in

    @property
    def hidden_layers(self) -> int:
        return len(self.layers) - 1


def evaluate_network(net: ReluNetwork, x) -> Fraction:
    """Exact forward pass."""
    vals = [Fraction(c) for c in x]
    if len(vals) != net.n_inputs:
        raise ValueError(f"input has {len(vals)} coordinates, expected {net.n_inputs}")
    last = len(net.layers) - 1
    for i, layer in enumerate(net.layers):
        pre = [
            sum(w * v for w, v in zip(row, vals)) + b
            for row, b in zip(layer.weights, layer.biases)
        ]
        vals = pre if i == last else [v if v > 0 else Fraction(0) for v in pre]
    return vals[0]


def is_homogeneous(net: ReluNetwork) -> bool:
    return all(b == 0 for layer in net.layers for b in layer.biases)


def clear_denominators(net: ReluNetwork, m: int) -> ReluNetwork:
    """Scale layer weights by M and layer-i biases by M^i; the result is an
    integer-weight network computing M^(k+1) times the original function."""
    if m < 1:
        raise ValueError(f"M must be >= 1, got {m}")
    new_layers = []
    for i, layer in enumerate(net.layers, start=1):
        rows = []
        for row in layer.weights:
            scaled = [m * w for w in row]
            for s in scaled:
                if s.denominator != 1:
                    raise ValueError(f"M = {m} does not clear the weight {s / m}")
            rows.append(tuple(scaled))
        bias_scale = m**i
        biases = []
        for b in layer.biases:
            sb = bias_scale * b
            if sb.denominator != 1:
                raise ValueError(f"M = {m} does not clear the bias {b}")
            biases.append(sb)
        new_layers.append(Layer(tuple(rows), tuple(biases)))
    return ReluNetwork(tuple(new_layers), RING_Z)


# -- the balanced max network -------------------------------------------------


def max_network(n: int) -> ReluNetwork:
    """Integer homogeneous network computing max(0, x_1, ..., x_n) exactly,
    with exactly ceil(log2(n+1)) hidden layers.

    Pairs values through max(a, b) = a + relu(b - a) over a balanced tree
    of the n+1 values {0, x_1, ..., x_n}; values known to be nonnegative
    need no negative-part carry neuron.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")

    # a value is (coeffs over current activations, provably nonnegative, literal zero)
    values: list[tuple[list[int], bool, bool]] = [([0] * n, True, True)]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        values.append((e, False, False))

    layers: list[Layer] = []
    while len(values) > 1:
        rows: list[list[int]] = []

        def neuron(coeffs: list[int]) -> int:
            rows.append(list(coeffs))
            return len(rows) - 1

        new_values = []
        pending = list(values)
        while len(pending) >= 2:
            (c1, nn1, z1), (c2, nn2, z2) = pending[0], pending[1]
            pending = pending[2:]
            if z1:
                idx = neuron(c2)
                new_values.append(({idx: 1}, True, False))
                continue
            diff = [b - a for a, b in zip(c1, c2)]
            idx_d = neuron(diff)
            if nn1:
                idx_a = neuron(c1)
                new_values.append(({idx_a: 1, idx_d: 1}, True, False))
            else:
                idx_p = neuron(c1)
                idx_m = neuron([-a for a in c1])
                new_values.append(({idx_p: 1, idx_m: -1, idx_d: 1}, nn1 or nn2, False))
        if pending:
            c, nn, z = pending[0]
            if z:
                new_values.append(({}, True, True))
            elif nn:
                idx = neuron(c)
                new_values.append(({idx: 1}, True, False))
            else:
                idx_p = neuron(c)
                idx_m = neuron([-a for a in c])
                new_values.append(({idx_p: 1, idx_m: -1}, False, False))

        width = len(rows)
        layers.append(
            Layer(tuple(tuple(r) for r in rows), tuple(0 for _ in range(width)))
        )
        values = [
            ([sparse.get(j, 0) for j in range(width)], nn, z)
            for sparse, nn, z in new_values
        ]

    coeffs, _, _ = values[0]
    layers.append(Layer((tuple(coeffs),), (0,)))
    return ReluNetwork(tuple(layers), RING_Z)


# -- compilation to polytope pairs ---------------------------------------------


@dataclass(frozen=True)
class PolytopePair:
    """f = support(evaluate(b_expr)) - support(evaluate(a_expr))."""

    a_expr: SUExpression
    b_expr: SUExpression

    def to_json_dict(self) -> dict:
        return {"A": su_to_json_dict(self.a_expr), "B": su_to_json_dict(self.b_expr)}


def _dilate_expr(expr: SUExpression, w: int) -> SUExpression:
    if w == 1:
        return expr
    return SumExpr((expr,) * w)


def _sum_expr(terms: list[SUExpression], n: int) -> SUExpression:
    if not terms:
        return PointExpr(tuple(0 for _ in range(n)))
    if len(terms) == 1:
        return terms[0]
    return SumExpr(tuple(terms))


def compile_to_polytopes(net: ReluNetwork) -> PolytopePair:
    """Exact support-function form of a homogeneous integer network.

    Each scalar value carries a pair (A, B) with value = h_B - h_A; affine
    rows combine pairs through sums and dilations, ReLU replaces B with
    the convex union of B and A.  The expressions' su-depth never exceeds
    the number of hidden layers.
    """
    if not is_homogeneous(net):
        raise ValueError("only homogeneous networks compile to polytope pairs")
    n = net.n_inputs
    origin = PointExpr(tuple(0 for _ in range(n)))
    pairs: list[tuple[SUExpression, SUExpression]] = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        pairs.append((origin, PointExpr(tuple(e))))

    last = len(net.layers) - 1
    for li, layer in enumerate(net.layers):
        new_pairs = []
        for row in layer.weights:
            a_terms: list[SUExpression] = []
            b_terms: list[SUExpression] = []
            for w, (pa, pb) in zip(row, pairs):
                if w.denominator != 1:
                    raise ValueError(
                        f"weight {w} is not an integer; clear denominators first"
                    )
                w = int(w)
                if w > 0:
                    a_terms.append(_dilate_expr(pa, w))
                    b_terms.append(_dilate_expr(pb, w))
                elif w < 0:
                    a_terms.append(_dilate_expr(pb, -w))
                    b_terms.append(_dilate_expr(pa, -w))
            a_e = _sum_expr(a_terms, n)
            b_e = _sum_expr(b_terms, n)
            if li != last:
                b_e = ConvUnionExpr(b_e, a_e)  # relu: max(h_B, h_A) - h_A
            new_pairs.append((a_e, b_e))
        pairs = new_pairs
    (a_e, b_e), = pairs
    return PolytopePair(a_e, b_e)


def functions_equal(net1: ReluNetwork, net2: ReluNetwork) -> Certificate:
    """Certificate for pointwise equality of two homogeneous integer networks.

    With compilations (A, B) and (C, D), the functions agree iff the
    polytopes A + D and B + C coincide; a failing certificate carries an
    integer direction where the supports differ."""
    if net1.n_inputs != net2.n_inputs:
        raise ValueError("networks must have the same number of inputs")
    pair1 = compile_to_polytopes(net1)
    pair2 = compile_to_polytopes(net2)
    left = minkowski_sum(evaluate(pair1.a_expr), evaluate(pair2.b_expr))
    right = minkowski_sum(evaluate(pair1.b_expr), evaluate(pair2.a_expr))
    inputs = {
        "n": net1.n_inputs,
        "hidden_layers": [net1.hidden_layers, net2.hidden_layers],
    }
    claim = "the two networks compute the same function"
    found = support_witness(left, right)
    if found is None:
        return Certificate(claim, inputs, {}, VERDICT_HOLDS)
    u, h_left, h_right = found
    witness = {
        "direction": list(u),
        "support_first": h_left,
        "support_second": h_right,
        "difference_at_direction": h_right - h_left,
    }
    return Certificate(claim, inputs, witness, VERDICT_FAILS)


def represents_scaled_simplex(net: ReluNetwork, lam: int) -> Certificate:
    """Certificate for: the network computes lam * max(0, x_1, ..., x_n),
    i.e. lam * (standard simplex) + A = B for the compiled pair (A, B)."""
    if lam < 1:
        raise ValueError(f"scale must be >= 1, got {lam}")
    n = net.n_inputs
    pair = compile_to_polytopes(net)
    target = dilate(standard_simplex(n), lam)
    left = minkowski_sum(target, evaluate(pair.a_expr))
    right = evaluate(pair.b_expr)
    inputs = {"n": n, "lambda": lam, "hidden_layers": net.hidden_layers}
    claim = "the network computes lambda * max(0, x_1, ..., x_n)"
    if equal(left, right):
        return Certificate(claim, inputs, {"lambda": lam}, VERDICT_HOLDS)
    u, h_left, h_right = support_witness(left, right)
    witness = {
        "direction": list(u),
        "support_target_plus_A": h_left,
        "support_B": h_right,
    }
    return Certificate(claim, inputs, witness, VERDICT_FAILS)


# -- JSON -----------------------------------------------------------------------


def _ring_from_json(obj) -> WeightRing:
    if obj == "Z":
        return RING_Z
    if obj == "Q":
        return RING_Q
    if isinstance(obj, dict) and set(obj) == {"nary"}:
        return nary_ring(int(obj["nary"]))
    raise ValueError(f"unknown weight ring {obj!r}")


def network_to_json_dict(net: ReluNetwork) -> dict:
    return {
        "ring": net.ring.to_json(),
        "layers": [
            {
                "A": [[str(w) for w in row] for row in layer.weights],
                "b": [str(b) for b in layer.biases],
            }
            for layer in net.layers
        ],
    }


def network_from_json_dict(obj: dict) -> ReluNetwork:
    ring = _ring_from_json(obj.get("ring", "Q"))
    layers = []
    for entry in obj["layers"]:
        rows = tuple(tuple(Fraction(str(w)) for w in row) for row in entry["A"])
        biases = tuple(Fraction(str(b)) for b in entry.get("b", [0] * len(rows)))
        layers.append(Layer(rows, biases))
    return ReluNetwork(tuple(layers), ring)
