"""Polytope layer: hull, faces, charts, membership, counting, JSON."""

import random
from fractions import Fraction
from itertools import product

import pytest

import reluvol.polytope as poly
from reluvol.polytope import (
    LatticePolytope,
    ambient_constraints,
    contains_point,
    conv_union,
    dilate,
    equal,
    hull,
    lattice_points_count,
    minkowski_sum,
    polytope_from_json_dict,
    polytope_to_json_dict,
    standard_simplex,
    support_witness,
)


def monotone_chain_2d(points):
    """Classic 2-D convex hull; an oracle independent of the LP-based hull."""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return sorted(lower[:-1] + upper[:-1]) or pts[:1]


def brute_lattice_count(p):
    """Bounding-box sweep in ambient coordinates using only the vertex data."""
    n = p.n
    lo = [min(v[i] for v in p.vertices) for i in range(n)]
    hi = [max(v[i] for v in p.vertices) for i in range(n)]
    return sum(
        1 for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if contains_point(p, x)
    )


class TestHull:
    def test_matches_monotone_chain_in_2d(self):
        rng = random.Random(10)
        for _ in range(60):
            m = rng.randint(1, 10)
            pts = [(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(m)]
            assert hull(pts).vertices == tuple(monotone_chain_2d(pts))

    def test_collinear_points_collapse(self):
        p = hull([(0, 0), (1, 1), (2, 2), (3, 3)])
        assert p.vertices == ((0, 0), (3, 3))

    def test_duplicates_removed(self):
        p = hull([(0, 0), (1, 0), (0, 0), (1, 0)])
        assert p.vertices == ((0, 0), (1, 0))

    def test_interior_and_boundary_points_removed_in_3d(self):
        cube = [(x, y, z) for x in (0, 2) for y in (0, 2) for z in (0, 2)]
        extras = [(1, 1, 1), (1, 0, 0), (2, 2, 1), (1, 1, 0)]
        assert hull(cube + extras).vertices == tuple(sorted(cube))

    def test_every_vertex_is_extreme(self):
        rng = random.Random(11)
        for _ in range(25):
            n = rng.randint(2, 4)
            pts = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + 3)]
            p = hull(pts)
            for x in pts:  # no input point escapes the hull
                assert contains_point(p, x)
            for v in p.vertices:  # each vertex is outside the hull of the others
                rest = [q for q in pts if q != v]
                if rest:
                    assert not contains_point(hull(rest), v)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            hull([])


class TestLatticePolytope:
    def test_constructor_validation(self):
        with pytest.raises(ValueError):
            LatticePolytope(2, ())
        with pytest.raises(ValueError):
            LatticePolytope(2, ((0, 0, 0),))
        with pytest.raises(ValueError):  # not lex-sorted
            LatticePolytope(2, ((1, 0), (0, 0)))
        with pytest.raises(ValueError):  # duplicate
            LatticePolytope(2, ((0, 0), (0, 0)))

    def test_ambient_dimension_guard(self, monkeypatch):
        with pytest.raises(ValueError, match="RELUVOL_MAX_DIM"):
            LatticePolytope(9, (tuple(0 for _ in range(9)),))
        monkeypatch.setenv("RELUVOL_MAX_DIM", "9")
        p = LatticePolytope(9, (tuple(0 for _ in range(9)),))
        assert p.dim() == 0

    def test_dim(self):
        assert hull([(1, 2)]).dim() == 0
        assert hull([(0, 0), (2, 4)]).dim() == 1
        assert standard_simplex(3).dim() == 3
        assert hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]).dim() == 2

    def test_support_values(self):
        s = standard_simplex(2)
        assert s.support((1, 1)) == 1
        assert s.support((-1, -1)) == 0
        assert s.support((Fraction(1, 2), 2)) == 2
        with pytest.raises(ValueError):
            s.support((1, 0, 0))

    def test_face_in_direction(self):
        square = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert square.face((1, 0)).vertices == ((1, 0), (1, 1))
        assert square.face((1, 1)).vertices == ((1, 1),)
        assert square.face((0, 0)) == square

    def test_face_counts_cube(self):
        cube = hull([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])
        assert len(cube.faces_of_dim(0)) == 8
        assert len(cube.faces_of_dim(1)) == 12
        assert len(cube.faces_of_dim(2)) == 6
        assert cube.faces_of_dim(3) == [cube]
        assert cube.faces_of_dim(4) == []

    def test_face_counts_cross_polytope(self):
        cross = hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
        assert len(cross.faces_of_dim(0)) == 6
        assert len(cross.faces_of_dim(1)) == 12
        assert len(cross.facets()) == 8

    def test_face_counts_simplex(self):
        from math import comb

        for d in (2, 3, 4):
            s = standard_simplex(d)
            for k in range(d + 1):
                assert len(s.faces_of_dim(k)) == comb(d + 1, k + 1)

    def test_faces_of_lower_dimensional_polytope(self):
        # a square embedded in a diagonal plane of Z^3
        square = hull([(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 2)])
        assert square.dim() == 2
        assert len(square.faces_of_dim(1)) == 4
        assert len(square.faces_of_dim(0)) == 4


class TestOperations:
    def test_minkowski_sum_pentagon(self):
        p1 = hull([(2, 0), (5, 0), (5, 1), (2, 1)])
        p2 = hull([(0, 2), (1, 2), (0, 3)])
        s = minkowski_sum(p1, p2)
        assert s.vertices == ((2, 2), (2, 4), (5, 4), (6, 2), (6, 3))
        assert minkowski_sum(p2, p1) == s
        assert p1 + p2 == s

    def test_support_is_minkowski_additive(self):
        rng = random.Random(12)
        for _ in range(20):
            n = rng.randint(1, 3)
            a = hull([tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + 2)])
            b = hull([tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + 2)])
            s = minkowski_sum(a, b)
            for _ in range(6):
                u = tuple(rng.randint(-4, 4) for _ in range(n))
                assert s.support(u) == a.support(u) + b.support(u)

    def test_sum_with_point_translates(self):
        sq = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        shifted = minkowski_sum(sq, hull([(3, -2)]))
        assert shifted.vertices == ((3, -2), (3, -1), (4, -2), (4, -1))

    def test_dilate(self):
        s = standard_simplex(2)
        assert dilate(s, 3).vertices == ((0, 0), (0, 3), (3, 0))
        assert dilate(s, 1) is s
        assert dilate(s, 0).vertices == ((0, 0),)
        with pytest.raises(ValueError):
            dilate(s, -1)

    def test_dilate_agrees_with_iterated_sum(self):
        p = hull([(0, 0), (2, 1), (1, 3)])
        assert dilate(p, 3) == minkowski_sum(minkowski_sum(p, p), p)

    def test_conv_union(self):
        a = hull([(0, 0), (1, 0)])
        b = hull([(0, 2), (1, 2)])
        u = conv_union(a, b)
        assert u.vertices == ((0, 0), (0, 2), (1, 0), (1, 2))

    def test_equal_and_mismatched_dimensions(self):
        a = standard_simplex(2)
        assert equal(a, hull([(0, 0), (1, 0), (0, 1)]))
        with pytest.raises(ValueError):
            equal(a, standard_simplex(3))
        with pytest.raises(ValueError):
            minkowski_sum(a, standard_simplex(3))


class TestChart:
    def test_full_dimensional_chart_is_identity(self):
        s = standard_simplex(2)
        c = s.chart()
        assert c.to_chart((1, 0)) == (1, 0)
        assert c.to_ambient((0, 1)) == (0, 1)

    def test_diagonal_segment_chart(self):
        seg = hull([(0, 0, 0), (2, 2, 2)])
        c = seg.chart()
        assert c.d == 1
        assert c.to_chart((1, 1, 1)) == (1,)
        assert c.to_ambient(c.to_chart((2, 2, 2))) == (2, 2, 2)

    def test_chart_rejects_points_off_the_hull(self):
        seg = hull([(0, 0, 0), (2, 2, 2)])
        with pytest.raises(ValueError):
            seg.chart().to_chart((1, 1, 0))

    def test_chart_is_saturated_not_just_spanning(self):
        # edge directions (2,0),(0,2) generate an index-4 sublattice; the chart
        # must still reach every lattice point of the plane
        sq = hull([(0, 0, 1), (2, 0, 1), (0, 2, 1), (2, 2, 1)])
        c = sq.chart()
        assert c.to_chart((1, 1, 1)) is not None

    def test_point_chart(self):
        pt = hull([(5, 7)])
        c = pt.chart()
        assert c.d == 0
        assert c.to_chart((5, 7)) == ()
        with pytest.raises(ValueError):
            c.to_chart((5, 8))


class TestMembership:
    def test_contains_point_square(self):
        sq = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        assert contains_point(sq, (1, 1))
        assert contains_point(sq, (0, 2))
        assert contains_point(sq, (2, 1))
        assert not contains_point(sq, (3, 1))
        assert not contains_point(sq, (-1, 0))

    def test_contains_point_lower_dimensional(self):
        seg = hull([(0, 0, 0), (2, 2, 2)])
        assert contains_point(seg, (1, 1, 1))
        assert not contains_point(seg, (1, 1, 0))
        assert not contains_point(seg, (3, 3, 3))

    def test_ambient_constraints_describe_the_polytope(self):
        rng = random.Random(13)
        for _ in range(15):
            n = rng.randint(2, 3)
            p = hull([tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + 2)])
            eqs, ineqs = ambient_constraints(p)
            box = product(*(range(-4, 5) for _ in range(n)))
            for x in box:
                inside = all(
                    sum(c * xi for c, xi in zip(cv, x)) == r for cv, r in eqs
                ) and all(sum(a * xi for a, xi in zip(av, x)) <= b for av, b in ineqs)
                assert inside == contains_point(p, x)

    def test_support_witness(self):
        a = standard_simplex(2)
        b = dilate(a, 2)
        assert support_witness(a, a) is None
        found = support_witness(a, b)
        assert found is not None
        u, ha, hb = found
        assert a.support(u) == ha
        assert b.support(u) == hb
        assert ha != hb


class TestCounting:
    def test_known_counts(self):
        assert lattice_points_count(standard_simplex(2)) == 3
        assert lattice_points_count(hull([(0, 0), (1, 0), (0, 1), (1, 1)])) == 4
        assert lattice_points_count(hull([(0, 0), (2, 0), (0, 2), (2, 2)])) == 9
        assert lattice_points_count(hull([(0, 0), (2, 2)])) == 3
        assert lattice_points_count(hull([(4, 5)])) == 1

    def test_counts_match_ambient_brute_force(self):
        rng = random.Random(14)
        for _ in range(25):
            n = rng.randint(1, 3)
            m = rng.randint(1, n + 3)
            p = hull([tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(m)])
            assert lattice_points_count(p) == brute_lattice_count(p)

    def test_numpy_and_fallback_paths_agree(self, monkeypatch):
        shapes = [
            standard_simplex(3),
            hull([(0, 0, 0), (3, 1, 0), (1, 4, 2), (0, 0, 3), (2, 2, 2)]),
            hull([(-2, 0), (0, -2), (2, 0), (0, 2)]),
        ]
        fast = [lattice_points_count(p) for p in shapes]
        monkeypatch.setattr(poly, "_INT64_SAFE", 0)  # force the pure-python sweep
        poly._facet_data.cache_clear()
        slow = [lattice_points_count(p) for p in shapes]
        assert fast == slow

    def test_lower_dimensional_count_uses_chart(self):
        tri = hull([(0, 0, 0), (2, 0, 2), (0, 2, 2)])
        # lattice points: 3 vertices + 3 edge midpoints + no interior point
        assert lattice_points_count(tri) == 6


class TestJson:
    def test_round_trip(self):
        p = hull([(0, 0), (3, 0), (0, 2), (3, 2)])
        assert polytope_from_json_dict(polytope_to_json_dict(p)) == p

    def test_points_alias_goes_through_hull(self):
        obj = {"points": [[0, 0], [2, 0], [0, 2], [2, 2], [1, 1]]}
        p = polytope_from_json_dict(obj)
        assert p.vertices == ((0, 0), (0, 2), (2, 0), (2, 2))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            polytope_from_json_dict({"n": 3, "vertices": [[0, 0]]})

    def test_missing_keys_rejected(self):
        with pytest.raises(ValueError):
            polytope_from_json_dict({"nope": []})
