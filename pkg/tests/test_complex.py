"""복합체, 집합족, prefix 테스트"""
from itertools import combinations

import numpy as np
import pytest

from models.complex import Complex, SetFamily, VertexPrefix, shadow, spans_simplex_boundary
from models.exceptions import EmptyInput, InvalidPrefix, NotAFace, NotSperner, NotUniform, VertexOutOfRange
from models.face import face_members, format_face, lex_key, make_face, sort_faces, subfaces_of_size, swap
from models.graph import Graph, independence_complex


def brute_faces(complex_, k):
    found = set()
    for facet in complex_.facets:
        for combo in combinations(face_members(facet), k):
            found.add(make_face(combo))
    return found


class TestFace:
    def test_make_face_and_members(self):
        face = make_face([3, 0, 2])
        assert face_members(face) == (0, 2, 3)
        assert format_face(face) == "{0,2,3}"
        assert format_face(face, ["a", "b", "c", "d"]) == "{a,c,d}"

    def test_make_face_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            make_face([5], 5)

    def test_lex_order_compares_ascending_tuples(self):
        faces = [make_face([1, 2]), make_face([0, 3]), make_face([0, 1])]
        assert sort_faces(faces) == [make_face([0, 1]), make_face([0, 3]), make_face([1, 2])]
        assert lex_key(make_face([0, 3])) < lex_key(make_face([1, 2]))

    def test_swap(self):
        assert swap(make_face([1, 2]), 2, 0) == make_face([0, 1])


class TestComplexConstruction:
    def test_two_triangles_f_vector(self, two_triangles):
        assert len(two_triangles.facets) == 2
        assert two_triangles.f_vector() == (1, 5, 6, 2)

    def test_subsumed_facet_dropped(self):
        complex_ = Complex.from_facets([[0], [0, 1]], 2)
        assert complex_.facets == (make_face([0, 1]),)

    def test_path_f_vector(self, path_complex):
        assert path_complex.f_vector() == (1, 4, 3)

    def test_void_rejected(self):
        with pytest.raises(EmptyInput):
            Complex.from_facets([], 3)

    def test_vertex_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            Complex.from_facets([[0, 4]], 3)

    def test_empty_complex_is_allowed(self):
        complex_ = Complex.from_masks([0], 0)
        assert complex_.dim == -1
        assert complex_.f_vector() == (1,)


class TestFaces:
    def test_edges_of_two_triangles(self, two_triangles):
        assert len(two_triangles.faces(2)) == 6

    def test_empty_face(self, two_triangles):
        assert two_triangles.faces(0) == (0,)

    def test_boundary_triangles(self, boundary):
        assert boundary(4).faces(3) == tuple(
            make_face(c) for c in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        )

    def test_beyond_dimension_is_empty(self, two_triangles):
        assert two_triangles.faces(4) == ()

    @pytest.mark.parametrize("facets", [
        [[0, 1, 2], [0, 3, 4]],
        [[0, 1], [1, 2], [2, 3]],
        [[0, 1, 2, 3], [2, 3, 4], [4, 5], [6]],
        [[0, 2, 4], [1, 3, 5], [0, 1, 6, 7]],
    ])
    def test_face_counts_match_enumeration(self, facets):
        n = max(max(f) for f in facets) + 1
        complex_ = Complex.from_facets(facets, n)
        for k in range(complex_.dim + 2):
            assert set(complex_.faces(k)) == brute_faces(complex_, k)


class TestLinkDeletionSkeleton:
    def test_link_of_cone_point(self, two_triangles):
        link = two_triangles.link(make_face([0]))
        assert link.facets == (make_face([1, 2]), make_face([3, 4]))

    def test_link_of_empty_face(self, two_triangles):
        assert two_triangles.link(0) == two_triangles

    def test_link_in_simplex(self, simplex):
        link = simplex(5).link(make_face([0, 1]))
        assert link.facets == (make_face([2, 3, 4]),)

    def test_link_not_a_face(self, two_triangles):
        with pytest.raises(NotAFace):
            two_triangles.link(make_face([1, 3]))

    def test_deletion(self, two_triangles):
        assert two_triangles.deletion(0).facets == (make_face([1, 2]), make_face([3, 4]))

    def test_deletion_of_simplex(self, simplex):
        assert simplex(4).deletion(3).facets == (make_face([0, 1, 2]),)

    def test_link_and_deletion_commute(self):
        complex_ = Complex.from_facets([[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 4]], 5)
        face = make_face([2])
        v = 0
        assert complex_.link(face).deletion(v) == complex_.deletion(v).link(face)

    @pytest.mark.parametrize("seed", range(6))
    def test_link_and_deletion_commute_everywhere(self, generators, seed):
        complex_ = generators.gen_random_complex(6, 2, 0.5, seed=seed)
        for v in complex_.vertices:
            deleted = complex_.deletion(v)
            for face in deleted.all_faces():
                assert complex_.link(face).deletion(v) == deleted.link(face)

    def test_skeleton(self, two_triangles, simplex):
        assert two_triangles.skeleton(1).f_vector() == (1, 5, 6)
        assert two_triangles.skeleton(2) == two_triangles
        assert len(simplex(4).skeleton(1).facets) == 6

    def test_min_facet_size(self, two_triangles, simplex):
        assert two_triangles.min_facet_size == 3
        assert simplex(4).min_facet_size == 4


class TestShiftedness:
    def test_shifted_family(self):
        family = SetFamily.from_sets([[0, 1, 2], [0, 1, 3]], 5)
        assert family.is_shifted_wrt(VertexPrefix(tuple(range(5))))
        assert family.is_shifted()

    def test_not_shifted_wrt_first_vertex(self):
        family = SetFamily.from_sets([[1, 2]], 3)
        assert not family.is_shifted_wrt([0])

    def test_near_cone(self, two_triangles, path_complex):
        assert two_triangles.is_near_cone(0)
        assert two_triangles.is_cone(0)
        assert not path_complex.is_near_cone(0)
        assert two_triangles.common_vertices() == (0,)

    def test_apex_link_is_largest(self, generators, two_triangles):
        complexes = [
            two_triangles,
            generators.gen_uniform_matroid(4, 2, coloops=1),
            generators.gen_borg_shape(1, [2, 2, 1]),
            generators.gen_cone(generators.gen_random_complex(5, 2, 0.6, seed=3)),
            Complex.from_facets([[0, 1, 2], [0, 1, 3], [0, 2, 3], [0, 4], [1, 4]], 5),
        ]
        for complex_ in complexes:
            apexes = complex_.near_cone_apexes()
            assert apexes
            for a in apexes:
                apex_link = complex_.link(make_face([a]))
                for v in complex_.vertices:
                    link = complex_.link(make_face([v]))
                    for k in range(complex_.dim + 1):
                        assert link.f(k) <= apex_link.f(k)

    @pytest.mark.parametrize("facets,n", [
        ([[0, 1, 2], [0, 3, 4]], 5),
        ([[0, 1], [0, 2], [0, 3], [1, 2]], 4),
        ([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], 4),
        ([[0, 1], [1, 2], [2, 3]], 4),
        ([[0, 1, 2], [0, 1, 3], [0, 4]], 5),
        ([[0, 1, 2], [0, 3], [1, 3], [4]], 5),
    ])
    def test_t_fold_near_cone_matches_shiftedness(self, facets, n):
        complex_ = Complex.from_facets(facets, n)
        for t in range(1, 4):
            for prefix in combinations(range(n), t):
                assert complex_.is_t_fold_near_cone(prefix) == complex_.is_shifted_wrt(prefix)
                if complex_.is_t_fold_near_cone(prefix):
                    assert complex_.is_recursive_near_cone(prefix)

    def test_maximal_shifted_prefix(self, two_triangles, simplex):
        assert two_triangles.maximal_shifted_prefix() == VertexPrefix((0,))
        assert len(simplex(4).maximal_shifted_prefix()) == 4

    def test_prefix_must_increase(self):
        with pytest.raises(InvalidPrefix):
            VertexPrefix((2, 1))
        with pytest.raises(InvalidPrefix):
            VertexPrefix.of((0, 5), 5)


class TestSetFamily:
    def test_uniform_mode_rejects_other_sizes(self):
        with pytest.raises(NotUniform):
            SetFamily.from_sets([[0, 1], [2]], 3, r=2)

    def test_sperner_mode_rejects_containment(self):
        with pytest.raises(NotSperner):
            SetFamily.from_sets([[0], [0, 1]], 3)

    def test_sperner_mode(self):
        family = SetFamily.from_sets([[0], [1, 2]], 3)
        assert not family.is_uniform
        assert family.is_sperner()

    def test_intersections(self):
        triangle = SetFamily.from_sets([[0, 1], [0, 2], [1, 2]], 3)
        assert triangle.is_intersecting()
        assert not triangle.has_common_intersection()
        star = SetFamily.from_sets([[0, 1], [0, 2]], 3)
        assert star.common_intersection() == make_face([0])
        assert star.cross_intersects(triangle)

    def test_shadow(self):
        assert shadow(SetFamily.from_sets([[0, 1, 2]], 3)).sets == tuple(
            make_face(c) for c in [(0, 1), (0, 2), (1, 2)]
        )
        all_triples = SetFamily((make_face(c) for c in combinations(range(4), 3)), 4, r=3)
        assert len(shadow(all_triples)) == 6
        assert shadow(SetFamily.from_sets([[0, 1], [2, 3]], 4)).sets == tuple(make_face([v]) for v in range(4))

    def test_shadow_requires_uniform(self):
        with pytest.raises(NotUniform):
            shadow(SetFamily.from_sets([[0], [1, 2]], 3))

    @pytest.mark.parametrize("seed", range(5))
    def test_iterated_shadow_is_direct_shadow(self, seed):
        rng = np.random.default_rng(seed)
        quads = [make_face(c) for c in combinations(range(7), 4)]
        chosen = [face for face, draw in zip(quads, rng.random(len(quads))) if draw < 0.3] or quads[:1]
        family = SetFamily(chosen, 7, r=4)
        direct = {small for member in family for small in subfaces_of_size(member, 2)}
        twice = shadow(shadow(family))
        assert twice.r == 2
        assert twice.members == direct

    def test_spans_simplex_boundary(self):
        triangle = SetFamily.from_sets([[0, 1], [0, 2], [1, 2]], 4)
        assert spans_simplex_boundary(triangle) == make_face([0, 1, 2])
        star = SetFamily.from_sets([[0, 1], [0, 2], [0, 3]], 4)
        assert spans_simplex_boundary(star) is None
        partial = SetFamily.from_sets([[0, 1, 2], [0, 1, 3], [0, 2, 3]], 4)
        assert spans_simplex_boundary(partial) is None


class TestIndependenceComplex:
    def test_path(self):
        graph = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        complex_ = independence_complex(graph)
        assert complex_.facets == (make_face([0, 2]), make_face([0, 3]), make_face([1, 3]))

    def test_edgeless_graph_is_simplex(self):
        assert independence_complex(Graph.from_edges(4, [])).is_simplex

    def test_complete_graph_is_points(self):
        edges = list(combinations(range(4), 2))
        complex_ = independence_complex(Graph.from_edges(4, edges))
        assert complex_.facets == tuple(make_face([v]) for v in range(4))

    def test_loop_rejected(self):
        with pytest.raises(VertexOutOfRange):
            Graph.from_edges(3, [(1, 1)])
