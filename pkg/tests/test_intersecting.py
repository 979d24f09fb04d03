"""교차 집합족 탐색과 EKR 형 상한 검증 테스트"""
from itertools import combinations
from math import comb

import numpy as np
import pytest

from models.complex import Complex, SetFamily
from models.exceptions import AugmentationImpossible, HypothesisViolated, OutOfRange, ResourceLimit
from models.face import is_subface, make_face
from services.clique_search import IntersectingCliqueSearch, is_shifted, refine, twin_classes
from services.intersecting import (
    EkrService,
    cross_bound_sperner,
    ekr_bound,
    hilton_milner_bound,
    maximal_sets,
)


def faces(*sets):
    return [make_face(s) for s in sets]


def brute_lex_least(candidates, require_empty_common=False):
    """크기 내림차순, 같은 크기에서는 정수값 정렬 목록의 사전식 순서로 첫 집합족"""
    candidates = sorted(candidates)
    for size in range(len(candidates), 0, -1):
        for family in combinations(candidates, size):
            if any(not a & b for a, b in combinations(family, 2)):
                continue
            common = family[0]
            for member in family[1:]:
                common &= member
            if require_empty_common and common:
                continue
            return list(family)
    return []


def brute_max_intersecting(candidates, require_empty_common=False):
    return len(brute_lex_least(candidates, require_empty_common))


class TestCliqueSearch:
    @pytest.mark.parametrize("facets,n,r", [
        ([[0, 1, 2], [0, 3, 4]], 5, 2),
        ([[0, 1, 2, 3]], 4, 2),
        ([[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 4]], 5, 2),
        ([[0, 1, 2, 3], [0, 4, 5], [3, 5]], 6, 2),
        ([[0, 1, 2], [0, 1, 3], [0, 4]], 5, 2),
        ([[0, 1, 2, 3], [1, 2, 4], [2, 3, 4], [0, 4, 5]], 6, 3),
    ])
    @pytest.mark.parametrize("require_empty_common", [False, True])
    def test_matches_brute_force(self, facets, n, r, require_empty_common):
        candidates = Complex.from_facets(facets, n).faces(r)
        size, witness = IntersectingCliqueSearch(candidates, require_empty_common).search()
        assert size == brute_max_intersecting(candidates, require_empty_common)
        assert witness == brute_lex_least(candidates, require_empty_common)

    @pytest.mark.parametrize("seed", range(12))
    @pytest.mark.parametrize("require_empty_common", [False, True])
    def test_random_complexes(self, generators, seed, require_empty_common):
        candidates = generators.gen_random_complex(6, 2, 0.45, seed=seed).faces(3)
        if len(candidates) > 12:
            candidates = candidates[:12]
        size, witness = IntersectingCliqueSearch(candidates, require_empty_common).search()
        assert size == brute_max_intersecting(candidates, require_empty_common)
        assert witness == brute_lex_least(candidates, require_empty_common)

    @pytest.mark.parametrize("candidates", [
        Complex.from_facets([[0, 1, 2], [0, 1, 3], [0, 4]], 5).faces(2),
        Complex.from_facets([list(range(5))], 5).faces(2),
        Complex.from_facets([[0, 1, 2], [0, 1, 3], [0, 2, 3], [0, 4], [1, 4]], 5).faces(2),
    ])
    @pytest.mark.parametrize("require_empty_common", [False, True])
    def test_shifted_candidates(self, candidates, require_empty_common):
        search = IntersectingCliqueSearch(candidates, require_empty_common)
        assert search.shifted
        size, witness = search.search()
        assert size == brute_max_intersecting(candidates, require_empty_common)
        assert witness == brute_lex_least(candidates, require_empty_common)

    def test_witness_is_lex_least(self):
        candidates = Complex.from_facets([[0, 1, 2, 3]], 4).faces(2)
        _, witness = IntersectingCliqueSearch(candidates).search()
        # {0,1}=3, {0,2}=5, {0,3}=9 는 {0,1},{0,2},{1,2} (3, 5, 6) 보다 뒤
        assert witness == faces([0, 1], [0, 2], [1, 2])

    def test_both_modes_share_one_search(self, simplex):
        search = IntersectingCliqueSearch(simplex(7).faces(3))
        assert search.search(require_empty_common=True)[0] == hilton_milner_bound(7, 3)
        assert search.search()[0] == ekr_bound(7, 3)
        assert search.empty_common_maximum()[0] < search.maximum()

    def test_budget(self):
        candidates = Complex.from_facets([list(range(7))], 7).faces(3)
        with pytest.raises(ResourceLimit):
            IntersectingCliqueSearch(candidates, budget=1).search()

    def test_no_candidates(self):
        assert IntersectingCliqueSearch([]).search() == (0, [])


class TestSearchSymmetry:
    def test_twin_classes(self, two_triangles):
        assert twin_classes(two_triangles.faces(2)) == (0b1, 0b110, 0b11000)

    def test_simplex_vertices_are_all_twins(self, simplex):
        assert twin_classes(simplex(5).faces(2)) == (0b11111,)

    def test_refine(self):
        assert refine((0b1111,), 0b0011) == (0b0011, 0b1100)
        assert refine((0b0011, 0b1100), 0b0110) == (0b0010, 0b0001, 0b0100, 0b1000)
        assert refine(None, 0b1) is None

    def test_is_shifted(self, simplex, two_triangles):
        assert is_shifted(simplex(6).faces(3))
        assert is_shifted(faces([0, 1], [0, 2], [1, 2], [0, 3]))
        assert not is_shifted(two_triangles.faces(2))
        assert not is_shifted(faces([0], [0, 1]))

    def test_twin_orbits_keep_optimum(self, generators):
        # 서로 다른 크기의 단체 합 위의 cone: 각 블록 안의 정점은 쌍둥이
        complex_ = generators.gen_borg_shape(1, [3, 2, 2])
        candidates = complex_.faces(2)
        search = IntersectingCliqueSearch(candidates, require_empty_common=True)
        assert any(group.bit_count() > 1 for group in search.classes)
        assert not search.shifted
        assert search.search() == (brute_max_intersecting(candidates, True), brute_lex_least(candidates, True))


CLASSIC_CASES = [(n, r) for n in range(6, 11) for r in range(1, n // 2 + 1)]
HILTON_MILNER_CASES = [(n, r) for n in range(6, 10) for r in range(2, (n - 1) // 2 + 1)]


@pytest.mark.slow
class TestSimplexSweeps:
    @pytest.mark.parametrize("n,r", CLASSIC_CASES)
    def test_classic_maximum_and_strictness(self, ekr, simplex, n, r):
        complex_ = simplex(n)
        size, witnesses = ekr.max_intersecting(complex_, r)
        nonstar, _ = ekr.max_intersecting(complex_, r, require_empty_common=True)
        assert size == comb(n - 1, r - 1) == ekr.star_bound(complex_, r)[0]
        assert SetFamily(witnesses[0], n, r=r).is_intersecting()
        assert (nonstar < size) == (2 * r < n)

    @pytest.mark.parametrize("n,r", HILTON_MILNER_CASES)
    def test_hilton_milner_value(self, ekr, simplex, n, r):
        size, witnesses = ekr.max_intersecting(simplex(n), r, require_empty_common=True)
        assert size == comb(n - 1, r - 1) - comb(n - r - 1, r - 1) + 1
        family = SetFamily(witnesses[0], n, r=r)
        assert family.is_intersecting()
        assert not family.has_common_intersection()

    @pytest.mark.parametrize("n,r", [(6, 2), (7, 2), (7, 3), (8, 3)])
    def test_check_ekr_reports(self, ekr, simplex, n, r):
        report = ekr.check_ekr(simplex(n), r, strict=True)
        assert report.max_size == ekr_bound(n, r)
        assert report.nonstar_max_size == hilton_milner_bound(n, r)
        assert report.strict
        assert not report.violation

    @pytest.mark.parametrize("n,r", [(7, 2), (6, 3)])
    def test_classic_cross_bound_is_attained(self, ekr, simplex, n, r):
        report = ekr.check_cross_classic(simplex(n), r, tuple(range(r)))
        assert report.observed_max_sum == report.bound == comb(n, r) - comb(n - r, r) + 1


class TestBounds:
    def test_formulas(self):
        assert ekr_bound(6, 2) == 5
        assert hilton_milner_bound(7, 3) == 13
        assert cross_bound_sperner(6, 2) == 10

    def test_maximal_sets(self):
        assert maximal_sets(faces([0], [0, 1], [2])) == faces([0, 1], [2])


class TestEkr:
    def test_simplex_pairs(self, ekr, simplex):
        assert ekr.max_intersecting(simplex(6), 2) == (5, [faces([0, 1], [0, 2], [0, 3], [0, 4], [0, 5])])

    def test_simplex_pairs_without_common_point(self, ekr, simplex):
        size, witnesses = ekr.max_intersecting(simplex(6), 2, require_empty_common=True)
        assert size == 3
        assert witnesses == [faces([0, 1], [0, 2], [1, 2])]

    def test_points(self, ekr, simplex):
        assert ekr.max_intersecting(simplex(4), 1)[0] == 1

    def test_rank_out_of_range(self, ekr, simplex):
        with pytest.raises(OutOfRange):
            ekr.max_intersecting(simplex(4), 0)

    def test_face_limit(self, homology, shifting, simplex):
        service = EkrService(face_limit=10, homology=homology, shifting=shifting)
        with pytest.raises(ResourceLimit):
            service.max_intersecting(simplex(6), 2)

    def test_star_size(self, ekr, two_triangles):
        assert ekr.star_size(two_triangles, 0, 2) == 4
        assert ekr.star_bound(two_triangles, 2) == (4, 0)

    def test_strict_holds(self, ekr, simplex):
        report = ekr.check_ekr(simplex(7), 3, strict=True)
        assert report.max_size == 15
        assert report.nonstar_max_size == hilton_milner_bound(7, 3)
        assert report.holds_ekr
        assert report.strict
        assert report.strict_hypotheses
        assert not report.violation

    def test_strict_fails_outside_hypotheses(self, ekr, simplex):
        report = ekr.check_ekr(simplex(6), 3, strict=True)
        assert report.max_size == 10
        assert report.nonstar_max_size == 10
        assert report.strict is False
        assert not report.strict_hypotheses
        assert not report.violation

    def test_two_triangles(self, ekr, two_triangles):
        report = ekr.check_ekr(two_triangles, 2)
        assert report.max_size == 4
        assert report.best_star_vertex == 0
        assert report.holds_ekr

    def test_cone_with_isolated_vertex(self, ekr, generators):
        complex_ = generators.gen_uniform_matroid(5, 3, coloops=1)
        report = ekr.check_ekr(complex_, 2, strict=True)
        assert report.holds_ekr
        assert report.max_size == report.star_bound

    def test_apex_star_is_maximum_on_strict_near_cones(self, ekr, generators, boundary):
        complexes = [
            generators.gen_uniform_matroid(5, 4, coloops=1),
            generators.gen_borg_shape(4, [2, 1]),
            generators.gen_cone(boundary(4), 2),
        ]
        for complex_ in complexes:
            report = ekr.check_ekr(complex_, 2, strict=True)
            assert report.strict_hypotheses
            assert report.strict
            for apex in complex_.near_cone_apexes():
                assert report.max_size == ekr.star_size(complex_, apex, 2)
            witness = SetFamily(report.witnesses[0], complex_.n_vertices, r=2)
            assert witness.is_intersecting()
            assert witness.has_common_intersection()

    @pytest.mark.parametrize("facets,n,r", [
        ([[0, 1, 2], [0, 3, 4]], 5, 2),
        ([[0, 1, 2, 3, 4, 5]], 6, 3),
        ([[0, 1], [1, 2], [2, 3]], 4, 2),
        ([[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 4]], 5, 2),
        ([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], 4, 2),
        ([[0, 1, 2, 3, 4, 5, 6]], 7, 3),
    ])
    def test_empty_common_maximum_decides_strictness(self, ekr, facets, n, r):
        report = ekr.check_ekr(Complex.from_facets(facets, n), r, strict=True)
        assert report.nonstar_max_size <= report.max_size
        assert (report.nonstar_max_size == report.max_size) == (report.strict is False)


class TestStability:
    def test_simplex(self, ekr, simplex):
        report = ekr.check_stability(simplex(7), 2, (0, 1, 2))
        assert report.beta == 4
        assert report.hm_bound == 3
        assert report.observed_max_nonstar == 3
        assert report.extremal_size == 3
        assert report.extremal_family.sets == tuple(faces([0, 1], [0, 2], [1, 2]))
        assert report.holds

    def test_simplex_three_sets(self, ekr, simplex):
        report = ekr.check_stability(simplex(7), 3, (0, 1, 2, 3))
        assert report.hm_bound == hilton_milner_bound(7, 3)
        assert report.observed_max_nonstar == report.hm_bound
        assert report.extremal_size == report.hm_bound

    def test_wrong_prefix_length(self, ekr, simplex):
        with pytest.raises(HypothesisViolated) as e:
            ekr.check_stability(simplex(7), 2, (0, 1))
        assert any("prefix" in message for message in e.value.failures)

    def test_depth_too_small(self, ekr, two_triangles):
        with pytest.raises(HypothesisViolated):
            ekr.check_stability(two_triangles, 2, (0, 1, 2))

    def test_counts(self, ekr, two_triangles):
        assert ekr.beta_count(two_triangles, 2, (0, 1)) == 3
        assert ekr.gamma_count(two_triangles, 2, (0, 1)) == 1


class TestCross:
    def test_classic_simplex(self, ekr, simplex):
        report = ekr.check_cross_classic(simplex(6), 2, (0, 1))
        assert report.gamma == 6
        assert report.bound == 10
        assert report.observed_max_sum == 10
        assert report.holds
        assert len(report.witness_a) + len(report.witness_b) == 10
        assert all(a & b for a in report.witness_a for b in report.witness_b)

    def test_classic_enumeration_limit(self, homology, shifting, simplex):
        service = EkrService(cross_limit=10, homology=homology, shifting=shifting)
        with pytest.raises(ResourceLimit):
            service.check_cross_classic(simplex(6), 2, (0, 1))

    def test_shadow_enumeration_limit(self, homology, shifting, simplex):
        service = EkrService(cross_limit=10, homology=homology, shifting=shifting)
        with pytest.raises(ResourceLimit):
            service.check_cross_shadow(simplex(6), 2, (0, 1))

    def test_shadow_ignores_face_limit(self, homology, shifting, simplex):
        service = EkrService(face_limit=10, homology=homology, shifting=shifting)
        assert service.check_cross_shadow(simplex(6), 2, (0, 1)).holds

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_classic_singleton_construction_meets_bound(self, ekr, simplex, n):
        complex_ = simplex(n)
        report = ekr.check_cross_classic(complex_, 2, (0, 1))
        single = make_face([0, 1])
        partners = [face for face in complex_.faces(2) if face & single]
        assert len(partners) + 1 == report.bound == report.observed_max_sum

    def test_max_cross_pair_brute_force(self, ekr, simplex):
        candidates = list(simplex(5).faces(2))
        best = 0
        for size in range(1, len(candidates) + 1):
            for chosen in combinations(candidates, size):
                partners = [f for f in candidates if all(f & b for b in chosen)]
                if partners:
                    best = max(best, size + len(partners))
        assert ekr.max_cross_pair(candidates)[0] == best

    def test_shadow_simplex(self, ekr, simplex):
        report = ekr.check_cross_shadow(simplex(6), 2, (0, 1))
        assert report.bound == 3
        assert report.observed_max_sum == 3
        assert report.holds
        (big,) = report.witness_b
        assert all(is_subface(small, big) for small in report.witness_a)

    def test_shadow_hypotheses(self, ekr, simplex):
        with pytest.raises(HypothesisViolated):
            ekr.check_cross_shadow(simplex(3), 3, (0, 1, 2))

    def test_sperner(self, ekr, simplex):
        complex_ = simplex(6)
        first = SetFamily.from_sets([[0]], 6)
        second = SetFamily.from_sets([[0, 1], [0, 2]], 6)
        report = ekr.check_cross_sperner(complex_, 2, (0, 1), first, second)
        assert report.variant == "sperner"
        assert report.bound == 10
        assert report.observed_max_sum == 3
        assert report.holds

    def test_sperner_requires_cross_intersecting(self, ekr, simplex):
        first = SetFamily.from_sets([[0]], 6)
        second = SetFamily.from_sets([[1, 2]], 6)
        with pytest.raises(HypothesisViolated):
            ekr.check_cross_sperner(simplex(6), 2, (0, 1), first, second)


class TestHibiAndAugmentation:
    def test_simplex_injection(self, ekr, simplex):
        result = ekr.hibi_injection(simplex(5), 1, 2)
        assert result.exists
        assert len(set(result.injection.values())) == 5
        assert all(is_subface(small, large) for small, large in result.injection.items())

    def test_two_triangles_have_no_injection(self, ekr, two_triangles):
        result = ekr.hibi_injection(two_triangles, 2, 3)
        assert not result.exists
        assert len(result.hall_violator) > len(result.hall_neighbors)
        for large in two_triangles.faces(3):
            touches = any(is_subface(small, large) for small in result.hall_violator)
            assert touches == (large in result.hall_neighbors)

    def test_augment(self, ekr, simplex):
        family = SetFamily.from_sets([[0], [1, 2]], 5)
        augmented = ekr.augment_sperner(family, simplex(5), 2)
        assert augmented.is_uniform and augmented.r == 2
        assert len(augmented) == 2
        assert make_face([1, 2]) in augmented
        (grown,) = [s for s in augmented if s != make_face([1, 2])]
        assert is_subface(make_face([0]), grown)

    def test_augment_uniform_is_unchanged(self, ekr, simplex):
        family = SetFamily.from_sets([[0, 1]], 5, r=2)
        assert ekr.augment_sperner(family, simplex(5), 2) is family

    def test_augment_impossible(self, ekr):
        complex_ = Complex.from_facets([[0, 1], [2]], 3)
        family = SetFamily.from_sets([[0], [1]], 3)
        with pytest.raises(AugmentationImpossible) as e:
            ekr.augment_sperner(family, complex_, 2)
        assert e.value.hall_witness == faces([0], [1])


class TestReductionTrace:
    def test_outcome_a(self, ekr, simplex):
        family = SetFamily.from_sets([[1, 2], [1, 3], [2, 3]], 5)
        trace = ekr.reduction_trace(simplex(5), family, 0)
        assert trace.outcome == "A"
        assert trace.shift_trace.outcome.sets == tuple(faces([0, 2], [0, 3], [2, 3]))
        assert trace.boundary_witness == make_face([0, 2, 3])
        assert trace.alg_shift_common_empty
        assert trace.verified

    def test_outcome_b(self, ekr, simplex):
        family = SetFamily.from_sets([[0, 1, 4], [0, 2, 4], [0, 3, 4], [1, 2, 3]], 6)
        trace = ekr.reduction_trace(simplex(6), family, 0)
        assert trace.outcome == "B"
        assert trace.blocking_pair == (0, 1)
        assert set(trace.phi.values()) == set(faces([1, 4], [2, 3], [2, 4], [3, 4]))
        assert trace.phi_injective
        assert trace.phi_surjective is False
        assert trace.missing_facet == make_face(range(6))
        assert trace.missing_set == make_face([2, 5])
        assert trace.b_t_size == 2
        assert trace.c_t_size == 1
        assert trace.alt_b == faces([2, 4], [3, 4])
        assert trace.alt_c == faces([2, 3])
        assert trace.alt_cross_intersecting
        assert trace.verified

    def test_rejects_star(self, ekr, simplex):
        family = SetFamily.from_sets([[0, 1, 2], [0, 1, 3]], 5)
        with pytest.raises(HypothesisViolated):
            ekr.reduction_trace(simplex(5), family, 0)

    def test_rejects_non_near_cone(self, ekr, path_complex):
        family = SetFamily.from_sets([[0, 1], [1, 2]], 4)
        with pytest.raises(HypothesisViolated):
            ekr.reduction_trace(path_complex, family, 0)


class TestStabilityTrace:
    def test_case_one(self, ekr, simplex):
        family = SetFamily.from_sets([[1, 2], [1, 3], [2, 3]], 7)
        trace = ekr.stability_trace(simplex(7), family, (0, 1, 2))
        assert trace.case == 1
        assert trace.boundary_witness == make_face([0, 2, 3])
        assert trace.verified

    def test_case_two(self, ekr, simplex):
        family = SetFamily.from_sets([[0, 1, 4], [0, 2, 4], [0, 3, 4], [1, 2, 3]], 7)
        trace = ekr.stability_trace(simplex(7), family, (0, 1, 2, 3))
        assert trace.case == 2
        assert trace.added_faces == faces([0, 1, 2], [0, 1, 3], [0, 1, 5], [0, 1, 6])
        assert trace.boundary_witness == make_face([0, 1, 2, 3])
        assert make_face([0, 2, 3]) in trace.second_trace.outcome
        assert trace.verified


class TestRestriction:
    def test_uniform(self):
        family = SetFamily.from_sets([[0, 3], [1, 2]], 4)
        with_last, without_last = EkrService.restrict_at_last(family, 3)
        assert with_last.sets == tuple(faces([0]))
        assert with_last.r == 1
        assert without_last.sets == tuple(faces([1, 2]))

    def test_sperner(self):
        family = SetFamily.from_sets([[3], [0, 1]], 4)
        with_last, without_last = EkrService.restrict_at_last(family, 3)
        assert with_last.sets == (0,)
        assert without_last.sets == tuple(faces([0, 1]))

    @pytest.mark.parametrize("seed", range(8))
    def test_shifted_cross_pair_still_meets_on_last_vertex(self, shifting, seed):
        n, r = 7, 3
        rng = np.random.default_rng(seed)
        triples = [make_face(c) for c in combinations(range(n), r)]
        picked = [face for face, draw in zip(triples, rng.random(len(triples))) if draw < 0.15] or triples[-1:]
        first = SetFamily(picked, n, r=r)
        second = SetFamily([face for face in triples if all(face & a for a in first)], n, r=r)
        # 같은 순서로 함께 shift 하면 cross-intersecting 이 유지된다
        changed = True
        while changed:
            changed = False
            for i in range(n):
                for j in range(i + 1, n):
                    moved_first = shifting.comb_shift(first, i, j)
                    moved_second = shifting.comb_shift(second, i, j)
                    if moved_first != first or moved_second != second:
                        first, second, changed = moved_first, moved_second, True
        assert first.is_shifted() and second.is_shifted()
        assert first.cross_intersects(second)
        first_with, first_without = EkrService.restrict_at_last(first, n - 1)
        second_with, second_without = EkrService.restrict_at_last(second, n - 1)
        assert first_with.cross_intersects(second_with)
        assert first_without.cross_intersects(second_without)
        assert len(first_with) + len(first_without) == len(first)
