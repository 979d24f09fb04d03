"""교차(intersecting) 집합족 검증 서비스

EKR 상한, strict EKR, Hilton-Milner 형 안정성, cross-intersecting 상한과
그 증명 절차(apex shift 에 의한 축소)를 작은 복합체에서 전수 탐색으로 확인한다.
"""
import logging
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import bipartite

from models.complex import Complex, PrefixLike, SetFamily, VertexPrefix, as_prefix
from models.exceptions import (
    AugmentationImpossible,
    ConsistencyError,
    OutOfRange,
    ResourceLimit,
)
from models.face import Face, bit, face_size, is_subface, make_face, sort_faces, subfaces_of_size
from models.finite_field import DEFAULT_PRIME
from models.schemas import (
    CrossReport,
    EkrReport,
    HibiResult,
    ReductionTrace,
    StabilityReport,
    StabilityTrace,
)
from services.clique_search import DEFAULT_NODE_BUDGET, IntersectingCliqueSearch
from services.homology import HomologyService
from services.shifting import ShiftingService
from utils.validators import HypothesisValidator

logger = logging.getLogger(__name__)


def ekr_bound(n: int, r: int) -> int:
    """단체 위 교차 집합족 상한 C(n-1, r-1)"""
    return comb(n - 1, r - 1)


def hilton_milner_bound(n: int, r: int) -> int:
    """공통 교집합이 없는 교차 집합족 상한"""
    return comb(n - 1, r - 1) - comb(n - r - 1, r - 1) + 1


def cross_bound_sperner(n: int, r: int) -> int:
    """비어 있지 않은 cross-intersecting Sperner 쌍의 |A|+|B| 상한"""
    return comb(n, r) - comb(n - r, r) + 1


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def maximal_sets(sets) -> List[Face]:
    """포함 관계로 극대인 집합 (사전식)"""
    unique = set(sets)
    return sort_faces(s for s in unique if not any(s != t and is_subface(s, t) for t in unique))


class EkrService:
    """EKR 형 정리 검증 서비스"""

    DEFAULT_FACE_LIMIT = 2000
    DEFAULT_NODE_BUDGET = DEFAULT_NODE_BUDGET
    DEFAULT_CROSS_LIMIT = 24

    def __init__(
        self,
        p: int = DEFAULT_PRIME,
        face_limit: Optional[int] = None,
        budget: Optional[int] = None,
        cross_limit: Optional[int] = None,
        seeds: Sequence[int] = (),
        homology: Optional[HomologyService] = None,
        shifting: Optional[ShiftingService] = None,
    ):
        self.p = p
        self.face_limit = face_limit or self.DEFAULT_FACE_LIMIT
        self.budget = budget or self.DEFAULT_NODE_BUDGET
        self.cross_limit = cross_limit or self.DEFAULT_CROSS_LIMIT
        self.seeds = list(seeds)
        self.homology = homology or HomologyService(p)
        self.shifting = shifting or ShiftingService(p, homology=self.homology)

    def _depth(self, complex_: Complex) -> int:
        return self.homology.depth(complex_, cross_check=False).depth

    # star
    @staticmethod
    def star_size(complex_: Complex, v: int, r: int) -> int:
        """v 를 포함하는 r-원소 면의 수 = f_{r-1}(link v)"""
        return sum(1 for face in complex_.faces(r) if face & bit(v))

    def star_bound(self, complex_: Complex, r: int) -> Tuple[int, Optional[int]]:
        """(max_v f_{r-1}(link v), 최대를 주는 가장 작은 정점)"""
        best, best_vertex = 0, None
        for v in complex_.vertices:
            size = self.star_size(complex_, v, r)
            if size > best:
                best, best_vertex = size, v
        return best, best_vertex

    # 최대 교차 집합족
    def _clique_search(self, complex_: Complex, r: int) -> IntersectingCliqueSearch:
        if r < 1:
            raise OutOfRange(f"r은 1 이상이어야 합니다: {r}")
        faces = complex_.faces(r)
        if len(faces) > self.face_limit:
            raise ResourceLimit(f"f_{r} = {len(faces)}가 한도 {self.face_limit}를 넘습니다")
        return IntersectingCliqueSearch(faces, budget=self.budget)

    def max_intersecting(
        self,
        complex_: Complex,
        r: int,
        require_empty_common: bool = False,
    ) -> Tuple[int, List[List[Face]]]:
        """
        F_r(Δ) 안의 최대 교차 집합족

        Args:
            complex_: 복합체
            r: 면 크기 (≥ 1)
            require_empty_common: 공통 교집합이 빈 집합족으로 제한

        Returns:
            Tuple[int, List[List[Face]]]: (최대 크기, [사전식 최소 증인])

        Raises:
            ResourceLimit: 면 개수 또는 노드 예산 초과
        """
        search = self._clique_search(complex_, r)
        logger.info(f"Intersecting search: {len(search.faces)} faces, r={r}, empty_common={require_empty_common}")
        size, witness = search.search(require_empty_common)
        return size, ([witness] if size else [])

    def check_ekr(self, complex_: Complex, r: int, strict: bool = False) -> EkrReport:
        """
        EKR 상한 (와 strict EKR) 검사

        strict 판정은 공통 교집합이 없는 최대 집합족을 따로 탐색해 비교한다.
        두 탐색은 같은 탐색기를 써서 앞선 결과를 다시 쓴다.
        """
        search = self._clique_search(complex_, r)
        nonstar_witnesses: List[List[Face]] = []
        if strict:
            nonstar, nonstar_witness = search.search(require_empty_common=True)
            nonstar_witnesses = [nonstar_witness] if nonstar else []
        max_size, witness = search.search()
        star, best_vertex = self.star_bound(complex_, r)
        report = EkrReport(
            r=r,
            max_size=max_size,
            star_bound=star,
            best_star_vertex=best_vertex,
            holds_ekr=max_size <= star,
            witnesses=[witness] if max_size else [],
        )
        if strict:
            report.nonstar_max_size = nonstar
            report.strict = nonstar < max_size and max_size == star
            report.witnesses.extend(nonstar_witnesses)
            report.strict_hypotheses = bool(complex_.near_cone_apexes()) and self._depth(complex_) >= 2 * r
        if report.violation:
            logger.warning(f"EKR 위반: r={r}, max={max_size}, star={star}, strict={report.strict}")
        return report

    # β / γ
    @staticmethod
    def beta_count(complex_: Complex, r: int, prefix: PrefixLike) -> int:
        """v_1 은 포함하고 나머지 prefix 정점은 포함하지 않는 r-원소 면의 수"""
        prefix = as_prefix(prefix)
        first = bit(prefix[0])
        mask = prefix.mask
        return sum(1 for face in complex_.faces(r) if face & mask == first)

    @staticmethod
    def gamma_count(complex_: Complex, k: int, prefix: PrefixLike) -> int:
        """prefix 정점을 하나도 포함하지 않는 k-원소 면의 수"""
        mask = as_prefix(prefix).mask
        return sum(1 for face in complex_.faces(k) if not face & mask)

    # 안정성
    def extremal_family(self, complex_: Complex, r: int, prefix: VertexPrefix) -> SetFamily:
        """A = {v_2..v_{r+1}} 와 v_1 을 포함하며 A 와 만나는 r-원소 면 전체"""
        v1 = bit(prefix[0])
        rest = prefix.mask & ~v1
        members = [face for face in complex_.faces(r) if face & v1 and face & rest]
        if complex_.contains(rest) and face_size(rest) == r:
            members.append(rest)
        return SetFamily(members, complex_.n_vertices, r=r)

    def check_stability(self, complex_: Complex, r: int, prefix: PrefixLike) -> StabilityReport:
        """
        공통 교집합이 없는 교차 집합족 크기를 f_{r-1}(link v_1) - β + 1 과 비교

        Raises:
            HypothesisViolated: prefix 길이, depth 조건, shifted 조건 위반
        """
        prefix = VertexPrefix.of(as_prefix(prefix), complex_.n_vertices)
        depth = self._depth(complex_)
        HypothesisValidator.require([
            HypothesisValidator.prefix_length(prefix, r + 1),
            HypothesisValidator.rank_in_range(r, depth, "stability"),
            HypothesisValidator.shifted_wrt(complex_, prefix),
        ])
        beta = self.beta_count(complex_, r, prefix)
        bound = self.star_size(complex_, prefix[0], r) - beta + 1
        observed, witnesses = self.max_intersecting(complex_, r, require_empty_common=True)
        return StabilityReport(
            r=r,
            prefix=prefix,
            beta=beta,
            hm_bound=bound,
            observed_max_nonstar=observed,
            extremal_family=self.extremal_family(complex_, r, prefix),
            witness=witnesses[0] if witnesses else [],
        )

    # cross-intersecting
    def _cross_hypotheses(self, complex_: Complex, r: int, prefix: VertexPrefix, kind: str) -> None:
        depth = self._depth(complex_)
        HypothesisValidator.require([
            HypothesisValidator.prefix_length(prefix, r),
            HypothesisValidator.rank_in_range(r, depth, kind),
            HypothesisValidator.shifted_wrt(complex_, prefix),
        ])

    def _tick(self, nodes: List[int]) -> None:
        nodes[0] += 1
        if nodes[0] > self.budget:
            raise ResourceLimit(f"탐색 노드 예산 {self.budget}을 초과했습니다")

    def max_cross_pair(self, faces: Sequence[Face]) -> Tuple[int, List[Face], List[Face]]:
        """
        비어 있지 않은 cross-intersecting 쌍 (A, B) 의 |A|+|B| 최대값

        B 의 Galois 닫힘만 NextClosure 로 열거하고 A = B 의 모든 원소와 만나는 면 전체로 둔다.
        """
        faces = list(faces)
        m = len(faces)
        full = (1 << m) - 1
        meets = [0] * m
        for i in range(m):
            for j in range(m):
                if faces[i] & faces[j]:
                    meets[i] |= 1 << j

        def prime(selection: int) -> int:
            result = full
            for i in _bits(selection):
                result &= meets[i]
            return result

        def closure(selection: int) -> int:
            return prime(prime(selection))

        nodes = [0]
        best, best_b, best_a = 0, 0, 0
        current = closure(0)
        while True:
            self._tick(nodes)
            partners = prime(current)
            if current and partners:
                value = bin(current).count("1") + bin(partners).count("1")
                if value > best:
                    best, best_b, best_a = value, current, partners
            following = None
            for i in range(m - 1, -1, -1):
                if current & (1 << i):
                    continue
                low = current & ((1 << i) - 1)
                candidate = closure(low | (1 << i))
                if candidate & ((1 << i) - 1) == low:
                    following = candidate
                    break
            if following is None:
                break
            current = following
        logger.debug(f"Cross pair enumeration: {m} faces, {nodes[0]} closed sets")
        return (
            best,
            sort_faces(faces[i] for i in _bits(best_a)),
            sort_faces(faces[i] for i in _bits(best_b)),
        )

    def check_cross_classic(self, complex_: Complex, r: int, prefix: PrefixLike) -> CrossReport:
        """
        r-원소 면 cross-intersecting 쌍의 |A|+|B| 를 f_r(Δ) - γ + 1 과 비교

        Raises:
            HypothesisViolated: 가정 위반
            ResourceLimit: f_r 이 열거 한도를 넘을 때
        """
        prefix = VertexPrefix.of(as_prefix(prefix), complex_.n_vertices)
        self._cross_hypotheses(complex_, r, prefix, "cross")
        faces = complex_.faces(r)
        if len(faces) > self.cross_limit:
            raise ResourceLimit(f"f_{r} = {len(faces)}가 열거 한도 {self.cross_limit}를 넘습니다")
        gamma = self.gamma_count(complex_, r, prefix)
        observed, witness_a, witness_b = self.max_cross_pair(faces)
        return CrossReport(
            r=r,
            prefix=prefix,
            variant="classic",
            gamma=gamma,
            bound=len(faces) - gamma + 1,
            observed_max_sum=observed,
            witness_a=witness_a,
            witness_b=witness_b,
        )

    def max_shadow_pair(self, big: Sequence[Face], small: Sequence[Face]) -> Tuple[int, List[Face], List[Face]]:
        """
        B ⊆ big, A ⊆ small, ∂B ⊆ A 인 cross-intersecting 쌍의 |A|+|B| 최대값

        ∂B ⊆ A 이려면 B 의 원소들이 서로 두 점 이상에서 만나야 하므로 그런 B 만 탐색한다.
        """
        big, small = list(big), list(small)
        m = len(big)
        two = [0] * m
        meets_small = [0] * m
        for i in range(m):
            for j in range(m):
                if i != j and face_size(big[i] & big[j]) >= 2:
                    two[i] |= 1 << j
            for k, face in enumerate(small):
                if face & big[i]:
                    meets_small[i] |= 1 << k

        nodes = [0]
        best = [0, [], 0]

        def popcount(mask: int) -> int:
            return bin(mask).count("1")

        def dfs(chosen: List[int], candidates: int, partners: int) -> None:
            self._tick(nodes)
            if chosen:
                value = len(chosen) + popcount(partners)
                if value > best[0]:
                    best[0], best[1], best[2] = value, list(chosen), partners
            if len(chosen) + popcount(candidates) + popcount(partners) <= best[0]:
                return
            for i in _bits(candidates):
                chosen.append(i)
                dfs(chosen, candidates & two[i] & ~((1 << (i + 1)) - 1), partners & meets_small[i])
                chosen.pop()

        dfs([], (1 << m) - 1, (1 << len(small)) - 1)
        return (
            best[0],
            sort_faces(small[k] for k in _bits(best[2])),
            sort_faces(big[i] for i in best[1]),
        )

    def check_cross_shadow(self, complex_: Complex, r: int, prefix: PrefixLike) -> CrossReport:
        """
        (r-1)-원소 A 와 r-원소 B, ∂B ⊆ A 인 쌍을 f_{r-1}(Δ) - γ + 1 과 비교

        Raises:
            HypothesisViolated: 가정 위반
            ResourceLimit: f_r 이 다른 cross 검사와 같은 열거 한도를 넘을 때
        """
        prefix = VertexPrefix.of(as_prefix(prefix), complex_.n_vertices)
        self._cross_hypotheses(complex_, r, prefix, "shadow")
        big = complex_.faces(r)
        if len(big) > self.cross_limit:
            raise ResourceLimit(f"f_{r} = {len(big)}가 열거 한도 {self.cross_limit}를 넘습니다")
        small = complex_.faces(r - 1)
        gamma = self.gamma_count(complex_, r - 1, prefix)
        observed, witness_a, witness_b = self.max_shadow_pair(big, small)
        return CrossReport(
            r=r,
            prefix=prefix,
            variant="shadow",
            gamma=gamma,
            bound=len(small) - gamma + 1,
            observed_max_sum=observed,
            witness_a=witness_a,
            witness_b=witness_b,
        )

    # Hibi 단사와 Sperner 보강
    @staticmethod
    def _containment_matching(
        lower: Sequence[Face],
        upper: Sequence[Face],
    ) -> Tuple[Dict[Face, Face], Optional[Tuple[List[Face], List[Face]]]]:
        """
        포함 관계 이분 그래프의 최대 매칭

        Returns:
            (lower → upper 매칭, 포화 실패 시 (Hall 위반 집합, 그 이웃))
        """
        graph = nx.Graph()
        left = [("lower", face) for face in lower]
        graph.add_nodes_from(left, bipartite=0)
        graph.add_nodes_from((("upper", face) for face in upper), bipartite=1)
        for small in lower:
            for large in upper:
                if is_subface(small, large):
                    graph.add_edge(("lower", small), ("upper", large))
        matching = bipartite.hopcroft_karp_matching(graph, top_nodes=left)
        matched = {node[1]: matching[node][1] for node in left if node in matching}
        if len(matched) == len(lower):
            return matched, None

        # 매칭되지 않은 왼쪽 정점에서 교대 경로로 닿는 정점들 (König)
        waiting = {node for node in left if node not in matching}
        seen_left, seen_right = set(), set()
        while waiting:
            node = waiting.pop()
            seen_left.add(node)
            for neighbor in graph[node]:
                if neighbor in seen_right:
                    continue
                seen_right.add(neighbor)
                partner = matching[neighbor]
                if partner not in seen_left:
                    waiting.add(partner)
        return matched, (
            sort_faces(node[1] for node in seen_left),
            sort_faces(node[1] for node in seen_right),
        )

    def hibi_injection(self, complex_: Complex, s: int, r: int) -> HibiResult:
        """
        A ⊆ ψ(A) 인 단사 ψ: F_s → F_r

        포화 매칭이 없으면 Hall 조건을 위반하는 집합과 그 이웃을 돌려준다.
        """
        matched, violator = self._containment_matching(complex_.faces(s), complex_.faces(r))
        if violator is None:
            return HibiResult(s=s, r=r, injection=matched)
        logger.info(f"Hibi injection F_{s} → F_{r} 없음: Hall 위반 {len(violator[0])} > {len(violator[1])}")
        return HibiResult(s=s, r=r, hall_violator=violator[0], hall_neighbors=violator[1])

    def augment_sperner(self, family: SetFamily, complex_: Complex, r: int) -> SetFamily:
        """
        크기가 r 보다 작은 원소를 그것을 포함하는 r-원소 면으로 단사적으로 교체

        Raises:
            HypothesisViolated: 원소가 면이 아니거나 r 보다 클 때
            AugmentationImpossible: Hall 조건 위반
        """
        HypothesisValidator.require([
            HypothesisValidator.faces_of(complex_, family),
            HypothesisValidator.at_most(family, r),
        ])
        if family.is_uniform and family.r == r:
            return family
        undersized = [member for member in family if face_size(member) < r]
        kept = [member for member in family if face_size(member) == r]
        members = set(kept)
        targets = [face for face in complex_.faces(r) if face not in members]
        matched, violator = self._containment_matching(undersized, targets)
        if violator is not None:
            raise AugmentationImpossible(
                f"{len(violator[0])}개의 집합이 {len(violator[1])}개의 r-면에만 포함됩니다",
                hall_witness=violator[0],
            )
        return SetFamily(kept + [matched[member] for member in undersized], family.universe, r=r)

    def check_cross_sperner(
        self,
        complex_: Complex,
        r: int,
        prefix: PrefixLike,
        first: SetFamily,
        second: SetFamily,
    ) -> CrossReport:
        """
        r 이하 크기 면들의 cross-intersecting Sperner 쌍을 보강한 뒤 f_r(Δ) - γ + 1 과 비교
        """
        prefix = VertexPrefix.of(as_prefix(prefix), complex_.n_vertices)
        depth = self._depth(complex_)
        HypothesisValidator.require([
            HypothesisValidator.prefix_length(prefix, r),
            HypothesisValidator.rank_in_range(r, depth, "cross"),
            HypothesisValidator.shifted_wrt(complex_, prefix),
            HypothesisValidator.nonempty(first, "첫 집합족"),
            HypothesisValidator.nonempty(second, "둘째 집합족"),
            HypothesisValidator.faces_of(complex_, first),
            HypothesisValidator.faces_of(complex_, second),
            HypothesisValidator.at_most(first, r),
            HypothesisValidator.at_most(second, r),
            HypothesisValidator.cross_intersecting(first, second),
        ])
        augmented_a = self.augment_sperner(first, complex_, r)
        augmented_b = self.augment_sperner(second, complex_, r)
        if not augmented_a.cross_intersects(augmented_b):
            raise ConsistencyError("보강 후 cross-intersecting 성질이 깨졌습니다")
        gamma = self.gamma_count(complex_, r, prefix)
        return CrossReport(
            r=r,
            prefix=prefix,
            variant="sperner",
            gamma=gamma,
            bound=complex_.f(r) - gamma + 1,
            observed_max_sum=len(augmented_a) + len(augmented_b),
            witness_a=list(augmented_a.sets),
            witness_b=list(augmented_b.sets),
        )

    # 증명 절차 재현
    def _family_hypotheses(self, complex_: Complex, family: SetFamily) -> List[Tuple[bool, str]]:
        return [
            HypothesisValidator.nonempty(family),
            (family.is_uniform and family.r >= 1, "균일 집합족이 필요합니다"),
            HypothesisValidator.faces_of(complex_, family),
            HypothesisValidator.intersecting(family),
            HypothesisValidator.no_common_intersection(family),
        ]

    @staticmethod
    def _spans_on(family: SetFamily, ground: Face) -> bool:
        return all(s in family for s in subfaces_of_size(ground, family.r))

    def _alg_common_empty(self, family: SetFamily) -> bool:
        shifted = self.shifting.stable_alg_shift_family(family, self.seeds).shifted
        return not shifted.has_common_intersection()

    def reduction_trace(self, complex_: Complex, family: SetFamily, apex: int) -> ReductionTrace:
        """
        Shift_{a<-w} 를 공통 교집합이 생기기 전까지 적용해 두 경우로 나눈다

        A: 안정화된 집합족이 a∪A 위의 simplex boundary 를 포함 → 대수적 shift 후에도 공통 교집합 없음
        B: Shift_{a<-v} 가 막힘 → φ 가 F_{r-1}(link a) 로의 단사이며 전사가 아님

        Raises:
            HypothesisViolated: near-cone 이 아니거나 집합족 가정 위반
        """
        checks = [HypothesisValidator.near_cone(complex_, apex)] + self._family_hypotheses(complex_, family)
        HypothesisValidator.require(checks)
        n = complex_.n_vertices
        r = family.r
        trace = self.shifting.stabilize(
            family, [(apex, w) for w in range(n) if w != apex], stop_on_common_intersection=True
        )
        current = trace.outcome
        result = ReductionTrace(apex=apex, shift_trace=trace, outcome="A" if not trace.blocked else "B")

        if not trace.blocked:
            outside = [member for member in current if not member & bit(apex)]
            ground = outside[0] | bit(apex)
            result.boundary_witness = ground if self._spans_on(current, ground) else None
            result.alg_shift_common_empty = self._alg_common_empty(current)
            return result

        a, v = trace.blocking_pair
        result.blocking_pair = (a, v)
        phi = {member: member & ~bit(a) if member & bit(a) else member & ~bit(v) for member in current}
        image = set(phi.values())
        link_faces = complex_.link(bit(a)).face_set(r - 1)
        result.phi = phi
        result.phi_injective = len(image) == len(current) and image <= link_faces
        result.phi_surjective = image == link_faces

        outside_a = [member for member in current if not member & bit(a)]
        for facet in complex_.facets:
            if facet & bit(a) and any(is_subface(c, facet) for c in outside_a):
                ground = facet & ~bit(a) & ~bit(v)
                missing = [s for s in subfaces_of_size(ground, r - 1) if s not in image]
                result.missing_facet = facet
                result.missing_set = missing[0] if missing else None
                result.b_t_size = len(maximal_sets(
                    phi[b] & facet for b in current if not b & bit(v)
                ))
                result.c_t_size = sum(1 for c in outside_a if is_subface(phi[c], facet))
                break

        result.alt_b = sort_faces({b & ~bit(a) for b in current if not b & bit(v)})
        result.alt_c = sort_faces({c & ~bit(v) for c in outside_a})
        result.alt_cross_intersecting = all(b & c for b in result.alt_b for c in result.alt_c)
        return result

    def stability_trace(self, complex_: Complex, family: SetFamily, prefix: PrefixLike) -> StabilityTrace:
        """
        안정성 증명의 두 경우를 재현

        Case 1: Shift_{v_1<-w} 가 한 번도 막히지 않음 → A∪v_1 위의 simplex boundary
        Case 2: Shift_{v_1<-w} 가 막힘 → {v_1, w} 를 포함하는 면을 더하고 I 의 정점으로 다시 shift
        """
        prefix = VertexPrefix.of(as_prefix(prefix), complex_.n_vertices)
        r = family.r
        checks = self._family_hypotheses(complex_, family) + [
            HypothesisValidator.prefix_length(prefix, r + 1),
            HypothesisValidator.shifted_wrt(complex_, prefix),
        ]
        HypothesisValidator.require(checks)
        n = complex_.n_vertices
        v1 = prefix[0]
        first = self.shifting.stabilize(
            family, [(v1, w) for w in range(n) if w != v1], stop_on_common_intersection=True
        )

        if not first.blocked:
            current = first.outcome
            outside = [member for member in current if not member & bit(v1)]
            ground = outside[0] | bit(v1)
            return StabilityTrace(
                case=1,
                first_trace=first,
                boundary_witness=ground if self._spans_on(current, ground) else None,
                alg_shift_common_empty=self._alg_common_empty(current),
            )

        _, w = first.blocking_pair
        base = first.outcome
        added = [
            face for face in complex_.faces(r)
            if face & bit(v1) and face & bit(w) and face not in base
        ]
        widened = base.with_sets(list(base.sets) + added)
        chain = [x for x in prefix.vertices[1:] if x != w]
        core = chain[: r - 1]
        allowed = []
        for index, vi in enumerate(prefix.vertices):
            if vi not in chain:
                continue
            head = make_face(prefix.vertices[: index + 1]) | bit(w)
            allowed.extend((vi, x) for x in range(n) if not head & bit(x))
        second = self.shifting.stabilize(widened, allowed)
        final = second.outcome
        ground = make_face(core) | bit(v1) | bit(w)
        return StabilityTrace(
            case=2,
            first_trace=first,
            second_trace=second,
            boundary_witness=ground if self._spans_on(final, ground) else None,
            added_faces=sort_faces(added),
            alg_shift_common_empty=self._alg_common_empty(final),
        )

    @staticmethod
    def restrict_at_last(family: SetFamily, last: int) -> Tuple[SetFamily, SetFamily]:
        """
        (F(n), F(¬n)): last 를 포함하는 원소에서 last 를 뺀 집합족과 포함하지 않는 원소들
        """
        with_last = [member & ~bit(last) for member in family if member & bit(last)]
        without_last = [member for member in family if not member & bit(last)]
        if family.is_uniform:
            return (
                SetFamily(with_last, family.universe, r=max(family.r - 1, 0)),
                SetFamily(without_last, family.universe, r=family.r),
            )
        return SetFamily(with_last, family.universe), SetFamily(without_last, family.universe)
