"""호몰로지, depth, vertex-decomposability 서비스"""
import logging
import threading
from typing import Dict, List, Optional, Tuple

import numpy as np

from models.complex import Complex
from models.exceptions import ConsistencyError, OutOfRange
from models.face import Face, bit, face_members, face_size, lex_key
from models.finite_field import DEFAULT_PRIME, FpMatrix, rank
from models.schemas import DepthReport, VDResult

logger = logging.getLogger(__name__)


class HomologyService:
    """F_p 계수 축약 호몰로지와 depth 계산 서비스"""

    # 캐시 최대 크기
    MAX_RANK_CACHE = 20000
    MAX_VD_MEMO = 50000

    def __init__(self, p: int = DEFAULT_PRIME):
        self.p = p
        self._rank_cache: Dict[Tuple[Complex, int], int] = {}
        self._vd_memo: Dict[Tuple[int, Tuple[Face, ...]], Optional[Tuple[int, ...]]] = {}
        self._lock = threading.Lock()

    # 사슬 복합체
    def boundary_matrix(self, complex_: Complex, k: int) -> FpMatrix:
        """
        경계 사상 행렬 ∂: C(k-원소 면) → C((k-1)-원소 면)

        Args:
            complex_: 복합체
            k: 열에 해당하는 면의 원소 개수 (1 ≤ k ≤ dim + 1)

        Returns:
            FpMatrix: 행은 (k-1)-원소 면, 열은 k-원소 면 (사전식)
        """
        if k < 1 or k > complex_.dim + 1:
            raise OutOfRange(f"k={k}는 1 이상 {complex_.dim + 1} 이하여야 합니다")
        row_faces = complex_.faces(k - 1)
        col_faces = complex_.faces(k)
        row_index = {face: i for i, face in enumerate(row_faces)}
        entries = np.zeros((len(row_faces), len(col_faces)), dtype=np.int64)
        minus_one = self.p - 1
        for j, face in enumerate(col_faces):
            for idx, v in enumerate(face_members(face)):
                entries[row_index[face & ~bit(v)], j] = minus_one if idx % 2 else 1
        return FpMatrix(entries, self.p)

    def boundary_rank(self, complex_: Complex, k: int) -> int:
        """rank ∂_k (범위 밖의 k는 0)"""
        if k < 1 or k > complex_.dim + 1:
            return 0
        key = (complex_, k)
        with self._lock:
            cached = self._rank_cache.get(key)
        if cached is not None:
            return cached
        value = rank(self.boundary_matrix(complex_, k))
        with self._lock:
            if len(self._rank_cache) >= self.MAX_RANK_CACHE:
                self._rank_cache.clear()
            self._rank_cache[key] = value
        return value

    def reduced_betti(self, complex_: Complex, i: int) -> int:
        """축약 Betti 수 β̃_i = dim H̃_i(Δ; F_p)"""
        if i < -1 or i > complex_.dim:
            return 0
        return (
            complex_.f(i + 1)
            - self.boundary_rank(complex_, i + 1)
            - self.boundary_rank(complex_, i + 2)
        )

    def betti_vector(self, complex_: Complex) -> Tuple[int, ...]:
        """(β̃_{-1}, β̃_0, ..., β̃_dim)"""
        return tuple(self.reduced_betti(complex_, i) for i in range(-1, complex_.dim + 1))

    @staticmethod
    def reduced_euler_characteristic(complex_: Complex) -> int:
        return -sum((-1) ** k * f_k for k, f_k in enumerate(complex_.f_vector()))

    def first_nonvanishing(self, complex_: Complex, below: Optional[int] = None) -> Optional[int]:
        """H̃_i ≠ 0 인 가장 작은 i (below 미만까지만 탐색)"""
        top = complex_.dim if below is None else min(complex_.dim, below - 1)
        for i in range(-1, top + 1):
            if self.reduced_betti(complex_, i):
                return i
        return None

    # Cohen-Macaulay / depth
    def is_cohen_macaulay(self, complex_: Complex) -> bool:
        """모든 면의 link가 자기 차원 미만에서 호몰로지가 사라지는지 검사"""
        for face in complex_.all_faces():
            link = complex_.link(face)
            if self.first_nonvanishing(link, below=link.dim) is not None:
                return False
        return True

    def _depth_by_skeleton(self, complex_: Complex) -> int:
        depth = -1
        for d in range(0, complex_.dim + 1):
            if not self.is_cohen_macaulay(complex_.skeleton(d)):
                break
            depth = d
        return depth

    def _depth_by_links(self, complex_: Complex) -> Tuple[int, Optional[Tuple[Face, int]]]:
        best = complex_.dim
        witness: Optional[Tuple[Face, int]] = None
        for k in range(complex_.dim + 2):
            for face in complex_.faces(k):
                # |A| + i < best 인 i만 의미 있음
                i = self.first_nonvanishing(complex_.link(face), below=best - k)
                if i is not None and k + i < best:
                    best = k + i
                    witness = (face, i)
        return best, witness

    def depth(self, complex_: Complex, cross_check: bool = True) -> DepthReport:
        """
        depth 계산

        링크 호몰로지 최소값 공식으로 계산하고, cross_check 이면 Cohen-Macaulay
        skeleton 정의로 다시 계산해 비교한다.

        Raises:
            ConsistencyError: 두 계산 결과가 다를 때
        """
        value, witness = self._depth_by_links(complex_)
        if cross_check:
            reference = self._depth_by_skeleton(complex_)
            if reference != value:
                raise ConsistencyError(
                    f"depth 불일치: link 공식 {value}, skeleton 정의 {reference} ({complex_!r})"
                )
        min_facet_dim = complex_.min_facet_size - 1
        return DepthReport(
            depth=value,
            dim=complex_.dim,
            is_cm=value == complex_.dim,
            min_facet_dim=min_facet_dim,
            has_facet_depth=value == min_facet_dim,
            witness=witness,
            cross_checked=cross_check,
        )

    def has_facet_depth(self, complex_: Complex) -> bool:
        return self.depth(complex_, cross_check=False).has_facet_depth

    # vertex-decomposability
    @staticmethod
    def is_shedding_vertex(complex_: Complex, v: int) -> bool:
        """v를 포함하는 모든 facet F에 대해 F∖v∪w ∈ Δ 인 w ∉ F 가 있는지"""
        support = 0
        for facet in complex_.facets:
            support |= facet
        for facet in complex_.facets:
            if not facet & bit(v):
                continue
            base = facet & ~bit(v)
            if not any(
                complex_.contains(base | bit(w))
                for w in face_members(support & ~facet)
            ):
                return False
        return True

    @staticmethod
    def _canonical(complex_: Complex) -> Tuple[Tuple[Face, ...], List[int]]:
        """차수와 facet 크기 분포로 정점을 재배열한 정규형과 정점 순서"""
        signature: Dict[int, List[int]] = {v: [] for v in complex_.vertices}
        for facet in complex_.facets:
            size = face_size(facet)
            for v in face_members(facet):
                signature[v].append(size)
        order = sorted(
            signature,
            key=lambda v: (len(signature[v]), tuple(sorted(signature[v])), v),
        )
        relabel = {v: i for i, v in enumerate(order)}
        facets = []
        for facet in complex_.facets:
            mask = 0
            for v in face_members(facet):
                mask |= bit(relabel[v])
            facets.append(mask)
        return tuple(sorted(facets, key=lex_key)), order

    def _decompose(self, complex_: Complex) -> Optional[Tuple[int, ...]]:
        """shedding 정점 전위 순서 (VD 가 아니면 None)"""
        if complex_.is_simplex:
            return ()
        key_facets, order = self._canonical(complex_)
        key = (len(order), key_facets)
        with self._lock:
            if key in self._vd_memo:
                cached = self._vd_memo[key]
                return None if cached is None else tuple(order[v] for v in cached)

        canonical = Complex(max(len(order), 1), key_facets)
        certificate: Optional[Tuple[int, ...]] = None
        for v in canonical.vertices:
            if not self.is_shedding_vertex(canonical, v):
                continue
            deleted = self._decompose(canonical.deletion(v))
            if deleted is None:
                continue
            linked = self._decompose(canonical.link(bit(v)))
            if linked is None:
                continue
            certificate = (v,) + deleted + linked
            break

        with self._lock:
            if len(self._vd_memo) >= self.MAX_VD_MEMO:
                self._vd_memo.clear()
            self._vd_memo.setdefault(key, certificate)
        if certificate is None:
            return None
        return tuple(order[v] for v in certificate)

    def is_vertex_decomposable(self, complex_: Complex) -> VDResult:
        """
        vertex-decomposability 판정

        Returns:
            VDResult: 판정과 shedding 정점 인증서 (입력 정점 번호)
        """
        certificate = self._decompose(complex_)
        if certificate is None:
            logger.debug(f"Not vertex-decomposable: {complex_!r}")
            return VDResult(is_vd=False)
        return VDResult(is_vd=True, certificate=list(certificate))
