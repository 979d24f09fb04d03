"""예제 복합체와 그래프 생성 서비스"""
import logging
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from models.complex import Complex
from models.exceptions import BadRank, BadSize, EmptyInput, OutOfRange, VertexOutOfRange
from models.face import MAX_VERTICES, bit, full_face, make_face
from models.graph import Graph

logger = logging.getLogger(__name__)


class GeneratorService:
    """시드 고정 인스턴스 생성기

    생성된 그래프는 가정이 성립하는 이유(소거 순서, 생성 단어)를 metadata 에 남긴다.
    """

    PART_KINDS = ("path", "cycle", "complete")
    THRESHOLD_LETTERS = ("isolated", "dominating")
    CHORDAL_ISOLATION_RATE = 0.2

    @staticmethod
    def _rng(seed: Optional[int]) -> np.random.Generator:
        return np.random.default_rng(seed)

    # 그래프
    def gen_chordal(self, n: int, extra_isolated: int = 0, seed: Optional[int] = None) -> Graph:
        """
        역순 완전 소거 순서로 chordal 그래프 생성

        새 정점은 기존 정점 u 가 만든 clique 의 부분집합에만 연결되므로,
        추가한 역순이 완전 소거 순서가 된다.

        Args:
            n: chordal 부분의 정점 수 (≥ 1)
            extra_isolated: 뒤에 붙일 고립 정점 수
            seed: 난수 시드
        """
        if n < 1:
            raise BadSize(f"정점 수는 1 이상이어야 합니다: {n}")
        if extra_isolated < 0:
            raise BadSize(f"고립 정점 수는 0 이상이어야 합니다: {extra_isolated}")
        rng = self._rng(seed)
        cliques: List[Tuple[int, ...]] = [(0,)]
        edges: List[Tuple[int, int]] = []
        for v in range(1, n):
            if rng.random() < self.CHORDAL_ISOLATION_RATE:
                chosen: Tuple[int, ...] = ()
            else:
                base = cliques[int(rng.integers(len(cliques)))]
                keep = rng.random(len(base)) < 0.5
                keep[int(rng.integers(len(base)))] = True
                chosen = tuple(u for u, flag in zip(base, keep) if flag)
            edges.extend((u, v) for u in chosen)
            cliques.append(chosen + (v,))

        total = n + extra_isolated
        elimination = list(range(n - 1, -1, -1)) + list(range(n, total))
        logger.debug(f"Chordal graph: n={n}, edges={len(edges)}, isolated+={extra_isolated}")
        return Graph.from_edges(total, edges, elimination_order=elimination, seed=seed)

    def gen_disjoint_union(self, parts: Sequence[Tuple[str, int]]) -> Graph:
        """
        경로, 사이클, 완전 그래프의 서로소 합

        Raises:
            BadSize: 크기가 1 미만이거나 사이클이 3 미만일 때
        """
        if not parts:
            raise BadSize("구성 요소가 하나 이상 필요합니다")
        components = []
        for kind, size in parts:
            if kind not in self.PART_KINDS:
                raise BadSize(f"알 수 없는 구성 요소 종류: {kind}")
            if size < 1 or (kind == "cycle" and size < 3):
                raise BadSize(f"{kind} 크기가 너무 작습니다: {size}")
            if kind == "path":
                components.append(nx.path_graph(size))
            elif kind == "cycle":
                components.append(nx.cycle_graph(size))
            else:
                components.append(nx.complete_graph(size))
        union = nx.disjoint_union_all(components)
        return Graph.from_networkx(union, parts=[(kind, size) for kind, size in parts])

    def gen_threshold(self, n: int, creation_word: Sequence[str]) -> Graph:
        """
        생성 단어로 threshold 그래프 생성

        dominating 정점은 앞선 모든 정점과 연결된다. 차수 오름차순으로 번호를 다시 매겨
        독립 복합체가 0 < 1 < ... 순서에 대해 shifted 가 되게 한다.
        """
        if len(creation_word) != n:
            raise BadSize(f"생성 단어 길이 {len(creation_word)}가 n={n}과 다릅니다")
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        for v, letter in enumerate(creation_word):
            if letter not in self.THRESHOLD_LETTERS:
                raise BadSize(f"생성 단어는 {self.THRESHOLD_LETTERS}로만 이루어져야 합니다: {letter}")
            if letter == "dominating":
                graph.add_edges_from((u, v) for u in range(v))
        order = sorted(range(n), key=lambda v: (graph.degree(v), v))
        relabel = {v: i for i, v in enumerate(order)}
        relabeled = nx.relabel_nodes(graph, relabel)
        return Graph.from_networkx(relabeled, creation_word=list(creation_word), order=order)

    # 복합체
    @staticmethod
    def gen_simplex(n: int) -> Complex:
        if n < 0 or n > MAX_VERTICES:
            raise BadSize(f"정점 수가 범위를 벗어났습니다: {n}")
        return Complex(n, [full_face(n)])

    @staticmethod
    def gen_simplex_boundary(n: int) -> Complex:
        """n 개 정점 단체의 경계 (모든 (n-1)-원소 부분집합)"""
        if n < 1 or n > MAX_VERTICES:
            raise BadSize(f"정점 수가 범위를 벗어났습니다: {n}")
        full = full_face(n)
        return Complex.from_masks([full & ~bit(v) for v in range(n)], n)

    @staticmethod
    def gen_uniform_matroid(n: int, k: int, coloops: int = 0) -> Complex:
        """
        균일 matroid U(k, n) 에 coloop 을 더한 독립 복합체

        coloop 은 정점 0..coloops-1 이고 모든 facet 에 들어간다.

        Raises:
            BadRank: k 가 0..n 범위를 벗어날 때
        """
        if k < 0 or k > n:
            raise BadRank(f"rank k={k}는 0 이상 n={n} 이하여야 합니다")
        if coloops < 0:
            raise BadSize(f"coloop 수는 0 이상이어야 합니다: {coloops}")
        total = n + coloops
        if total > MAX_VERTICES:
            raise VertexOutOfRange(f"정점 수 {total}가 {MAX_VERTICES}를 넘습니다")
        cone = full_face(coloops)
        facets = [cone | make_face((v + coloops for v in combo), total) for combo in combinations(range(n), k)]
        return Complex.from_masks(facets, total)

    @staticmethod
    def gen_cone(complex_: Complex, t: int = 1) -> Complex:
        """새 정점 0..t-1 을 모든 facet 에 더한 t-중 cone (기존 정점은 t 만큼 밀림)"""
        if t < 0:
            raise BadSize(f"cone 차수는 0 이상이어야 합니다: {t}")
        total = complex_.n_vertices + t
        if total > MAX_VERTICES:
            raise VertexOutOfRange(f"정점 수 {total}가 {MAX_VERTICES}를 넘습니다")
        apex = full_face(t)
        return Complex(total, [(facet << t) | apex for facet in complex_.facets])

    def gen_borg_shape(self, t: int, simplex_sizes: Sequence[int]) -> Complex:
        """서로소 단체들의 합 위의 t-중 cone"""
        if not simplex_sizes:
            raise BadSize("단체 크기가 하나 이상 필요합니다")
        facets = []
        offset = 0
        for size in simplex_sizes:
            if size < 1:
                raise BadSize(f"단체 크기는 1 이상이어야 합니다: {size}")
            facets.append(full_face(size) << offset)
            offset += size
        if offset > MAX_VERTICES:
            raise VertexOutOfRange(f"정점 수 {offset}가 {MAX_VERTICES}를 넘습니다")
        return self.gen_cone(Complex(offset, facets), t)

    def gen_random_complex(
        self,
        n: int,
        dim: int,
        density: float,
        seed: Optional[int] = None,
        allow_empty: bool = False,
    ) -> Complex:
        """
        (dim+1)-원소 부분집합을 density 확률로 골라 아래로 닫은 순수 복합체

        Raises:
            OutOfRange: density 가 [0, 1] 밖이거나 dim 이 범위 밖일 때
            EmptyInput: 하나도 고르지 못했고 allow_empty 가 아닐 때
        """
        if not 0.0 <= density <= 1.0:
            raise OutOfRange(f"density는 0과 1 사이여야 합니다: {density}")
        if dim < 0 or dim >= n:
            raise OutOfRange(f"dim={dim}은(는) 0 이상 n={n} 미만이어야 합니다")
        candidates = [make_face(combo, n) for combo in combinations(range(n), dim + 1)]
        draws = self._rng(seed).random(len(candidates))
        chosen = [face for face, draw in zip(candidates, draws) if draw < density]
        if not chosen:
            if allow_empty:
                return Complex(n, [0])
            raise EmptyInput(f"density={density}에서 고른 면이 없습니다 (seed={seed})")
        return Complex.from_masks(chosen, n)
