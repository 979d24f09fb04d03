"""그래프와 독립 복합체(independence complex)"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Tuple

import networkx as nx

from models.complex import Complex
from models.exceptions import VertexOutOfRange


@dataclass(frozen=True)
class Graph:
    """단순 그래프 (정점 0..n-1)

    metadata에는 생성기가 남긴 인증서(소거 순서, 생성 단어 등)가 들어간다.
    """
    n: int
    edges: FrozenSet[Tuple[int, int]]
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise VertexOutOfRange(f"루프 간선은 허용되지 않습니다: ({u}, {v})")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise VertexOutOfRange(f"간선 ({u}, {v})이(가) 정점 범위 {self.n}를 벗어났습니다")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], **metadata) -> "Graph":
        return cls(n, frozenset(edges), dict(metadata))

    @classmethod
    def from_networkx(cls, graph: nx.Graph, **metadata) -> "Graph":
        """정점이 0..n-1 정수인 networkx 그래프 변환"""
        return cls(graph.number_of_nodes(), frozenset(graph.edges()), dict(metadata))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def isolated_vertices(self) -> Tuple[int, ...]:
        touched = {v for edge in self.edges for v in edge}
        return tuple(v for v in range(self.n) if v not in touched)


def independence_complex(graph: Graph) -> Complex:
    """독립 집합들의 복합체 (facet = 극대 독립 집합)"""
    if graph.n == 0:
        return Complex.from_masks([0], 0)
    # 여그래프의 극대 clique = 원래 그래프의 극대 독립 집합
    complement = nx.complement(graph.to_networkx())
    facets = [sorted(clique) for clique in nx.find_cliques(complement)]
    return Complex.from_facets(facets, graph.n)
