"""단체 복합체(simplicial complex), 집합족, 정점 prefix"""
import logging
import threading
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from models.exceptions import (
    EmptyInput,
    InvalidPrefix,
    NotAFace,
    NotSperner,
    NotUniform,
    VertexOutOfRange,
)
from models.face import (
    MAX_VERTICES,
    Face,
    bit,
    face_members,
    face_size,
    format_face,
    is_subface,
    lex_key,
    make_face,
    sort_faces,
    subfaces_of_size,
    swap,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexPrefix:
    """순서가 있는 정점 prefix v_1 < ... < v_t"""
    vertices: Tuple[int, ...] = ()

    def __post_init__(self):
        vertices = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vertices)
        if vertices and vertices[0] < 0:
            raise InvalidPrefix(f"음수 정점이 포함되어 있습니다: {vertices}")
        for a, b in zip(vertices, vertices[1:]):
            if a >= b:
                raise InvalidPrefix(f"prefix는 순증가해야 합니다: {vertices}")

    @classmethod
    def of(cls, vertices: Iterable[int], n_vertices: int) -> "VertexPrefix":
        prefix = cls(tuple(vertices))
        if prefix.vertices and prefix.vertices[-1] >= n_vertices:
            raise InvalidPrefix(
                f"prefix 정점 {prefix.vertices[-1]}이(가) 범위를 벗어났습니다 (n={n_vertices})"
            )
        return prefix

    @property
    def mask(self) -> Face:
        return make_face(self.vertices)

    def rest(self) -> "VertexPrefix":
        return VertexPrefix(self.vertices[1:])

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, index: int) -> int:
        return self.vertices[index]


PrefixLike = Union[VertexPrefix, Sequence[int]]


def as_prefix(prefix: PrefixLike) -> VertexPrefix:
    if isinstance(prefix, VertexPrefix):
        return prefix
    return VertexPrefix(tuple(prefix))


def _check_universe(n_vertices: int) -> None:
    if n_vertices < 0 or n_vertices > MAX_VERTICES:
        raise VertexOutOfRange(f"정점 개수는 0 이상 {MAX_VERTICES} 이하여야 합니다: {n_vertices}")


def _shift_closed(
    members: Iterable[Face],
    contains: Callable[[Face], bool],
    prefix: VertexPrefix,
) -> bool:
    """모든 Shift_{v_i <- w} (w ∉ {v_1..v_i}) 에 대해 닫혀 있는지 검사"""
    members = list(members)
    head = 0
    for v in prefix.vertices:
        head |= bit(v)
        for member in members:
            if member & bit(v):
                continue
            for w in face_members(member & ~head):
                if not contains(swap(member, w, v)):
                    return False
    return True


class SetFamily:
    """면들의 집합족 (균일 또는 Sperner 모드)

    r > 0 이거나 명시적으로 r이 주어지면 균일 모드, 그렇지 않으면 Sperner 모드(r=0)이다.
    """

    def __init__(self, sets: Iterable[Face], universe: int, r: Optional[int] = None):
        _check_universe(universe)
        unique = sort_faces(set(int(s) for s in sets))
        for s in unique:
            if s < 0 or s >> universe:
                raise VertexOutOfRange(f"집합 {format_face(s)}이(가) 정점 범위 {universe}를 벗어났습니다")

        if r is None:
            sizes = {face_size(s) for s in unique}
            uniform = len(sizes) == 1
            r = sizes.pop() if uniform else 0
        else:
            uniform = True
            for s in unique:
                if face_size(s) != r:
                    raise NotUniform(f"{format_face(s)}의 크기가 {r}이(가) 아닙니다")

        if not uniform:
            for a in unique:
                for b in unique:
                    if a != b and a & b == a:
                        raise NotSperner(
                            f"{format_face(a)} ⊂ {format_face(b)}: 크기가 섞인 집합족은 Sperner여야 합니다"
                        )

        self.r = r
        self.universe = universe
        self.sets: Tuple[Face, ...] = tuple(unique)
        self._uniform = uniform
        self._members: FrozenSet[Face] = frozenset(unique)

    @classmethod
    def from_sets(
        cls,
        sets: Iterable[Iterable[int]],
        universe: int,
        r: Optional[int] = None,
    ) -> "SetFamily":
        return cls((make_face(s, universe) for s in sets), universe, r)

    def with_sets(self, sets: Iterable[Face]) -> "SetFamily":
        """같은 모드/정점 범위로 새 집합족 생성"""
        return SetFamily(sets, self.universe, self.r if self._uniform else None)

    @property
    def is_uniform(self) -> bool:
        return self._uniform

    @property
    def members(self) -> FrozenSet[Face]:
        return self._members

    def common_intersection(self) -> Face:
        """모든 집합의 공통 교집합 (빈 집합족이면 0)"""
        if not self.sets:
            return 0
        common = self.sets[0]
        for s in self.sets[1:]:
            common &= s
        return common

    def has_common_intersection(self) -> bool:
        return bool(self.sets) and self.common_intersection() != 0

    def is_intersecting(self) -> bool:
        sets = self.sets
        for i, a in enumerate(sets):
            if a == 0:
                return False
            for b in sets[i + 1:]:
                if a & b == 0:
                    return False
        return True

    def cross_intersects(self, other: "SetFamily") -> bool:
        return all(a & b for a in self.sets for b in other.sets)

    def is_sperner(self) -> bool:
        return not any(a != b and a & b == a for a in self.sets for b in self.sets)

    def is_shifted_wrt(self, prefix: PrefixLike) -> bool:
        return _shift_closed(self.sets, self._members.__contains__, as_prefix(prefix))

    def is_shifted(self) -> bool:
        return self.is_shifted_wrt(VertexPrefix(tuple(range(self.universe))))

    def shadow(self) -> "SetFamily":
        return shadow(self)

    def spans_simplex_boundary(self) -> Optional[Face]:
        return spans_simplex_boundary(self)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[Face]:
        return iter(self.sets)

    def __contains__(self, face: Face) -> bool:
        return face in self._members

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.universe == other.universe and self.sets == other.sets

    def __hash__(self) -> int:
        return hash((self.universe, self.sets))

    def __repr__(self) -> str:
        body = ", ".join(format_face(s) for s in self.sets)
        return f"SetFamily(r={self.r}, n={self.universe}, [{body}])"


def _maximal(masks: Iterable[Face]) -> List[Face]:
    """포함 관계로 극대인 집합만 남김"""
    ordered = sorted(set(masks), key=lambda m: (-face_size(m), lex_key(m)))
    kept: List[Face] = []
    for mask in ordered:
        if not any(mask & k == mask for k in kept):
            kept.append(mask)
    return kept


class Complex:
    """facet으로 저장되는 단체 복합체

    생성 후에는 변경되지 않으며, 크기별 면 목록은 처음 요청될 때 계산해 캐시한다.
    """

    def __init__(self, n_vertices: int, facets: Sequence[Face]):
        _check_universe(n_vertices)
        self.n_vertices = n_vertices
        self.facets: Tuple[Face, ...] = tuple(sort_faces(facets))
        self._face_cache: Dict[int, Tuple[Face, ...]] = {}
        self._face_sets: Dict[int, FrozenSet[Face]] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_facets(cls, candidate_sets: Iterable[Iterable[int]], n_vertices: int) -> "Complex":
        """
        후보 집합들로 복합체 생성

        Args:
            candidate_sets: 정점 인덱스 집합들 (극대가 아닌 집합은 버려짐)
            n_vertices: 정점 전체 개수

        Returns:
            Complex: 극대 집합을 facet으로 갖는 복합체
        """
        _check_universe(n_vertices)
        masks = [make_face(s, n_vertices) for s in candidate_sets]
        return cls.from_masks(masks, n_vertices)

    @classmethod
    def from_masks(cls, masks: Iterable[Face], n_vertices: int) -> "Complex":
        masks = list(masks)
        if not masks:
            raise EmptyInput("면이 없는 복합체(void)는 만들 수 없습니다")
        for m in masks:
            if m >> n_vertices:
                raise VertexOutOfRange(f"{format_face(m)}이(가) 정점 범위 {n_vertices}를 벗어났습니다")
        facets = _maximal(masks)
        if len(facets) < len(masks):
            logger.debug(f"극대가 아닌 집합 {len(masks) - len(facets)}개 제거")
        return cls(n_vertices, facets)

    @classmethod
    def simplex(cls, vertices: Iterable[int], n_vertices: int) -> "Complex":
        return cls.from_facets([list(vertices)], n_vertices)

    # 기본 정보
    @property
    def dim(self) -> int:
        return max(face_size(f) for f in self.facets) - 1

    @property
    def vertices(self) -> Tuple[int, ...]:
        support = 0
        for f in self.facets:
            support |= f
        return face_members(support)

    @property
    def min_facet_size(self) -> int:
        return min(face_size(f) for f in self.facets)

    @property
    def is_simplex(self) -> bool:
        return len(self.facets) == 1

    def faces(self, k: int) -> Tuple[Face, ...]:
        """k-원소 면 목록 F_k (사전식 정렬)"""
        if k < 0 or k > self.dim + 1:
            return ()
        with self._lock:
            cached = self._face_cache.get(k)
            if cached is None:
                found = set()
                for facet in self.facets:
                    if face_size(facet) >= k:
                        found.update(subfaces_of_size(facet, k))
                cached = tuple(sort_faces(found))
                self._face_cache[k] = cached
                self._face_sets[k] = frozenset(cached)
            return cached

    def face_set(self, k: int) -> FrozenSet[Face]:
        self.faces(k)
        return self._face_sets.get(k, frozenset())

    def f(self, k: int) -> int:
        return len(self.faces(k))

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(self.f(k) for k in range(self.dim + 2))

    def family(self, k: int) -> SetFamily:
        return SetFamily(self.faces(k), self.n_vertices, r=k)

    def all_faces(self) -> List[Face]:
        result: List[Face] = []
        for k in range(self.dim + 2):
            result.extend(self.faces(k))
        return result

    def contains(self, face: Face) -> bool:
        return any(face & f == face for f in self.facets)

    # 구조 연산
    def link(self, face: Face) -> "Complex":
        """link_Δ A = {B : A∩B = ∅, A∪B ∈ Δ}"""
        if not self.contains(face):
            raise NotAFace(f"{format_face(face)}은(는) 복합체의 면이 아닙니다")
        return Complex.from_masks(
            [f & ~face for f in self.facets if is_subface(face, f)], self.n_vertices
        )

    def deletion(self, v: int) -> "Complex":
        """del_Δ v: v를 포함하지 않는 면들"""
        if v < 0 or v >= self.n_vertices:
            raise VertexOutOfRange(f"정점 {v}이(가) 범위를 벗어났습니다")
        return Complex.from_masks([f & ~bit(v) for f in self.facets], self.n_vertices)

    def skeleton(self, d: int) -> "Complex":
        """차원이 d 이하인 면들로 이루어진 부분 복합체"""
        if d >= self.dim:
            return self
        d = max(d, -1)
        masks = list(self.faces(d + 1))
        masks.extend(f for f in self.facets if face_size(f) <= d + 1)
        return Complex.from_masks(masks, self.n_vertices)

    # shifted / near-cone 판정
    def is_shifted_wrt(self, prefix: PrefixLike) -> bool:
        # facet만 검사해도 충분: A ⊆ F 이면 A∖w∪v ⊆ F 또는 F∖w∪v
        return _shift_closed(self.facets, self.contains, as_prefix(prefix))

    def is_shifted(self) -> bool:
        return self.is_shifted_wrt(VertexPrefix(tuple(range(self.n_vertices))))

    def is_near_cone(self, apex: int) -> bool:
        return self.is_shifted_wrt(VertexPrefix((apex,)))

    def is_t_fold_near_cone(self, prefix: PrefixLike) -> bool:
        """near-cone 재귀 정의에 따른 t-fold near-cone 판정"""
        prefix = as_prefix(prefix)
        if len(prefix) == 0:
            return True
        apex = prefix[0]
        if not self.is_near_cone(apex):
            return False
        if not self.contains(bit(apex)):
            # 정점이 하나도 없는 {∅} 뿐
            return True
        rest = prefix.rest()
        return (
            self.deletion(apex).is_t_fold_near_cone(rest)
            and self.link(bit(apex)).is_t_fold_near_cone(rest)
        )

    def is_recursive_near_cone(self, prefix: PrefixLike) -> bool:
        """deletion만 재귀하는 약한 t-near-cone 판정"""
        prefix = as_prefix(prefix)
        if len(prefix) == 0:
            return True
        apex = prefix[0]
        if not self.is_near_cone(apex):
            return False
        if not self.contains(bit(apex)):
            return True
        return self.deletion(apex).is_recursive_near_cone(prefix.rest())

    def is_cone(self, apex: int) -> bool:
        return all(f & bit(apex) for f in self.facets)

    def common_vertices(self) -> Tuple[int, ...]:
        """모든 facet에 들어 있는 정점 (cone apex 후보)"""
        common = self.facets[0]
        for f in self.facets[1:]:
            common &= f
        return face_members(common)

    def near_cone_apexes(self) -> List[int]:
        return [v for v in self.vertices if self.is_near_cone(v)]

    def maximal_shifted_prefix(self) -> VertexPrefix:
        """shifted 조건을 만족하는 가장 긴 초기 정점 구간"""
        t = 0
        while t < self.n_vertices and self.is_shifted_wrt(VertexPrefix(tuple(range(t + 1)))):
            t += 1
        return VertexPrefix(tuple(range(t)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.facets == other.facets

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.facets))

    def __repr__(self) -> str:
        body = ", ".join(format_face(f) for f in self.facets)
        return f"Complex(n={self.n_vertices}, facets=[{body}])"


def is_shifted_wrt(obj: Union[SetFamily, Complex], prefix: PrefixLike) -> bool:
    return obj.is_shifted_wrt(prefix)


def shadow(family: SetFamily) -> SetFamily:
    """r-원소 집합족의 그림자 ∂F: 모든 (r-1)-원소 부분집합"""
    if not family.is_uniform or family.r < 1:
        raise NotUniform("그림자는 r ≥ 1인 균일 집합족에서만 정의됩니다")
    result = set()
    for member in family:
        result.update(subfaces_of_size(member, family.r - 1))
    return SetFamily(result, family.universe, r=family.r - 1)


def spans_simplex_boundary(family: SetFamily) -> Optional[Face]:
    """
    집합족이 어떤 (k+1)-집합의 모든 k-부분집합을 포함하는지 검사

    Returns:
        Optional[Face]: 사전식으로 가장 작은 (k+1)-집합, 없으면 None
    """
    if not family.is_uniform:
        raise NotUniform("simplex boundary 판정은 균일 집합족에서만 정의됩니다")
    k = family.r
    members = family.members
    witnesses = set()
    for member in family:
        for x in range(family.universe):
            if member & bit(x):
                continue
            candidate = member | bit(x)
            if candidate in witnesses:
                continue
            if all(s in members for s in subfaces_of_size(candidate, k)):
                witnesses.add(candidate)
    if not witnesses:
        return None
    return min(witnesses, key=lex_key)
