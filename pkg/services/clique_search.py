"""비트셋 기반 최대 clique 분기 한정 탐색

면들의 교차 그래프(공통 정점이 있으면 인접)에서 최대 clique 를 찾는다.
교차 집합족 = 교차 그래프의 clique 이다.

모든 교차 집합족은 한 정점의 star 안에 있거나 공통 교집합이 비어 있으므로
전체 최대값은 max(가장 큰 star, 공통 교집합이 없는 최대값) 이다.
탐색은 공통 교집합이 없는 쪽만 한다.

- 공통 교집합에 정점 v 가 남아 있으면 v 를 피하는 면이 반드시 하나 더 들어가야 하므로
  그 면들로만 분기한다.
- 맞바꿔도 후보 집합이 그대로인 정점들(쌍둥이 정점)이 있으면 면의 궤도마다 대표 하나로만
  분기하고, 앞선 궤도는 뒤 분기에서 통째로 제외한다.
- 후보 집합이 shifted 이면 사전식 최소 최대 집합족은 shifted 이거나 어떤 두 정점 {i, j} 와
  모든 원소가 만난다 (S_ij 를 적용했을 때 공통 교집합이 생기는 경우). 그래서 shifted
  집합족(순서 아이디얼)과 두 정점 부류만 탐색한다.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from models.exceptions import ConsistencyError, ResourceLimit
from models.face import Face, face_size

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 5_000_000
ALL_ONES = -1
UNBOUNDED = float("inf")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class NodeBudget:
    """한 번의 최대값 계산에 딸린 여러 탐색이 함께 쓰는 노드 예산"""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise ResourceLimit(f"탐색 노드 예산 {self.limit}을 초과했습니다")


@dataclass
class _SearchState:
    best: int
    goal: float
    family: Optional[int] = None


def twin_classes(faces: Sequence[Face]) -> Tuple[int, ...]:
    """두 정점을 맞바꿔도 면 집합이 변하지 않는 정점끼리 묶은 분할 (비트마스크 튜플)"""
    present = set(faces)
    support = 0
    for face in faces:
        support |= face
    classes: List[int] = []
    for v in _bits(support):
        for k, group in enumerate(classes):
            pair = (1 << _lowest(group)) | (1 << v)
            if all(face ^ pair in present for face in faces if face_size(face & pair) == 1):
                classes[k] |= 1 << v
                break
        else:
            classes.append(1 << v)
    return tuple(classes)


def refine(classes: Optional[Tuple[int, ...]], mask: int) -> Optional[Tuple[int, ...]]:
    """각 부분을 mask 안쪽과 바깥쪽으로 나눈다"""
    if classes is None:
        return None
    parts = []
    for group in classes:
        for part in (group & mask, group & ~mask):
            if part:
                parts.append(part)
    return tuple(parts)


def is_shifted(faces: Sequence[Face]) -> bool:
    """균일한 면 집합이 모든 i < j 에 대해 j → i 교체로 닫혀 있는지"""
    present = set(faces)
    if len({face_size(face) for face in faces}) > 1:
        return False
    for face in faces:
        for a in _bits(face):
            if a and not face & (1 << (a - 1)) and face ^ (3 << (a - 1)) not in present:
                return False
    return True


def _color_classes(adj: Sequence[int], candidates: int) -> List[Tuple[int, int]]:
    """탐욕적 색칠로 (면, 색 번호) 를 색 오름차순으로"""
    ordered: List[Tuple[int, int]] = []
    uncolored = candidates
    color = 0
    while uncolored:
        color += 1
        available = uncolored
        while available:
            v = _lowest(available)
            uncolored &= ~(1 << v)
            available &= ~(1 << v)
            available &= ~adj[v]
            ordered.append((v, color))
    return ordered


def _color_bound(adj: Sequence[int], candidates: int) -> int:
    """서로소인 면끼리 묶은 색의 수 (clique 크기 상한)"""
    uncolored = candidates
    color = 0
    while uncolored:
        color += 1
        available = uncolored
        while available:
            v = _lowest(available)
            uncolored &= ~(1 << v)
            available &= ~(1 << v) & ~adj[v]
    return color


class _EmptyCommonSearch:
    """
    공통 교집합이 빈 교차 집합족의 분기 한정 탐색

    Args:
        faces: 후보 면 (정수값 오름차순)
        adj: 교차 그래프 비트셋
        budget: 공유 노드 예산
    """

    def __init__(self, faces: Sequence[Face], adj: Sequence[int], budget: NodeBudget):
        self.faces = faces
        self.adj = adj
        self.budget = budget
        self.support = 0
        for face in faces:
            self.support |= face
        self.avoid: Dict[int, int] = {v: 0 for v in _bits(self.support)}
        for i, face in enumerate(faces):
            for v in self.avoid:
                if not face & (1 << v):
                    self.avoid[v] |= 1 << i

    def run(
        self,
        best: int,
        goal: float = UNBOUNDED,
        include: int = 0,
        allowed: int = ALL_ONES,
        classes: Optional[Tuple[int, ...]] = None,
    ) -> Tuple[int, Optional[int]]:
        """
        best 보다 큰 집합족 탐색

        Args:
            best: 이미 알려진 크기 (이보다 커야 기록)
            goal: 이 크기에 닿으면 멈춤
            include: 반드시 포함할 면들
            allowed: 쓸 수 있는 면들
            classes: allowed 와 include 를 보존하는 정점 분할

        Returns:
            (크기, 집합족 비트셋) - 찾지 못하면 (best, None)
        """
        candidates = allowed & ((1 << len(self.faces)) - 1) & ~include
        common = ALL_ONES
        clique = list(_bits(include))
        for i in clique:
            if include & ~(1 << i) & ~self.adj[i]:
                return best, None
            candidates &= self.adj[i]
            common &= self.faces[i]
            classes = refine(classes, self.faces[i])
        state = _SearchState(best=best, goal=goal)
        self._expand(clique, candidates, common, classes, state)
        if state.family is None:
            return best, None
        return state.best, state.family

    def _forced_vertex(self, common: int, candidates: int) -> int:
        """공통 정점 중 피하는 후보가 가장 적은 정점"""
        pool = common & self.support
        return min(_bits(pool), key=lambda v: ((candidates & self.avoid[v]).bit_count(), v))

    def _orbits(self, mask: int, classes: Tuple[int, ...]) -> List[int]:
        groups: Dict[Tuple[int, ...], int] = {}
        for i in _bits(mask):
            key = tuple((self.faces[i] & group).bit_count() for group in classes)
            groups[key] = groups.get(key, 0) | (1 << i)
        return sorted(groups.values(), key=lambda orbit: (-orbit.bit_count(), _lowest(orbit)))

    def _expand(
        self,
        clique: List[int],
        candidates: int,
        common: int,
        classes: Optional[Tuple[int, ...]],
        state: _SearchState,
    ) -> None:
        self.budget.tick()
        size = len(clique)
        if not common and size > state.best:
            state.best = size
            state.family = sum(1 << i for i in clique)
            if state.best >= state.goal:
                return
        if not candidates:
            return
        if size + _color_bound(self.adj, candidates) <= state.best:
            return

        if common:
            # 공통 정점 v 를 피하는 면이 하나는 들어가야 한다
            v = self._forced_vertex(common, candidates)
            branch = candidates & self.avoid[v]
            if not branch:
                return
            group = refine(classes, 1 << v)
        else:
            branch = candidates
            group = classes

        if group is not None:
            orbits = self._orbits(branch, group)
            if len(orbits) < branch.bit_count():
                self._branch_orbits(clique, candidates, common, group, orbits, state)
                return

        if common:
            for d in _bits(branch):
                rest = candidates & self.adj[d]
                if size + 1 + rest.bit_count() > state.best:
                    clique.append(d)
                    self._expand(clique, rest, common & self.faces[d], None, state)
                    clique.pop()
                    if state.best >= state.goal:
                        return
                candidates &= ~(1 << d)
            return

        for v, color in reversed(_color_classes(self.adj, candidates)):
            if size + color <= state.best:
                return
            clique.append(v)
            self._expand(clique, candidates & self.adj[v], 0, None, state)
            clique.pop()
            if state.best >= state.goal:
                return
            candidates &= ~(1 << v)

    def _branch_orbits(
        self,
        clique: List[int],
        candidates: int,
        common: int,
        group: Tuple[int, ...],
        orbits: List[int],
        state: _SearchState,
    ) -> None:
        """궤도 대표를 넣고, 앞선 궤도는 통째로 뺀다"""
        size = len(clique)
        excluded = 0
        for orbit in orbits:
            rep = _lowest(orbit)
            rest = candidates & ~excluded & self.adj[rep]
            if size + 1 + rest.bit_count() > state.best:
                clique.append(rep)
                self._expand(clique, rest, common & self.faces[rep], refine(group, self.faces[rep]), state)
                clique.pop()
                if state.best >= state.goal:
                    return
            excluded |= orbit


class _ShiftedFamilySearch:
    """
    shifted 후보 집합 안의 shifted 교차 집합족 탐색

    shifted 집합족은 성분별 순서(정렬한 원소를 자리마다 비교)의 아이디얼이다.
    {1..r} 를 포함하면 {0..r} 의 r-부분집합이 모두 들어가 공통 교집합이 비게 된다.
    """

    def __init__(self, faces: Sequence[Face], adj: Sequence[int], budget: NodeBudget):
        self.faces = faces
        self.adj = adj
        self.budget = budget
        index = {face: i for i, face in enumerate(faces)}
        m = len(faces)
        self.below = [0] * m
        for i, face in enumerate(faces):
            below = 1 << i
            for a in _bits(face):
                if a and not face & (1 << (a - 1)):
                    below |= self.below[index[face ^ (3 << (a - 1))]]
            self.below[i] = below
        self.above = [0] * m
        for i in range(m):
            for j in _bits(self.below[i]):
                self.above[j] |= 1 << i
        r = face_size(faces[0]) if faces else 0
        self.base = index.get(((1 << r) - 1) << 1)

    def _restrict(self, candidates: int, face: int) -> int:
        removed = candidates & ~self.adj[face]
        candidates &= self.adj[face]
        for g in _bits(removed):
            candidates &= ~self.above[g]
        return candidates

    def run(self, best: int, goal: float = UNBOUNDED, include: int = 0) -> Tuple[int, Optional[int]]:
        """best 보다 큰 shifted 집합족 (없으면 (best, None))"""
        if self.base is None:
            return best, None
        chosen = self.below[self.base]
        for i in _bits(include):
            chosen |= self.below[i]
        for i in _bits(chosen):
            if chosen & ~(1 << i) & ~self.adj[i]:
                return best, None
        candidates = ((1 << len(self.faces)) - 1) & ~chosen
        for i in _bits(chosen):
            candidates = self._restrict(candidates, i)
        state = _SearchState(best=best, goal=goal)
        self._expand(chosen, candidates, state)
        if state.family is None:
            return best, None
        return state.best, state.family

    def _expand(self, chosen: int, candidates: int, state: _SearchState) -> None:
        self.budget.tick()
        size = chosen.bit_count()
        if size > state.best:
            state.best = size
            state.family = chosen
        while candidates and state.best < state.goal:
            if size + _color_bound(self.adj, candidates) <= state.best:
                return
            # 정수값이 가장 작은 후보는 아래 면이 모두 이미 들어가 있다
            f = _lowest(candidates)
            self._expand(chosen | (1 << f), self._restrict(candidates & ~(1 << f), f), state)
            candidates &= ~self.above[f]


class IntersectingCliqueSearch:
    """
    교차 집합족 최대 크기 탐색기

    Args:
        faces: 후보 면 (비어 있지 않은 면)
        require_empty_common: True 면 공통 교집합이 비어 있는 집합족만 허용
        budget: 탐색 노드 예산
    """

    def __init__(
        self,
        faces: Sequence[Face],
        require_empty_common: bool = False,
        budget: int = DEFAULT_NODE_BUDGET,
    ):
        self.faces: List[Face] = sorted(set(faces))
        self.require_empty_common = require_empty_common
        self.budget = NodeBudget(budget)

        m = len(self.faces)
        self.full = (1 << m) - 1
        self.adj: List[int] = [0] * m
        for i in range(m):
            for j in range(i + 1, m):
                if self.faces[i] & self.faces[j]:
                    self.adj[i] |= 1 << j
                    self.adj[j] |= 1 << i

        self.support = 0
        for face in self.faces:
            self.support |= face
        self.stars: Dict[int, int] = {v: 0 for v in _bits(self.support)}
        for i, face in enumerate(self.faces):
            for v in _bits(face):
                self.stars[v] |= 1 << i

        self.classes = twin_classes(self.faces)
        self.shifted = bool(self.faces) and is_shifted(self.faces)
        self._search = _EmptyCommonSearch(self.faces, self.adj, self.budget)
        self._shifted = _ShiftedFamilySearch(self.faces, self.adj, self.budget) if self.shifted else None
        # 이미 찾은 (공통 교집합 없는) 집합족 비트셋
        self._known: List[int] = []
        self._seeded = False
        self._empty_common: Optional[Tuple[int, Optional[int]]] = None
        self._unrestricted: Optional[Tuple[int, bool]] = None

    @property
    def nodes(self) -> int:
        return self.budget.used

    @property
    def max_star(self) -> int:
        return max((star.bit_count() for star in self.stars.values()), default=0)

    def _is_empty_common(self, family: int) -> bool:
        return bool(family) and all(family & ~star for star in self.stars.values())

    def _seed_families(self) -> List[int]:
        """
        공통 교집합이 없는 알려진 집합족

        x 를 포함하고 B 와 만나는 면 전체에 B 를 더한 것, 그리고 세 정점 중 둘 이상을 포함하는 면 전체.
        """
        families = []
        for star in self.stars.values():
            for b in _bits(self.full & ~star):
                families.append((star & self.adj[b]) | (1 << b))
        if self.faces and face_size(self.faces[0]) >= 2:
            for triple in combinations(sorted(self.stars), 3):
                family = 0
                for i, face in enumerate(self.faces):
                    if sum(1 for v in triple if face & (1 << v)) >= 2:
                        family |= 1 << i
                families.append(family)
        return [family for family in families if self._is_empty_common(family)]

    def _pairs(self) -> List[Tuple[int, int]]:
        """쌍둥이 정점 분할 아래 궤도마다 하나씩 고른 정점 쌍"""
        owner = {v: k for k, group in enumerate(self.classes) for v in _bits(group)}
        reps: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for i, j in combinations(sorted(self.stars), 2):
            reps.setdefault((owner[i], owner[j]), (i, j))
        return sorted(reps.values())

    def _meets_pair(self, i: int, j: int) -> int:
        return self.stars[i] | self.stars[j]

    def _improve(self, best: int, goal: float = UNBOUNDED, include: int = 0) -> Tuple[int, Optional[int]]:
        """공통 교집합이 없고 best 보다 큰 집합족 (goal 에 닿으면 멈춤)"""
        if not self.shifted:
            return self._search.run(best, goal, include, classes=self.classes)
        found = None
        best, family = self._shifted.run(best, goal, include)
        if family is not None:
            found = family
        pairs = self._pairs() if not include else list(combinations(sorted(self.stars), 2))
        for i, j in pairs:
            if best >= goal:
                break
            allowed = self._meets_pair(i, j)
            if include & ~allowed or allowed.bit_count() <= best:
                continue
            classes = refine(self.classes, (1 << i) | (1 << j))
            best, family = self._search.run(best, goal, include, allowed, classes)
            if family is not None:
                found = family
        return best, found

    def empty_common_maximum(self) -> Tuple[int, Optional[int]]:
        """공통 교집합이 없는 최대 크기와 그 집합족 하나"""
        if self._empty_common is None:
            seeds = self._seed_families()
            best, family = 0, None
            for seed in seeds:
                if seed.bit_count() > best:
                    best, family = seed.bit_count(), seed
            self._known.extend(seed for seed in seeds if seed.bit_count() == best)
            self._seeded = True
            size, found = self._improve(best)
            if found is not None:
                family = found
                self._known.append(found)
            self._empty_common = (size, family)
        return self._empty_common

    def unrestricted_maximum(self) -> Tuple[int, bool]:
        """(최대 크기, 공통 교집합이 없는 집합족도 그 크기에 닿는지)"""
        if self._unrestricted is None:
            star = self.max_star
            if self._empty_common is not None:
                other = self._empty_common[0]
            elif star:
                other, found = self._improve(star - 1)
                if found is None:
                    other = 0
                else:
                    self._known.append(found)
            else:
                other = self.empty_common_maximum()[0]
            size = max(star, other)
            self._unrestricted = (size, bool(size) and other == size)
        return self._unrestricted

    def maximum(self) -> int:
        """조건을 만족하는 교차 집합족의 최대 크기"""
        if self.require_empty_common:
            return self.empty_common_maximum()[0]
        return self.unrestricted_maximum()[0]

    def _extends(self, trial: int, size: int, with_stars: bool) -> bool:
        """trial 을 포함하는 크기 size 의 집합족이 있는지"""
        if with_stars and any(star & trial == trial and star.bit_count() == size for star in self.stars.values()):
            return True
        if any(family & trial == trial and family.bit_count() == size for family in self._known):
            return True
        _, found = self._improve(size - 1, size, trial)
        if found is None:
            return False
        self._known.append(found)
        return True

    def _witness(self, size: int, with_stars: bool, empty_common_reaches: bool) -> List[Face]:
        """
        크기 size 인 집합족 중 (정수 비트마스크 정렬 목록으로) 사전식 최소

        앞자리부터 가장 작은 면을 고르고, 고른 면들을 포함하는 크기 size 의 집합족이
        있는지 확인한다.
        """
        if size == 0:
            return []
        if not empty_common_reaches:
            # 최대 집합족은 크기 size 인 star 뿐
            stars = [star for star in self.stars.values() if star.bit_count() == size]
            best = min(stars, key=lambda star: list(_bits(star)))
            return [self.faces[i] for i in _bits(best)]
        if not self._seeded:
            self._known.extend(seed for seed in self._seed_families() if seed.bit_count() == size)
            self._seeded = True

        chosen, allowed = 0, self.full
        for _ in range(size):
            for i in _bits(allowed):
                trial = chosen | (1 << i)
                if self._extends(trial, size, with_stars):
                    chosen = trial
                    allowed &= self.adj[i] & ~((2 << i) - 1)
                    break
            else:
                raise ConsistencyError(f"크기 {size}의 집합족을 다시 구성하지 못했습니다")
        return [self.faces[i] for i in _bits(chosen)]

    def search(self, require_empty_common: Optional[bool] = None) -> Tuple[int, List[Face]]:
        """(최대 크기, 사전식 최소 증인)"""
        if require_empty_common is None:
            require_empty_common = self.require_empty_common
        if require_empty_common:
            size = self.empty_common_maximum()[0]
            witness = self._witness(size, with_stars=False, empty_common_reaches=True)
        else:
            size, reaches = self.unrestricted_maximum()
            witness = self._witness(size, with_stars=True, empty_common_reaches=reaches)
        logger.debug(
            f"Clique search: {len(self.faces)} faces, max {size}, "
            f"empty_common={require_empty_common}, shifted={self.shifted}, {self.nodes} nodes"
        )
        return size, witness
