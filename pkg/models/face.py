"""면(Face) 비트마스크 유틸리티

면은 정점 인덱스 집합이며 하나의 정수 비트마스크로 표현한다.
정점 인덱스 i는 비트 1 << i 에 대응한다.
"""
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from models.exceptions import VertexOutOfRange

MAX_VERTICES = 63

Face = int


def make_face(vertices: Iterable[int], n_vertices: int = MAX_VERTICES) -> Face:
    """정점 인덱스들로 면 생성"""
    mask = 0
    for v in vertices:
        v = int(v)
        if v < 0 or v >= n_vertices or v >= MAX_VERTICES:
            raise VertexOutOfRange(f"정점 {v}이(가) 범위를 벗어났습니다 (n={n_vertices})")
        mask |= 1 << v
    return mask


def face_members(face: Face) -> Tuple[int, ...]:
    """면의 정점들을 오름차순 튜플로 반환"""
    members = []
    v = 0
    while face:
        if face & 1:
            members.append(v)
        face >>= 1
        v += 1
    return tuple(members)


def face_size(face: Face) -> int:
    return face.bit_count()


def lex_key(face: Face) -> Tuple[int, ...]:
    """사전식 정렬 키 (오름차순 튜플 비교)"""
    return face_members(face)


def sort_faces(faces: Iterable[Face]) -> List[Face]:
    return sorted(faces, key=lex_key)


def bit(v: int) -> Face:
    return 1 << v


def lowest_vertex(face: Face) -> int:
    return (face & -face).bit_length() - 1


def full_face(n_vertices: int) -> Face:
    return (1 << n_vertices) - 1


def is_subface(small: Face, big: Face) -> bool:
    return small & big == small


def subfaces_of_size(face: Face, k: int) -> Iterator[Face]:
    """면의 k-원소 부분집합 열거 (사전식)"""
    for combo in combinations(face_members(face), k):
        mask = 0
        for v in combo:
            mask |= 1 << v
        yield mask


def swap(face: Face, out_vertex: int, in_vertex: int) -> Face:
    """A ∖ out ∪ in"""
    return (face & ~(1 << out_vertex)) | (1 << in_vertex)


def format_face(face: Face, labels: Optional[Sequence[str]] = None) -> str:
    members = face_members(face)
    if labels is None:
        return "{" + ",".join(str(v) for v in members) + "}"
    return "{" + ",".join(labels[v] for v in members) + "}"
