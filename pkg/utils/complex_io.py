"""facet 파일 읽기/쓰기 유틸리티

텍스트 형식:
    # 주석
    !order a b c      (선택) 정점 순서 고정
    !r 2              (집합족 파일 전용) 균일 크기
    a b               한 줄에 facet 하나, 공백 구분 라벨
    {}                빈 면

JSON 형식: {"order": [...], "facets": [[...], ...], "r": k}
"""
import json
import logging
import os
import re
import tempfile
from typing import Dict, List, Optional, Sequence, Tuple

from models.complex import Complex, SetFamily
from models.exceptions import InputFormatError, ShiftLabError
from models.face import Face, face_members, make_face

logger = logging.getLogger(__name__)

ParsedFile = Tuple[Optional[List[str]], List[List[str]], Optional[int]]


class FacetFileParser:
    """
    facet 파일 파서 클래스

    정점 번호는 라벨이 처음 나온 순서가 아니라 정렬 순서로 매긴다.
    !order 가 있으면 그 순서를 그대로 쓰고, 없으면 모든 라벨이 정수일 때
    수 순서, 하나라도 정수가 아니면 문자열 순서다. write 는 항상 !order 를
    기록하므로 다시 읽어도 번호가 바뀌지 않는다.
    """

    EMPTY_FACE = "{}"

    @staticmethod
    def _is_json(text: str, path: Optional[str] = None) -> bool:
        if path and path.lower().endswith(".json"):
            return True
        stripped = text.lstrip()
        return stripped.startswith("{") and not stripped.startswith(FacetFileParser.EMPTY_FACE)

    @classmethod
    def parse_text(cls, text: str) -> ParsedFile:
        """
        텍스트 facet 파일 해석

        Returns:
            Tuple: (지시된 정점 순서 또는 None, 라벨 facet 목록, !r 값 또는 None)
        """
        order: Optional[List[str]] = None
        r: Optional[int] = None
        facets: List[List[str]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("!"):
                directive, *args = line[1:].split()
                if directive == "order":
                    if order is not None:
                        raise InputFormatError(f"{number}행: !order가 두 번 나옵니다")
                    order = args
                elif directive == "r" and len(args) == 1 and re.fullmatch(r"\d+", args[0]):
                    r = int(args[0])
                else:
                    raise InputFormatError(f"{number}행: 알 수 없는 지시문 {line!r}")
                continue
            if line == cls.EMPTY_FACE:
                facets.append([])
                continue
            labels = line.split()
            if len(set(labels)) != len(labels):
                raise InputFormatError(f"{number}행: 같은 정점이 두 번 나옵니다 {line!r}")
            facets.append(labels)
        return order, facets, r

    @staticmethod
    def parse_json(text: str) -> ParsedFile:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputFormatError(f"JSON 해석 실패: {e}") from e
        if not isinstance(payload, dict) or not isinstance(payload.get("facets"), list):
            raise InputFormatError('JSON 파일에는 "facets" 목록이 있어야 합니다')
        order = payload.get("order")
        if order is not None:
            if not isinstance(order, list):
                raise InputFormatError('"order"는 목록이어야 합니다')
            order = [str(label) for label in order]
        facets = []
        for facet in payload["facets"]:
            if not isinstance(facet, list):
                raise InputFormatError(f"facet은 목록이어야 합니다: {facet!r}")
            facets.append([str(label) for label in facet])
        r = payload.get("r")
        if r is not None and (not isinstance(r, int) or r < 0):
            raise InputFormatError(f'"r"은 0 이상의 정수여야 합니다: {r!r}')
        return order, facets, r

    @classmethod
    def parse(cls, text: str, path: Optional[str] = None) -> ParsedFile:
        if cls._is_json(text, path):
            return cls.parse_json(text)
        return cls.parse_text(text)

    @staticmethod
    def sort_labels(labels) -> List[str]:
        """모든 라벨이 정수면 수 순서, 아니면 문자열 순서"""
        labels = set(labels)
        if all(re.fullmatch(r"-?\d+", label) for label in labels):
            return sorted(labels, key=int)
        return sorted(labels)

    @staticmethod
    def _to_masks(facets: Sequence[Sequence[str]], labels: Sequence[str]) -> List[Face]:
        index: Dict[str, int] = {label: i for i, label in enumerate(labels)}
        masks = []
        for facet in facets:
            try:
                masks.append(make_face((index[label] for label in facet), len(labels)))
            except KeyError as e:
                raise InputFormatError(f"정점 순서에 없는 라벨: {e.args[0]}") from e
        return masks

    @staticmethod
    def _read(path: str) -> str:
        try:
            with open(path, encoding="utf-8") as handle:
                return handle.read()
        except OSError as e:
            raise InputFormatError(f"파일을 읽을 수 없습니다: {path} ({e})") from e

    @classmethod
    def complex_from_text(cls, text: str, path: Optional[str] = None) -> Tuple[Complex, List[str]]:
        """
        facet 파일 내용으로 복합체 생성

        Returns:
            Tuple[Complex, List[str]]: (복합체, 정점 라벨 순서)
        """
        order, facets, _ = cls.parse(text, path)
        if not facets:
            raise InputFormatError("facet이 하나도 없습니다")
        used = {label for facet in facets for label in facet}
        if order is None:
            labels = cls.sort_labels(used)
        else:
            if len(set(order)) != len(order):
                raise InputFormatError("!order에 같은 라벨이 두 번 나옵니다")
            labels = list(order)
        try:
            complex_ = Complex.from_masks(cls._to_masks(facets, labels), len(labels))
        except ShiftLabError as e:
            raise InputFormatError(str(e)) from e
        logger.debug(f"Loaded complex: {len(labels)} vertices, {len(complex_.facets)} facets")
        return complex_, labels

    @classmethod
    def load_complex(cls, path: str) -> Tuple[Complex, List[str]]:
        return cls.complex_from_text(cls._read(path), path)

    @classmethod
    def family_from_text(cls, text: str, labels: Sequence[str], path: Optional[str] = None) -> SetFamily:
        """
        집합족 파일 내용 해석 (라벨은 복합체의 정점 순서를 따름)

        !r 이 있으면 균일 모드, 없으면 크기가 섞일 때 Sperner 모드
        """
        _, members, r = cls.parse(text, path)
        try:
            return SetFamily(cls._to_masks(members, labels), len(labels), r)
        except InputFormatError:
            raise
        except ShiftLabError as e:
            raise InputFormatError(str(e)) from e

    @classmethod
    def load_family(cls, path: str, labels: Sequence[str]) -> SetFamily:
        return cls.family_from_text(cls._read(path), labels, path)

    @staticmethod
    def default_labels(n_vertices: int) -> List[str]:
        return [str(v) for v in range(n_vertices)]

    @classmethod
    def dump_complex(
        cls,
        complex_: Complex,
        labels: Optional[Sequence[str]] = None,
        output_format: str = "text",
    ) -> str:
        """복합체를 facet 파일 내용으로 변환 (정점 순서를 항상 기록)"""
        labels = list(labels) if labels is not None else cls.default_labels(complex_.n_vertices)
        facets = [[labels[v] for v in face_members(facet)] for facet in complex_.facets]
        if output_format == "json":
            return json.dumps({"order": labels, "facets": facets}, ensure_ascii=False) + "\n"
        lines = ["!order " + " ".join(labels)] if labels else []
        lines.extend(" ".join(facet) if facet else cls.EMPTY_FACE for facet in facets)
        return "\n".join(lines) + "\n"

    @staticmethod
    def write_atomic(path: str, content: str) -> None:
        """같은 디렉터리의 임시 파일에 쓴 뒤 교체"""
        directory = os.path.dirname(os.path.abspath(path))
        handle, temp_path = tempfile.mkstemp(dir=directory, prefix=".shiftlab-", suffix=".tmp")
        try:
            with os.fdopen(handle, "w", encoding="utf-8") as temp:
                temp.write(content)
            os.replace(temp_path, path)
        except BaseException:
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise

    @classmethod
    def write_complex(
        cls,
        path: str,
        complex_: Complex,
        labels: Optional[Sequence[str]] = None,
        output_format: Optional[str] = None,
    ) -> None:
        if output_format is None:
            output_format = "json" if path.lower().endswith(".json") else "text"
        cls.write_atomic(path, cls.dump_complex(complex_, labels, output_format))
