"""검증 유틸리티"""
from typing import Iterable, List, Sequence, Tuple

from sympy import isprime

from models.complex import Complex, SetFamily, VertexPrefix
from models.exceptions import HypothesisViolated
from models.face import bit, format_face, face_size
from models.schemas import RunConfig

Check = Tuple[bool, str]


class HypothesisValidator:
    """정리 가정 검증 클래스"""

    # 가정 종류별 depth 조건 (depth = d - 1)
    RANK_CONDITIONS = {
        "strict": "r < (depth+1)/2",
        "stability": "2 ≤ r ≤ (depth+1)/2",
        "cross": "2 ≤ r ≤ (depth+1)/2",
        "shadow": "2 ≤ r ≤ (depth+2)/2",
    }

    @classmethod
    def rank_in_range(cls, r: int, depth: int, kind: str) -> Check:
        """
        r 과 depth 조건 확인

        Returns:
            Tuple[bool, str]: (만족 여부, 메시지)
        """
        if kind == "strict":
            ok = r >= 1 and 2 * r < depth + 1
        elif kind in ("stability", "cross"):
            ok = r >= 2 and 2 * r <= depth + 1
        elif kind == "shadow":
            ok = r >= 2 and 2 * r <= depth + 2
        else:
            raise ValueError(f"알 수 없는 가정 종류: {kind}")
        condition = cls.RANK_CONDITIONS[kind]
        if ok:
            return True, f"{condition} 만족 (r={r}, depth={depth})"
        return False, f"{condition} 위반 (r={r}, depth={depth})"

    @staticmethod
    def prefix_length(prefix: VertexPrefix, expected: int) -> Check:
        if len(prefix) == expected:
            return True, f"prefix 길이 {expected}"
        return False, f"prefix 길이가 {expected}이어야 합니다 (받은 값 {len(prefix)})"

    @staticmethod
    def shifted_wrt(complex_: Complex, prefix: VertexPrefix) -> Check:
        if complex_.is_shifted_wrt(prefix):
            return True, f"{list(prefix)}에 대해 shifted"
        return False, f"복합체가 prefix {list(prefix)}에 대해 shifted 가 아닙니다"

    @staticmethod
    def near_cone(complex_: Complex, apex: int) -> Check:
        if complex_.is_near_cone(apex):
            return True, f"정점 {apex}가 near-cone apex"
        return False, f"정점 {apex}는 near-cone apex 가 아닙니다"

    @staticmethod
    def faces_of(complex_: Complex, family: SetFamily) -> Check:
        for member in family:
            if not complex_.contains(member):
                return False, f"{format_face(member)}은(는) 복합체의 면이 아닙니다"
        return True, "모든 원소가 면"

    @staticmethod
    def uniform(family: SetFamily, r: int) -> Check:
        if family.is_uniform and (family.r == r or len(family) == 0):
            return True, f"{r}-균일"
        return False, f"집합족이 {r}-균일이 아닙니다"

    @staticmethod
    def nonempty(family: SetFamily, name: str = "집합족") -> Check:
        if len(family):
            return True, f"{name} 비어 있지 않음"
        return False, f"{name}이(가) 비어 있습니다"

    @staticmethod
    def intersecting(family: SetFamily) -> Check:
        if family.is_intersecting():
            return True, "교차 집합족"
        return False, "집합족이 교차(intersecting)하지 않습니다"

    @staticmethod
    def no_common_intersection(family: SetFamily) -> Check:
        if not family.has_common_intersection():
            return True, "공통 교집합 없음"
        return False, f"공통 교집합 {format_face(family.common_intersection())}이(가) 있습니다"

    @staticmethod
    def at_most(family: SetFamily, r: int) -> Check:
        for member in family:
            if face_size(member) > r:
                return False, f"{format_face(member)}의 크기가 {r}보다 큽니다"
        return True, f"모든 원소 크기 ≤ {r}"

    @staticmethod
    def cross_intersecting(first: SetFamily, second: SetFamily) -> Check:
        if first.cross_intersects(second):
            return True, "교차 교차(cross-intersecting)"
        return False, "두 집합족이 cross-intersecting 하지 않습니다"

    @staticmethod
    def in_complex(complex_: Complex, v: int) -> Check:
        if 0 <= v < complex_.n_vertices and complex_.contains(bit(v)):
            return True, f"정점 {v}"
        return False, f"정점 {v}이(가) 복합체에 없습니다"

    @staticmethod
    def failures(checks: Iterable[Check]) -> List[str]:
        return [message for ok, message in checks if not ok]

    @classmethod
    def require(cls, checks: Iterable[Check]) -> None:
        """
        실패한 가정이 하나라도 있으면 전부 모아 예외 발생

        Raises:
            HypothesisViolated: 실패한 가정 목록
        """
        failed = cls.failures(checks)
        if failed:
            raise HypothesisViolated(failed)


class ConfigValidator:
    """실행 설정 검증 클래스"""

    MAX_PRIME = 2 ** 31
    VALID_FORMATS = ("text", "json")

    @classmethod
    def is_valid_prime(cls, p: int) -> Check:
        if p <= 2 or p >= cls.MAX_PRIME:
            return False, f"소수 p는 2 < p < 2^31 이어야 합니다: {p}"
        if not isprime(p):
            return False, f"{p}은(는) 소수가 아닙니다"
        return True, "유효한 소수입니다."

    @staticmethod
    def are_valid_seeds(seeds: Sequence[int]) -> Check:
        if not seeds:
            return False, "시드가 하나 이상 필요합니다."
        if any(seed < 0 for seed in seeds):
            return False, f"시드는 0 이상이어야 합니다: {list(seeds)}"
        return True, "유효한 시드입니다."

    @classmethod
    def validate(cls, config: RunConfig) -> Check:
        """
        RunConfig 전체 검증

        Returns:
            Tuple[bool, str]: (유효 여부, 메시지)
        """
        checks = [
            cls.is_valid_prime(config.prime),
            cls.are_valid_seeds(config.seeds),
            (config.limit_faces >= 1, f"--limit-faces는 1 이상이어야 합니다: {config.limit_faces}"),
            (config.budget >= 1, f"--budget은 1 이상이어야 합니다: {config.budget}"),
            (config.cross_limit >= 1, f"cross 한도는 1 이상이어야 합니다: {config.cross_limit}"),
            (
                config.output_format in cls.VALID_FORMATS,
                f"출력 형식은 {cls.VALID_FORMATS} 중 하나여야 합니다: {config.output_format}",
            ),
        ]
        failed = [message for ok, message in checks if not ok]
        if failed:
            return False, "; ".join(failed)
        return True, "유효한 설정입니다."
