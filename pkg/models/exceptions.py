"""예외 정의"""
from typing import Any, List, Optional


class ShiftLabError(ValueError):
    """shiftlab 공통 예외 (CLI 종료 코드 포함)"""

    exit_code = 2


class EmptyInput(ShiftLabError):
    """면(face)이 하나도 없는 입력 (void complex)"""


class VertexOutOfRange(ShiftLabError):
    """정점 인덱스가 범위를 벗어남"""


class NotAFace(ShiftLabError):
    """복합체의 면이 아닌 집합"""


class NotUniform(ShiftLabError):
    """균일(uniform) 집합족이 필요한 연산"""


class NotSperner(ShiftLabError):
    """Sperner 집합족이 아님"""


class InvalidPrefix(ShiftLabError):
    """정점 prefix가 증가 순서가 아니거나 범위를 벗어남"""


class DimensionMismatch(ShiftLabError):
    """행 길이 또는 행렬 크기 불일치"""


class SizeMismatch(ShiftLabError):
    """minor의 행/열 인덱스 개수 불일치"""


class OutOfRange(ShiftLabError):
    """허용 범위를 벗어난 차원/크기 인자"""


class BadSize(ShiftLabError):
    """생성기 부품 크기 오류"""


class BadRank(ShiftLabError):
    """매트로이드 rank 오류"""


class InputFormatError(ShiftLabError):
    """facet 파일 형식 오류"""


class InvalidConfig(ShiftLabError):
    """실행 설정 오류"""


class HypothesisViolated(ShiftLabError):
    """정리의 가정이 성립하지 않음"""

    def __init__(self, failures: List[str]):
        self.failures = list(failures)
        super().__init__("가정 위반: " + "; ".join(self.failures))


class AugmentationImpossible(ShiftLabError):
    """Sperner 집합족을 r-면으로 보강할 수 없음 (Hall 조건 위반)"""

    def __init__(self, message: str, hall_witness: Optional[Any] = None):
        self.hall_witness = hall_witness
        super().__init__(message)


class ResourceLimit(ShiftLabError):
    """면 개수 또는 탐색 노드 예산 초과"""

    exit_code = 3


class SingularBasis(ShiftLabError):
    """일반 기저 행렬이 가역이 아님"""

    exit_code = 3


class GenericityFailure(ShiftLabError):
    """시드 간 대수적 shift 결과가 합의되지 않음"""

    exit_code = 3


class ConventionError(ShiftLabError):
    """대수적 shift 결과가 shifted가 아님 (사전식 순서 규약 오류)"""

    exit_code = 1


class ConsistencyError(ShiftLabError):
    """두 계산 경로의 결과가 서로 다름"""

    exit_code = 1
