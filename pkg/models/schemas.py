"""데이터 스키마 정의"""
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from models.complex import Complex, SetFamily, VertexPrefix
from models.face import Face
from models.finite_field import DEFAULT_PRIME

DEFAULT_SEED = 1


@dataclass
class DepthReport:
    """depth 계산 결과"""
    depth: int
    dim: int
    is_cm: bool
    min_facet_dim: int
    has_facet_depth: bool
    witness: Optional[Tuple[Face, int]] = None  # (면 A, H̃_i(link A) ≠ 0 인 i)
    cross_checked: bool = False


@dataclass
class VDResult:
    """vertex-decomposability 판정 결과"""
    is_vd: bool
    certificate: List[int] = field(default_factory=list)  # shedding 정점 (전위 순회)


@dataclass
class ShiftStep:
    """shift 연산 한 단계"""
    operator: str  # "Shift_{v<-w}" 또는 "algebraic(seed)"
    family_size: int
    changed: int


@dataclass
class ShiftTrace:
    """안정화 과정 기록"""
    steps: List[ShiftStep]
    outcome: SetFamily
    boundary_witness: Optional[Face] = None
    blocking_pair: Optional[Tuple[int, int]] = None

    @property
    def effective_steps(self) -> int:
        return sum(1 for step in self.steps if step.changed)

    @property
    def blocked(self) -> bool:
        return self.blocking_pair is not None


@dataclass
class AlgShiftResult:
    """시드 합의를 거친 대수적 shift 결과"""
    shifted: Union[Complex, SetFamily]
    seeds: List[int]
    agreeing_seeds: List[int]
    reran: bool = False


@dataclass
class ShiftPropertyReport:
    """대수적 shift 성질 검사 결과 (None 은 해당 없음으로 건너뜀)"""
    items: Dict[str, Optional[bool]]
    seeds: List[int]
    agreement: bool
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def failures(self) -> List[str]:
        return [name for name, passed in self.items.items() if passed is False]

    @property
    def passed(self) -> bool:
        return self.agreement and not self.failures


@dataclass
class EkrReport:
    """EKR / strict EKR 검사 결과"""
    r: int
    max_size: int
    star_bound: int
    best_star_vertex: Optional[int]
    holds_ekr: bool
    strict: Optional[bool] = None
    nonstar_max_size: Optional[int] = None
    witnesses: List[List[Face]] = field(default_factory=list)
    strict_hypotheses: bool = False  # near-cone + depth ≥ 2r

    @property
    def violation(self) -> bool:
        if not self.holds_ekr:
            return True
        return self.strict is False and self.strict_hypotheses


@dataclass
class StabilityReport:
    """Hilton-Milner 형 안정성 검사 결과"""
    r: int
    prefix: VertexPrefix
    beta: int
    hm_bound: int
    observed_max_nonstar: int
    extremal_family: SetFamily
    witness: List[Face] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.observed_max_nonstar <= self.hm_bound

    @property
    def extremal_size(self) -> int:
        return len(self.extremal_family)


@dataclass
class CrossReport:
    """교차 교차(cross-intersecting) 집합족 검사 결과"""
    r: int
    prefix: VertexPrefix
    variant: str  # "classic", "shadow", "sperner"
    gamma: int
    bound: int
    observed_max_sum: int
    witness_a: List[Face] = field(default_factory=list)
    witness_b: List[Face] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.observed_max_sum <= self.bound


@dataclass
class HibiResult:
    """포함 관계를 따르는 단사 F_s → F_r"""
    s: int
    r: int
    injection: Optional[Dict[Face, Face]] = None
    hall_violator: Optional[List[Face]] = None
    hall_neighbors: Optional[List[Face]] = None

    @property
    def exists(self) -> bool:
        return self.injection is not None


@dataclass
class ReductionTrace:
    """apex shift 로 공통 교집합 없는 교차 집합족을 줄이는 과정"""
    apex: int
    shift_trace: ShiftTrace
    outcome: str  # "A": simplex boundary, "B": 공통 교집합을 만드는 shift 가 막음
    boundary_witness: Optional[Face] = None
    alg_shift_common_empty: Optional[bool] = None
    blocking_pair: Optional[Tuple[int, int]] = None
    phi: Dict[Face, Face] = field(default_factory=dict)
    phi_injective: Optional[bool] = None
    phi_surjective: Optional[bool] = None
    missing_facet: Optional[Face] = None
    missing_set: Optional[Face] = None
    b_t_size: Optional[int] = None
    c_t_size: Optional[int] = None
    alt_b: List[Face] = field(default_factory=list)
    alt_c: List[Face] = field(default_factory=list)
    alt_cross_intersecting: Optional[bool] = None

    @property
    def verified(self) -> bool:
        if self.outcome == "A":
            return self.boundary_witness is not None and bool(self.alg_shift_common_empty)
        return bool(self.phi_injective) and self.phi_surjective is False


@dataclass
class StabilityTrace:
    """안정성 증명의 두 경우 (Case 1 / Case 2) 재현"""
    case: int
    first_trace: ShiftTrace
    second_trace: Optional[ShiftTrace] = None
    boundary_witness: Optional[Face] = None
    added_faces: List[Face] = field(default_factory=list)
    alg_shift_common_empty: Optional[bool] = None

    @property
    def verified(self) -> bool:
        return self.boundary_witness is not None and bool(self.alg_shift_common_empty)


@dataclass
class RunConfig:
    """CLI 실행 설정"""
    prime: int = DEFAULT_PRIME
    seeds: List[int] = field(default_factory=lambda: [DEFAULT_SEED, DEFAULT_SEED + 1, DEFAULT_SEED + 2])
    limit_faces: int = 2000
    budget: int = 5_000_000
    cross_limit: int = 24
    output_format: str = "text"
    inputs: List[str] = field(default_factory=list)
    out: Optional[str] = None

    @staticmethod
    def env_seed() -> int:
        """환경 변수 SHIFTLAB_SEED (없으면 기본값)"""
        raw = os.getenv("SHIFTLAB_SEED")
        if raw is None or not raw.strip():
            return DEFAULT_SEED
        return int(raw)

    @classmethod
    def default_seeds(cls, count: int = 3) -> List[int]:
        base = cls.env_seed()
        return [base + i for i in range(count)]
