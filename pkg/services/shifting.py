"""조합적 shift 와 외대수(exterior algebraic) shift 서비스"""
import logging
from collections import Counter
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

from models.basis_loader import BasisLoader, get_basis_loader
from models.complex import Complex, PrefixLike, SetFamily, VertexPrefix, as_prefix, shadow, spans_simplex_boundary
from models.exceptions import (
    ConventionError,
    DimensionMismatch,
    GenericityFailure,
    NotUniform,
    ResourceLimit,
    SingularBasis,
)
from models.face import Face, bit, make_face, swap
from models.finite_field import DEFAULT_PRIME, CompoundMinorTable, FpMatrix, RankTracker
from models.schemas import AlgShiftResult, RunConfig, ShiftPropertyReport, ShiftStep, ShiftTrace
from services.homology import HomologyService

logger = logging.getLogger(__name__)

Basis = Union[FpMatrix, CompoundMinorTable, int, None]
T = TypeVar("T")


def shift_tag(v: int, w: int) -> str:
    return f"Shift_{{{v}<-{w}}}"


class ShiftingService:
    """조합적 shift 안정화와 일반 기저 소행렬식 기반의 대수적 shift"""

    DEFAULT_SEED_COUNT = 3
    MAX_SWEEPS = 10_000

    def __init__(
        self,
        p: int = DEFAULT_PRIME,
        basis_loader: Optional[BasisLoader] = None,
        homology: Optional[HomologyService] = None,
    ):
        self.p = p
        self.basis_loader = basis_loader or get_basis_loader()
        self.homology = homology or HomologyService(p)

    # 조합적 shift
    @staticmethod
    def comb_shift(family: SetFamily, v: int, w: int) -> SetFamily:
        """
        Shift_{v<-w}: w 를 포함하고 v 를 포함하지 않는 A 를 A∖w∪v 로 바꾼다.
        단, A∖w∪v 가 이미 집합족에 있으면 A 를 그대로 둔다.
        """
        if v == w:
            return family
        members = family.members
        result = []
        for member in family:
            if member & bit(w) and not member & bit(v):
                moved = swap(member, w, v)
                result.append(member if moved in members else moved)
            else:
                result.append(member)
        return family.with_sets(result)

    def comb_shift_complex(self, complex_: Complex, v: int, w: int) -> Tuple[Complex, bool]:
        """
        차수별 Shift_{v<-w} 후 포함 관계로 다시 닫는다

        Returns:
            Tuple[Complex, bool]: (결과 복합체, 닫는 과정에서 면이 추가되었는지)
        """
        shifted: List[Face] = []
        for k in range(complex_.dim + 2):
            shifted.extend(self.comb_shift(complex_.family(k), v, w))
        result = Complex.from_masks(shifted, complex_.n_vertices)
        reclosed = sum(result.f_vector()) != len(shifted)
        if reclosed:
            logger.warning(f"{shift_tag(v, w)} 결과가 복합체가 아니어서 다시 닫았습니다")
        return result, reclosed

    def stabilize_complex(
        self,
        complex_: Complex,
        allowed: Optional[Iterable[Tuple[int, int]]] = None,
    ) -> Tuple[Complex, List[ShiftStep], bool]:
        """
        복합체에 허용된 Shift_{v<-w} 를 더 이상 바뀌지 않을 때까지 적용

        Args:
            complex_: 시작 복합체
            allowed: (v, w) 쌍 (None 이면 모든 v < w)

        Returns:
            Tuple[Complex, List[ShiftStep], bool]: (결과, 바뀐 단계, 다시 닫은 적이 있는지)
        """
        n = complex_.n_vertices
        if allowed is None:
            allowed = ((v, w) for v in range(n) for w in range(v + 1, n))
        pairs = sorted(set((int(v), int(w)) for v, w in allowed if v != w))
        current = complex_
        steps: List[ShiftStep] = []
        reclosed_any = False
        for _ in range(self.MAX_SWEEPS):
            changed_any = False
            for v, w in pairs:
                shifted, reclosed = self.comb_shift_complex(current, v, w)
                if shifted == current:
                    continue
                changed = len(set(shifted.all_faces()) - set(current.all_faces()))
                steps.append(ShiftStep(shift_tag(v, w), sum(shifted.f_vector()), changed))
                reclosed_any = reclosed_any or reclosed
                current = shifted
                changed_any = True
            if not changed_any:
                return current, steps, reclosed_any
        raise ResourceLimit(f"{self.MAX_SWEEPS}회 순회 후에도 안정화되지 않았습니다")

    def stabilize(
        self,
        family: SetFamily,
        allowed: Iterable[Tuple[int, int]],
        stop_on_common_intersection: bool = False,
        max_sweeps: Optional[int] = None,
    ) -> ShiftTrace:
        """
        허용된 shift 들을 (v, w) 사전식 순서로 반복 적용해 안정화

        Args:
            family: 시작 집합족
            allowed: 허용된 (v, w) 쌍
            stop_on_common_intersection: 결과에 공통 교집합이 생기는 shift 직전에 멈출지
            max_sweeps: 전체 순회 횟수 상한

        Returns:
            ShiftTrace: 실제로 집합족을 바꾼 단계만 기록
        """
        pairs = sorted(set((int(v), int(w)) for v, w in allowed if v != w))
        limit = max_sweeps or self.MAX_SWEEPS
        current = family
        steps: List[ShiftStep] = []
        blocking: Optional[Tuple[int, int]] = None

        for _ in range(limit):
            changed_any = False
            for v, w in pairs:
                shifted = self.comb_shift(current, v, w)
                changed = len(shifted.members - current.members)
                if not changed:
                    continue
                if stop_on_common_intersection and shifted.has_common_intersection():
                    blocking = (v, w)
                    break
                steps.append(ShiftStep(shift_tag(v, w), len(shifted), changed))
                current = shifted
                changed_any = True
            if blocking is not None or not changed_any:
                break
        else:
            raise ResourceLimit(f"{limit}회 순회 후에도 안정화되지 않았습니다")

        witness = None
        if current.is_uniform and current.r >= 1:
            witness = spans_simplex_boundary(current)
        return ShiftTrace(steps=steps, outcome=current, boundary_witness=witness, blocking_pair=blocking)

    def stabilize_full(self, family: SetFamily) -> ShiftTrace:
        """모든 i < j 에 대한 Shift_{i<-j} 로 안정화 (결과는 shifted)"""
        n = family.universe
        return self.stabilize(family, ((i, j) for i in range(n) for j in range(i + 1, n)))

    @staticmethod
    def prefix_pairs(prefix: PrefixLike, universe: int) -> List[Tuple[int, int]]:
        """{(v_i, w) : w ∉ {v_1, ..., v_i}}"""
        prefix = as_prefix(prefix)
        pairs = []
        head = 0
        for v in prefix:
            head |= bit(v)
            pairs.extend((v, w) for w in range(universe) if not head & bit(w))
        return pairs

    def stabilize_prefix(
        self,
        family: SetFamily,
        prefix: PrefixLike,
        stop_on_common_intersection: bool = False,
    ) -> ShiftTrace:
        return self.stabilize(
            family,
            self.prefix_pairs(prefix, family.universe),
            stop_on_common_intersection=stop_on_common_intersection,
        )

    # 대수적 shift
    def _minor_table(self, basis: Basis, n: int) -> CompoundMinorTable:
        if isinstance(basis, CompoundMinorTable):
            matrix = basis.matrix
        elif isinstance(basis, FpMatrix):
            matrix = basis
        else:
            seed = RunConfig.env_seed() if basis is None else int(basis)
            return self.basis_loader.minor_table(n, seed, self.p)
        if matrix.rows != n or matrix.cols != n:
            raise DimensionMismatch(f"기저 행렬 크기 {matrix.rows}x{matrix.cols}가 n={n}과 다릅니다")
        if isinstance(basis, CompoundMinorTable):
            return basis
        return CompoundMinorTable(matrix)

    def alg_shift_family(self, family: SetFamily, basis: Basis = None) -> SetFamily:
        """
        균일 집합족의 대수적 shift

        k-원소 집합 T 를 사전식으로 훑으며 (det G[S, T] : S ∈ F) 행을 rank 추적기에
        넣고, 흡수된 T 들을 결과로 모은다.

        Args:
            family: k-균일 집합족
            basis: 기저 행렬, 소행렬식 테이블 또는 시드 (None 이면 SHIFTLAB_SEED)

        Raises:
            SingularBasis: 전체 rank 에 도달하지 못할 때 (기저가 가역이 아님)
            ConventionError: 결과가 shifted 가 아닐 때
        """
        if not family.is_uniform:
            raise NotUniform("대수적 shift 는 균일 집합족에서만 정의됩니다")
        k = family.r
        n = family.universe
        if len(family) == 0 or k == 0 or n == 0:
            return family

        table = self._minor_table(basis, n)
        rows = [table.minors_for_rows(s) for s in family]
        tracker = RankTracker(len(rows), self.p)
        absorbed: List[Face] = []
        for combo in combinations(range(n), k):
            target = make_face(combo, n)
            if tracker.offer([row.get(target, 0) for row in rows]):
                absorbed.append(target)
                if tracker.rank == len(rows):
                    break
        if tracker.rank < len(rows):
            raise SingularBasis(f"rank {tracker.rank} < {len(rows)}: 기저 행렬이 가역이 아닙니다")

        result = family.with_sets(absorbed)
        if not result.is_shifted():
            raise ConventionError(f"대수적 shift 결과가 shifted 가 아닙니다: {result!r}")
        return result

    def alg_shift_complex(self, complex_: Complex, basis: Basis = None) -> Complex:
        """
        모든 차수에 같은 기저를 써서 복합체를 대수적으로 shift

        Raises:
            ConventionError: 결과가 포함 관계로 닫혀 있지 않거나 f-vector 가 달라질 때
        """
        n = complex_.n_vertices
        if n == 0:
            return complex_
        table = self._minor_table(basis, n)
        shifted: List[Face] = []
        for k in range(complex_.dim + 2):
            shifted.extend(self.alg_shift_family(complex_.family(k), table))
        result = Complex.from_masks(shifted, n)
        if result.f_vector() != complex_.f_vector():
            raise ConventionError(
                f"shift 결과의 f-vector {result.f_vector()}가 원래 {complex_.f_vector()}와 다릅니다"
            )
        return result

    def _agree(self, compute: Callable[[int], T], seeds: Sequence[int]) -> AlgShiftResult:
        seeds = list(seeds) or RunConfig.default_seeds(self.DEFAULT_SEED_COUNT)
        outputs: Dict[int, T] = {seed: compute(seed) for seed in seeds}
        if len(set(outputs.values())) == 1:
            return AlgShiftResult(outputs[seeds[0]], seeds, list(seeds))

        logger.warning(f"시드 {seeds} 사이 대수적 shift 결과 불일치, 시드 2개로 재실행")
        extra = [max(seeds) + 1, max(seeds) + 2]
        for seed in extra:
            outputs[seed] = compute(seed)
        all_seeds = seeds + extra
        winner, votes = Counter(outputs[s] for s in all_seeds).most_common(1)[0]
        if votes * 2 <= len(all_seeds):
            raise GenericityFailure(f"시드 {all_seeds}에서 과반 합의가 없습니다")
        agreeing = [s for s in all_seeds if outputs[s] == winner]
        return AlgShiftResult(winner, all_seeds, agreeing, reran=True)

    def stable_alg_shift_family(self, family: SetFamily, seeds: Sequence[int] = ()) -> AlgShiftResult:
        return self._agree(lambda seed: self.alg_shift_family(family, seed), seeds)

    def stable_alg_shift_complex(self, complex_: Complex, seeds: Sequence[int] = ()) -> AlgShiftResult:
        """여러 시드로 shift 하고 합의된 결과를 반환"""
        return self._agree(lambda seed: self.alg_shift_complex(complex_, seed), seeds)

    # 성질 검사
    def verify_shift_properties(
        self,
        complex_: Complex,
        family: Optional[SetFamily] = None,
        seeds: Sequence[int] = (),
    ) -> ShiftPropertyReport:
        """
        대수적 shift 성질 목록을 시드마다 검사

        family 가 없으면 교차 성질 검사에는 최저 정점의 star 를 쓴다.
        near-cone 이 아니면 apex 성질은 건너뛴다 (None).
        """
        seeds = list(seeds) or RunConfig.default_seeds(self.DEFAULT_SEED_COUNT)
        checks: Dict[str, List[bool]] = {}
        notes: Dict[str, str] = {}

        def record(name: str, passed: Optional[bool]) -> None:
            if passed is not None:
                checks.setdefault(name, []).append(bool(passed))

        test_family = family if family is not None else self._star_family(complex_)
        partner = self._cross_partner(complex_, test_family) if test_family is not None else None
        families = [complex_.family(k) for k in range(1, complex_.dim + 2)]
        if family is not None:
            families.append(family)

        base_depth = self.homology.depth(complex_, cross_check=False)
        base_betti = self.homology.betti_vector(complex_)
        apexes = complex_.near_cone_apexes()
        prefix = complex_.maximal_shifted_prefix()
        subcomplexes = self._subcomplexes(complex_)

        shifted_complexes: Dict[int, Complex] = {}
        shifted_families: Dict[int, Optional[SetFamily]] = {}
        for seed in seeds:
            table = self.basis_loader.minor_table(complex_.n_vertices, seed, self.p) if complex_.n_vertices else None
            shifted = self.alg_shift_complex(complex_, table)
            shifted_complexes[seed] = shifted

            for fam in families:
                out = self.alg_shift_family(fam, table)
                record("shifted_same_cardinality", out.is_shifted() and len(out) == len(fam))
                record("fixed_point", self.alg_shift_family(out, table) == out)
                if fam.r >= 1 and len(fam):
                    record("shadow_inclusion", shadow(out).members <= self.alg_shift_family(shadow(fam), table).members)
                if spans_simplex_boundary(fam) is not None:
                    record("spans_simplex_boundary", spans_simplex_boundary(out) is not None)
                    record("no_common_intersection", not out.has_common_intersection())
            if complex_.is_shifted():
                record("fixed_point", shifted == complex_)

            if test_family is not None:
                out = self.alg_shift_family(test_family, table)
                shifted_families[seed] = out
                if test_family.is_intersecting():
                    record("intersecting_preserved", out.is_intersecting())
                if partner is not None:
                    record("cross_intersecting_preserved", out.cross_intersects(self.alg_shift_family(partner, table)))

            for sub in subcomplexes:
                sub_shift = self.alg_shift_complex(sub, table)
                record("monotone", all(shifted.contains(f) for f in sub_shift.facets))

            shifted_depth = self.homology.depth(shifted, cross_check=False)
            record("depth_preserved", shifted_depth.depth == base_depth.depth)
            record("min_facet_is_depth", shifted.min_facet_size - 1 == base_depth.depth)
            record("homology_preserved", self.homology.betti_vector(shifted) == base_betti)

            for a in apexes:
                record("near_cone_link", complex_.link(bit(a)).f_vector() == shifted.link(bit(0)).f_vector())
                record("near_cone_deletion", complex_.deletion(a).f_vector() == shifted.deletion(0).f_vector())
            if len(prefix):
                record("prefix_counts", self._prefix_counts(complex_, prefix) == self._prefix_counts(shifted, prefix))

        for fam in families:
            record("comb_full_stabilization", self.stabilize_full(fam).outcome.is_shifted())
            for stab_prefix in [VertexPrefix((a,)) for a in apexes] + ([prefix] if len(prefix) else []):
                record("comb_prefix_stabilization", self.stabilize_prefix(fam, stab_prefix).outcome.is_shifted_wrt(stab_prefix))

        items: Dict[str, Optional[bool]] = {}
        for name in (
            "shifted_same_cardinality",
            "fixed_point",
            "shadow_inclusion",
            "intersecting_preserved",
            "cross_intersecting_preserved",
            "monotone",
            "depth_preserved",
            "min_facet_is_depth",
            "homology_preserved",
            "near_cone_link",
            "near_cone_deletion",
            "prefix_counts",
            "spans_simplex_boundary",
            "no_common_intersection",
            "comb_full_stabilization",
            "comb_prefix_stabilization",
        ):
            results = checks.get(name)
            items[name] = None if results is None else all(results)
        if not apexes:
            notes["near_cone_link"] = "near-cone 이 아니므로 건너뜀"

        agreement = len(set(shifted_complexes.values())) <= 1 and len(set(shifted_families.values())) <= 1
        report = ShiftPropertyReport(items=items, seeds=seeds, agreement=agreement, notes=notes)
        if report.failures:
            logger.warning(f"shift 성질 실패: {report.failures}")
        return report

    @staticmethod
    def _star_family(complex_: Complex) -> Optional[SetFamily]:
        """최저 정점을 지나는 가장 큰 차수의 면들 (2-원소 이상)"""
        if not complex_.vertices or complex_.dim < 1:
            return None
        v = complex_.vertices[0]
        for k in range(min(complex_.dim + 1, 3), 1, -1):
            members = [f for f in complex_.faces(k) if f & bit(v)]
            if members:
                return SetFamily(members, complex_.n_vertices, r=k)
        return None

    @staticmethod
    def _cross_partner(complex_: Complex, family: SetFamily) -> Optional[SetFamily]:
        """family 의 모든 원소와 만나는 같은 크기의 면 전체"""
        if not family.is_uniform or len(family) == 0:
            return None
        meeting = [f for f in complex_.faces(family.r) if all(f & s for s in family)]
        if not meeting:
            return None
        return SetFamily(meeting, complex_.n_vertices, r=family.r)

    @staticmethod
    def _subcomplexes(complex_: Complex) -> List[Complex]:
        subs = []
        if len(complex_.vertices) >= 2:
            subs.append(complex_.deletion(complex_.vertices[-1]))
        if complex_.dim >= 1:
            subs.append(complex_.skeleton(complex_.dim - 1))
        return subs

    @staticmethod
    def _prefix_counts(complex_: Complex, prefix: VertexPrefix) -> Tuple[Tuple[int, int], ...]:
        """차수별 (첫 prefix 정점만 포함하는 면 수, prefix 를 피하는 면 수)"""
        mask = prefix.mask
        first = bit(prefix[0])
        counts = []
        for k in range(complex_.dim + 2):
            beta = sum(1 for f in complex_.faces(k) if f & mask == first)
            gamma = sum(1 for f in complex_.faces(k) if not f & mask)
            counts.append((beta, gamma))
        return tuple(counts)
