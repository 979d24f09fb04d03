"""소체 F_p 위의 정확한 선형대수"""
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.exceptions import DimensionMismatch, OutOfRange, SizeMismatch
from models.face import Face, face_members, face_size

DEFAULT_PRIME = 2147483647  # 2^31 - 1


def inverse(value: int, p: int) -> int:
    """0이 아닌 원소의 곱셈 역원"""
    return pow(int(value) % p, p - 2, p)


@dataclass(frozen=True)
class FpScalar:
    """F_p 원소"""
    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def __add__(self, other: "FpScalar") -> "FpScalar":
        return FpScalar(self.value + other.value, self.p)

    def __sub__(self, other: "FpScalar") -> "FpScalar":
        return FpScalar(self.value - other.value, self.p)

    def __mul__(self, other: "FpScalar") -> "FpScalar":
        return FpScalar(self.value * other.value, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0의 역원은 없습니다")
        return FpScalar(inverse(self.value, self.p), self.p)

    def __int__(self) -> int:
        return self.value


class FpMatrix:
    """행 우선 밀집 행렬 (원소는 0 ≤ x < p)"""

    def __init__(self, entries, p: int = DEFAULT_PRIME):
        array = np.array(entries, dtype=np.int64)
        if array.ndim == 1 and array.size == 0:
            array = array.reshape(0, 0)
        if array.ndim != 2:
            raise DimensionMismatch(f"2차원 행렬이 필요합니다: shape={array.shape}")
        self.p = p
        self.entries = np.mod(array, p)
        self.entries.setflags(write=False)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_PRIME) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.entries.T, self.p)

    def __getitem__(self, index):
        return self.entries[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"FpMatrix({self.rows}x{self.cols}, p={self.p})"


def _eliminate(work: np.ndarray, p: int) -> Tuple[int, int]:
    """
    제자리 가우스 소거

    Returns:
        Tuple[int, int]: (rank, 행 교환 횟수)
    """
    rows, cols = work.shape
    rank = 0
    swaps = 0
    for c in range(cols):
        if rank == rows:
            break
        nonzero = np.nonzero(work[rank:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
            swaps += 1
        inv = inverse(int(work[rank, c]), p)
        below = rank + 1 + np.nonzero(work[rank + 1:, c])[0]
        if below.size:
            factors = (work[below, c] * inv) % p
            # 원소 < 2^31 이므로 곱은 int64 범위 안에 있음
            work[below] = (work[below] - np.outer(factors, work[rank]) % p) % p
        rank += 1
    return rank, swaps


def rank(matrix: FpMatrix) -> int:
    """F_p 위의 rank"""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    work = np.array(matrix.entries, dtype=np.int64)
    return _eliminate(work, matrix.p)[0]


def determinant(matrix: FpMatrix) -> int:
    n = matrix.rows
    if n != matrix.cols:
        raise SizeMismatch(f"정사각 행렬이 아닙니다: {matrix.rows}x{matrix.cols}")
    if n == 0:
        return 1
    p = matrix.p
    work = np.array(matrix.entries, dtype=np.int64)
    r, swaps = _eliminate(work, p)
    if r < n:
        return 0
    det = p - 1 if swaps % 2 else 1
    for i in range(n):
        det = det * int(work[i, i]) % p
    return det


def minor(matrix: FpMatrix, rows: Face, cols: Face) -> int:
    """
    행/열 인덱스 집합(오름차순)으로 정해지는 소행렬식

    Args:
        matrix: 기저 행렬 G
        rows: 행 인덱스 면 S
        cols: 열 인덱스 면 T

    Returns:
        int: det G[S, T] mod p
    """
    if face_size(rows) != face_size(cols):
        raise SizeMismatch(f"행 {face_size(rows)}개와 열 {face_size(cols)}개가 다릅니다")
    row_idx = list(face_members(rows))
    col_idx = list(face_members(cols))
    if (row_idx and row_idx[-1] >= matrix.rows) or (col_idx and col_idx[-1] >= matrix.cols):
        raise OutOfRange("minor 인덱스가 행렬 크기를 벗어났습니다")
    if not row_idx:
        return 1
    sub = matrix.entries[np.ix_(row_idx, col_idx)]
    return determinant(FpMatrix(sub, matrix.p))


class RankTracker:
    """행을 하나씩 받아 선형 독립 여부를 판정하는 누적 RREF 기저"""

    def __init__(self, ambient_dim: int, p: int = DEFAULT_PRIME):
        self.ambient_dim = ambient_dim
        self.p = p
        self._basis: List[np.ndarray] = []
        self._pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(self._pivots)

    def basis(self) -> FpMatrix:
        if not self._basis:
            return FpMatrix.zeros(0, self.ambient_dim, self.p)
        return FpMatrix(np.vstack(self._basis), self.p)

    def offer(self, row: Sequence[int]) -> bool:
        """
        행이 기존 행들과 독립이면 흡수하고 True, 아니면 상태 변화 없이 False

        Raises:
            DimensionMismatch: 행 길이가 ambient 차원과 다를 때
        """
        vector = np.mod(np.array(row, dtype=np.int64), self.p)
        if vector.ndim != 1 or vector.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"행 길이 {vector.shape}가 ambient 차원 {self.ambient_dim}과 다릅니다"
            )
        p = self.p
        # RREF이므로 원래 계수로 한 번씩만 빼면 됨
        coefficients = [int(vector[c]) for c in self._pivots]
        for coeff, basis_row in zip(coefficients, self._basis):
            if coeff:
                vector = (vector - (coeff * basis_row) % p) % p
        nonzero = np.nonzero(vector)[0]
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        vector = (vector * inverse(int(vector[pivot]), p)) % p
        for i, basis_row in enumerate(self._basis):
            coeff = int(basis_row[pivot])
            if coeff:
                self._basis[i] = (basis_row - (coeff * vector) % p) % p
        self._basis.append(vector)
        self._pivots.append(pivot)
        return True


def random_invertible(n: int, seed: int, p: int = DEFAULT_PRIME) -> FpMatrix:
    """
    시드로 결정되는 가역 행렬 (일반 기저 근사)

    같은 (n, seed, p)에 대해 항상 같은 행렬을 반환한다.
    """
    if n < 1:
        raise OutOfRange(f"행렬 크기는 1 이상이어야 합니다: {n}")
    rng = np.random.default_rng(seed)
    while True:
        candidate = FpMatrix(rng.integers(0, p, size=(n, n), dtype=np.int64), p)
        if rank(candidate) == n:
            return candidate


class CompoundMinorTable:
    """행 prefix별 라플라스 전개 결과를 캐시하는 소행렬식 테이블

    k-원소 행 집합 S의 모든 열 집합 T에 대한 det G[S, T]를 재귀적으로 계산한다.
    행 prefix가 같은 S들은 중간 결과를 공유한다.
    """

    def __init__(self, matrix: FpMatrix):
        self.matrix = matrix
        self.p = matrix.p
        self._values = [[int(x) for x in row] for row in matrix.entries]
        self._cache: Dict[Tuple[int, ...], Dict[Face, int]] = {(): {0: 1}}
        self._lock = threading.Lock()

    def minors_for_rows(self, rows: Face) -> Dict[Face, int]:
        """행 집합 S에 대해 {열 집합 T: det G[S, T]} (값 0 포함)"""
        return self._table(face_members(rows))

    def minor(self, rows: Face, cols: Face) -> int:
        if face_size(rows) != face_size(cols):
            raise SizeMismatch("행/열 집합 크기가 다릅니다")
        return self.minors_for_rows(rows).get(cols, 0)

    def _table(self, row_prefix: Tuple[int, ...]) -> Dict[Face, int]:
        with self._lock:
            cached = self._cache.get(row_prefix)
        if cached is not None:
            return cached
        previous = self._table(row_prefix[:-1])
        last_row = self._values[row_prefix[-1]]
        k = len(row_prefix)
        p = self.p
        table: Dict[Face, int] = {}
        for combo in combinations(range(self.matrix.cols), k):
            total = 0
            cols_mask = 0
            for c in combo:
                cols_mask |= 1 << c
            # 마지막 행 기준 라플라스 전개, 부호 (-1)^{(k-1)+idx}
            for idx, c in enumerate(combo):
                entry = last_row[c]
                if not entry:
                    continue
                sub = previous.get(cols_mask & ~(1 << c), 0)
                if not sub:
                    continue
                term = entry * sub
                if (k - 1 + idx) % 2:
                    total -= term
                else:
                    total += term
            table[cols_mask] = total % p
        with self._lock:
            self._cache[row_prefix] = table
        return table


def matrix_from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None,
                     p: int = DEFAULT_PRIME) -> FpMatrix:
    if not rows:
        return FpMatrix.zeros(0, cols or 0, p)
    return FpMatrix(rows, p)
