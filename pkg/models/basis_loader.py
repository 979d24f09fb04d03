"""일반 기저(generic basis) 행렬 로더"""
import logging
import threading
from typing import Dict, Optional, Tuple

from models.finite_field import DEFAULT_PRIME, CompoundMinorTable, FpMatrix, random_invertible

logger = logging.getLogger(__name__)


class BasisLoader:
    """시드별 일반 기저 행렬과 소행렬식 테이블 캐시

    같은 (n, seed, p)에 대해서는 한 번만 행렬을 만들고, 복합체의 모든 차수와
    짝지어진 집합족들이 같은 행렬을 공유하도록 한다.
    """

    # 캐시 최대 개수
    MAX_CACHED = 64

    def __init__(self, p: int = DEFAULT_PRIME):
        self.p = p
        self._bases: Dict[Tuple[int, int, int], FpMatrix] = {}
        self._tables: Dict[Tuple[int, int, int], CompoundMinorTable] = {}
        self._lock = threading.Lock()

    def basis(self, n: int, seed: int, p: Optional[int] = None) -> FpMatrix:
        """n×n 가역 행렬 (지연 생성)"""
        key = (n, seed, p or self.p)
        with self._lock:
            cached = self._bases.get(key)
        if cached is not None:
            return cached

        logger.debug(f"Generating generic basis: n={n}, seed={seed}, p={key[2]}")
        matrix = random_invertible(n, seed, key[2])
        with self._lock:
            if len(self._bases) >= self.MAX_CACHED:
                self._bases.clear()
                self._tables.clear()
            self._bases.setdefault(key, matrix)
            return self._bases[key]

    def minor_table(self, n: int, seed: int, p: Optional[int] = None) -> CompoundMinorTable:
        """기저 행렬에 대한 소행렬식 테이블"""
        key = (n, seed, p or self.p)
        matrix = self.basis(n, seed, key[2])
        with self._lock:
            table = self._tables.get(key)
            if table is None:
                table = CompoundMinorTable(matrix)
                self._tables[key] = table
            return table

    def clear(self) -> None:
        with self._lock:
            self._bases.clear()
            self._tables.clear()

    def get_cache_info(self) -> dict:
        """캐시된 기저 정보 반환"""
        with self._lock:
            return {
                "prime": self.p,
                "bases": sorted(self._bases),
                "tables": len(self._tables),
            }


# 싱글톤 인스턴스
_basis_loader: Optional[BasisLoader] = None


def get_basis_loader() -> BasisLoader:
    """BasisLoader 싱글톤 인스턴스 반환"""
    global _basis_loader
    if _basis_loader is None:
        _basis_loader = BasisLoader()
    return _basis_loader
