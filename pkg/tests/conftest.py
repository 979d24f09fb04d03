"""공통 fixture"""
import sys
from pathlib import Path

import pytest

# 프로젝트 루트 경로 추가
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.complex import Complex
from services.generators import GeneratorService
from services.homology import HomologyService
from services.intersecting import EkrService
from services.shifting import ShiftingService


@pytest.fixture
def two_triangles():
    """{0,1,2}, {0,3,4}: f-vector 1 5 6 2"""
    return Complex.from_facets([[0, 1, 2], [0, 3, 4]], 5)


@pytest.fixture
def path_complex():
    """경로 0-1-2-3"""
    return Complex.from_facets([[0, 1], [1, 2], [2, 3]], 4)


@pytest.fixture
def generators():
    return GeneratorService()


@pytest.fixture
def simplex(generators):
    return generators.gen_simplex


@pytest.fixture
def boundary(generators):
    return generators.gen_simplex_boundary


@pytest.fixture(scope="session")
def homology():
    return HomologyService()


@pytest.fixture(scope="session")
def shifting(homology):
    return ShiftingService(homology=homology)


@pytest.fixture
def ekr(homology, shifting):
    return EkrService(seeds=[1, 2, 3], homology=homology, shifting=shifting)
