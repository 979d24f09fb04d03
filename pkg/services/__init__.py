from .homology import HomologyService
from .shifting import ShiftingService
from .clique_search import IntersectingCliqueSearch
from .intersecting import EkrService
from .generators import GeneratorService

__all__ = [
    "HomologyService",
    "ShiftingService",
    "IntersectingCliqueSearch",
    "EkrService",
    "GeneratorService",
]
