from .complex import Complex, SetFamily, VertexPrefix
from .graph import Graph, independence_complex
from .basis_loader import BasisLoader, get_basis_loader

__all__ = [
    "Complex",
    "SetFamily",
    "VertexPrefix",
    "Graph",
    "independence_complex",
    "BasisLoader",
    "get_basis_loader",
]
