from .complex_io import FacetFileParser
from .validators import ConfigValidator, HypothesisValidator

__all__ = ["FacetFileParser", "ConfigValidator", "HypothesisValidator"]
