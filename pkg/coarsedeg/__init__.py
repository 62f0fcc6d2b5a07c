"""
coarsedeg - Computational coarse topology on Euclidean space

Coarse degrees of maps of R^n computed on lattice windows, linear coarse
homotopies to the antipodal map, and fixed point witness searches for maps
of the half-space.
"""

__version__ = "0.1.0"

# Main API
from coarsedeg.core.cfpp import search_witness, verify_witness
from coarsedeg.core.degree import degree
from coarsedeg.core.homotopy import homotopy_report, linear_homotopy
from coarsedeg.core.lattice import Window, fundamental_cycle
from coarsedeg.maps.evaluate import evaluate, fold_to_full_space
from coarsedeg.maps.parser import parse_map

__all__ = [
    "__version__",
    "Window",
    "degree",
    "evaluate",
    "fold_to_full_space",
    "fundamental_cycle",
    "homotopy_report",
    "linear_homotopy",
    "parse_map",
    "search_witness",
    "verify_witness",
]
