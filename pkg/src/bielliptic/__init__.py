"""Gromov-Witten invariants of bielliptic surfaces via pearl diagrams."""

from .diagram import PearlDiagram, make_diagram, validate
from .enumeration import enumerate_diagrams, enumerate_shapes
from .invariants import gw_invariant, series_F
from .multiplicity import multiplicity_enumerative, multiplicity_refined
from .surface import surface_type, tau

__version__ = "0.1.0"
