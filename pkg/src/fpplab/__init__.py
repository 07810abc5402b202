"""Deterministic first-passage percolation laboratory on planar lattice domains."""

from .environment import (DistributionSpec, Environment, Exponential, FloorValue,
                          Pareto, SetValue, TwoPoint, Uniform, ZeroAtom,
                          lambda_plus, override, shape_bound_constant, shift, weight)
from .domain import (CustomPerturbation, Domain, DomainSpec, HalfPlane,
                     RemovedDomain, Sector, SlitPlane, boundary_vertices,
                     build_domain, extract_dual_boundary, graph_ball, remove_set)
from .geometry import (HORIZONTAL, VERTICAL, DualEdge, Edge, Vertex, Window,
                       edge_between)

__version__ = "0.1.0"
