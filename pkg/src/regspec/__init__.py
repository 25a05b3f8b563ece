"""Spectra of random regular graphs: samplers, tree resolvents, reference
laws and empirical spectral statistics."""

from .eig import Spectrum, eig_symmetric
from .exceptions import (
    CapacityError,
    ConvergenceError,
    DomainError,
    InvariantError,
    NotFoundError,
    ParameterError,
    ParseError,
    PreconditionError,
    RegspecError,
    SamplingError,
    SingularityError,
)
from .graphgen import Graph, SeededRng, TreeKind, TreeShape, build_tree, sample_regular
from .laws import LawSpec, kesten_mckay, semicircle

__all__ = [
    "CapacityError",
    "ConvergenceError",
    "DomainError",
    "Graph",
    "InvariantError",
    "LawSpec",
    "NotFoundError",
    "ParameterError",
    "ParseError",
    "PreconditionError",
    "RegspecError",
    "SamplingError",
    "SeededRng",
    "SingularityError",
    "Spectrum",
    "TreeKind",
    "TreeShape",
    "build_tree",
    "eig_symmetric",
    "kesten_mckay",
    "sample_regular",
    "semicircle",
]
