"""T-algebras, the homogeneous cones they generate, and Lyapunov-rank
certificates showing that p-cones with p != 2 are not homogeneous."""

from .algebra import (
    AXIOMS,
    AlgebraElement,
    AxiomReport,
    BigradedAlgebra,
    check_axioms,
    inner,
    involute,
    multiply,
    trace,
)
from .builtins import build_builtin, change_basis, orthant, spin, vinberg
from .cone import (
    MembershipVerdict,
    TriangularFactor,
    factorize,
    principal_face,
    random_factor,
    random_interior,
    reconstruct,
    transport,
    triangular_inverse,
)
from .descriptor import parse_descriptor, parse_element, write_algebra, write_element
from .lyaprank import ConeSpec, Verdict, assemble, lyapunov_rank, nonhomogeneity_report
from .pcone import PConeSpec, complementarity_pairs, membership, pnorm, strict_convexity
from .rank2 import classify, iso_inverse, iso_map
from .status import Status

__version__ = "0.1.0"

__all__ = [
    "AXIOMS", "AlgebraElement", "AxiomReport", "BigradedAlgebra", "ConeSpec",
    "MembershipVerdict", "PConeSpec", "Status", "TriangularFactor", "Verdict",
    "assemble", "build_builtin", "change_basis", "check_axioms", "classify",
    "complementarity_pairs", "factorize", "inner", "involute", "iso_inverse", "iso_map",
    "lyapunov_rank", "membership", "multiply", "nonhomogeneity_report", "orthant",
    "parse_descriptor", "parse_element", "pnorm", "principal_face", "random_factor",
    "random_interior", "reconstruct", "spin", "strict_convexity", "trace", "transport",
    "triangular_inverse", "vinberg", "write_algebra", "write_element",
]
