"""Finite element model problems on the unit square.

Criss-cross triangulations, scalar P1 and Taylor-Hood (P2/P1) assembly, and
the two time-periodic optimal-control model problems (parabolic and Stokes)
with their robust block-diagonal preconditioners.
"""

from .mesh import Mesh, build_mesh
from .assembly import ScalarFem, StokesFem, assemble_p1, assemble_taylor_hood
from .problems import (
    ModelProblem,
    parabolic_kkt,
    parabolic_reduced,
    stokes_system,
    target_state,
    target_velocity,
)

__all__ = [
    "Mesh",
    "build_mesh",
    "ScalarFem",
    "StokesFem",
    "assemble_p1",
    "assemble_taylor_hood",
    "ModelProblem",
    "parabolic_kkt",
    "parabolic_reduced",
    "stokes_system",
    "target_state",
    "target_velocity",
]
