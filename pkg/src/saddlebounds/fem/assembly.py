"""P1 and Taylor-Hood (P2 velocity / P1 pressure) assembly on triangles.

All element integrals use one 7-point quadrature rule of polynomial degree 5
(exact for every integrand appearing here: P2 mass needs degree 4, the
divergence coupling degree 3, stiffness degree 2), except the P1 matrices
which have closed-form element integrals.

Homogeneous Dirichlet conditions on the velocity/state spaces are imposed by
symmetric elimination: matrices are assembled over all nodes and then
restricted to interior rows and columns, which keeps them exactly symmetric
positive definite.  Pressure carries no boundary condition; the constant
mode is handled at the system level by pinning one pressure dof.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .mesh import Mesh

__all__ = ["ScalarFem", "StokesFem", "assemble_p1", "assemble_taylor_hood"]

# Degree-5, 7-point rule on the reference triangle in barycentric
# coordinates; weights sum to one (integral = area * weighted sum).
_W1 = (155.0 - np.sqrt(15.0)) / 1200.0
_W2 = (155.0 + np.sqrt(15.0)) / 1200.0
_A1 = (6.0 - np.sqrt(15.0)) / 21.0
_A2 = (6.0 + np.sqrt(15.0)) / 21.0
QUAD_WEIGHTS = np.array([9.0 / 40.0, _W1, _W1, _W1, _W2, _W2, _W2])
QUAD_BARY = np.array(
    [
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        [_A1, _A1, 1.0 - 2.0 * _A1],
        [_A1, 1.0 - 2.0 * _A1, _A1],
        [1.0 - 2.0 * _A1, _A1, _A1],
        [_A2, _A2, 1.0 - 2.0 * _A2],
        [_A2, 1.0 - 2.0 * _A2, _A2],
        [1.0 - 2.0 * _A2, _A2, _A2],
    ]
)


def _p2_values(bary: np.ndarray) -> np.ndarray:
    """P2 basis values at barycentric points; node order
    (v0, v1, v2, m01, m12, m02)."""
    l0, l1, l2 = bary[:, 0], bary[:, 1], bary[:, 2]
    return np.column_stack(
        [
            l0 * (2.0 * l0 - 1.0),
            l1 * (2.0 * l1 - 1.0),
            l2 * (2.0 * l2 - 1.0),
            4.0 * l0 * l1,
            4.0 * l1 * l2,
            4.0 * l0 * l2,
        ]
    )


def _p2_bary_gradients(bary: np.ndarray) -> np.ndarray:
    """d(phi_k)/d(lambda_i) at each quadrature point: shape (q, 6, 3)."""
    q = bary.shape[0]
    d = np.zeros((q, 6, 3))
    for i in range(3):
        d[:, i, i] = 4.0 * bary[:, i] - 1.0
    for k, (i, j) in enumerate([(0, 1), (1, 2), (0, 2)], start=3):
        d[:, k, i] = 4.0 * bary[:, j]
        d[:, k, j] = 4.0 * bary[:, i]
    return d


# Quadrature-contracted reference tensors (independent of the geometry).
_P2V = _p2_values(QUAD_BARY)                       # (q, 6)
_P2D = _p2_bary_gradients(QUAD_BARY)               # (q, 6, 3)
_MASS6 = np.einsum("q,qk,ql->kl", QUAD_WEIGHTS, _P2V, _P2V)
_STIFF6 = np.einsum("q,qki,qlj->klij", QUAD_WEIGHTS, _P2D, _P2D)
_DIV6 = np.einsum("q,qp,qki->pki", QUAD_WEIGHTS, QUAD_BARY, _P2D)


def _barycentric_gradients(mesh: Mesh) -> tuple[np.ndarray, np.ndarray]:
    """Per-triangle gradients of the barycentric coordinates and areas."""
    p = mesh.vertices[mesh.triangles]              # (t, 3, 2)
    ones = np.ones((mesh.num_triangles, 3, 1))
    m = np.concatenate([ones, p], axis=2)          # rows (1, x_i, y_i)
    inv = np.linalg.inv(m)
    grads = inv[:, 1:, :].transpose(0, 2, 1)       # (t, 3 vertices, 2 components)
    areas = 0.5 * np.abs(np.linalg.det(m))
    return grads, areas


def _accumulate(rows, cols, vals, shape) -> scipy.sparse.csr_matrix:
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=shape,
    )
    return mat.tocsr()


@dataclass(frozen=True)
class ScalarFem:
    """P1 mass and stiffness with interior-dof restriction.

    ``mass``/``stiffness`` act on interior vertices; the ``full_*`` versions
    keep boundary rows and columns (used to verify the discrete kernel of
    the stiffness before elimination).
    """

    mass: scipy.sparse.csr_matrix
    stiffness: scipy.sparse.csr_matrix
    full_mass: scipy.sparse.csr_matrix
    full_stiffness: scipy.sparse.csr_matrix
    interior: np.ndarray
    boundary: np.ndarray

    @property
    def dim(self) -> int:
        return self.interior.size


def assemble_p1(mesh: Mesh) -> ScalarFem:
    """Exact P1 mass and stiffness on a mesh, Dirichlet dofs eliminated."""
    grads, areas = _barycentric_gradients(mesh)
    t = mesh.triangles
    nv = mesh.num_vertices

    mass_ref = (np.ones((3, 3)) + np.eye(3)) / 12.0
    me = areas[:, None, None] * mass_ref[None, :, :]
    gram = np.einsum("tic,tjc->tij", grads, grads)
    ke = areas[:, None, None] * gram

    rows = t[:, :, None].repeat(3, axis=2).ravel()
    cols = t[:, None, :].repeat(3, axis=1).ravel()
    full_mass = _accumulate([rows], [cols], [me.ravel()], (nv, nv))
    full_stiff = _accumulate([rows], [cols], [ke.ravel()], (nv, nv))

    boundary = np.flatnonzero(mesh.boundary_vertex_mask)
    interior = np.flatnonzero(~mesh.boundary_vertex_mask)
    return ScalarFem(
        mass=full_mass[np.ix_(interior, interior)].tocsr(),
        stiffness=full_stiff[np.ix_(interior, interior)].tocsr(),
        full_mass=full_mass,
        full_stiffness=full_stiff,
        interior=interior,
        boundary=boundary,
    )


@dataclass(frozen=True)
class StokesFem:
    """Taylor-Hood blocks, stored per scalar velocity component.

    Velocity dofs are the interior P2 nodes of one component; vector
    operators are block diagonal in the two components
    (:meth:`vector_mass`, :meth:`vector_stiffness`).  The divergence couples
    all pressure vertices to both components; :meth:`divergence` drops the
    pinned pressure row so the coupling has full rank.
    """

    scalar_mass: scipy.sparse.csr_matrix
    scalar_stiffness: scipy.sparse.csr_matrix
    div_x: scipy.sparse.csr_matrix
    div_y: scipy.sparse.csr_matrix
    full_scalar_mass: scipy.sparse.csr_matrix
    full_div_x: scipy.sparse.csr_matrix
    full_div_y: scipy.sparse.csr_matrix
    pressure_mass: scipy.sparse.csr_matrix
    interior: np.ndarray
    boundary: np.ndarray
    p2_coordinates: np.ndarray
    pinned_pressure: int

    @property
    def velocity_component_dim(self) -> int:
        return self.interior.size

    @property
    def pressure_dim(self) -> int:
        """Pressure dofs after pinning the constant mode."""
        return self.pressure_mass.shape[0] - 1

    @property
    def kept_pressure(self) -> np.ndarray:
        npv = self.pressure_mass.shape[0]
        return np.setdiff1d(np.arange(npv), [self.pinned_pressure])

    def vector_mass(self) -> scipy.sparse.csr_matrix:
        return scipy.sparse.block_diag(
            [self.scalar_mass, self.scalar_mass], format="csr"
        )

    def vector_stiffness(self) -> scipy.sparse.csr_matrix:
        return scipy.sparse.block_diag(
            [self.scalar_stiffness, self.scalar_stiffness], format="csr"
        )

    def divergence(self) -> scipy.sparse.csr_matrix:
        """Pinned-pressure divergence acting on stacked (x, y) components."""
        keep = self.kept_pressure
        return scipy.sparse.hstack(
            [self.div_x[keep, :], self.div_y[keep, :]], format="csr"
        )


def assemble_taylor_hood(mesh: Mesh, pinned_pressure: int = 0) -> StokesFem:
    """Taylor-Hood assembly: P2 velocity components, P1 pressure.

    P2 nodes are the mesh vertices followed by the edge midpoints; Dirichlet
    elimination keeps interior nodes (coordinate test, exact for dyadic
    meshes).  ``pinned_pressure`` selects the pressure vertex removed to fix
    the constant mode.
    """
    grads, areas = _barycentric_gradients(mesh)
    t = mesh.triangles
    nv = mesh.num_vertices
    n_p2 = nv + mesh.num_edges
    p2_nodes = np.hstack([t, mesh.triangle_edges + nv])  # (t, 6)

    gram = np.einsum("tic,tjc->tij", grads, grads)
    me = areas[:, None, None] * _MASS6[None, :, :]
    ke = np.einsum("t,klij,tij->tkl", areas, _STIFF6, gram)
    # d/dx phi_k = sum_i d(phi_k)/d(lambda_i) * grad(lambda_i)_x
    de_x = np.einsum("t,pki,ti->tpk", areas, _DIV6, grads[:, :, 0])
    de_y = np.einsum("t,pki,ti->tpk", areas, _DIV6, grads[:, :, 1])

    rows6 = p2_nodes[:, :, None].repeat(6, axis=2).ravel()
    cols6 = p2_nodes[:, None, :].repeat(6, axis=1).ravel()
    full_mass = _accumulate([rows6], [cols6], [me.ravel()], (n_p2, n_p2))
    full_stiff = _accumulate([rows6], [cols6], [ke.ravel()], (n_p2, n_p2))

    rows_d = t[:, :, None].repeat(6, axis=2).ravel()
    cols_d = p2_nodes[:, None, :].repeat(3, axis=1).ravel()
    full_div_x = _accumulate([rows_d], [cols_d], [de_x.ravel()], (nv, n_p2))
    full_div_y = _accumulate([rows_d], [cols_d], [de_y.ravel()], (nv, n_p2))

    p2_coords = np.vstack([mesh.vertices, mesh.edge_midpoints])
    on_boundary = np.concatenate(
        [mesh.boundary_vertex_mask, mesh.boundary_edge_midpoint_mask]
    )
    interior = np.flatnonzero(~on_boundary)
    boundary = np.flatnonzero(on_boundary)

    p1 = assemble_p1(mesh)
    return StokesFem(
        scalar_mass=full_mass[np.ix_(interior, interior)].tocsr(),
        scalar_stiffness=full_stiff[np.ix_(interior, interior)].tocsr(),
        div_x=full_div_x[:, interior].tocsr(),
        div_y=full_div_y[:, interior].tocsr(),
        full_scalar_mass=full_mass,
        full_div_x=full_div_x,
        full_div_y=full_div_y,
        pressure_mass=p1.full_mass,
        interior=interior,
        boundary=boundary,
        p2_coordinates=p2_coords,
        pinned_pressure=pinned_pressure,
    )
