"""Time-periodic optimal-control model problems and their preconditioners.

Both problems minimize a tracking functional with control cost ``nu`` under
a time-harmonic (frequency ``omega``) state equation on the unit square,
discretized on criss-cross meshes:

* distributed parabolic control (P1 state/control/adjoint): the full
  optimality system couples state, control and adjoint through the complex
  operator ``K + i omega M``; eliminating the control and rescaling gives a
  2x2 system whose (2,2) block is the negative of its (1,1) block, hence a
  mirror-symmetric preconditioned spectrum;
* distributed Stokes (velocity tracking) control with Taylor-Hood elements:
  after reordering and rescaling, a saddle-point system whose (1,1) block
  has the same mirror structure and whose coupling stacks two divergence
  operators.

The inner products are the robust block-diagonal preconditioners built from
``M + sqrt(nu) (K + omega M)`` (and its exact pressure Schur complement for
Stokes); their stability constants are mesh-, ``nu``- and ``omega``-
independent, which is what the experiments verify.

Right-hand sides use the nodal interpolant of the target multiplied by the
mass matrix.  The scalar target mirrors the stream-function profile of the
velocity target so that both vanish on the whole boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from ..krylov import LinearOperator
from ..saddle import InnerProduct, SaddleSystem
from .assembly import assemble_p1, assemble_taylor_hood
from .mesh import Mesh

__all__ = [
    "ModelProblem",
    "parabolic_kkt",
    "parabolic_reduced",
    "stokes_system",
    "target_state",
    "target_velocity",
    "stream_profile",
    "stream_profile_derivative",
]

#: Refuse dense conversion above this system dimension.
DENSE_LIMIT = 6000


def stream_profile(z):
    """Profile ``(1 - cos(0.8 pi z)) (1 - z)^2``; vanishes with its
    derivative at z = 0 and z = 1."""
    z = np.asarray(z, dtype=float)
    return (1.0 - np.cos(0.8 * np.pi * z)) * (1.0 - z) ** 2


def stream_profile_derivative(z):
    z = np.asarray(z, dtype=float)
    return 0.8 * np.pi * np.sin(0.8 * np.pi * z) * (1.0 - z) ** 2 - 2.0 * (
        1.0 - np.cos(0.8 * np.pi * z)
    ) * (1.0 - z)


def target_velocity(x, y):
    """Divergence-free target velocity: 10 times the rotated gradient of
    ``stream_profile(x) * stream_profile(y)``."""
    u = 10.0 * stream_profile(x) * stream_profile_derivative(y)
    v = -10.0 * stream_profile_derivative(x) * stream_profile(y)
    return u, v


def target_state(x, y):
    """Scalar target ``10 * stream_profile(x) * stream_profile(y)``."""
    return 10.0 * stream_profile(x) * stream_profile(y)


class _SpdSolve:
    """Sparse LU of a real SPD matrix, applied to complex vectors/blocks."""

    def __init__(self, matrix: scipy.sparse.spmatrix):
        self._lu = scipy.sparse.linalg.splu(scipy.sparse.csc_matrix(matrix))

    def __call__(self, rhs: np.ndarray) -> np.ndarray:
        if np.iscomplexobj(rhs):
            return self._lu.solve(rhs.real) + 1j * self._lu.solve(rhs.imag)
        return self._lu.solve(rhs)


@dataclass
class ModelProblem:
    """Assembled optimality system, inner product, right-hand side, metadata.

    Blocks are kept sparse so the largest experiments stay matrix-free;
    :meth:`saddle_system` and :meth:`inner_product` densify for the exact
    eigenvalue analyses at desk scale.  ``precond_solve`` applies the
    inverse of the block-diagonal inner-product matrix.
    """

    flavor: str
    level: int
    nu: float
    omega: float
    a: scipy.sparse.spmatrix
    b: scipy.sparse.spmatrix
    c: scipy.sparse.spmatrix | None
    ip_p: scipy.sparse.spmatrix
    ip_r: object  # sparse matrix or dense ndarray
    rhs: np.ndarray
    precond_solve: Callable[[np.ndarray], np.ndarray]

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def dim(self) -> int:
        return self.n + self.m

    def matrix(self) -> scipy.sparse.csr_matrix:
        """Sparse assembled system ``[[A, B*], [B, -C]]``."""
        bh = self.b.conj().T
        c_block = -self.c if self.c is not None else None
        if c_block is None:
            c_block = scipy.sparse.csr_matrix((self.m, self.m), dtype=np.complex128)
        return scipy.sparse.bmat(
            [[self.a, bh], [self.b, c_block]], format="csr"
        ).astype(np.complex128)

    def operator(self) -> LinearOperator:
        mat = self.matrix()
        return LinearOperator(dim=self.dim, apply=lambda x: mat @ x)

    def preconditioner(self) -> LinearOperator:
        return LinearOperator(dim=self.dim, apply=self.precond_solve)

    def _check_dense(self):
        if self.dim > DENSE_LIMIT:
            raise ValueError(
                f"dense conversion refused at dimension {self.dim} "
                f"(> {DENSE_LIMIT}); use the operator interface"
            )

    def saddle_system(self) -> SaddleSystem:
        self._check_dense()
        c = self.c.toarray() if self.c is not None else None
        return SaddleSystem(a=self.a.toarray(), b=self.b.toarray(), c=c)

    def inner_product(self) -> InnerProduct:
        self._check_dense()
        p = self.ip_p.toarray() if scipy.sparse.issparse(self.ip_p) else self.ip_p
        r = self.ip_r.toarray() if scipy.sparse.issparse(self.ip_r) else self.ip_r
        return InnerProduct(p=p, r=r)


def _check_parameters(nu: float, omega: float) -> None:
    if nu <= 0.0:
        raise ValueError(f"cost parameter nu must be positive, got {nu}")
    if omega < 0.0:
        raise ValueError(
            f"frequency omega must be nonnegative, got {omega} "
            "(the inner product uses omega itself, not |omega|)"
        )


def _shifted_operator(mass, stiffness, nu: float, omega: float):
    """The robust scalar building block ``M + sqrt(nu) (K + omega M)``."""
    return (mass + np.sqrt(nu) * (stiffness + omega * mass)).tocsr()


def parabolic_kkt(mesh: Mesh, nu: float, omega: float) -> ModelProblem:
    """Full 3n x 3n optimality system of the parabolic tracking problem.

    Blocks: ``A = diag(M, nu M)``, ``B = [K + i omega M, -M]``, C = 0; the
    inner product uses ``P = diag(Y, nu M)`` and ``R = Y / nu`` with
    ``Y = M + sqrt(nu) (K + omega M)``.
    """
    _check_parameters(nu, omega)
    fem = assemble_p1(mesh)
    mass, stiff = fem.mass, fem.stiffness
    n = fem.dim
    y_op = _shifted_operator(mass, stiff, nu, omega)

    a = scipy.sparse.block_diag([mass, nu * mass], format="csr").astype(np.complex128)
    b = scipy.sparse.hstack(
        [(stiff + 1j * omega * mass), -mass.astype(np.complex128)], format="csr"
    )
    ip_p = scipy.sparse.block_diag([y_op, nu * mass], format="csr")
    ip_r = (y_op / nu).tocsr()

    y_solve = _SpdSolve(y_op)
    m_solve = _SpdSolve(mass)

    def precond_solve(x: np.ndarray) -> np.ndarray:
        f1, f2, g = x[:n], x[n : 2 * n], x[2 * n :]
        return np.concatenate([y_solve(f1), m_solve(f2) / nu, nu * y_solve(g)])

    coords = mesh.vertices[fem.interior]
    y_d = target_state(coords[:, 0], coords[:, 1])
    rhs = np.concatenate(
        [mass @ y_d, np.zeros(n), np.zeros(n)]
    ).astype(np.complex128)

    return ModelProblem(
        flavor="parabolic-kkt",
        level=mesh.level,
        nu=nu,
        omega=omega,
        a=a,
        b=b,
        c=None,
        ip_p=ip_p,
        ip_r=ip_r,
        rhs=rhs,
        precond_solve=precond_solve,
    )


def parabolic_reduced(mesh: Mesh, nu: float, omega: float) -> ModelProblem:
    """Reduced (control eliminated, rescaled) 2n x 2n parabolic system.

    ``[[M, sqrt(nu)(K - i omega M)], [sqrt(nu)(K + i omega M), -M]]`` with
    inner product ``diag(P, P)``, ``P = M + sqrt(nu) (K + omega M)``.  The
    (2,2) block equals minus the (1,1) block, so the preconditioned spectrum
    is symmetric around zero.
    """
    _check_parameters(nu, omega)
    fem = assemble_p1(mesh)
    mass, stiff = fem.mass, fem.stiffness
    n = fem.dim
    p_op = _shifted_operator(mass, stiff, nu, omega)

    a = mass.astype(np.complex128).tocsr()
    b = (np.sqrt(nu) * (stiff + 1j * omega * mass)).tocsr()
    c = mass.astype(np.complex128).tocsr()  # (2,2) block of the matrix is -M

    p_solve = _SpdSolve(p_op)

    def precond_solve(x: np.ndarray) -> np.ndarray:
        return np.concatenate([p_solve(x[:n]), p_solve(x[n:])])

    coords = mesh.vertices[fem.interior]
    y_d = target_state(coords[:, 0], coords[:, 1])
    rhs = np.concatenate([mass @ y_d, np.zeros(n)]).astype(np.complex128)

    return ModelProblem(
        flavor="parabolic-reduced",
        level=mesh.level,
        nu=nu,
        omega=omega,
        a=a,
        b=b,
        c=c,
        ip_p=p_op,
        ip_r=p_op,
        rhs=rhs,
        precond_solve=precond_solve,
    )


def stokes_system(mesh: Mesh, nu: float, omega: float) -> ModelProblem:
    """Reordered and rescaled Stokes velocity-tracking optimality system.

    Unknowns are ``(u, w, p, r)`` with velocity-like ``u, w`` (two P2
    components each) and pressure-like ``p, r`` (P1, one dof pinned each):

    * ``A = [[Mv, sqrt(nu)(Kv - i omega Mv)], [sqrt(nu)(Kv + i omega Mv), -Mv]]``
    * ``B = -sqrt(nu) [[0, D], [D, 0]]`` with D the pinned divergence
    * ``P = diag(Pv, Pv)`` with ``Pv = Mv + sqrt(nu)(Kv + omega Mv)``
    * ``R = nu diag(S, S)`` with ``S = D Pv^{-1} D^T`` formed densely via the
      factorization of the scalar component block.

    R is the exact Schur complement of the coupling in the P geometry, which
    forces the coupling inf-sup constant and norm to equal one.
    """
    _check_parameters(nu, omega)
    fem = assemble_taylor_hood(mesh)
    ms, ks = fem.scalar_mass, fem.scalar_stiffness
    ns = fem.velocity_component_dim
    mp = fem.pressure_dim
    sqrt_nu = np.sqrt(nu)

    mv = scipy.sparse.block_diag([ms, ms], format="csr")
    kv = scipy.sparse.block_diag([ks, ks], format="csr")
    div = fem.divergence()  # (mp, 2 ns)

    a = scipy.sparse.bmat(
        [
            [mv, sqrt_nu * (kv - 1j * omega * mv)],
            [sqrt_nu * (kv + 1j * omega * mv), -mv],
        ],
        format="csr",
    )
    zero_d = scipy.sparse.csr_matrix((mp, 2 * ns))
    b = (-sqrt_nu) * scipy.sparse.bmat([[zero_d, div], [div, zero_d]], format="csr")

    ps = _shifted_operator(ms, ks, nu, omega)
    ip_p = scipy.sparse.block_diag([ps, ps, ps, ps], format="csr")

    ps_solve = _SpdSolve(ps)
    # Exact pressure Schur complement S = D Pv^{-1} D^T, dense mp x mp.
    dx = div[:, :ns].toarray()
    dy = div[:, ns:].toarray()
    schur = dx @ ps_solve(dx.T) + dy @ ps_solve(dy.T)
    schur = 0.5 * (schur + schur.T)
    ip_r = scipy.linalg.block_diag(nu * schur, nu * schur)
    schur_cho = scipy.linalg.cho_factor(schur)

    def s_solve(rhs: np.ndarray) -> np.ndarray:
        if np.iscomplexobj(rhs):
            return (
                scipy.linalg.cho_solve(schur_cho, rhs.real)
                + 1j * scipy.linalg.cho_solve(schur_cho, rhs.imag)
            )
        return scipy.linalg.cho_solve(schur_cho, rhs)

    def precond_solve(x: np.ndarray) -> np.ndarray:
        chunks = []
        for j in range(4):  # four velocity components: (u_x, u_y, w_x, w_y)
            chunks.append(ps_solve(x[j * ns : (j + 1) * ns]))
        off = 4 * ns
        for j in range(2):  # two pressure fields
            chunks.append(s_solve(x[off + j * mp : off + (j + 1) * mp]) / nu)
        return np.concatenate(chunks)

    coords = fem.p2_coordinates[fem.interior]
    u_target, v_target = target_velocity(coords[:, 0], coords[:, 1])
    rhs = np.concatenate(
        [
            ms @ u_target,
            ms @ v_target,
            np.zeros(2 * ns),
            np.zeros(2 * mp),
        ]
    ).astype(np.complex128)

    return ModelProblem(
        flavor="stokes",
        level=mesh.level,
        nu=nu,
        omega=omega,
        a=a,
        b=b,
        c=None,
        ip_p=ip_p,
        ip_r=ip_r,
        rhs=rhs,
        precond_solve=precond_solve,
    )
