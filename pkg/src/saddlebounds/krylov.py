"""Preconditioned MINRES for complex Hermitian indefinite systems.

The solver targets ``M x = b`` with M Hermitian (typically indefinite) and a
Hermitian positive definite block-diagonal preconditioner ``Pc``, supplied
through its inverse action.  The underlying Lanczos process works on the
symmetrically preconditioned operator, so

* the recurrence minimizes and reports the residual in the ``Pc^{-1}`` norm,
* the real scalars ``(alpha_k, beta_k)`` of the Lanczos tridiagonal are the
  projection of the preconditioned operator onto the Krylov space; its
  eigenvalues (Ritz values) and the harmonic Ritz values of the extended
  tridiagonal estimate the extreme and the near-zero ends of the spectrum
  of the preconditioned matrix (:func:`ritz_intervals`),
* per-step residual reduction factors expose the even-odd staircase typical
  of spectra that are symmetric around zero (:func:`stagnation_profile`).

Operators may be dense arrays, sparse matrices or callables; a solve owns
its workspace and never mutates its inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse

__all__ = [
    "LinearOperator",
    "MinresReport",
    "RitzEstimate",
    "as_operator",
    "minres_solve",
    "lanczos_tridiagonal",
    "ritz_intervals",
    "estimate_intervals",
    "stagnation_profile",
    "residual_history_csv",
]


@dataclass(frozen=True)
class LinearOperator:
    """Matrix-free linear operator: a dimension and an apply callable."""

    dim: int
    apply: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x)

    def check_linearity(self, rng=None, tol: float = 1e-12) -> float:
        """Spot-check apply(a x + b y) = a apply(x) + b apply(y) on random probes."""
        rng = np.random.default_rng(rng)
        x = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        y = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        a, b = 0.7 - 0.2j, -1.3 + 0.4j
        lhs = self.apply(a * x + b * y)
        rhs = a * self.apply(x) + b * self.apply(y)
        scale = max(float(np.max(np.abs(rhs))), 1e-300)
        defect = float(np.max(np.abs(lhs - rhs))) / scale
        if defect > tol:
            raise ValueError(f"operator is not linear: relative defect {defect:.3e}")
        return defect


def as_operator(op) -> LinearOperator:
    """Wrap an array, sparse matrix or callable-with-dim as a LinearOperator."""
    if isinstance(op, LinearOperator):
        return op
    if scipy.sparse.issparse(op) or isinstance(op, np.ndarray):
        if op.shape[0] != op.shape[1]:
            raise ValueError(f"operator must be square, got {op.shape}")
        mat = op
        return LinearOperator(dim=op.shape[0], apply=lambda x: mat @ x)
    raise TypeError(
        "operator must be a LinearOperator, ndarray or sparse matrix; "
        "wrap callables as LinearOperator(dim, apply)"
    )


@dataclass
class MinresReport:
    """Outcome of a MINRES solve.

    ``residual_history[k]`` is the recurrence estimate of the residual norm
    in the ``Pc^{-1}`` inner product after k iterations (entry 0 is the
    initial residual).  The Lanczos data spans the performed steps:
    ``lanczos_alphas[j]`` is the j-th diagonal entry, ``lanczos_betas[j]``
    couples steps j and j+1, with the last entry being the first neglected
    coupling coefficient (used by the harmonic Ritz extraction).
    """

    x: np.ndarray
    residual_history: np.ndarray
    lanczos_alphas: np.ndarray
    lanczos_betas: np.ndarray
    iterations: int
    converged: bool
    true_residual: float = float("nan")
    true_residual_checks: list = field(default_factory=list)


@dataclass(frozen=True)
class RitzEstimate:
    """Spectral interval estimates from a Lanczos tridiagonal.

    ``[pos_lo, pos_hi]`` encloses the positive Ritz information (smallest
    positive harmonic Ritz value, largest Ritz value), ``[neg_lo, neg_hi]``
    mirrors it for the negative side.
    """

    neg_lo: float
    neg_hi: float
    pos_lo: float
    pos_hi: float

    def __post_init__(self):
        if not (self.pos_lo > 0.0 > self.neg_hi):
            raise ValueError(
                f"Ritz intervals must straddle zero, got neg_hi={self.neg_hi}, "
                f"pos_lo={self.pos_lo}"
            )


def _real_inner(z: np.ndarray, v: np.ndarray, what: str) -> float:
    """Inner product that the Hermitian/SPD contracts force to be real."""
    value = complex(np.vdot(v, z))
    scale = max(abs(value), 1e-300)
    if abs(value.imag) > 1e-8 * scale:
        raise ValueError(
            f"{what} inner product has imaginary part {value.imag:.3e}; "
            "operator or preconditioner violates Hermitian symmetry"
        )
    return value.real


def _positive_inner(z: np.ndarray, v: np.ndarray) -> float:
    """``<z, v>`` for z = Pc^{-1} v; negative values expose an indefinite
    preconditioner (random probes alone can miss indefiniteness)."""
    value = _real_inner(z, v, "preconditioner")
    floor = -1e-12 * float(np.linalg.norm(z) * np.linalg.norm(v))
    if value < floor:
        raise ValueError(
            f"preconditioner is not positive definite: <Pc^-1 v, v> = {value:.3e}"
        )
    return max(value, 0.0)


def minres_solve(
    op,
    prec=None,
    rhs: np.ndarray = None,
    x0: np.ndarray | None = None,
    eps: float = 1e-8,
    maxit: int | None = None,
    check_operators: bool = True,
    true_residual_every: int = 0,
) -> MinresReport:
    """Preconditioned MINRES with residual tracking in the ``Pc^{-1}`` norm.

    Parameters
    ----------
    op : operator for the Hermitian system matrix.
    prec : operator applying the *inverse* of the Hermitian positive definite
        preconditioner (identity if None).
    rhs : right-hand side.
    x0 : initial guess (zero if None).
    eps : relative reduction target for the preconditioned residual norm.
    maxit : iteration cap (default ``2 * dim``).
    check_operators : probe Hermitian symmetry of ``op`` and positivity of
        ``prec`` on random vectors before iterating.
    true_residual_every : if positive, record the explicitly recomputed
        preconditioned residual norm every that many steps (for diagnostics;
        each check costs one operator and one preconditioner application).

    Breakdown of the Lanczos recurrence (vanishing coupling coefficient)
    means the Krylov space is invariant; the iteration stops there and
    convergence is judged by the residual test.
    """
    a = as_operator(op)
    n = a.dim
    rhs = np.asarray(rhs, dtype=np.complex128)
    if rhs.shape != (n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({n},)")
    m_inv = as_operator(prec) if prec is not None else LinearOperator(n, lambda x: x)
    if maxit is None:
        maxit = 2 * n

    if check_operators:
        rng = np.random.default_rng(20240915)
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        au, av = a(u), a(v)
        lhs, rhs_sym = complex(np.vdot(v, au)), complex(np.vdot(u, av))
        scale = max(abs(lhs), abs(rhs_sym), 1e-300)
        if abs(lhs - np.conj(rhs_sym)) > 1e-10 * scale:
            raise ValueError("system operator is not Hermitian on random probes")
        for w in (u, v):
            pw = complex(np.vdot(w, m_inv(w)))
            if pw.real <= 0.0 or abs(pw.imag) > 1e-10 * abs(pw):
                raise ValueError(
                    "preconditioner is not Hermitian positive definite on probes"
                )

    x = np.zeros(n, dtype=np.complex128) if x0 is None else np.array(
        x0, dtype=np.complex128
    )
    v_new = rhs - a(x) if np.any(x) else rhs.copy()
    z_new = m_inv(v_new)
    gamma_new = np.sqrt(_positive_inner(z_new, v_new))

    history = [gamma_new]
    alphas: list[float] = []
    betas: list[float] = []
    checks: list[tuple[int, float]] = []

    report = MinresReport(
        x=x,
        residual_history=np.array(history),
        lanczos_alphas=np.array(alphas),
        lanczos_betas=np.array(betas),
        iterations=0,
        converged=False,
    )
    res0 = gamma_new
    if res0 == 0.0:
        report.converged = True
        report.true_residual = 0.0
        return report

    v_old = np.zeros(n, dtype=np.complex128)
    v = v_new
    z = z_new
    gamma = gamma_new
    w = np.zeros(n, dtype=np.complex128)
    w_old = np.zeros(n, dtype=np.complex128)
    eta = gamma
    s_old = s = 0.0
    c_old = c = 1.0
    res = res0
    converged = False
    k = 0

    while k < maxit:
        k += 1
        z = z / gamma
        az = a(z)
        delta = _real_inner(az, z, "system operator")
        # Three-term Lanczos recurrence on the unpreconditioned residuals
        # (v is normalized lazily, hence the ratios of coupling coefficients).
        v_new = az - (delta / gamma) * v
        if k > 1:
            v_new -= (gamma / gamma_prev) * v_old
        z_new = m_inv(v_new)
        gamma_new = np.sqrt(_positive_inner(z_new, v_new))

        alpha0 = c * delta - c_old * s * gamma
        alpha1 = np.hypot(alpha0, gamma_new)
        alpha2 = s * delta + c_old * c * gamma
        alpha3 = s_old * gamma
        c_new = alpha0 / alpha1
        s_new = gamma_new / alpha1

        w_new = (z - alpha3 * w_old - alpha2 * w) / alpha1
        x = x + (c_new * eta) * w_new
        eta = -s_new * eta

        alphas.append(float(delta))
        betas.append(float(gamma_new))
        res = abs(s_new) * res
        history.append(res)

        if true_residual_every and (k % true_residual_every == 0):
            checks.append((k, _true_residual(a, m_inv, rhs, x)))

        if res <= eps * res0:
            converged = True
            break
        if gamma_new <= 1e-14 * max(1.0, abs(delta)):
            # Invariant Krylov space: the iterate is exact on it.
            converged = res <= eps * res0
            break

        v_old, v = v, v_new
        w_old, w = w, w_new
        z = z_new
        gamma_prev = gamma
        gamma = gamma_new
        c_old, c = c, c_new
        s_old, s = s, s_new

    report.x = x
    report.residual_history = np.array(history)
    report.lanczos_alphas = np.array(alphas)
    report.lanczos_betas = np.array(betas)
    report.iterations = k
    report.converged = converged
    report.true_residual = _true_residual(a, m_inv, rhs, x)
    report.true_residual_checks = checks
    return report


def _true_residual(a, m_inv, rhs, x) -> float:
    r = rhs - a(x)
    return float(np.sqrt(max(_real_inner(m_inv(r), r, "preconditioner"), 0.0)))


def lanczos_tridiagonal(report: MinresReport) -> tuple[np.ndarray, float]:
    """Tridiagonal T_k and the first neglected coupling coefficient."""
    k = report.iterations
    if k < 1:
        raise ValueError("no Lanczos steps recorded")
    diag = report.lanczos_alphas[:k]
    off = report.lanczos_betas[: k - 1]
    t = np.diag(diag)
    if k > 1:
        t += np.diag(off, 1) + np.diag(off, -1)
    return t, float(report.lanczos_betas[k - 1])


def ritz_intervals(report: MinresReport) -> RitzEstimate:
    """Interval estimates for both spectrum branches from the Lanczos data.

    Ritz values are the eigenvalues of T_k; harmonic Ritz values solve
    ``(T_k^2 + beta^2 e_k e_k^T) z = theta T_k z`` with ``beta`` the first
    neglected coupling coefficient (equivalently: reciprocals of the Ritz
    values of the inverse on the shifted space).  Outer endpoints come from
    the Ritz values, inner endpoints from the harmonic Ritz values; in exact
    arithmetic the result is contained in the minimal enclosing intervals of
    the true spectrum.
    """
    if report.iterations < 2:
        raise ValueError("Ritz intervals need at least 2 Lanczos steps")
    t, beta = lanczos_tridiagonal(report)
    ritz = np.linalg.eigvalsh(t)
    tt = t @ t
    tt[-1, -1] += beta * beta
    try:
        # (T, T^2 + beta^2 e e^T) is a Hermitian-definite pencil; its
        # eigenvalues are the reciprocals of the harmonic Ritz values.
        rho = scipy.linalg.eigh(t, tt, eigvals_only=True)
        rho = rho[np.abs(rho) > 1e-300]
        harm = 1.0 / rho
    except scipy.linalg.LinAlgError:
        raw, _ = scipy.linalg.eig(tt, t)
        raw = raw[np.isfinite(raw)]
        harm = np.real(raw[np.abs(raw.imag) <= 1e-8 * np.maximum(np.abs(raw), 1.0)])
    pos_h = harm[harm > 0.0]
    neg_h = harm[harm < 0.0]
    pos_r = ritz[ritz > 0.0]
    neg_r = ritz[ritz < 0.0]
    if pos_h.size == 0 or neg_h.size == 0 or pos_r.size == 0 or neg_r.size == 0:
        raise ValueError(
            "spectrum estimates do not straddle zero; system looks definite"
        )
    return RitzEstimate(
        neg_lo=float(np.min(neg_r)),
        neg_hi=float(np.max(neg_h)),
        pos_lo=float(np.min(pos_h)),
        pos_hi=float(np.max(pos_r)),
    )


def estimate_intervals(
    op,
    prec=None,
    steps: int | None = None,
    seed: int = 20240915,
) -> RitzEstimate:
    """Spectral interval estimation with a generic probe vector.

    Runs the preconditioned Lanczos process (via MINRES with a disabled
    convergence test) on a seeded random right-hand side, which excites all
    eigenvector directions regardless of any symmetry of the model
    right-hand side, and extracts :func:`ritz_intervals`.  ``steps``
    defaults to ``min(dim, 220)``, enough for the extreme and near-zero
    eigenvalues to converge to three digits on the systems in this package.
    """
    a = as_operator(op)
    if steps is None:
        steps = min(a.dim, 220)
    rng = np.random.default_rng(seed)
    probe = rng.standard_normal(a.dim) + 1j * rng.standard_normal(a.dim)
    report = minres_solve(
        a,
        prec,
        probe,
        eps=1e-300,
        maxit=steps,
        check_operators=False,
    )
    return ritz_intervals(report)


def stagnation_profile(
    report: MinresReport, threshold: float = 1.0 - 1e-6
) -> tuple[np.ndarray, bool]:
    """Per-step reduction factors ``rho_k = |r_k| / |r_{k-1}|`` and the
    symmetric-spectrum stagnation flag.

    The flag is raised when every odd step strictly before the final one
    stagnates (``rho >= threshold``); the final step is excluded because it
    may terminate mid-cycle.  At least one such odd step must exist.
    """
    h = report.residual_history
    if h.size < 2:
        raise ValueError("need at least one iteration to compute factors")
    factors = h[1:] / np.maximum(h[:-1], 1e-300)
    last = factors.size
    odd = factors[0:last - 1:2]
    flag = odd.size > 0 and bool(np.all(odd >= threshold))
    return factors, flag


def residual_history_csv(report: MinresReport, path) -> None:
    """Write (iteration, residual, reduction factor) rows as CSV."""
    h = report.residual_history
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "residual", "reduction_factor"])
        for k, res in enumerate(h):
            factor = "" if k == 0 else repr(float(h[k] / max(h[k - 1], 1e-300)))
            writer.writerow([k, repr(float(res)), factor])
