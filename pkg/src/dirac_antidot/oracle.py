"""Finite-difference eigensolver for the radial operator

    [-d^2/drho^2 + 4 L1 rho^2 + 4 L3 / rho^2] F = 4 L2 F

with Dirichlet truncation at rho = 0 and rho = R. Used to check the
analytic quantization rule and the relativistic root finder without
relying on any closed-form step.

Two discretizations are available:

``plain``
    three-point Laplacian on rho_i = (i+1) h, i = 0..N-1, R = (N+1) h.
    Second order for gamma >= 1; near the critical coupling (gamma -> 0)
    the error decays only like 1/log(h).
``regularized``
    writes F = rho^t phi, where t in [1/2, 3/2) differs from the indicial
    exponent (1 + gamma)/2 at rho = 0 by an integer, and discretizes the
    weighted flux form -rho^-2t (rho^2t phi')' on cell centres
    rho_i = (i + 1/2) h, R = N h. The symmetrized matrix acts directly on
    samples of F and is second order for every gamma >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .params import DimensionlessConfig, QuantumNumbers

SUPPORT_SIGMAS = 12.0
MIN_NODES = 100
SCHEMES = ("plain", "regularized")


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class RadialOperator:
    grid_step: float
    node_count: int
    lambda1: float
    lambda3: float
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid: np.ndarray
    scheme: str = "plain"

    @property
    def domain_end(self) -> float:
        if self.scheme == "plain":
            return (self.node_count + 1) * self.grid_step
        return self.node_count * self.grid_step


def support_radius(lambda1: float) -> float:
    return SUPPORT_SIGMAS / math.sqrt(2.0 * math.sqrt(lambda1))


def _regular_exponent(lambda3):
    s = 0.5 + 0.5 * math.sqrt(1.0 + 16.0 * lambda3)
    return s - math.floor(s - 0.5)


def assemble(
    lambda1: float,
    lambda3: float,
    grid_step: float,
    node_count: int,
    scheme: str = "plain",
) -> RadialOperator:
    if scheme not in SCHEMES:
        raise OracleError(f"unknown scheme {scheme!r}")
    if not lambda1 > 0:
        raise OracleError(f"lambda1 must be positive, got {lambda1!r}")
    if 1.0 + 16.0 * lambda3 < 0:
        raise OracleError("1 + 16*lambda3 < 0: operator unbounded below")
    if node_count < MIN_NODES:
        raise OracleError(f"need at least {MIN_NODES} nodes, got {node_count}")
    if not grid_step > 0:
        raise OracleError("grid_step must be positive")
    h, inv_h2 = grid_step, 1.0 / grid_step**2

    if scheme == "plain":
        end = (node_count + 1) * h
        rho = h * np.arange(1, node_count + 1)
        diagonal = 2.0 * inv_h2 + 4.0 * lambda1 * rho**2 + 4.0 * lambda3 / rho**2
        off_diagonal = np.full(node_count - 1, -inv_h2)
    else:
        end = node_count * h
        rho = h * (np.arange(node_count) + 0.5)
        t = _regular_exponent(lambda3)
        # what is left of the centrifugal term after factoring out rho^t
        rest = 4.0 * lambda3 - t * (t - 1.0)
        right = rho + 0.5 * h
        diagonal = inv_h2 * (right / rho) ** (2.0 * t)
        diagonal[1:] += inv_h2 * ((rho[1:] - 0.5 * h) / rho[1:]) ** (2.0 * t)
        diagonal += 4.0 * lambda1 * rho**2 + rest / rho**2
        off_diagonal = -inv_h2 * (right[:-1] ** 2 / (rho[:-1] * rho[1:])) ** t

    # small slack so that a step computed as R/(N+1) from R itself is accepted
    if end < support_radius(lambda1) * (1.0 - 1e-12):
        raise OracleError(
            f"domain end {end:g} shorter than support radius {support_radius(lambda1):g}"
        )
    return RadialOperator(
        grid_step=h,
        node_count=node_count,
        lambda1=lambda1,
        lambda3=lambda3,
        diagonal=diagonal,
        off_diagonal=off_diagonal,
        grid=rho,
        scheme=scheme,
    )


def lowest_eigenvalues(op: RadialOperator, count: int) -> np.ndarray:
    if not 1 <= count <= 10:
        raise OracleError("count must be between 1 and 10")
    # LAPACK stebz: Sturm-sequence bisection on the index range
    return eigh_tridiagonal(
        op.diagonal,
        op.off_diagonal,
        eigvals_only=True,
        select="i",
        select_range=(0, count - 1),
        lapack_driver="stebz",
    )


def lowest_eigenvector(op: RadialOperator, index: int = 0) -> np.ndarray:
    """Samples of F on ``op.grid`` for eigenvalue ``index``.

    Scaled so that sum F^2 h = 1 and the largest-magnitude sample is positive.
    """
    _, vecs = eigh_tridiagonal(
        op.diagonal,
        op.off_diagonal,
        select="i",
        select_range=(index, index),
    )
    v = vecs[:, 0] / math.sqrt(op.grid_step)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v


def analytic_eigenvalue(lambda1: float, lambda3: float, n: int) -> float:
    """4 L2 = 4 sqrt(L1) (2n + 1 + gamma/2) with gamma = sqrt(1 + 16 L3)."""
    gamma = math.sqrt(1.0 + 16.0 * lambda3)
    return 4.0 * math.sqrt(lambda1) * (2 * n + 1 + 0.5 * gamma)


def extrapolated_eigenvalues(
    lambda1, lambda3, count, node_count=4000, domain_end=None, scheme="plain"
):
    """Eigenvalues on grids h and h/2 and their Richardson combination.

    Returns ``(coarse, fine, extrapolated)``. Both grids share the same
    domain end.
    """
    if domain_end is None:
        domain_end = support_radius(lambda1)
    if scheme == "plain":
        h, fine_count = domain_end / (node_count + 1), 2 * node_count + 1
    else:
        h, fine_count = domain_end / node_count, 2 * node_count
    coarse = lowest_eigenvalues(assemble(lambda1, lambda3, h, node_count, scheme), count)
    fine = lowest_eigenvalues(assemble(lambda1, lambda3, 0.5 * h, fine_count, scheme), count)
    return coarse, fine, (4.0 * fine - coarse) / 3.0


@dataclass(frozen=True)
class QuantizationRow:
    n: int
    numeric: float
    analytic: float
    relative_error: float
    coarse: float
    fine: float

    @property
    def convergence_ratio(self) -> float:
        """(error at h) / (error at h/2); close to 4 for second-order convergence."""
        return (self.coarse - self.analytic) / (self.fine - self.analytic)


def verify_quantization(
    lambda1: float,
    lambda3: float,
    n_max: int,
    node_count: int = 4000,
    scheme: str = "plain",
):
    """Richardson-extrapolated eigenvalues against 4 sqrt(L1)(2n + 1 + gamma/2)."""
    if not 0 <= n_max <= 5:
        raise OracleError("n_max must be between 0 and 5")
    coarse, fine, extrap = extrapolated_eigenvalues(
        lambda1, lambda3, n_max + 1, node_count, scheme=scheme
    )
    rows = []
    for n in range(n_max + 1):
        exact = analytic_eigenvalue(lambda1, lambda3, n)
        rows.append(
            QuantizationRow(
                n=n,
                numeric=float(extrap[n]),
                analytic=exact,
                relative_error=abs(extrap[n] - exact) / abs(exact),
                coarse=float(coarse[n]),
                fine=float(fine[n]),
            )
        )
    return rows


@dataclass(frozen=True)
class RelativisticCheck:
    chi_claimed: float
    chi_numeric: float
    defect: float
    iterations: int


def verify_relativistic(
    cfg: DimensionlessConfig,
    qn: QuantumNumbers,
    chi_claimed: float,
    node_count: int = 4000,
    tol: float = 1e-9,
    max_iter: int = 100,
    scheme: str = "regularized",
) -> RelativisticCheck:
    """Recover chi from the numeric spectrum of the radial operator.

    The centrifugal coefficient depends on chi through the antidot term, so
    chi is found as the fixed point of chi -> eigenvalue -> chi with a
    damping step of 1/2, started from ``chi_claimed``. Returns the relative
    defect |chi_numeric - chi_claimed| / chi_claimed.
    """
    if not 0 <= qn.n <= 5:
        raise OracleError("only n <= 5 is supported")
    shift = qn.m + cfg.alpha
    lambda1 = (cfg.w / 4.0) ** 2

    def lambda3(chi):
        return 0.25 * shift * shift - 1.0 / 16.0 + (chi + 1.0) * cfg.b_squared / 8.0

    def chi_from(chi):
        l3 = lambda3(chi)
        gamma = math.sqrt(1.0 + 16.0 * l3)
        # domain must also hold states pushed outward by the centrifugal term
        z_end = max(SUPPORT_SIGMAS**2, 2.0 * (0.5 * gamma + 2 * qn.n + 1) + 80.0)
        end = math.sqrt(z_end / (2.0 * math.sqrt(lambda1)))
        *_, extrap = extrapolated_eigenvalues(lambda1, l3, qn.n + 1, node_count, end, scheme)
        four_lambda2 = float(extrap[qn.n])
        # 4 L2 = chi^2 - 1 - w (m + alpha)
        return math.sqrt(1.0 + four_lambda2 + cfg.w * shift)

    chi = chi_claimed
    for it in range(1, max_iter + 1):
        target = chi_from(chi)
        if cfg.b_squared == 0.0:
            # centrifugal term independent of chi: one evaluation is exact
            chi = target
            break
        change = target - chi
        if abs(change) <= tol:
            chi = target
            break
        chi += 0.5 * change
    else:
        raise OracleError("relativistic fixed point did not converge")
    return RelativisticCheck(
        chi_claimed=chi_claimed,
        chi_numeric=chi,
        defect=abs(chi - chi_claimed) / chi_claimed,
        iterations=it,
    )
