"""Symplectic continuous-stage RK coefficients over a Jacobi basis.

The weight-free parts of the method are

    Bhat(tau)        = sum_{j<xi} lam_j J_j(tau)
    Ahat(tau, sigma) = Bhat(sigma) * (1/2 + sum_{i,j} alpha[i, j] J_i(tau) J_j(sigma))

with ``alpha`` skew-symmetric, so ``B_tau A_{tau,sigma} + B_sigma A_{sigma,tau}
= B_tau B_sigma`` holds for any choice of ``alpha``. The entries of ``alpha``
are then fixed by requiring the stage-order conditions up to ``eta``, which
is a linear system.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import polybasis as pb
from .polybasis import JacobiBasis
from .quadrature import gauss_jacobi

RANK_RTOL = 1e-10
INCONSISTENT_TOL = 1e-8


class ConstructionError(RuntimeError):
    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class ConstructionParams:
    basis: JacobiBasis
    xi: int
    eta: int
    rho: int

    def __post_init__(self):
        if self.xi < 1:
            raise ValueError("xi must be at least 1")
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")
        if self.rho < 1:
            raise ValueError("rho must be at least 1")
        if self.rho < self.eta:
            raise ValueError(f"rho ({self.rho}) must be >= eta ({self.eta})")
        if self.xi < 2 * self.eta:
            raise ValueError(f"xi ({self.xi}) must be >= 2*eta ({2 * self.eta})")

    @property
    def r(self) -> int:
        """Size of the index block where alpha can be nonzero."""
        return min(self.rho, self.xi - self.eta)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rho + 1, self.xi - self.eta + 1

    def unknowns(self) -> list[tuple[int, int]]:
        """Strict upper-triangle entries (i, j), grouped by column j.

        Entries belonging to a larger block come last, so enlarging ``rho``
        appends unknowns without reordering earlier ones.
        """
        return [(i, j) for j in range(1, self.r + 1) for i in range(j)]


def order_bound(xi: int, eta: int) -> int:
    zeta = min(xi, eta)
    return min(xi, 2 * eta + 2, eta + zeta + 1)


def build_B(params: ConstructionParams) -> np.ndarray:
    """Expansion coefficients lam_j = int_0^1 J_j(x) dx, j < xi."""
    return np.array([pb.plain_integral(params.basis, j) for j in range(params.xi)])


def _singular_endpoint(basis: JacobiBasis, x) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(
        (basis.alpha < 0 and np.any(x >= 1)) or (basis.beta < 0 and np.any(x <= 0))
    )


@dataclass(frozen=True)
class CsRKCoefficients:
    params: ConstructionParams
    lam: np.ndarray
    alpha_mat: np.ndarray
    free_values: tuple = ()
    free_dim: int = 0

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        mat = np.array(self.alpha_mat, dtype=float)
        if mat.shape != self.params.shape:
            raise ValueError(f"alpha_mat has shape {mat.shape}, expected {self.params.shape}")
        lam.setflags(write=False)
        mat.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha_mat", mat)

    @property
    def basis(self) -> JacobiBasis:
        return self.params.basis

    def skew_defect(self) -> float:
        """Largest violation of alpha[i, j] = -alpha[j, i] over the full index range."""
        rows, cols = self.alpha_mat.shape
        n = max(rows, cols)
        full = np.zeros((n, n))
        full[:rows, :cols] = self.alpha_mat
        return float(np.max(np.abs(full + full.T)))

    def eval_B_hat(self, tau):
        tau = np.asarray(tau, dtype=float)
        vals = pb.eval_all(self.basis, self.params.xi - 1, tau)
        out = np.tensordot(self.lam, vals, axes=1)
        return out if out.ndim else float(out)

    def eval_B(self, tau):
        if _singular_endpoint(self.basis, tau):
            raise ValueError("weight is singular at the requested endpoint")
        return self.eval_B_hat(tau) * self.basis.weight(tau)

    def kernel(self, tau, sigma):
        """1/2 + sum alpha[i, j] J_i(tau) J_j(sigma)."""
        tau = np.asarray(tau, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        rows, cols = self.alpha_mat.shape
        Pt = pb.eval_all(self.basis, rows - 1, tau)
        Ps = pb.eval_all(self.basis, cols - 1, sigma)
        out = 0.5 + np.einsum("ij,i...,j...->...", self.alpha_mat, Pt, Ps)
        return out if np.ndim(out) else float(out)

    def eval_A_hat(self, tau, sigma):
        return self.eval_B_hat(sigma) * self.kernel(tau, sigma)

    def eval_A(self, tau, sigma):
        if _singular_endpoint(self.basis, sigma):
            raise ValueError("weight is singular at the requested endpoint")
        return self.eval_A_hat(tau, sigma) * self.basis.weight(sigma)

    def with_alpha(self, alpha_mat, free_values=()) -> "CsRKCoefficients":
        return CsRKCoefficients(self.params, self.lam, alpha_mat, tuple(free_values), self.free_dim)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "alpha": p.basis.alpha,
            "beta": p.basis.beta,
            "xi": p.xi,
            "eta": p.eta,
            "rho": p.rho,
            "lambda": self.lam.tolist(),
            "alpha_mat": self.alpha_mat.tolist(),
            "free_dim": self.free_dim,
            "free_values": list(self.free_values),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CsRKCoefficients":
        params = ConstructionParams(
            JacobiBasis(d["alpha"], d["beta"]), int(d["xi"]), int(d["eta"]), int(d["rho"])
        )
        return cls(
            params,
            np.array(d["lambda"]),
            np.array(d["alpha_mat"]),
            tuple(d.get("free_values", ())),
            int(d.get("free_dim", 0)),
        )


# -- linear system --------------------------------------------------------


def _n_rows(params: ConstructionParams) -> int:
    # the right-hand side for test index k reaches J_{k+1}
    return max(params.rho, params.eta) + 1


def _jacobi_test_data(params: ConstructionParams):
    """Mixed integrals and targets for phi_k = J_k^{(a+1,b+1)}, scaled by mu_k."""
    basis = params.basis
    n_rows = _n_rows(params)
    mixed = np.zeros((params.r + 1, params.eta))
    targets = np.zeros((n_rows, params.eta))
    for k in range(params.eta):
        scale = pb.mu(basis, k)
        for j in range(params.r + 1):
            mixed[j, k] = scale * pb.mixed_inner_product(basis, j, k)
        anti = pb.antiderivative_shifted(basis, k)
        half_total = pb.constant_poly(basis, 0.5 * anti(1.0))
        targets[:, k] = scale * (anti - half_total).padded(n_rows)[:n_rows]
    return mixed, targets


def _monomial_test_data(params: ConstructionParams):
    """Same system with phi_k(x) = x^k; targets projected onto the basis."""
    basis = params.basis
    n_rows = _n_rows(params)
    mixed = np.zeros((params.r + 1, params.eta))
    targets = np.zeros((n_rows, params.eta))
    rule = gauss_jacobi(basis, (params.eta + n_rows) // 2 + 2)
    P = pb.eval_all(basis, n_rows - 1, rule.c)
    for k in range(params.eta):
        for j in range(params.r + 1):
            mixed[j, k] = pb.integrate_unweighted(
                lambda x, j=j, k=k: np.asarray(pb.evaluate(basis, j, x)) * x**k, j + k
            )
        g = rule.c ** (k + 1) / (k + 1) - 0.5 / (k + 1)
        targets[:, k] = P @ (rule.b * g)
    return mixed, targets


def assemble_system(params: ConstructionParams, test: str = "jacobi"):
    """Matrix and right-hand side over the unknowns ``params.unknowns()``.

    One row per (test index k, basis index i); the column for alpha[p, q]
    collects +m[q, k] in row p and -m[p, k] in row q.
    """
    if test == "jacobi":
        mixed, targets = _jacobi_test_data(params)
    elif test == "monomial":
        mixed, targets = _monomial_test_data(params)
    else:
        raise ValueError(f"unknown test family {test!r}")
    unknowns = params.unknowns()
    n_rows = _n_rows(params)
    M = np.zeros((n_rows * params.eta, len(unknowns)))
    for k in range(params.eta):
        for col, (p, q) in enumerate(unknowns):
            M[k * n_rows + p, col] += mixed[q, k]
            M[k * n_rows + q, col] -= mixed[p, k]
    rhs = targets.T.reshape(-1)
    return M, rhs


def _pivot_columns(M: np.ndarray) -> list[int]:
    """Greedy left-to-right maximal independent column set."""
    if M.size == 0:
        return []
    tol = RANK_RTOL * max(np.linalg.norm(M, 2), 1.0)
    chosen: list[int] = []
    for col in range(M.shape[1]):
        trial = M[:, chosen + [col]]
        if np.linalg.svd(trial, compute_uv=False)[-1] > tol:
            chosen.append(col)
    return chosen


def _vector_to_matrix(params: ConstructionParams, x: np.ndarray) -> np.ndarray:
    mat = np.zeros(params.shape)
    for (i, j), v in zip(params.unknowns(), x):
        mat[i, j] = v
        mat[j, i] = -v
    return mat


@dataclass(frozen=True)
class AlphaSolution:
    """Affine family of solutions: particular + sum_k t_k * null_basis[k].

    The free coordinates ``t_k`` are the values of the entries listed in
    ``free_entries``; the particular solution has them all at zero.
    """

    particular: CsRKCoefficients
    null_basis: list
    free_entries: list
    residual: float
    system: tuple = field(repr=False, default=())

    @property
    def free_dim(self) -> int:
        return len(self.null_basis)

    def member(self, free_values=()) -> CsRKCoefficients:
        free_values = tuple(float(v) for v in free_values)
        if len(free_values) > self.free_dim:
            raise ValueError(f"{len(free_values)} free values given, family has {self.free_dim}")
        free_values = free_values + (0.0,) * (self.free_dim - len(free_values))
        mat = self.particular.alpha_mat.copy()
        for t, null in zip(free_values, self.null_basis):
            mat = mat + t * null
        return self.particular.with_alpha(mat, free_values)

    def min_norm(self) -> CsRKCoefficients:
        """Member with the smallest Frobenius norm of the free block."""
        if not self.free_dim:
            return self.particular
        N = np.stack([n.ravel() for n in self.null_basis], axis=1)
        t, *_ = np.linalg.lstsq(N, -self.particular.alpha_mat.ravel(), rcond=None)
        return self.member(t)

    def equation_residual(self, coeffs: CsRKCoefficients) -> float:
        params = coeffs.params
        M, rhs = self.system
        x = np.array([coeffs.alpha_mat[i, j] for i, j in params.unknowns()])
        return float(np.max(np.abs(M @ x - rhs))) if rhs.size else 0.0


def solve_alpha(params: ConstructionParams, test: str = "jacobi") -> AlphaSolution:
    lam = build_B(params)
    M, rhs = assemble_system(params, test)
    unknowns = params.unknowns()
    n = len(unknowns)
    pivots = _pivot_columns(M)
    free = [c for c in range(n) if c not in pivots]

    x = np.zeros(n)
    if pivots:
        x_p, *_ = np.linalg.lstsq(M[:, pivots], rhs, rcond=None)
        x[pivots] = x_p
    residual = float(np.max(np.abs(M @ x - rhs))) if rhs.size else 0.0
    if residual > INCONSISTENT_TOL:
        raise ConstructionError(
            f"linear conditions are inconsistent (residual {residual:.3e})", residual
        )

    null_basis = []
    for f in free:
        v = np.zeros(n)
        v[f] = 1.0
        if pivots:
            v_p, *_ = np.linalg.lstsq(M[:, pivots], -M[:, f], rcond=None)
            v[pivots] = v_p
        null_basis.append(_vector_to_matrix(params, v))

    particular = CsRKCoefficients(
        params, lam, _vector_to_matrix(params, x), (0.0,) * len(free), len(free)
    )
    return AlphaSolution(
        particular, null_basis, [unknowns[f] for f in free], residual, (M, rhs)
    )


def construct(basis: JacobiBasis, xi: int, eta: int, rho: int, free_values=()) -> CsRKCoefficients:
    """Convenience wrapper: solve and pick the member with the given free values."""
    return solve_alpha(ConstructionParams(basis, xi, eta, rho)).member(free_values)


# -- continuous checks ----------------------------------------------------


def _rule_for(basis: JacobiBasis, degree: int):
    return gauss_jacobi(basis, degree // 2 + 2)


def symplectic_residual(coeffs: CsRKCoefficients, n_grid: int = 50) -> float:
    """max |B_t A_ts + B_s A_st - B_t B_s| on an interior grid."""
    g = (np.arange(n_grid) + 0.5) / n_grid
    T, S = np.meshgrid(g, g, indexing="ij")
    Bt, Bs = coeffs.eval_B(T), coeffs.eval_B(S)
    res = Bt * coeffs.eval_A(T, S) + Bs * coeffs.eval_A(S, T) - Bt * Bs
    return float(np.max(np.abs(res)))


def check_B(coeffs: CsRKCoefficients, order: int) -> float:
    """max_k |int B_t t^{k-1} dt - 1/k| for k = 1..order."""
    rule = _rule_for(coeffs.basis, coeffs.params.xi + order)
    Bh = coeffs.eval_B_hat(rule.c)
    return max(abs(np.dot(rule.b, Bh * rule.c ** (k - 1)) - 1 / k) for k in range(1, order + 1))


def check_C(coeffs: CsRKCoefficients, order: int, taus=None) -> float:
    """max_{tau,k} |int A_{tau,s} s^{k-1} ds - tau^k / k|."""
    if taus is None:
        taus = (np.arange(20) + 0.5) / 20
    p = coeffs.params
    rule = _rule_for(coeffs.basis, 2 * p.xi + order)
    worst = 0.0
    for tau in taus:
        Ah = coeffs.eval_A_hat(tau, rule.c)
        for k in range(1, order + 1):
            worst = max(worst, abs(np.dot(rule.b, Ah * rule.c ** (k - 1)) - tau**k / k))
    return worst


def check_D(coeffs: CsRKCoefficients, order: int, sigmas=None) -> float:
    """max |int Bhat_t Ahat_{t,s} t^{k-1} w(t) dt - Bhat_s (1 - s^k)/k|.

    The common factor w(s) is divided out of both sides.
    """
    if sigmas is None:
        sigmas = (np.arange(20) + 0.5) / 20
    p = coeffs.params
    rule = _rule_for(coeffs.basis, p.xi + p.rho + order)
    Bh = coeffs.eval_B_hat(rule.c)
    worst = 0.0
    for sigma in sigmas:
        Ah = coeffs.eval_A_hat(rule.c, sigma)
        Bs = coeffs.eval_B_hat(sigma)
        for k in range(1, order + 1):
            lhs = np.dot(rule.b, Bh * Ah * rule.c ** (k - 1))
            worst = max(worst, abs(lhs - Bs * (1 - sigma**k) / k))
    return worst


def polynomial_degrees(coeffs: CsRKCoefficients) -> dict:
    """Degrees of Bhat in tau and of Ahat in tau and sigma, from the truncation."""
    p = coeffs.params
    return {"B": p.xi - 1, "A_tau": p.rho, "A_sigma": (p.xi - p.eta) + (p.xi - 1)}


def discrete_order_bound(coeffs: CsRKCoefficients, quad_order: int) -> int:
    """Lower bound on the order after discretizing with a rule of order ``quad_order``."""
    p = coeffs.params
    deg = polynomial_degrees(coeffs)
    zeta = min(p.xi, p.eta)
    rho_s = min(p.xi, quad_order - deg["B"])
    alpha_s = min(p.eta, quad_order - deg["A_sigma"])
    beta_s = min(zeta, quad_order - deg["A_tau"] - deg["B"])
    return max(min(rho_s, 2 * alpha_s + 2, alpha_s + beta_s + 1), 0)

