"""Shifted, normalized Jacobi polynomials on [0, 1].

The family J_n^{(a,b)} is orthonormal under the weight
``w(x) = 2**(a+b) * (1-x)**a * x**b``. Values are obtained from the
classical three-term recurrence on [-1, 1] (variable ``t = 2x - 1``) and then
divided by ``sqrt(eps_n / 2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

COEFF_TOL = 1e-11


@dataclass(frozen=True)
class JacobiBasis:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(
                f"Jacobi parameters must exceed -1, got ({self.alpha}, {self.beta})"
            )

    def shifted(self, m: int = 1) -> "JacobiBasis":
        """The (alpha+m, beta+m) family."""
        return JacobiBasis(self.alpha + m, self.beta + m)

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.alpha, self.beta
        with np.errstate(divide="ignore"):
            return 2.0 ** (a + b) * (1.0 - x) ** a * x**b

    def norm_constant(self, n: int) -> float:
        return norm_constant(self, n)

    def __call__(self, n: int, x):
        return evaluate(self, n, x)

    def to_dict(self, n_max: int = 10) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "eps": [norm_constant(self, n) for n in range(n_max + 1)],
        }


def _lgamma(x: float) -> float:
    if x <= 0:
        raise ValueError(f"Gamma argument must be positive, got {x}")
    return math.lgamma(x)


@lru_cache(maxsize=4096)
def _norm_constant(alpha: float, beta: float, n: int) -> float:
    ab = alpha + beta
    if n == 0:
        # separate branch: the general formula has a 0/0 at alpha + beta = -1
        log_eps = (
            (ab + 1) * math.log(2.0)
            + _lgamma(alpha + 1)
            + _lgamma(beta + 1)
            - _lgamma(ab + 2)
        )
        eps = math.exp(log_eps)
    else:
        log_eps = (
            (ab + 1) * math.log(2.0)
            + _lgamma(n + alpha + 1)
            + _lgamma(n + beta + 1)
            - _lgamma(n + ab + 1)
            - _lgamma(n + 1)
        )
        eps = math.exp(log_eps) / (2 * n + ab + 1)
    if not math.isfinite(eps) or eps <= 0:
        raise ValueError(f"normalization constant not finite for n={n}, ({alpha}, {beta})")
    return eps


def norm_constant(basis: JacobiBasis, n: int) -> float:
    """Return eps_n; ``J_n`` is the classical polynomial divided by sqrt(eps_n/2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _norm_constant(float(basis.alpha), float(basis.beta), int(n))


def classical_jacobi(n: int, alpha: float, beta: float, t):
    """Unnormalized P_n^{(alpha,beta)}(t) on [-1, 1] by the three-term recurrence."""
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    if n == 0:
        return p_prev
    p = (alpha + 1) + (alpha + beta + 2) * (t - 1) / 2
    ab = alpha + beta
    for k in range(2, n + 1):
        c = 2 * k + ab
        a1 = 2 * k * (k + ab) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * t + alpha**2 - beta**2)
        a3 = 2 * (k + alpha - 1) * (k + beta - 1) * c
        p_prev, p = p, (a2 * p - a3 * p_prev) / a1
    return p


def evaluate(basis: JacobiBasis, n: int, x):
    """J_n^{(alpha,beta)}(x); accepts scalars or arrays."""
    if n < 0:
        raise ValueError("polynomial index must be nonnegative")
    x = np.asarray(x, dtype=float)
    p = classical_jacobi(n, basis.alpha, basis.beta, 2 * x - 1)
    out = p / math.sqrt(norm_constant(basis, n) / 2)
    return out if out.ndim else float(out)


def eval_all(basis: JacobiBasis, n_max: int, x) -> np.ndarray:
    """Rows J_0(x), ..., J_{n_max}(x) stacked along axis 0."""
    return np.stack([np.asarray(evaluate(basis, n, x)) for n in range(n_max + 1)])


def derivative_factor(basis: JacobiBasis, n: int, m: int) -> float:
    a, b = basis.alpha, basis.beta
    log_f = 0.5 * (
        _lgamma(n + 1)
        + _lgamma(n + m + a + b + 1)
        - _lgamma(n - m + 1)
        - _lgamma(n + a + b + 1)
    )
    return 2.0**m * math.exp(log_f)


def eval_derivative(basis: JacobiBasis, n: int, m: int, x):
    """m-th derivative of J_n, via d^m J_n^{(a,b)} = factor * J_{n-m}^{(a+m,b+m)}."""
    if n < 0 or m < 0:
        raise ValueError("indices must be nonnegative")
    if m == 0:
        return evaluate(basis, n, x)
    if m > n:
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x) if x.ndim else 0.0
    return derivative_factor(basis, n, m) * evaluate(basis.shifted(m), n - m, x)


def endpoint_values(basis: JacobiBasis, k: int) -> tuple[float, float]:
    """Closed-form (J_k(1), J_k(0))."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a, b = basis.alpha, basis.beta
    s = math.sqrt(norm_constant(basis, k) / 2)
    at_one = math.exp(_lgamma(k + a + 1) - _lgamma(k + 1) - _lgamma(a + 1)) / s
    at_zero = (-1) ** k * math.exp(_lgamma(k + b + 1) - _lgamma(k + 1) - _lgamma(b + 1)) / s
    return at_one, at_zero


def mu(basis: JacobiBasis, k: int) -> float:
    """Scale linking J_k^{(a+1,b+1)} to the derivative of J_{k+1}^{(a,b)}."""
    return 2 * math.sqrt((k + 1) * (k + basis.alpha + basis.beta + 2))


@dataclass(frozen=True)
class BasisPoly:
    """Polynomial sum_j coeffs[j] * J_j(x) over a fixed Jacobi family."""

    basis: JacobiBasis
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        nz = [j for j, c in enumerate(self.coeffs) if abs(c) > COEFF_TOL]
        return nz[-1] if nz else 0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + c * np.asarray(evaluate(self.basis, j, x))
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for j, c in enumerate(self.coeffs):
            if c and j > 0:
                out = out + c * np.asarray(eval_derivative(self.basis, j, 1, x))
        return out if out.ndim else float(out)

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(max(n, len(self.coeffs)))
        out[: len(self.coeffs)] = self.coeffs
        return out

    def _check(self, other):
        if other.basis != self.basis:
            raise ValueError("cannot combine polynomials over different bases")

    def __add__(self, other: "BasisPoly") -> "BasisPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return BasisPoly(self.basis, tuple(self.padded(n) + other.padded(n)))

    def __sub__(self, other: "BasisPoly") -> "BasisPoly":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "BasisPoly":
        return BasisPoly(self.basis, tuple(factor * c for c in self.coeffs))

    def __mul__(self, factor: float) -> "BasisPoly":
        return self.scale(factor)

    __rmul__ = __mul__

    def isclose(self, other: "BasisPoly", tol: float = COEFF_TOL) -> bool:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return bool(np.all(np.abs(self.padded(n) - other.padded(n)) <= tol))


def constant_poly(basis: JacobiBasis, value: float) -> BasisPoly:
    """Constant ``value`` written as a multiple of J_0."""
    return BasisPoly(basis, (value * math.sqrt(norm_constant(basis, 0) / 2),))


def antiderivative_shifted(basis: JacobiBasis, k: int) -> BasisPoly:
    """tau -> int_0^tau J_k^{(a+1,b+1)}(x) dx, expressed in the (a, b) family."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    m = mu(basis, k)
    _, at_zero = endpoint_values(basis, k + 1)
    coeffs = np.zeros(k + 2)
    coeffs[k + 1] = 1.0 / m
    coeffs[0] = -at_zero / m * math.sqrt(norm_constant(basis, 0) / 2)
    return BasisPoly(basis, tuple(coeffs))


def legendre_nodes(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    t, w = np.polynomial.legendre.leggauss(n_points)
    return (t + 1) / 2, w / 2


def integrate_unweighted(f, degree: int) -> float:
    """int_0^1 f(x) dx, exact when f is a polynomial of the given degree."""
    x, w = legendre_nodes(degree // 2 + 1)
    return float(np.dot(w, f(x)))


def mixed_inner_product(basis: JacobiBasis, j: int, k: int) -> float:
    """Unweighted int_0^1 J_j^{(a,b)}(s) J_k^{(a+1,b+1)}(s) ds."""
    if j < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    x, w = legendre_nodes(math.ceil((j + k) / 2) + 1)
    vals = np.asarray(evaluate(basis, j, x)) * np.asarray(evaluate(basis.shifted(), k, x))
    return float(np.dot(w, vals))


def plain_integral(basis: JacobiBasis, j: int) -> float:
    """int_0^1 J_j(x) dx.

    Uses the endpoint identity on the (a-1, b-1) family when that family is
    admissible, otherwise exact Gauss-Legendre.
    """
    a, b = basis.alpha, basis.beta
    if j >= 1 and a - 1 > -1 and b - 1 > -1:
        lower = JacobiBasis(a - 1, b - 1)
        one, zero = endpoint_values(lower, j + 1)
        return (one - zero) / mu(lower, j)
    return integrate_unweighted(lambda x: np.asarray(evaluate(basis, j, x)), j)
