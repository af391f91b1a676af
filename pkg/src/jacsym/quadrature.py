"""Gauss-type quadrature for the shifted Jacobi weight on [0, 1]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .polybasis import JacobiBasis, eval_all, eval_derivative, evaluate, norm_constant


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes ``c`` (ascending) and weights ``b`` for int_0^1 f(x) w(x) dx."""

    basis: JacobiBasis
    s: int
    c: np.ndarray
    b: np.ndarray
    exactness: int
    kind: str = "gauss_jacobi"
    # node indices in the order the closed-form formula enumerates them
    listing: tuple = field(default=())

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        b = np.asarray(self.b, dtype=float)
        c.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)
        if not self.listing:
            object.__setattr__(self, "listing", tuple(range(self.s)))

    def integrate(self, f) -> float:
        return float(np.dot(self.b, f(self.c)))

    def to_dict(self) -> dict:
        return {
            "alpha": self.basis.alpha,
            "beta": self.basis.beta,
            "s": self.s,
            "c": self.c.tolist(),
            "b": self.b.tolist(),
            "exactness": self.exactness,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureRule":
        return cls(
            JacobiBasis(d["alpha"], d["beta"]),
            int(d["s"]),
            np.array(d["c"], dtype=float),
            np.array(d["b"], dtype=float),
            int(d["exactness"]),
        )


def recurrence_coefficients(alpha: float, beta: float, n: int):
    """Diagonal and off-diagonal of the Jacobi matrix for P^{(alpha,beta)} on [-1, 1]."""
    diag = np.empty(n)
    off = np.empty(max(n - 1, 0))
    ab = alpha + beta
    diag[0] = (beta - alpha) / (ab + 2)
    for k in range(1, n):
        c = 2 * k + ab
        diag[k] = (beta**2 - alpha**2) / (c * (c + 2))
    if n > 1:
        # k = 1 written without the (1 + alpha + beta) factors that cancel
        off[0] = 4 * (alpha + 1) * (beta + 1) / ((ab + 3) * (ab + 2) ** 2)
        for k in range(2, n):
            c = 2 * k + ab
            off[k - 1] = 4 * k * (k + alpha) * (k + beta) * (k + ab) / (c**2 * (c + 1) * (c - 1))
    return diag, np.sqrt(off)


def _christoffel_weights(basis: JacobiBasis, s: int, c: np.ndarray) -> np.ndarray:
    vals = eval_all(basis, s - 1, c)
    return 1.0 / np.sum(vals**2, axis=0)


def gauss_jacobi(basis: JacobiBasis, s: int) -> QuadratureRule:
    """s-point Gauss-Christoffel rule, exact to degree 2s-1 against the weight."""
    if s < 1:
        raise ValueError("s must be positive")
    diag, off = recurrence_coefficients(basis.alpha, basis.beta, s)
    try:
        t = eigh_tridiagonal(diag, off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(f"eigenvalue solve failed for s={s}") from exc
    c = np.sort((t + 1) / 2)
    # one Newton step on J_s
    c = c - np.asarray(evaluate(basis, s, c)) / np.asarray(eval_derivative(basis, s, 1, c))
    if np.any(c <= 0) or np.any(c >= 1) or np.any(np.diff(c) <= 0):
        raise QuadratureError("nodes left (0, 1) or lost ordering")
    b = _christoffel_weights(basis, s, c)
    return QuadratureRule(basis, s, c, b, 2 * s - 1)


def _cheb_cos2(s: int) -> np.ndarray:
    i = np.arange(1, s + 1)
    return np.cos((2 * i - 1) / (2 * s + 1) * np.pi / 2) ** 2


def chebyshev3_rule(s: int) -> QuadratureRule:
    """Closed-form rule for (alpha, beta) = (-1/2, 1/2)."""
    if s < 1:
        raise ValueError("s must be positive")
    c = _cheb_cos2(s)
    b = 2 * np.pi / (2 * s + 1) * c
    # formula index i=1..s runs over descending nodes
    listing = tuple(range(s - 1, -1, -1))
    return QuadratureRule(
        JacobiBasis(-0.5, 0.5), s, c[::-1], b[::-1], 2 * s - 1, "chebyshev3", listing
    )


def chebyshev4_rule(s: int) -> QuadratureRule:
    """Closed-form rule for (alpha, beta) = (1/2, -1/2); mirror image of the third kind."""
    if s < 1:
        raise ValueError("s must be positive")
    c = 1 - _cheb_cos2(s)
    b = 2 * np.pi / (2 * s + 1) * (1 - c)
    return QuadratureRule(JacobiBasis(0.5, -0.5), s, c, b, 2 * s - 1, "chebyshev4")


def make_rule(basis: JacobiBasis, s: int, method: str = "eigen") -> QuadratureRule:
    """Pick the closed-form rule when one exists and ``method == 'closed'``."""
    if method == "closed":
        if (basis.alpha, basis.beta) == (-0.5, 0.5):
            return chebyshev3_rule(s)
        if (basis.alpha, basis.beta) == (0.5, -0.5):
            return chebyshev4_rule(s)
    elif method != "eigen":
        raise ValueError(f"unknown rule method {method!r}")
    return gauss_jacobi(basis, s)


def weight_integral(basis: JacobiBasis) -> float:
    return norm_constant(basis, 0) / 2


def monomial_moment(basis: JacobiBasis, k: int) -> float:
    """Exact int_0^1 x^k w(x) dx = 2^{a+b} B(k+b+1, a+1)."""
    a, b = basis.alpha, basis.beta
    return 2.0 ** (a + b) * math.exp(
        math.lgamma(k + b + 1) + math.lgamma(a + 1) - math.lgamma(k + a + b + 2)
    )
