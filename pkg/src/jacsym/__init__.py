"""Symplectic Runge-Kutta methods from Jacobi-polynomial continuous-stage expansions."""
from .polybasis import JacobiBasis, evaluate, eval_derivative, norm_constant
from .quadrature import QuadratureRule, gauss_jacobi, make_rule
from .construct import ConstructionError, ConstructionParams, solve_alpha
from .tableau import ButcherTableau, classical_order, check_symplectic, discretize, verify
from .integrator import HamiltonianSystem, integrate, kepler, rk_step

__all__ = [
    "JacobiBasis",
    "evaluate",
    "eval_derivative",
    "norm_constant",
    "QuadratureRule",
    "gauss_jacobi",
    "make_rule",
    "ConstructionError",
    "ConstructionParams",
    "solve_alpha",
    "ButcherTableau",
    "classical_order",
    "check_symplectic",
    "discretize",
    "verify",
    "HamiltonianSystem",
    "integrate",
    "kepler",
    "rk_step",
]
