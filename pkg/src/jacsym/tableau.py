"""Butcher tableaux obtained by discretizing continuous-stage methods, plus checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .construct import CsRKCoefficients, discrete_order_bound
from .quadrature import QuadratureRule

ORDER_TOL = 1e-9


@dataclass(frozen=True)
class ButcherTableau:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    declared_order: int = 0
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        A = np.atleast_2d(np.array(self.A, dtype=float))
        b = np.atleast_1d(np.array(self.b, dtype=float))
        c = np.atleast_1d(np.array(self.c, dtype=float))
        s = len(b)
        if A.shape != (s, s) or c.shape != (s,):
            raise ValueError(f"inconsistent tableau shapes A{A.shape} b{b.shape} c{c.shape}")
        for arr in (A, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def s(self) -> int:
        return len(self.b)

    def permuted(self, order) -> "ButcherTableau":
        """Same method with stages relabelled; ``order[k]`` is the old index of new stage k."""
        order = np.asarray(order)
        return ButcherTableau(
            self.A[np.ix_(order, order)],
            self.b[order],
            self.c[order],
            self.declared_order,
            self.provenance,
        )

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "c": self.c.tolist(),
            "b": self.b.tolist(),
            "A": self.A.tolist(),
            "declared_order": self.declared_order,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ButcherTableau":
        A = np.array(d["A"], dtype=float)
        b = np.array(d["b"], dtype=float)
        c = np.array(d["c"], dtype=float) if "c" in d else A.sum(axis=1)
        if "s" in d and int(d["s"]) != len(b):
            raise ValueError(f"declared s={d['s']} but {len(b)} weights given")
        return cls(A, b, c, int(d.get("declared_order", 0)), dict(d.get("provenance", {})))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def pretty(self, digits: int = 14) -> str:
        """Butcher array as text: c | A on each row, then the weights below a rule."""
        fmt = f"{{:>{digits + 4}.{digits}f}}"
        rows = []
        for i in range(self.s):
            rows.append(fmt.format(self.c[i]) + " |" + "".join(fmt.format(a) for a in self.A[i]))
        width = len(rows[0])
        rows.append("-" * width)
        rows.append(" " * (digits + 4) + " |" + "".join(fmt.format(x) for x in self.b))
        return "\n".join(rows)


def discretize(coeffs: CsRKCoefficients, rule: QuadratureRule) -> ButcherTableau:
    """a_ij = b_j Ahat(c_i, c_j), bhat_i = b_i Bhat(c_i)."""
    if rule.basis != coeffs.basis:
        raise ValueError(
            f"rule basis {rule.basis} does not match coefficient basis {coeffs.basis}"
        )
    c, w = rule.c, rule.b
    if np.any(c <= 0) or np.any(c >= 1):
        raise ValueError("quadrature nodes must be interior")
    T, S = np.meshgrid(c, c, indexing="ij")
    A = coeffs.eval_A_hat(T, S) * w[None, :]
    b = w * coeffs.eval_B_hat(c)

    quad_order = rule.exactness + 1
    declared = discrete_order_bound(coeffs, quad_order)
    p = coeffs.params
    provenance = {
        "alpha": p.basis.alpha,
        "beta": p.basis.beta,
        "xi": p.xi,
        "eta": p.eta,
        "rho": p.rho,
        "quadrature": rule.kind,
        "quadrature_order": quad_order,
        "free_values": list(coeffs.free_values),
        "listing": list(rule.listing),
    }
    if declared < p.xi and declared < 2 * p.eta + 2:
        provenance["warning"] = "quadrature too coarse for the truncation degrees; order reduced"
    return ButcherTableau(A, b, c, declared, provenance)


def listing_order(t: ButcherTableau) -> ButcherTableau:
    """Reorder stages as the closed-form node formula enumerates them."""
    listing = t.provenance.get("listing")
    if not listing:
        return t
    return t.permuted(listing)


def check_symplectic(t: ButcherTableau) -> float:
    """max |b_i a_ij + b_j a_ji - b_i b_j|."""
    M = t.b[:, None] * t.A
    return float(np.max(np.abs(M + M.T - np.outer(t.b, t.b))))


def check_simplifying(t: ButcherTableau, which: str, order: int) -> float:
    """Residual of the discrete B, C or D simplifying assumption up to ``order``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    A, b, c = t.A, t.b, t.c
    ks = range(1, order + 1)
    if which == "B":
        return max(abs(np.dot(b, c ** (k - 1)) - 1 / k) for k in ks)
    if which == "C":
        return max(float(np.max(np.abs(A @ c ** (k - 1) - c**k / k))) for k in ks)
    if which == "D":
        return max(
            float(np.max(np.abs((b * c ** (k - 1)) @ A - b * (1 - c**k) / k))) for k in ks
        )
    raise ValueError(f"unknown simplifying assumption {which!r}")


def order_conditions(t: ButcherTableau) -> dict[int, list[float]]:
    """Residuals of the rooted-tree conditions through order 5, grouped by order.

    Stage abscissae are taken as the row sums of A (autonomous form).
    """
    A, b = t.A, t.b
    c = A.sum(axis=1)
    Ac = A @ c
    Ac2 = A @ c**2
    AAc = A @ Ac
    return {
        1: [b.sum() - 1],
        2: [b @ c - 1 / 2],
        3: [b @ c**2 - 1 / 3, b @ Ac - 1 / 6],
        4: [
            b @ c**3 - 1 / 4,
            b @ (c * Ac) - 1 / 8,
            b @ Ac2 - 1 / 12,
            b @ AAc - 1 / 24,
        ],
        5: [
            b @ c**4 - 1 / 5,
            b @ (c**2 * Ac) - 1 / 10,
            b @ (c * Ac2) - 1 / 15,
            b @ (c * AAc) - 1 / 30,
            b @ Ac**2 - 1 / 20,
            b @ (A @ c**3) - 1 / 20,
            b @ (A @ (c * Ac)) - 1 / 40,
            b @ (A @ Ac2) - 1 / 60,
            b @ (A @ AAc) - 1 / 120,
        ],
    }


def classical_order(t: ButcherTableau, max_order: int = 5, tol: float = ORDER_TOL) -> int:
    if not 1 <= max_order <= 5:
        raise ValueError("max_order must be between 1 and 5")
    conds = order_conditions(t)
    q = 0
    for p in range(1, max_order + 1):
        if max(abs(r) for r in conds[p]) > tol:
            break
        q = p
    return q


def row_sum_defect(t: ButcherTableau) -> float:
    return float(np.max(np.abs(t.A.sum(axis=1) - t.c)))


def verify(t: ButcherTableau, max_order: int = 5) -> dict:
    """All tableau-level diagnostics in one report."""
    order = classical_order(t, max_order)
    report = {
        "s": t.s,
        "symplectic_residual": check_symplectic(t),
        "row_sum_defect": row_sum_defect(t),
        "B": {k: check_simplifying(t, "B", k) for k in range(1, max_order + 1)},
        "C": {k: check_simplifying(t, "C", k) for k in range(1, max_order + 1)},
        "D": {k: check_simplifying(t, "D", k) for k in range(1, max_order + 1)},
        "classical_order": order,
        "declared_order": t.declared_order,
    }
    report["symplectic"] = report["symplectic_residual"] <= 1e-11
    report["order_ok"] = order >= min(t.declared_order, max_order)
    report["pass"] = report["symplectic"] and report["order_ok"]
    return report


def explicit_euler() -> ButcherTableau:
    return ButcherTableau([[0.0]], [1.0], [0.0], 1, {"name": "explicit Euler"})


def implicit_midpoint() -> ButcherTableau:
    return ButcherTableau([[0.5]], [1.0], [0.5], 2, {"name": "implicit midpoint"})
