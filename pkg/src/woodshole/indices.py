"""Local index terms and their closed-form global values.

The identities verified here all have the shape

    sum over fixed points p of  trace-term(J(p)) / det(I - J(p))  =  closed form

where J(p) is the Jacobian of the map at p in an affine chart.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSingularity, InputError, NonTransversalError

TRANSVERSAL_TOL = 1e-8
DEGENERATE_TOL = 1e-10


def sigma_k(M, k: int) -> complex:
    """Sum of the principal k x k minors of M, i.e. tr of the k-th exterior power."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > 8:
        raise ValueError("sigma_k supports matrices up to 8 x 8")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for a {n} x {n} matrix")
    if k == 0:
        return 1 + 0j
    total = 0j
    for rows in itertools.combinations(range(n), k):
        total += np.linalg.det(M[np.ix_(rows, rows)])
    return complex(total)


def sigmas(M) -> list[complex]:
    n = np.asarray(M).shape[0]
    return [sigma_k(M, k) for k in range(n + 1)]


def det_I_minus(J) -> complex:
    J = np.asarray(J, dtype=complex)
    return complex(np.linalg.det(np.eye(J.shape[0]) - J))


def _transversal_det(J) -> complex:
    det = det_I_minus(J)
    if abs(det) <= TRANSVERSAL_TOL:
        raise NonTransversalError(f"|det(I - J)| = {abs(det):.3g} at a fixed point")
    return det


def woods_hole_term(J, k: int) -> complex:
    return sigma_k(J, k) / _transversal_det(J)


def lefschetz_rhs(n: int, d: int, k: int) -> complex:
    if not 0 <= k <= n:
        raise ValueError("k must lie in 0..n")
    return complex((-d) ** k)


def fixed_point_count(n: int, d: int) -> int:
    return sum(d ** j for j in range(n + 1))


@dataclass(frozen=True)
class InvariantPolySpec:
    """An invariant polynomial written as Q(sigma_1, ..., sigma_n).

    ``monomials`` holds pairs ``(a, c)`` meaning ``c * prod sigma_k^{a_k}``.
    """

    n: int
    monomials: tuple[tuple[tuple[int, ...], complex], ...]

    def __post_init__(self):
        mons = tuple((tuple(int(x) for x in a), complex(c)) for a, c in self.monomials)
        object.__setattr__(self, "monomials", mons)
        for a, _ in mons:
            if len(a) != self.n or any(x < 0 for x in a):
                raise InputError(f"exponent vector {a} does not fit n={self.n}")
            if self.weighted_degree(a) > self.n:
                raise InputError(f"monomial {a} has weighted degree above n={self.n}")

    @staticmethod
    def weighted_degree(a) -> int:
        return sum((k + 1) * ak for k, ak in enumerate(a))

    @classmethod
    def sigma(cls, n: int, k: int) -> InvariantPolySpec:
        a = [0] * n
        if k:
            a[k - 1] = 1
        return cls(n, ((tuple(a), 1.0),))

    @classmethod
    def all_monic(cls, n: int) -> list[InvariantPolySpec]:
        """Every monic monomial of weighted degree at most n."""
        out = []
        for a in itertools.product(*(range(n // (k + 1) + 1) for k in range(n))):
            if cls.weighted_degree(a) <= n:
                out.append(cls(n, ((a, 1.0),)))
        return sorted(out, key=lambda b: (cls.weighted_degree(b.monomials[0][0]), b.monomials[0][0][::-1]))

    def label(self) -> str:
        parts = []
        for a, c in self.monomials:
            mono = "*".join(f"s{k + 1}^{e}" if e > 1 else f"s{k + 1}" for k, e in enumerate(a) if e) or "1"
            parts.append(mono if c == 1 else f"({c:g})*{mono}")
        return " + ".join(parts) if parts else "0"

    def evaluate(self, s) -> complex:
        """Q at the argument vector ``s = (s_1, ..., s_n)``."""
        total = 0j
        for a, c in self.monomials:
            v = c
            for sk, e in zip(s, a):
                if e:
                    v *= sk ** e
            total += v
        return total

    def of_matrix(self, J) -> complex:
        return self.evaluate(sigmas(J)[1:])

    def to_json(self) -> dict:
        return {"n": self.n, "monomials": [{"a": list(a), "re": c.real, "im": c.imag}
                                           for a, c in self.monomials]}

    @classmethod
    def from_json(cls, data: dict) -> InvariantPolySpec:
        try:
            n = int(data["n"])
            mons = tuple((tuple(m["a"]), complex(float(m.get("re", 0.0)), float(m.get("im", 0.0))))
                         for m in data["monomials"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed invariant file: {exc}") from exc
        return cls(n, mons)


def guillot_lhs_term(J, B: InvariantPolySpec) -> complex:
    J = np.asarray(J, dtype=complex)
    if B.n != J.shape[0]:
        raise ValueError(f"invariant is for n={B.n}, matrix is {J.shape[0]} x {J.shape[0]}")
    return B.of_matrix(J) / _transversal_det(J)


def guillot_rhs(B: InvariantPolySpec, d: int) -> complex:
    return B.evaluate([(-d) ** k for k in range(1, B.n + 1)])


def bb_index(M) -> complex:
    """tr(M)^2 / det(M) for the linearization of a local generator."""
    M = np.asarray(M, dtype=complex)
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if abs(det) <= DEGENERATE_TOL:
        raise DegenerateSingularity(f"|det| = {abs(det):.3g}: degenerate singularity")
    tr = M[0, 0] + M[1, 1]
    return complex(tr * tr / det)


def cs_index(lambda_tangent: complex, lambda_normal: complex) -> complex:
    if abs(lambda_tangent) <= DEGENERATE_TOL:
        raise DegenerateSingularity("tangent eigenvalue vanishes (saddle-node along the line)")
    return complex(lambda_normal / lambda_tangent)
