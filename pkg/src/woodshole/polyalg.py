"""Sparse multivariate polynomials with complex coefficients.

A :class:`MultiPoly` is an immutable map from exponent tuples to complex
coefficients.  Terms are stored in graded-lexicographic order (highest
degree first) so equality, hashing and serialization are deterministic.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

import numpy as np

# coefficients below this fraction of the largest one are treated as zero
NUMERICAL_ZERO = 1e-14

ZERO_DEGREE = -math.inf


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MultiPoly:
    """Polynomial in ``num_vars`` variables over the complex numbers.

    >>> x = MultiPoly.variable(0, 2)
    >>> y = MultiPoly.variable(1, 2)
    >>> p = x * x * y
    >>> p([1j, 2])
    (-2+0j)
    """

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], complex] | None = None,
                 drop_tol: float = NUMERICAL_ZERO):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        self.num_vars = int(num_vars)
        merged: dict[tuple[int, ...], complex] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.num_vars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {self.num_vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            merged[exp] = merged.get(exp, 0j) + complex(c)
        scale = max((abs(c) for c in merged.values()), default=0.0)
        cutoff = drop_tol * scale
        kept = {e: c for e, c in merged.items() if abs(c) > cutoff and c != 0}
        self._terms = dict(sorted(kept.items(), key=lambda t: _grlex_key(t[0]), reverse=True))
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> MultiPoly:
        return cls(num_vars)

    @classmethod
    def constant(cls, value: complex, num_vars: int) -> MultiPoly:
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, index: int, num_vars: int) -> MultiPoly:
        exp = [0] * num_vars
        exp[index] = 1
        return cls(num_vars, {tuple(exp): 1.0})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: complex = 1.0) -> MultiPoly:
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[dict], num_vars: int | None = None) -> MultiPoly:
        """Build from the JSON literal format ``[{"exp": [...], "re": .., "im": ..}]``."""
        terms = list(terms)
        mapping: dict[tuple[int, ...], complex] = {}
        for t in terms:
            try:
                exp = tuple(int(e) for e in t["exp"])
                c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed polynomial term {t!r}") from exc
            if num_vars is None:
                num_vars = len(exp)
            mapping[exp] = mapping.get(exp, 0j) + c
        if num_vars is None:
            raise ValueError("cannot infer the number of variables of an empty polynomial")
        return cls(num_vars, mapping)

    def to_terms(self) -> list[dict]:
        return [{"exp": list(e), "re": c.real, "im": c.imag} for e, c in self._terms.items()]

    # -- basic properties ---------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, ...], complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_degree(self) -> int | float:
        """Maximum exponent sum; ``-inf`` for the zero polynomial."""
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self._terms)

    def degree_in(self, var_index: int) -> int | float:
        if not self._terms:
            return ZERO_DEGREE
        return max(e[var_index] for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_part(self, degree: int) -> MultiPoly:
        return MultiPoly(self.num_vars, {e: c for e, c in self._terms.items() if sum(e) == degree},
                         drop_tol=0.0)

    @property
    def scale(self) -> float:
        """Largest coefficient modulus (0 for the zero polynomial)."""
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def coefficient(self, exp: Sequence[int]) -> complex:
        return self._terms.get(tuple(exp), 0j)

    # -- arithmetic ---------------------------------------------------

    def _check_compatible(self, other: MultiPoly):
        if other.num_vars != self.num_vars:
            raise ValueError(f"variable count mismatch: {self.num_vars} vs {other.num_vars}")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check_compatible(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return MultiPoly.constant(complex(other), self.num_vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0j) + c
        return MultiPoly(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return MultiPoly(self.num_vars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0j) + c1 * c2
        return MultiPoly(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = MultiPoly.constant(1.0, self.num_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, tuple(self._terms.items())))
        return self._hash

    def allclose(self, other: MultiPoly, rtol: float = 1e-12) -> bool:
        self._check_compatible(other)
        keys = set(self._terms) | set(other._terms)
        scale = max(self.scale, other.scale, 1e-300)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= rtol * scale for k in keys)

    # -- evaluation and calculus --------------------------------------

    def eval(self, x: Sequence[complex]) -> complex:
        x = [complex(v) for v in x]
        if len(x) != self.num_vars:
            raise ValueError(f"point has {len(x)} coordinates, polynomial has {self.num_vars} variables")
        vals = []
        for exp, c in self._terms.items():
            v = c
            for xi, e in zip(x, exp):
                if e:
                    v *= xi ** e
            vals.append(v)
        if len(vals) >= 1000:
            return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
        return sum(vals, 0j)

    __call__ = eval

    def partial(self, var_index: int) -> MultiPoly:
        if not 0 <= var_index < self.num_vars:
            raise IndexError(f"variable index {var_index} out of range for {self.num_vars} variables")
        out = {}
        for exp, c in self._terms.items():
            k = exp[var_index]
            if k:
                e = list(exp)
                e[var_index] -= 1
                out[tuple(e)] = c * k
        return MultiPoly(self.num_vars, out, drop_tol=0.0)

    def gradient(self) -> list[MultiPoly]:
        return [self.partial(i) for i in range(self.num_vars)]

    def homogenize(self, target_degree: int, new_var_position: int = 0) -> MultiPoly:
        """Insert a new variable so every term has degree ``target_degree``."""
        if target_degree < self.total_degree:
            raise ValueError(f"target degree {target_degree} below total degree {self.total_degree}")
        if not 0 <= new_var_position <= self.num_vars:
            raise IndexError("new variable position out of range")
        out = {}
        for exp, c in self._terms.items():
            e = exp[:new_var_position] + (target_degree - sum(exp),) + exp[new_var_position:]
            out[e] = c
        return MultiPoly(self.num_vars + 1, out, drop_tol=0.0)

    def dehomogenize(self, chart_index: int) -> MultiPoly:
        """Set the variable ``chart_index`` to 1 and drop it."""
        if not self.is_homogeneous():
            raise ValueError("dehomogenize_chart needs a homogeneous polynomial")
        if not 0 <= chart_index < self.num_vars:
            raise IndexError("chart index out of range")
        if self.num_vars == 1:
            raise ValueError("cannot dehomogenize a polynomial in a single variable")
        out = {exp[:chart_index] + exp[chart_index + 1:]: c for exp, c in self._terms.items()}
        return MultiPoly(self.num_vars - 1, out, drop_tol=0.0)

    def substitute_linear(self, var_index: int, value: complex) -> MultiPoly:
        """Fix one variable to a constant, keeping the variable count."""
        out: dict[tuple[int, ...], complex] = {}
        for exp, c in self._terms.items():
            e = list(exp)
            k = e[var_index]
            e[var_index] = 0
            out[tuple(e)] = out.get(tuple(e), 0j) + c * complex(value) ** k
        return MultiPoly(self.num_vars, out)

    def univariate_coefficients(self) -> np.ndarray:
        """Coefficients of a one-variable polynomial, highest degree first."""
        if self.num_vars != 1:
            raise ValueError("not a univariate polynomial")
        if not self._terms:
            return np.zeros(1, dtype=complex)
        deg = int(self.total_degree)
        coeffs = np.zeros(deg + 1, dtype=complex)
        for (k,), c in self._terms.items():
            coeffs[deg - k] = c
        return coeffs

    def __repr__(self):
        if not self._terms:
            return f"MultiPoly({self.num_vars}, 0)"
        parts = []
        for exp, c in self._terms.items():
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(exp) if e)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def homogenize(p: MultiPoly, target_degree: int, new_var_position: int = 0) -> MultiPoly:
    return p.homogenize(target_degree, new_var_position)


def dehomogenize_chart(p: MultiPoly, chart_index: int) -> MultiPoly:
    return p.dehomogenize(chart_index)


def partial(p: MultiPoly, var_index: int) -> MultiPoly:
    return p.partial(var_index)


def evaluate(p: MultiPoly, x: Sequence[complex]) -> complex:
    return p.eval(x)


def _to_infinity_chart(p: MultiPoly, d: int, swap: bool) -> MultiPoly:
    # x^a y^b  ->  u^(d-a-b) w^b   (or w^a when the affine variables are swapped)
    out = {}
    for (a, b), c in p.items():
        out[(d - a - b, a if swap else b)] = c
    return MultiPoly(2, out, drop_tol=0.0)


def infinity_chart_parts(v, chart: int = 1) -> tuple[MultiPoly, MultiPoly]:
    """Chart-change of a plane field to a neighbourhood of the line at infinity.

    For ``chart=1`` (the chart ``x1 != 0`` with ``u = 1/x``, ``w = y/x``)
    returns ``Pstar = u^d P(1/u, w/u)`` and ``Qstar = u^d Q(1/u, w/u)``; the
    foliation there is generated by ``(-u*Pstar, Qstar - w*Pstar)``.  For
    ``chart=2`` the roles of (P, x) and (Q, y) are exchanged.
    """
    d = int(v.degree)
    if chart == 1:
        return _to_infinity_chart(v.P, d, False), _to_infinity_chart(v.Q, d, False)
    if chart == 2:
        return _to_infinity_chart(v.Q, d, True), _to_infinity_chart(v.P, d, True)
    raise ValueError("chart must be 1 or 2")
