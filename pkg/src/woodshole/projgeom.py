"""Points and polynomial endomorphisms of complex projective space."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import BasePointError, ChartError, InputError, NumericalIndeterminacy
from .polyalg import MultiPoly

MAX_DIM = 3


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Unit-norm representative with canonical phase."""

    coords: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def best_chart(self) -> int:
        return int(np.argmax(np.abs(self.coords)))

    def affine(self, chart: int) -> np.ndarray:
        """Affine coordinates in the chart ``x_chart != 0`` (chart coordinate dropped)."""
        y = self.coords / self.coords[chart]
        return np.delete(y, chart)

    def canonical_key(self):
        return tuple((round(c.real, 9) + 0.0, round(c.imag, 9) + 0.0) for c in self.coords)

    def __repr__(self):
        inner = ", ".join(f"{c:.6g}" for c in self.coords)
        return f"ProjPoint([{inner}])"


def normalize(raw: Sequence[complex]) -> ProjPoint:
    v = np.array(raw, dtype=complex).ravel()
    mags = np.abs(v)
    if v.size == 0 or not np.all(np.isfinite(v)) or mags.max() <= 1e-300:
        raise ValueError("cannot normalize the zero vector")
    v = v / mags.max()
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    v = v * (np.conj(v[k]) / abs(v[k]))
    v[k] = abs(v[k])
    v.setflags(write=False)
    return ProjPoint(v)


def from_affine(y: Sequence[complex], chart: int) -> ProjPoint:
    y = np.asarray(y, dtype=complex)
    return normalize(np.insert(y, chart, 1.0))


def proj_distance(p: ProjPoint, q: ProjPoint) -> float:
    """Sine of the Fubini-Study angle between two points."""
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    a = p.coords / np.linalg.norm(p.coords)
    b = q.coords / np.linalg.norm(q.coords)
    # equals sqrt(1 - |<a,b>|^2) but without cancellation for nearby points
    perp = a - np.vdot(b, a) * b
    return float(min(1.0, max(0.0, np.linalg.norm(perp))))


@dataclass(frozen=True, eq=False)
class ProjEndo:
    """Degree-d self-map of P^n given by n+1 homogeneous components."""

    components: tuple[MultiPoly, ...]
    is_morphism: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 2:
            raise InputError("an endomorphism of P^n needs at least two components")
        n = len(comps) - 1
        if n > MAX_DIM:
            raise InputError(f"projective dimension {n} exceeds the supported maximum {MAX_DIM}")
        if any(c.num_vars != n + 1 for c in comps):
            raise InputError(f"every component must be a polynomial in {n + 1} variables")
        if all(c.is_zero() for c in comps):
            raise InputError("all components are zero")
        degrees = {c.total_degree for c in comps if not c.is_zero()}
        if len(degrees) != 1 or not all(c.is_homogeneous() for c in comps):
            raise InputError("components must be homogeneous of a common degree")
        d = degrees.pop()
        if d < 1:
            raise InputError("degree must be at least 1")

    @property
    def n(self) -> int:
        return len(self.components) - 1

    @property
    def degree(self) -> int:
        return int(max(c.total_degree for c in self.components))

    @property
    def scale(self) -> float:
        return max(c.scale for c in self.components)

    @cached_property
    def jacobian_polys(self) -> tuple[tuple[MultiPoly, ...], ...]:
        return tuple(tuple(c.gradient()) for c in self.components)

    @property
    def preserves_line_at_infinity(self) -> bool:
        """True when x0 divides the first component, so f maps {x0 = 0} into itself."""
        return all(e[0] >= 1 for e, _ in self.components[0].items())

    def values(self, x: Sequence[complex]) -> np.ndarray:
        return np.array([c.eval(x) for c in self.components])

    def with_flag(self, is_morphism: bool) -> ProjEndo:
        out = replace(self, is_morphism=is_morphism)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "degree": self.degree,
                "components": [c.to_terms() for c in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> ProjEndo:
        try:
            n = int(data["n"])
            comps = [MultiPoly.from_terms(c, num_vars=n + 1) for c in data["components"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed endomorphism file: {exc}") from exc
        if len(comps) != n + 1:
            raise InputError(f"expected {n + 1} components, got {len(comps)}")
        f = cls(tuple(comps))
        if "degree" in data and int(data["degree"]) != f.degree:
            raise InputError(f"declared degree {data['degree']} but components have degree {f.degree}")
        return f


@dataclass(frozen=True, eq=False)
class FixedPointRecord:
    point: ProjPoint
    chart: int
    jacobian: np.ndarray
    det_IminusJ: complex
    newton_residual: float
    transversal: bool


def apply(f: ProjEndo, p: ProjPoint) -> ProjPoint:
    if f.is_morphism is False:
        raise BasePointError("map has base points")
    vals = f.values(p.coords)
    if np.max(np.abs(vals)) < 1e-12 * f.scale:
        raise NumericalIndeterminacy(f"all components vanish at {p}")
    return normalize(vals)


def affine_jacobian(f: ProjEndo, p: ProjPoint, chart: int, min_chart_modulus: float = 0.1) -> np.ndarray:
    """Jacobian of x -> (F_j/F_chart)_{j != chart} in the chart ``x_chart != 0``.

    Evaluated at the dehomogenized point ``p / p[chart]``.
    """
    n = f.n
    if not 0 <= chart <= n:
        raise IndexError("chart out of range")
    pc = abs(p.coords[chart]) / np.linalg.norm(p.coords)
    if pc == 0 or pc < min_chart_modulus:
        raise ChartError(f"chart {chart} is ill-conditioned at {p} (|x_{chart}| = {pc:.3g})")
    y = p.coords / p.coords[chart]
    vals = f.values(y)
    scale = f.scale * max(1.0, float(np.max(np.abs(y)))) ** f.degree
    fc = vals[chart]
    if abs(fc) <= 1e-10 * scale:
        raise ChartError(f"component {chart} vanishes at {p}")
    grads = np.array([[g.eval(y) for g in row] for row in f.jacobian_polys])
    idx = [j for j in range(n + 1) if j != chart]
    J = np.empty((n, n), dtype=complex)
    for a, j in enumerate(idx):
        for b, k in enumerate(idx):
            J[a, b] = (grads[j, k] * fc - vals[j] * grads[chart, k]) / fc ** 2
    return J


def check_morphism(f: ProjEndo, cfg=None, rng: np.random.Generator | None = None) -> bool:
    """True iff the components have no common projective zero.

    Solves n random linear combinations of the components in every chart
    and tests the full component vector at each solution; complete for
    generic combinations.
    """
    from .solver import PathTrackerConfig, solve_square

    cfg = cfg or PathTrackerConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    n = f.n
    A = rng.standard_normal((n, n + 1)) + 1j * rng.standard_normal((n, n + 1))
    combos = [sum((f.components[j] * A[k, j] for j in range(n + 1)), MultiPoly.zero(n + 1))
              for k in range(n)]
    scale = f.scale
    for chart in range(n + 1):
        system = [c.dehomogenize(chart) for c in combos]
        if any(s.is_zero() for s in system):
            # a combination vanishes identically on this chart: infinitely many common zeros
            return False
        if any(s.total_degree == 0 for s in system):
            continue
        sols = solve_square(system, cfg, rng=rng, allow_singular=True)
        for y in list(sols.solutions) + list(sols.singular):
            p = from_affine(y, chart)
            if np.max(np.abs(f.values(p.coords))) <= 1e-8 * scale:
                return False
    return True


def verified(f: ProjEndo, cfg=None, rng=None) -> ProjEndo:
    """Return ``f`` with its morphism flag computed."""
    if f.is_morphism is not None:
        return f
    return f.with_flag(check_morphism(f, cfg, rng))
