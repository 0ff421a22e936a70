"""Plane polynomial vector fields and the foliations they induce on P^2.

A field v = P d/dx + Q d/dy of degree d gives the endomorphism

    f_v = [x0^d : P~ + x0^(d-1) x1 : Q~ + x0^(d-1) x2]

(P~, Q~ the homogenizations).  Its fixed points are the zeros of v plus the
singularities of the foliation on the line at infinity L = {x0 = 0}, and
Dv = Df_v - I at every affine point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import report as rep
from .errors import (
    BasePointError,
    DegenerateSingularity,
    DicriticError,
    HypothesisViolation,
    InputError,
)
from .indices import bb_index, cs_index, fixed_point_count
from .polyalg import MultiPoly, infinity_chart_parts
from .projgeom import ProjEndo, ProjPoint, affine_jacobian, from_affine, normalize, proj_distance, verified
from .solver import PathTrackerConfig, fixed_points, root_collisions, univariate_roots, vf_zeros

log = logging.getLogger(__name__)

DICRITIC_TOL = 1e-12
EJ_DET_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PlaneVectorField:
    P: MultiPoly
    Q: MultiPoly

    def __post_init__(self):
        if self.P.num_vars != 2 or self.Q.num_vars != 2:
            raise InputError("P and Q must be polynomials in two variables")
        if self.P.is_zero() and self.Q.is_zero():
            raise InputError("zero vector field")

    @property
    def degree(self) -> int:
        return int(max(self.P.total_degree, self.Q.total_degree))

    @property
    def top_parts(self) -> tuple[MultiPoly, MultiPoly]:
        d = self.degree
        return self.P.homogeneous_part(d), self.Q.homogeneous_part(d)

    def tangency_form(self) -> MultiPoly:
        """x*q_d - y*p_d; its zeros on P^1 are the singularities on L."""
        pd, qd = self.top_parts
        x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
        return x * qd - y * pd

    @property
    def dicritic(self) -> bool:
        pd, qd = self.top_parts
        scale = max(pd.scale, qd.scale)
        return self.tangency_form().scale <= DICRITIC_TOL * scale

    def scaled(self, kappa: complex) -> PlaneVectorField:
        return PlaneVectorField(self.P * kappa, self.Q * kappa)

    def jacobian(self, z) -> np.ndarray:
        return np.array([[self.P.partial(0).eval(z), self.P.partial(1).eval(z)],
                         [self.Q.partial(0).eval(z), self.Q.partial(1).eval(z)]])

    def to_json(self) -> dict:
        return {"degree_hint": self.degree, "P": self.P.to_terms(), "Q": self.Q.to_terms()}

    @classmethod
    def from_json(cls, data: dict) -> PlaneVectorField:
        try:
            P = MultiPoly.from_terms(data["P"], num_vars=2)
            Q = MultiPoly.from_terms(data["Q"], num_vars=2)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed vector-field file: {exc}") from exc
        v = cls(P, Q)
        hint = data.get("degree_hint")
        if hint is not None and int(hint) != v.degree:
            raise InputError(f"degree_hint {hint} disagrees with the field's degree {v.degree}")
        return v


@dataclass(frozen=True, eq=False)
class SingularityRecord:
    kind: str                       # "affine" or "infinity"
    point: ProjPoint
    location: tuple                 # (x, y) for affine, (w,) in the given chart at infinity
    chart: int                      # 0 for affine; 1 (x1 != 0) or 2 (x2 != 0) on L
    linearization: np.ndarray
    bb: complex
    det: complex
    tr: complex
    lambda_tangent: complex | None = None
    lambda_normal: complex | None = None
    cs: complex | None = None


def _config(cfg):
    return cfg or PathTrackerConfig()


def _rng(cfg, rng):
    return rng if rng is not None else np.random.default_rng(_config(cfg).seed)


# -- endomorphisms attached to a foliation -----------------------------------

def build_fv(v: PlaneVectorField, cfg=None, rng=None, check: bool = True) -> ProjEndo:
    d = v.degree
    if d < 1:
        raise HypothesisViolation("the construction needs a field of degree at least 1")
    x0, x1, x2 = (MultiPoly.variable(i, 3) for i in range(3))
    lead = x0 ** (d - 1)
    f = ProjEndo((x0 ** d,
                  v.P.homogenize(d, 0) + lead * x1,
                  v.Q.homogenize(d, 0) + lead * x2))
    if not check:
        return f
    f = verified(f, _config(cfg), _rng(cfg, rng))
    if not f.is_morphism:
        raise BasePointError("f_v has base points; the field is too degenerate")
    return f


def build_fxi(P0: MultiPoly, P1: MultiPoly, P2: MultiPoly, cfg=None, rng=None) -> ProjEndo:
    comps = (P0, P1, P2)
    degs = {c.total_degree for c in comps}
    if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
        raise InputError("components must be homogeneous of equal degree")
    f = verified(ProjEndo(comps), _config(cfg), _rng(cfg, rng))
    if not f.is_morphism:
        raise BasePointError("components have a common zero")
    return f


def radial_modify(f: ProjEndo, g: MultiPoly, cfg=None, rng=None) -> ProjEndo:
    """Add g times the radial field: F_i -> F_i + g*x_i.  The foliation is unchanged."""
    d = f.degree
    if g.num_vars != 3 or not g.is_homogeneous() or (not g.is_zero() and g.total_degree != d - 1):
        raise InputError(f"g must be homogeneous of degree {d - 1} in three variables")
    comps = tuple(c + g * MultiPoly.variable(i, 3) for i, c in enumerate(f.components))
    out = verified(ProjEndo(comps), _config(cfg), _rng(cfg, rng))
    if not out.is_morphism:
        raise BasePointError("the radial modification introduced base points; draw another g")
    return out


def random_radial_factor(d: int, rng: np.random.Generator) -> MultiPoly:
    """Homogeneous form of degree d-1 in x0, x1, x2 with complex Gaussian coefficients."""
    terms = {}
    for a in range(d - 1, -1, -1):
        for b in range(d - 1 - a, -1, -1):
            re, im = rng.standard_normal(2)
            terms[(a, b, d - 1 - a - b)] = complex(re, im) / np.sqrt(2)
    return MultiPoly(3, terms)


def restrict_to_line(f: ProjEndo) -> ProjEndo:
    """[F1(0, x1, x2) : F2(0, x1, x2)] as a self-map of L = P^1."""
    if not f.preserves_line_at_infinity:
        raise HypothesisViolation("x0 does not divide the first component; L is not invariant")
    comps = []
    for c in f.components[1:]:
        comps.append(MultiPoly(2, {e[1:]: v for e, v in c.items() if e[0] == 0}, drop_tol=0.0))
    return ProjEndo(tuple(comps))


# -- singularities -------------------------------------------------------------

def affine_singularities(v: PlaneVectorField, cfg=None, rng=None) -> list[SingularityRecord]:
    out = []
    for z, Dv in vf_zeros(v, _config(cfg), _rng(cfg, rng)):
        det = complex(np.linalg.det(Dv))
        tr = complex(np.trace(Dv))
        out.append(SingularityRecord("affine", from_affine(z, 0), tuple(complex(c) for c in z), 0,
                                     Dv, bb_index(Dv), det, tr))
    return out


def _line_polynomial(Pstar: MultiPoly, Qstar: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Second generator component G = Qstar - w*Pstar and its restriction to u = 0."""
    w = MultiPoly.variable(1, 2)
    G = Qstar - w * Pstar
    on_line = MultiPoly(1, {(e[1],): c for e, c in G.items() if e[0] == 0}, drop_tol=0.0)
    return G, on_line


def infinity_singularities(v: PlaneVectorField) -> list[SingularityRecord]:
    """Singular points of the foliation on the line at infinity.

    Chart 1 uses u = 1/x, w = y/x and the generator (-u*Pstar, Qstar - w*Pstar);
    chart 2 is the same code with the two affine variables exchanged.  Each
    point is analysed in whichever of the two charts sees it best.
    """
    if v.dicritic:
        raise DicriticError("the line at infinity is not invariant (dicritic field)")
    d = v.degree
    charts = {}
    candidates: list[tuple[ProjPoint, int]] = []
    for chart in (1, 2):
        Pstar, Qstar = infinity_chart_parts(v, chart)
        G, on_line = _line_polynomial(Pstar, Qstar)
        charts[chart] = (Pstar, G, on_line)
        if on_line.is_zero() or on_line.total_degree < 1:
            continue
        roots = univariate_roots(on_line)
        if root_collisions(roots):
            raise DegenerateSingularity("repeated singularity on the line at infinity")
        for w in roots:
            coords = (0, 1, w) if chart == 1 else (0, w, 1)
            candidates.append((normalize(coords), chart))

    points: list[ProjPoint] = []
    for p, _ in sorted(candidates, key=lambda t: t[0].canonical_key()):
        if all(proj_distance(p, q) >= 1e-6 for q in points):
            points.append(p)
    if len(points) != d + 1:
        raise DegenerateSingularity(f"found {len(points)} singularities on L, expected {d + 1}")

    records = []
    for p in points:
        chart = 1 if abs(p.coords[1]) >= abs(p.coords[2]) else 2
        w0 = p.coords[2] / p.coords[1] if chart == 1 else p.coords[1] / p.coords[2]
        Pstar, G, on_line = charts[chart]
        dline = on_line.partial(0)
        for _ in range(2):
            slope = dline.eval([w0])
            if slope != 0:
                w0 = w0 - on_line.eval([w0]) / slope
        pt = (0.0, w0)
        lam_n = -Pstar.eval(pt)
        lam_t = G.partial(1).eval(pt)
        M = np.array([[lam_n, 0.0], [G.partial(0).eval(pt), lam_t]], dtype=complex)
        coords = (0, 1, w0) if chart == 1 else (0, w0, 1)
        records.append(SingularityRecord(
            "infinity", normalize(coords), (complex(w0),), chart, M, bb_index(M),
            complex(lam_n * lam_t), complex(lam_n + lam_t), complex(lam_t), complex(lam_n),
            cs_index(lam_t, lam_n)))
    records.sort(key=lambda r: r.point.canonical_key())
    return records


def singularities(v: PlaneVectorField, cfg=None, rng=None) -> list[SingularityRecord]:
    return affine_singularities(v, cfg, rng) + infinity_singularities(v)


# -- verification suites ---------------------------------------------------

def _require_ej(v: PlaneVectorField, cfg, rng):
    d = v.degree
    if d < 2:
        raise HypothesisViolation(
            "Euler-Jacobi relations need degree d >= 2 (a single zero of a degree-1 field gives 1/det != 0)")
    zeros = vf_zeros(v, _config(cfg), _rng(cfg, rng))
    if len(zeros) != d * d:
        raise DegenerateSingularity(f"field has {len(zeros)} simple zeros, {d * d} required")
    dets = [complex(np.linalg.det(Dv)) for _, Dv in zeros]
    if min(abs(x) for x in dets) <= EJ_DET_TOL:
        raise DegenerateSingularity("a zero of the field is degenerate (|det Dv| too small)")
    return zeros, dets


def verify_ej1(v: PlaneVectorField, cfg=None, rng=None, tol: float = rep.DEFAULT_TOL, zeros=None):
    zs, dets = zeros if zeros is not None else _require_ej(v, cfg, rng)
    return rep.make_entry(rep.EULER_JACOBI_1, "sum 1/det Dv", [1 / x for x in dets], 0.0, tol)


def verify_ej2(v: PlaneVectorField, cfg=None, rng=None, tol: float = rep.DEFAULT_TOL, zeros=None):
    zs, dets = zeros if zeros is not None else _require_ej(v, cfg, rng)
    terms = [complex(np.trace(Dv)) / x for (_, Dv), x in zip(zs, dets)]
    return rep.make_entry(rep.EULER_JACOBI_2, "sum tr Dv/det Dv", terms, 0.0, tol)


def verify_bb(v: PlaneVectorField, cfg=None, rng=None, tol: float = rep.DEFAULT_TOL, sings=None):
    sings = sings if sings is not None else singularities(v, cfg, rng)
    d = v.degree
    expected = fixed_point_count(2, d)
    if len(sings) != expected:
        raise DegenerateSingularity(f"{len(sings)} singularities, expected d^2+d+1 = {expected}")
    details = {"kinds": [s.kind for s in sings], "census": len(sings)}
    return rep.make_entry(rep.BAUM_BOTT, "sum BB = (d+2)^2", [s.bb for s in sings], (d + 2) ** 2, tol, details)


def verify_cs(v: PlaneVectorField, tol: float = rep.DEFAULT_TOL, sings=None):
    on_line = [s for s in sings if s.kind == "infinity"] if sings is not None else infinity_singularities(v)
    return rep.make_entry(rep.CAMACHO_SAD, "sum CS along L = 1", [s.cs for s in on_line], 1.0, tol)


def verify_cs_woodshole(v: PlaneVectorField, g: MultiPoly | None = None, cfg=None, rng=None,
                        tol: float = rep.DEFAULT_TOL):
    """Holomorphic Lefschetz and conormal-sheaf identities for f restricted to L.

    f = f_v + g*R with R the radial field.  At each fixed point on L the
    tangent multiplier mu_t comes from the restricted map and the normal one
    is tr Df - mu_t (Df is block triangular there).
    """
    cfg = _config(cfg)
    rng = _rng(cfg, rng)
    d = v.degree
    if v.dicritic:
        raise DicriticError("the line at infinity is not invariant (dicritic field)")
    f = build_fv(v, cfg, rng)
    if g is None:
        g = random_radial_factor(d, rng)
    f = radial_modify(f, g, cfg, rng)
    h = restrict_to_line(f)
    recs = fixed_points(h, cfg, rng)
    terms_a, terms_b, mu_t, mu_n = [], [], [], []
    for rec in recs:
        t = complex(rec.jacobian[0, 0])
        if abs(1 - t) <= 1e-8:
            raise HypothesisViolation("restricted map has a non-transversal fixed point on L")
        p = normalize((0, rec.point.coords[0], rec.point.coords[1]))
        chart = 1 if abs(p.coords[1]) >= abs(p.coords[2]) else 2
        J = affine_jacobian(f, p, chart)
        n_mult = complex(np.trace(J)) - t
        mu_t.append(t)
        mu_n.append(n_mult)
        terms_a.append(1 / (1 - t))
        terms_b.append(n_mult / (1 - t))
    details = {"mu_tangent": mu_t, "mu_normal": mu_n, "g": g.to_terms()}
    return (rep.make_entry(rep.CAMACHO_SAD, "Woods Hole on L, structure sheaf: sum 1/(1-mu_t) = 1",
                           terms_a, 1.0, tol, details),
            rep.make_entry(rep.CAMACHO_SAD, "Woods Hole on L, conormal sheaf: sum mu_n/(1-mu_t) = 0",
                           terms_b, 0.0, tol, details))


def check_DvDf(v: PlaneVectorField, cfg=None, rng=None, f: ProjEndo | None = None) -> float:
    """Largest entry of |Dv(p) - (Df_v(p) - I)| over the affine zeros of v."""
    cfg = _config(cfg)
    rng = _rng(cfg, rng)
    f = f if f is not None else build_fv(v, cfg, rng, check=False)
    worst = 0.0
    for z, Dv in vf_zeros(v, cfg, rng):
        J = affine_jacobian(f, from_affine(z, 0), 0, min_chart_modulus=0.0)
        worst = max(worst, float(np.max(np.abs(Dv - (J - np.eye(2))))))
    return worst
