"""Total-degree homotopy continuation and the solvers built on it.

All paths of one system are tracked together as a numpy batch; each path
keeps its own parameter value and step size, so the result does not depend
on the order in which paths are processed.

The homotopy is ``H(x, r) = r*gamma*G(x) + (1 - r)*F(x)`` tracked from
``r = 1`` (start system ``G_i = x_i^{d_i} - c_i``) down to ``r = 0``.  The
remaining distance ``r`` is stored directly rather than ``t = 1 - r`` so that
paths escaping to infinity can be followed far enough to cross the
divergence threshold.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BasePointError, InputError, NonTransversalError, NumericalFailure
from .polyalg import MultiPoly, NUMERICAL_ZERO
from .projgeom import (
    FixedPointRecord,
    ProjEndo,
    ProjPoint,
    affine_jacobian,
    check_morphism,
    from_affine,
    proj_distance,
)

log = logging.getLogger(__name__)

ACTIVE, DONE, DIVERGED, FAILED = 0, 1, 2, 3

# parameter value below which tracking stops and the endpoint is classified directly
R_FLOOR = 1e-40
TRANSVERSAL_TOL = 1e-8
MERGE_TOL = 1e-6


@dataclass(frozen=True)
class PathTrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-7
    max_step: float = 0.1
    corrector_tol: float = 1e-10
    corrector_max_iters: int = 3
    step_shrink: float = 0.5
    step_grow: float = 1.25
    grow_after: int = 5
    divergence_norm: float = 1e8
    max_steps: int = 20000
    max_paths: int = 100_000
    seed: int = 0
    gamma: complex | None = None

    def __post_init__(self):
        if not 0 < self.min_step < self.initial_step < 1:
            raise ValueError("need 0 < min_step < initial_step < 1")
        if self.corrector_tol <= 0:
            raise ValueError("corrector_tol must be positive")
        if not 0 < self.step_shrink < 1 < self.step_grow:
            raise ValueError("need 0 < step_shrink < 1 < step_grow")

    def echo(self) -> dict:
        return {
            "initial_step": self.initial_step, "min_step": self.min_step,
            "max_step": self.max_step, "corrector_tol": self.corrector_tol,
            "corrector_max_iters": self.corrector_max_iters,
            "step_shrink": self.step_shrink, "step_grow": self.step_grow,
            "divergence_norm": self.divergence_norm, "seed": self.seed,
            "max_paths": self.max_paths,
        }


@dataclass
class AffineSolutionSet:
    solutions: list[np.ndarray]
    paths_tracked: int
    paths_diverged: int
    failures: int
    residuals: list[float] = field(default_factory=list)
    singular: list[np.ndarray] = field(default_factory=list)
    paths_singular: int = 0
    gamma: complex = 0j

    @property
    def bezout_balanced(self) -> bool:
        return (len(self.solutions) + self.paths_diverged + self.paths_singular + self.failures
                == self.paths_tracked)


def _canonical_key(x: np.ndarray):
    return tuple((round(c.real, 9) + 0.0, round(c.imag, 9) + 0.0) for c in x)


def _batched_solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            return np.linalg.solve(A, b[..., None])[..., 0]
        except np.linalg.LinAlgError:
            out = np.full(b.shape, np.nan + 0j)
            for i in range(len(b)):
                try:
                    out[i] = np.linalg.solve(A[i], b[i])
                except np.linalg.LinAlgError:
                    pass
            return out


class CompiledSystem:
    """Polynomial system evaluated on batches of points.

    Every monomial occurring in the equations or their partials is evaluated
    once per point; values and Jacobians are then matrix products.
    """

    def __init__(self, polys: Sequence[MultiPoly]):
        polys = list(polys)
        if not polys:
            raise InputError("empty system")
        self.n = polys[0].num_vars
        self.m = len(polys)
        if any(p.num_vars != self.n for p in polys):
            raise InputError("equations use different numbers of variables")
        index: dict[tuple[int, ...], int] = {}

        def slot(e):
            if e not in index:
                index[e] = len(index)
            return index[e]

        entries_f, entries_j = [], []
        for i, p in enumerate(polys):
            for e, c in p.items():
                entries_f.append((slot(e), i, c))
            for j in range(self.n):
                for e, c in p.partial(j).items():
                    entries_j.append((slot(e), i, j, c))
        size = max(len(index), 1)
        self.CF = np.zeros((size, self.m), dtype=complex)
        self.CJ = np.zeros((size, self.m, self.n), dtype=complex)
        for k, i, c in entries_f:
            self.CF[k, i] += c
        for k, i, j, c in entries_j:
            self.CJ[k, i, j] += c
        exps = np.zeros((size, self.n), dtype=int)
        for e, k in index.items():
            exps[k] = e
        self.exps = exps
        self.maxdeg = int(exps.max()) if exps.size else 0
        self.CJ2 = self.CJ.reshape(size, self.m * self.n)
        self.absCF = np.abs(self.CF)

    def monomials(self, X: np.ndarray) -> np.ndarray:
        B = X.shape[0]
        pw = np.empty((self.maxdeg + 1, B, self.n), dtype=complex)
        pw[0] = 1.0
        for k in range(1, self.maxdeg + 1):
            pw[k] = pw[k - 1] * X
        M = np.ones((B, self.exps.shape[0]), dtype=complex)
        for v in range(self.n):
            M *= pw[self.exps[:, v], :, v].T
        return M

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return self.monomials(np.atleast_2d(X)) @ self.CF

    def eval_jac(self, X: np.ndarray):
        M = self.monomials(X)
        return M @ self.CF, (M @ self.CJ2).reshape(len(X), self.m, self.n)

    def backward_error(self, X: np.ndarray) -> np.ndarray:
        """max_i |F_i(x)| / sum_t |c_t| max(1, |x|)^e_t, per point."""
        num = np.abs(self.monomials(X) @ self.CF)
        den = np.abs(self.monomials(np.maximum(np.abs(X), 1.0).astype(complex))) @ self.absCF
        with np.errstate(all="ignore"):
            ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), num)
        return ratio.max(axis=1)


def newton_polish(system: CompiledSystem, X: np.ndarray, max_iters: int = 8, history: bool = False):
    """Newton iterations on F.  Returns the points and the last relative step.

    Iteration stops per point once the relative step drops below 1e-15 or
    stops decreasing.
    """
    X = np.array(X, dtype=complex, copy=True)
    B = X.shape[0]
    last = np.full(B, np.inf)
    active = np.ones(B, dtype=bool)
    steps = [] if history else None
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if not idx.size:
            break
        F, J = system.eval_jac(X[idx])
        dx = _batched_solve(J, F)
        rel = np.linalg.norm(dx, axis=1) / (1.0 + np.linalg.norm(X[idx], axis=1))
        good = np.isfinite(rel) & (rel < 2 * last[idx] + 1e-14)
        upd = idx[good]
        X[upd] -= dx[good]
        last[upd] = rel[good]
        if history:
            row = np.full(B, np.nan)
            row[upd] = rel[good]
            steps.append(row)
        active[idx[~good]] = False
        active[idx[good & (rel < 1e-15)]] = False
    if history:
        return X, last, np.array(steps)
    return X, last


class _Homotopy:
    def __init__(self, system: CompiledSystem, degrees, c, gamma):
        self.sys = system
        self.deg = np.asarray(degrees)
        self.c = np.asarray(c)
        self.gamma = gamma

    def __call__(self, X, r):
        F, JF = self.sys.eval_jac(X)
        Xd1 = X ** (self.deg - 1)
        G = Xd1 * X - self.c
        JG = np.zeros_like(JF)
        idx = np.arange(X.shape[1])
        JG[:, idx, idx] = self.deg * Xd1
        rr = r[:, None]
        H = rr * self.gamma * G + (1 - rr) * F
        Hx = rr[..., None] * self.gamma * JG + (1 - rr)[..., None] * JF
        Hr = self.gamma * G - F
        return H, Hx, Hr


def _start_points(degrees, c) -> np.ndarray:
    per_var = []
    for d, ci in zip(degrees, c):
        base = ci ** (1.0 / d)
        per_var.append([base * np.exp(2j * np.pi * k / d) for k in range(d)])
    return np.array(list(itertools.product(*per_var)), dtype=complex)


def _corrector(hom: _Homotopy, Xp, r, cfg: PathTrackerConfig):
    X = Xp.copy()
    alive = np.all(np.isfinite(X), axis=1)
    conv = np.zeros(len(X), dtype=bool)
    for _ in range(cfg.corrector_max_iters):
        idx = np.flatnonzero(alive & ~conv)
        if not idx.size:
            break
        H, Hx, _ = hom(X[idx], r[idx])
        dx = _batched_solve(Hx, H)
        bad = ~np.all(np.isfinite(dx), axis=1)
        X[idx[~bad]] -= dx[~bad]
        alive[idx[bad]] = False
        # affine coordinates lose relative accuracy in proportion to |x| near infinity
        size = 1 + np.linalg.norm(X[idx], axis=1)
        small = np.linalg.norm(dx, axis=1) <= cfg.corrector_tol * size * size
        conv[idx[small & ~bad]] = True
    return conv & alive, X


def _track(hom: _Homotopy, start: np.ndarray, cfg: PathTrackerConfig):
    B = len(start)
    x = start.copy()
    r = np.ones(B)
    h = np.full(B, cfg.initial_step)
    streak = np.zeros(B, dtype=int)
    steps = np.zeros(B, dtype=int)
    status = np.full(B, ACTIVE)
    while True:
        act = np.flatnonzero(status == ACTIVE)
        if not act.size:
            break
        xa, ra, ha = x[act], r[act], h[act]
        _, Hx, Hr = hom(xa, ra)
        dxdr = -_batched_solve(Hx, Hr)
        rn = np.maximum(ra - ha, 0.0)
        xp = xa + (rn - ra)[:, None] * dxdr
        ok, xc = _corrector(hom, xp, rn, cfg)
        steps[act] += 1

        acc = act[ok]
        x[acc] = xc[ok]
        r[acc] = rn[ok]
        streak[acc] += 1
        grow = acc[streak[acc] >= cfg.grow_after]
        h[grow] = np.minimum(h[grow] * cfg.step_grow, cfg.max_step)
        streak[grow] = 0
        norms = np.linalg.norm(x[acc], axis=1)
        status[acc[norms > cfg.divergence_norm]] = DIVERGED
        status[acc[(r[acc] == 0.0) & (status[acc] == ACTIVE)]] = DONE
        status[acc[(r[acc] < R_FLOOR) & (status[acc] == ACTIVE)]] = FAILED

        rej = act[~ok]
        h[rej] *= cfg.step_shrink
        streak[rej] = 0
        status[rej[h[rej] < cfg.min_step * r[rej]]] = FAILED
        status[act[(steps[act] >= cfg.max_steps) & (status[act] == ACTIVE)]] = FAILED
    return x, r, status


def _merge(points: list[np.ndarray], tol: float = MERGE_TOL):
    """Greedy clustering; returns representatives and cluster sizes."""
    reps: list[np.ndarray] = []
    counts: list[int] = []
    for p in sorted(points, key=_canonical_key):
        for i, q in enumerate(reps):
            if np.linalg.norm(p - q) <= tol * max(1.0, np.linalg.norm(q)):
                counts[i] += 1
                break
        else:
            reps.append(p)
            counts.append(1)
    return reps, counts


def _solve_once(system: CompiledSystem, degrees, cfg: PathTrackerConfig, rng: np.random.Generator,
                gamma: complex | None):
    n = system.n
    c = np.exp(2j * np.pi * rng.random(n))
    if gamma is None:
        gamma = complex(np.exp(2j * np.pi * rng.random()))
    hom = _Homotopy(system, degrees, c, gamma)
    start = _start_points(degrees, c)
    x, r, status = _track(hom, start, cfg)

    # paths stopped close to the end may still sit on a (possibly singular) solution
    salvage = np.flatnonzero((status == FAILED) & (r < 1e-6) & np.all(np.isfinite(x), axis=1))
    if salvage.size:
        xs, _ = newton_polish(system, x[salvage], max_iters=60)
        x[salvage] = xs
        status[salvage] = DONE
    ended = np.flatnonzero(status == DONE)
    regular, singular, residuals = [], [], []
    diverged = int(np.sum(status == DIVERGED))
    failures = int(np.sum(status == FAILED))
    if ended.size:
        xe, last = newton_polish(system, x[ended])
        bwd = system.backward_error(xe)
        _, J = system.eval_jac(xe)
        with np.errstate(all="ignore"):
            conds = np.linalg.cond(J)
        for k in range(len(ended)):
            norm = np.linalg.norm(xe[k])
            if not np.all(np.isfinite(xe[k])) or norm > cfg.divergence_norm:
                diverged += 1
            elif bwd[k] > 1e-9:
                if norm > np.sqrt(cfg.divergence_norm):
                    diverged += 1
                else:
                    failures += 1
            elif conds[k] < 1e10 and last[k] < cfg.corrector_tol:
                regular.append((xe[k], float(last[k])))
            else:
                singular.append(xe[k])

    reps, counts = _merge([p for p, _ in regular])
    # two paths ending on one simple root means a path jumped
    failures += sum(k - 1 for k in counts)
    res_of = {id(p): res for p, res in regular}
    residuals = [res_of[id(p)] for p in reps]
    sing_reps, _ = _merge(singular)
    return AffineSolutionSet(
        solutions=reps,
        paths_tracked=len(start),
        paths_diverged=diverged,
        failures=failures,
        residuals=residuals,
        singular=sing_reps,
        paths_singular=len(singular),
        gamma=gamma,
    )


def solve_square(system: Sequence[MultiPoly], cfg: PathTrackerConfig | None = None,
                 rng: np.random.Generator | None = None, allow_singular: bool = True) -> AffineSolutionSet:
    """All isolated finite nonsingular solutions of a square system.

    Retries once with a fresh gamma when any path fails; a second failure
    raises :class:`NumericalFailure`.
    """
    cfg = cfg or PathTrackerConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    system = list(system)
    n = len(system)
    if n == 0 or any(p.num_vars != n for p in system):
        raise InputError(f"system is not square: {n} equations")
    if any(p.is_zero() for p in system):
        raise InputError("system contains a zero equation")
    degrees = [int(p.total_degree) for p in system]
    if any(d == 0 for d in degrees):
        return AffineSolutionSet([], 0, 0, 0)
    bezout = int(np.prod(degrees))
    if bezout > cfg.max_paths:
        raise InputError(f"Bezout number {bezout} exceeds max_paths={cfg.max_paths}")
    compiled = CompiledSystem(system)
    result = _solve_once(compiled, degrees, cfg, rng, cfg.gamma)
    if result.failures:
        log.info("%d path failures, retrying with a fresh gamma", result.failures)
        result = _solve_once(compiled, degrees, cfg, rng, None)
        if result.failures:
            raise NumericalFailure(f"{result.failures} of {result.paths_tracked} paths failed twice")
    if result.singular and not allow_singular:
        raise NumericalFailure(f"{len(result.singular)} singular endpoints")
    order = sorted(range(len(result.solutions)), key=lambda i: _canonical_key(result.solutions[i]))
    result.solutions = [result.solutions[i] for i in order]
    result.residuals = [result.residuals[i] for i in order]
    result.singular = sorted(result.singular, key=_canonical_key)
    return result


# -- univariate ------------------------------------------------------------

def _aberth(coeffs: np.ndarray, max_iters: int = 500) -> np.ndarray:
    a = coeffs / coeffs[0]
    n = len(a) - 1
    if n == 1:
        return np.array([-a[1]])
    radius = max(abs(a[k]) ** (1.0 / k) for k in range(1, n + 1))
    radius = radius if radius > 0 else 1.0
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    da = np.polyder(a)
    eye = np.eye(n, dtype=bool)
    for _ in range(max_iters):
        p = np.polyval(a, z)
        dp = np.polyval(da, z)
        with np.errstate(all="ignore"):
            w = np.where(dp != 0, p / dp, 0)
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            inv = 1.0 / diff
            inv[eye] = 0.0
            s = inv.sum(axis=1)
            corr = w / (1 - w * s)
        corr = np.where(np.isfinite(corr), corr, 0)
        z = z - corr
        if np.all(np.abs(corr) <= 4 * np.finfo(float).eps * (1 + np.abs(z))):
            break
    return z


def root_collisions(roots: Sequence[complex], tol: float = 1e-8) -> bool:
    roots = list(roots)
    return any(abs(a - b) < tol * max(1.0, abs(a)) for a, b in itertools.combinations(roots, 2))


def univariate_roots(p: MultiPoly) -> list[complex]:
    """Complex roots by Aberth-Ehrlich iteration with Newton polishing."""
    if p.num_vars != 1:
        raise InputError("univariate_roots needs a polynomial in one variable")
    if p.is_zero() or p.total_degree < 1:
        raise InputError("univariate_roots needs degree at least 1")
    coeffs = p.univariate_coefficients()
    scale = np.max(np.abs(coeffs))
    while len(coeffs) > 1 and abs(coeffs[0]) < NUMERICAL_ZERO * scale:
        coeffs = coeffs[1:]
    if len(coeffs) == 1:
        return []
    z = _aberth(coeffs)
    dc = np.polyder(coeffs)
    for _ in range(3):
        dp = np.polyval(dc, z)
        with np.errstate(all="ignore"):
            step = np.where(dp != 0, np.polyval(coeffs, z) / dp, 0)
        z = z - np.where(np.isfinite(step), step, 0)
    roots = sorted((complex(v) for v in z), key=lambda c: (round(c.real, 9), round(c.imag, 9)))
    if root_collisions(roots):
        log.warning("univariate polynomial has (nearly) repeated roots")
    return roots


# -- fixed points ------------------------------------------------------------

def fixed_point_system(f: ProjEndo, chart: int) -> list[MultiPoly]:
    """Equations F_j - x_j F_chart = 0 (j != chart) in the chart x_chart = 1."""
    n = f.n
    deh = [c.dehomogenize(chart) for c in f.components]
    eqs = []
    k = 0
    for j in range(n + 1):
        if j == chart:
            continue
        eqs.append(deh[j] - MultiPoly.variable(k, n) * deh[chart])
        k += 1
    return eqs


def fixed_points(f: ProjEndo, cfg: PathTrackerConfig | None = None,
                 rng: np.random.Generator | None = None, check_count: bool = True) -> list[FixedPointRecord]:
    """All fixed points of a morphism of P^n with their chart Jacobians."""
    from .indices import fixed_point_count

    cfg = cfg or PathTrackerConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    if f.is_morphism is None:
        f = f.with_flag(check_morphism(f, cfg, rng))
    if not f.is_morphism:
        raise BasePointError("the components have a common zero; not a morphism")
    n = f.n
    systems = [fixed_point_system(f, i) for i in range(n + 1)]
    if any(any(e.is_zero() for e in s) for s in systems):
        raise NonTransversalError("fixed-point equations vanish identically; fixed points are not isolated")
    compiled = [CompiledSystem(s) for s in systems]

    found: list[ProjPoint] = []
    for chart, s in enumerate(systems):
        sols = solve_square(s, cfg, rng=rng)
        for y in sols.solutions:
            found.append(from_affine(y, chart))
        for y in sols.singular:
            log.warning("singular fixed point near %s in chart %d", y, chart)
            found.append(from_affine(y, chart))

    merged: list[ProjPoint] = []
    for p in sorted(found, key=lambda q: q.canonical_key()):
        if all(proj_distance(p, q) >= MERGE_TOL for q in merged):
            merged.append(p)

    records = []
    for p in merged:
        chart = p.best_chart
        y, last = newton_polish(compiled[chart], p.affine(chart)[None, :])
        q = from_affine(y[0], chart)
        J = affine_jacobian(f, q, chart)
        det = complex(np.linalg.det(np.eye(n) - J))
        transversal = abs(det) > TRANSVERSAL_TOL
        if not transversal:
            log.warning("non-transversal fixed point %s: |det(I-J)| = %.3g", q, abs(det))
        records.append(FixedPointRecord(point=q, chart=chart, jacobian=J, det_IminusJ=det,
                                        newton_residual=float(min(last[0], 1.0)), transversal=transversal))
    records.sort(key=lambda rec: rec.point.canonical_key())

    expected = fixed_point_count(n, f.degree)
    if check_count and all(rec.transversal for rec in records) and len(records) != expected:
        raise NonTransversalError(
            f"found {len(records)} fixed points, expected {expected} for n={n}, d={f.degree}")
    return records


def vf_zeros(v, cfg: PathTrackerConfig | None = None, rng: np.random.Generator | None = None):
    """Zeros of a plane field with the linearization Dv at each.

    Returns a list of ``(point, Dv)`` pairs in canonical order.
    """
    cfg = cfg or PathTrackerConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    if v.P.is_zero() or v.Q.is_zero():
        raise InputError("both components of the field must be nonzero for isolated zeros")
    sols = solve_square([v.P, v.Q], cfg, rng=rng)
    d = v.degree
    jac = [[v.P.partial(0), v.P.partial(1)], [v.Q.partial(0), v.Q.partial(1)]]
    out = []
    for z in sols.solutions:
        Dv = np.array([[g.eval(z) for g in row] for row in jac])
        out.append((np.asarray(z), Dv))
    if len(out) < d * d or sols.singular:
        log.warning("field has %d simple zeros, %d expected", len(out), d * d)
    return out
