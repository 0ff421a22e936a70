"""Random test instances with complex Gaussian coefficients."""

from __future__ import annotations

import itertools
import logging

import numpy as np

from .errors import HypothesisViolation, NumericalFailure
from .foliation import PlaneVectorField, infinity_singularities
from .polyalg import MultiPoly
from .projgeom import ProjEndo
from .solver import PathTrackerConfig, vf_zeros

log = logging.getLogger(__name__)

MAX_REJECTIONS = 100


def _gaussian(rng: np.random.Generator) -> complex:
    re, im = rng.standard_normal(2)
    return complex(re, im) / np.sqrt(2)


def _exponents(num_vars: int, degree: int, exact: bool):
    exps = [e for e in itertools.product(range(degree + 1), repeat=num_vars)
            if (sum(e) == degree if exact else sum(e) <= degree)]
    return sorted(exps, key=lambda e: (sum(e), e), reverse=True)


def random_endo(n: int, d: int, rng: np.random.Generator) -> ProjEndo:
    if not 1 <= n <= 3 or not 1 <= d <= 3:
        raise ValueError("random instances support 1 <= n <= 3 and 1 <= d <= 3")
    exps = _exponents(n + 1, d, exact=True)
    comps = tuple(MultiPoly(n + 1, {e: _gaussian(rng) for e in exps}) for _ in range(n + 1))
    return ProjEndo(comps)


def random_field(d: int, rng: np.random.Generator) -> PlaneVectorField:
    exps = _exponents(2, d, exact=False)
    P = MultiPoly(2, {e: _gaussian(rng) for e in exps})
    Q = MultiPoly(2, {e: _gaussian(rng) for e in exps})
    return PlaneVectorField(P, Q)


def field_is_generic(v: PlaneVectorField, cfg: PathTrackerConfig | None = None,
                     rng: np.random.Generator | None = None) -> bool:
    """Non-dicritic, d^2 zeros with |det Dv| > 1e-6, and d+1 distinct points on L."""
    d = v.degree
    if v.dicritic:
        return False
    try:
        zeros = vf_zeros(v, cfg, rng)
        if len(zeros) != d * d:
            return False
        if min(abs(np.linalg.det(Dv)) for _, Dv in zeros) <= 1e-6:
            return False
        infinity_singularities(v)
    except (HypothesisViolation, NumericalFailure) as exc:
        log.info("rejecting field: %s", exc)
        return False
    return True


def random_generic_field(d: int, rng: np.random.Generator, cfg: PathTrackerConfig | None = None):
    """Draw until the field passes :func:`field_is_generic`.  Returns (field, rejections)."""
    if not 1 <= d <= 3:
        raise ValueError("random fields support 1 <= d <= 3")
    for rejections in range(MAX_REJECTIONS):
        v = random_field(d, rng)
        if field_is_generic(v, cfg, rng):
            return v, rejections
    raise NumericalFailure(f"{MAX_REJECTIONS} consecutive draws were rejected")
