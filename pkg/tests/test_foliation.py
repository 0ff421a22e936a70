import numpy as np
import pytest
import sympy

from woodshole.errors import DegenerateSingularity, DicriticError, HypothesisViolation, InputError
from woodshole.foliation import (
    PlaneVectorField,
    affine_singularities,
    build_fv,
    check_DvDf,
    infinity_singularities,
    radial_modify,
    random_radial_factor,
    restrict_to_line,
    singularities,
    verify_bb,
    verify_cs,
    verify_cs_woodshole,
    verify_ej1,
    verify_ej2,
)
from woodshole.instances import field_is_generic, random_field, random_generic_field
from woodshole.polyalg import MultiPoly, infinity_chart_parts
from woodshole.solver import PathTrackerConfig, fixed_points


def sympy_to_multi(expr, gens):
    return MultiPoly(len(gens), {m: complex(c) for m, c in sympy.Poly(sympy.expand(expr), *gens).terms()})


def test_chart_generator_matches_symbolic_pullback():
    """Oracle: push v through u = 1/x, w = y/x symbolically and clear u^(d-1)."""
    x, y, u, w = sympy.symbols("x y u w")
    P = 3 * x ** 2 - x * y + 2 * y ** 2 + x - 5
    Q = -x ** 2 + 4 * x * y + y - 1
    d = 2
    udot = -u ** 2 * P
    wdot = u * Q - u * w * P  # d/dt (y/x) = (Q x - y P) / x^2
    sub = {x: 1 / u, y: w / u}
    gen_u = sympy.simplify(udot.subs(sub) * u ** (d - 1))
    gen_w = sympy.simplify(wdot.subs(sub) * u ** (d - 1))
    v = PlaneVectorField(sympy_to_multi(P, (x, y)), sympy_to_multi(Q, (x, y)))
    Ps, Qs = infinity_chart_parts(v)
    U, W = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    assert -U * Ps == sympy_to_multi(gen_u, (u, w))
    assert Qs - W * Ps == sympy_to_multi(gen_w, (u, w))


def test_field_basics(worked_field, xy):
    x, y = xy
    assert worked_field.degree == 2
    assert not worked_field.dicritic
    assert PlaneVectorField(x * x, x * y).dicritic
    assert PlaneVectorField.from_json(worked_field.to_json()).P == worked_field.P
    with pytest.raises(InputError):
        PlaneVectorField(MultiPoly.zero(2), MultiPoly.zero(2))
    with pytest.raises(InputError):
        PlaneVectorField.from_json({"P": [], "Q": worked_field.Q.to_terms(), "degree_hint": 5})


def test_build_fv_linear(linear_field):
    f = build_fv(linear_field)
    x0, x1, x2 = (MultiPoly.variable(i, 3) for i in range(3))
    assert f.components[0] == x0 and f.components[1] == 2 * x1 and f.components[2] == 3 * x2


def test_worked_example_singularities(worked_field):
    aff = affine_singularities(worked_field)
    assert len(aff) == 4
    inf = infinity_singularities(worked_field)
    assert sorted(round(s.cs.real, 10) for s in inf) == [-1, 1, 1]
    assert sorted(round(s.bb.real, 10) for s in inf) == [0, 4, 4]
    assert sorted(round(s.bb.real, 10) for s in aff) == [0, 0, 4, 4]


def test_linear_example_cs(linear_field):
    inf = infinity_singularities(linear_field)
    assert sorted(s.cs.real for s in inf) == pytest.approx([-1, 2])
    assert verify_cs(linear_field).passed


def test_dicritic_and_degenerate(xy):
    x, y = xy
    with pytest.raises(DicriticError):
        infinity_singularities(PlaneVectorField(x * x - 1, x * y + 1))
    # tangency form x*(y^2) - y*(x^2 ... ) with a double root
    with pytest.raises(DegenerateSingularity):
        infinity_singularities(PlaneVectorField(MultiPoly.constant(1, 2) + 0 * x, x * x + y))


def test_ej_needs_degree_two(linear_field):
    with pytest.raises(HypothesisViolation):
        verify_ej1(linear_field)


def test_random_field_suites(rng):
    cfg = PathTrackerConfig(seed=3)
    v, _ = random_generic_field(3, rng, cfg)
    assert field_is_generic(v, cfg, rng)
    assert verify_ej1(v, cfg, rng).passed
    assert verify_ej2(v, cfg, rng).passed
    sings = singularities(v, cfg, rng)
    assert len(sings) == 13
    assert verify_bb(v, sings=sings).passed
    assert verify_cs(v, sings=sings).passed
    a, b = verify_cs_woodshole(v, cfg=cfg, rng=rng)
    assert a.passed and b.passed
    assert check_DvDf(v, cfg, rng) < 1e-9


def test_fv_fixed_points_are_singularities(rng):
    cfg = PathTrackerConfig(seed=1)
    v, _ = random_generic_field(2, rng, cfg)
    f = build_fv(v, cfg, rng)
    recs = fixed_points(f, cfg, rng)
    sings = singularities(v, cfg, rng)
    assert len(recs) == len(sings) == 7
    from woodshole.projgeom import proj_distance
    for s in sings:
        assert min(proj_distance(s.point, r.point) for r in recs) < 1e-8


def test_radial_modification(rng, worked_field):
    f = build_fv(worked_field)
    g = random_radial_factor(2, rng)
    h = radial_modify(f, g)
    assert h.preserves_line_at_infinity
    line = restrict_to_line(h)
    assert line.n == 1 and line.degree == 2
    with pytest.raises(InputError):
        radial_modify(f, MultiPoly.variable(0, 3) ** 2)


def test_woodshole_pair_worked_example(worked_field):
    for g in (MultiPoly.zero(3), None):
        a, b = verify_cs_woodshole(worked_field, g=g, rng=np.random.default_rng(5))
        assert a.residual < 1e-10 and b.residual < 1e-10
