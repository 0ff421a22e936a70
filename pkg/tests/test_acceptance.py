"""Acceptance gate: one pass/fail line per criterion, printed at the end of the run."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_RESULTS
from woodshole.cli import run_verify
from woodshole.foliation import (
    PlaneVectorField,
    check_DvDf,
    singularities,
    verify_cs_woodshole,
)
from woodshole.indices import (
    InvariantPolySpec,
    bb_index,
    cs_index,
    fixed_point_count,
    guillot_lhs_term,
    guillot_rhs,
    lefschetz_rhs,
    sigma_k,
    woods_hole_term,
)
from woodshole.instances import random_endo, random_generic_field
from woodshole.polyalg import MultiPoly
from woodshole.projgeom import affine_jacobian
from woodshole.solver import PathTrackerConfig, fixed_point_system, fixed_points, solve_square, vf_zeros

pytestmark = pytest.mark.acceptance

ENDO_SHAPES = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)]
PER_SHAPE = 10
FIELD_DEGREES = {2: 25, 3: 25}
SEED = 2026


def record(name, ok, detail):
    ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def endo_corpus():
    rng = np.random.default_rng(SEED)
    cfg = PathTrackerConfig(seed=SEED)
    out = []
    t0 = time.perf_counter()
    for n, d in ENDO_SHAPES:
        for _ in range(PER_SHAPE):
            f = random_endo(n, d, rng)
            out.append((f, fixed_points(f, cfg, rng)))
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def field_corpus():
    rng = np.random.default_rng(SEED + 1)
    cfg = PathTrackerConfig(seed=SEED + 1)
    out = []
    for d, count in FIELD_DEGREES.items():
        for _ in range(count):
            v, _ = random_generic_field(d, rng, cfg)
            out.append((v, vf_zeros(v, cfg, rng), singularities(v, cfg, rng)))
    return out


def test_c01_fixed_point_census(endo_corpus):
    corpus, elapsed = endo_corpus
    bad = [(f.n, f.degree, len(r)) for f, r in corpus if len(r) != fixed_point_count(f.n, f.degree)]
    min_det = min(abs(rec.det_IminusJ) for _, recs in corpus for rec in recs)
    ok = not bad and min_det > 1e-8 and elapsed < 60
    record("C1 fixed-point census", ok,
           f"{len(corpus)} maps, {len(bad)} miscounts, min |det(I-J)| {min_det:.2e}, {elapsed:.1f} s")


def test_c02_lefschetz(endo_corpus):
    corpus, _ = endo_corpus
    worst = 0.0
    for f, recs in corpus:
        for k in range(f.n + 1):
            lhs = sum(woods_hole_term(r.jacobian, k) for r in recs)
            worst = max(worst, abs(lhs - lefschetz_rhs(f.n, f.degree, k)) / max(1, f.degree ** k))
    record("C2 Lefschetz identities", worst < 1e-6, f"max scaled residual {worst:.2e} (tol 1e-6)")


def test_c03_guillot(endo_corpus):
    corpus, _ = endo_corpus
    invariants = [InvariantPolySpec(2, ((a, 1.0),)) for a in [(0, 0), (1, 0), (0, 1), (2, 0)]]
    worst, count = 0.0, 0
    for f, recs in corpus:
        if f.n != 2:
            continue
        count += 1
        for B in invariants:
            lhs = sum(guillot_lhs_term(r.jacobian, B) for r in recs)
            worst = max(worst, abs(lhs - guillot_rhs(B, f.degree)))
    record("C3 Guillot relations", count == 20 and worst < 1e-6,
           f"{count} maps x 4 invariants, max residual {worst:.2e} (tol 1e-6)")


def test_c04_euler_jacobi(field_corpus):
    w1 = w2 = 0.0
    for v, zeros, _ in field_corpus:
        assert len(zeros) == v.degree ** 2
        dets = [np.linalg.det(Dv) for _, Dv in zeros]
        w1 = max(w1, abs(sum(1 / x for x in dets)))
        w2 = max(w2, abs(sum(np.trace(Dv) / x for (_, Dv), x in zip(zeros, dets))))
    record("C4 Euler-Jacobi", max(w1, w2) < 1e-6,
           f"{len(field_corpus)} fields, max |sum 1/det| {w1:.2e}, max |sum tr/det| {w2:.2e} (tol 1e-6)")


def test_c05_baum_bott(field_corpus):
    worst, census_ok = 0.0, True
    for v, _, sings in field_corpus:
        d = v.degree
        census_ok &= len(sings) == d * d + d + 1
        worst = max(worst, abs(sum(s.bb for s in sings) - (d + 2) ** 2))
    record("C5 Baum-Bott", census_ok and worst < 1e-5,
           f"census {'ok' if census_ok else 'WRONG'}, max residual {worst:.2e} (tol 1e-5)")


def test_c06_camacho_sad(field_corpus):
    worst = 0.0
    for _, _, sings in field_corpus:
        worst = max(worst, abs(sum(s.cs for s in sings if s.kind == "infinity") - 1))
    record("C6 Camacho-Sad", worst < 1e-6, f"max residual {worst:.2e} (tol 1e-6)")


def test_c07_worked_example():
    x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    v = PlaneVectorField(x * x - 1, y * y - 1)
    cfg = PathTrackerConfig(seed=0)
    zeros = vf_zeros(v, cfg)
    sings = singularities(v, cfg)
    ej1 = sorted((1 / np.linalg.det(Dv)).real for _, Dv in zeros)
    ej2 = sorted((np.trace(Dv) / np.linalg.det(Dv)).real for _, Dv in zeros)
    bb_aff = sorted(s.bb.real for s in sings if s.kind == "affine")
    bb_inf = sorted(s.bb.real for s in sings if s.kind == "infinity")
    cs = sorted(s.cs.real for s in sings if s.kind == "infinity")
    imag = max(abs(s.bb.imag) for s in sings)
    checks = [
        np.allclose(ej1, [-0.25, -0.25, 0.25, 0.25], rtol=0, atol=1e-10),
        np.allclose(ej2, [-1, 0, 0, 1], rtol=0, atol=1e-10),
        np.allclose(bb_aff, [0, 0, 4, 4], rtol=0, atol=1e-10),
        np.allclose(bb_inf, [0, 4, 4], rtol=0, atol=1e-10),
        abs(sum(bb_aff) + sum(bb_inf) - 16) < 1e-10,
        np.allclose(cs, [-1, 1, 1], rtol=0, atol=1e-10),
        imag < 1e-10,
    ]
    fmt = lambda xs: "{" + ", ".join(f"{x + 0.0:g}" for x in np.round(xs, 10)) + "}"
    record("C7 worked example", all(checks),
           f"EJ {fmt(ej1)} {fmt(ej2)}, BB {fmt(bb_aff)} + {fmt(bb_inf)}, CS {fmt(cs)} (tol 1e-10)")


def test_c08_dv_df_relation(field_corpus):
    cfg = PathTrackerConfig(seed=SEED)
    rng = np.random.default_rng(SEED)
    worst = max(check_DvDf(v, cfg, rng) for v, _, _ in field_corpus)
    record("C8 Dv = Df_v - I", worst < 1e-9, f"max deviation {worst:.2e} (tol 1e-9)")


def test_c09_woods_hole_on_line(field_corpus):
    cfg = PathTrackerConfig(seed=SEED)
    rng = np.random.default_rng(SEED + 9)
    chosen = [e for e in field_corpus if e[0].degree == 2][:10] + [e for e in field_corpus if e[0].degree == 3][:10]
    wa = wb = 0.0
    for v, _, _ in chosen:
        a, b = verify_cs_woodshole(v, None, cfg, rng)
        wa, wb = max(wa, a.residual), max(wb, b.residual)
    record("C9 Woods Hole on L", len(chosen) == 20 and max(wa, wb) < 1e-6,
           f"{len(chosen)} fields with random g, max residuals {wa:.2e} / {wb:.2e} (tol 1e-6)")


def test_c10a_chart_invariance(endo_corpus):
    corpus, _ = endo_corpus
    worst, pairs = 0.0, 0
    for f, recs in corpus:
        for rec in recs:
            p = rec.point
            charts = [c for c in range(f.n + 1) if abs(p.coords[c]) / np.linalg.norm(p.coords) > 0.1]
            ref = affine_jacobian(f, p, charts[0])
            for c in charts[1:]:
                J = affine_jacobian(f, p, c)
                pairs += 1
                for k in range(1, f.n + 1):
                    a, b = sigma_k(ref, k), sigma_k(J, k)
                    worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    record("C10a chart invariance of sigma_k", worst < 1e-8, f"{pairs} chart pairs, max rel diff {worst:.2e}")


def test_c10b_similarity_invariance():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(100):
            M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            N = S @ M @ np.linalg.inv(S)
            c = np.linalg.cond(S)
            for k in range(n + 1):
                a = sigma_k(M, k)
                worst = max(worst, abs(a - sigma_k(N, k)) / (c * max(1.0, abs(a))))
    record("C10b similarity invariance of sigma_k", worst < 1e-12,
           f"300 matrices, max diff / cond(S) {worst:.2e}")


def test_c10c_generator_scale_invariance(field_corpus):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _, _, sings in field_corpus:
        kappa = complex(*rng.standard_normal(2)) * 10 ** rng.uniform(-3, 3)
        for s in sings:
            worst = max(worst, abs(bb_index(kappa * s.linearization) - s.bb) / max(1.0, abs(s.bb)))
            if s.kind == "infinity":
                cs = cs_index(kappa * s.lambda_tangent, kappa * s.lambda_normal)
                worst = max(worst, abs(cs - s.cs) / max(1.0, abs(s.cs)))
    record("C10c generator-scale invariance of BB/CS", worst < 1e-12, f"max rel diff {worst:.2e}")


def test_c10d_bezout_accounting(endo_corpus):
    corpus, _ = endo_corpus
    rng = np.random.default_rng(SEED)
    cfg = PathTrackerConfig(seed=SEED)
    systems = unbalanced = 0
    for f, _ in corpus[::5]:
        for chart in range(f.n + 1):
            res = solve_square(fixed_point_system(f, chart), cfg, rng)
            systems += 1
            total = len(res.solutions) + res.paths_diverged + res.paths_singular + res.failures
            unbalanced += total != res.paths_tracked or res.paths_tracked != (f.degree + 1) ** f.n
    record("C10d Bezout path accounting", unbalanced == 0, f"{systems} systems, {unbalanced} unbalanced")


def test_c10e_determinism(tmp_path):
    rng = np.random.default_rng(SEED)
    v, _ = random_generic_field(3, rng)
    path = tmp_path / "vf.json"
    import json
    path.write_text(json.dumps(v.to_json()))
    cfg = PathTrackerConfig(seed=11)
    first = run_verify("all", str(path), cfg).dumps()
    second = run_verify("all", str(path), cfg).dumps()
    f = random_endo(3, 2, rng)
    epath = tmp_path / "endo.json"
    epath.write_text(json.dumps(f.to_json()))
    third = run_verify("guillot", str(epath), cfg).dumps()
    fourth = run_verify("guillot", str(epath), cfg).dumps()
    record("C10e determinism under fixed seed", first == second and third == fourth,
           f"report sizes {len(first)} and {len(third)} bytes")
