"""Verification entries and reports, with deterministic JSON output."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

DEFAULT_TOL = 1e-6

# relation names used in reports
LEFSCHETZ = "Generalized Lefschetz"
GUILLOT = "Guillot's relations"
BAUM_BOTT = "Baum-Bott"
EULER_JACOBI_1 = "Euler-Jacobi 1"
EULER_JACOBI_2 = "Euler-Jacobi 2"
CAMACHO_SAD = "Camacho-Sad"


def csum(values: Sequence[complex]) -> complex:
    values = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def cjson(z: complex) -> dict:
    z = complex(z)
    return {"re": round(z.real, 15) + 0.0, "im": round(z.imag, 15) + 0.0}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, (complex, np.complexfloating)):
        return cjson(obj)
    if isinstance(obj, (np.floating, float)):
        return round(float(obj), 15) + 0.0
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


@dataclass
class VerificationEntry:
    relation: str
    label: str
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    passed: bool
    terms: list[complex]
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return to_jsonable({
            "relation": self.relation, "label": self.label, "lhs": self.lhs, "rhs": self.rhs,
            "residual": self.residual, "tolerance": self.tolerance, "pass": self.passed,
            "per_point_terms": self.terms, "details": self.details,
        })


def make_entry(relation: str, label: str, terms: Sequence[complex], rhs: complex,
               tol: float = DEFAULT_TOL, details: dict | None = None) -> VerificationEntry:
    """Sum the per-point terms and compare with ``rhs`` at ``tol * max(1, |rhs|)``."""
    terms = [complex(t) for t in terms]
    lhs = csum(terms)
    rhs = complex(rhs)
    residual = abs(lhs - rhs)
    tolerance = tol * max(1.0, abs(rhs))
    return VerificationEntry(relation, label, lhs, rhs, residual, tolerance,
                             residual <= tolerance, terms, details or {})


@dataclass
class VerificationReport:
    entries: list[VerificationEntry]
    seed: int
    config: dict
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json(self) -> dict:
        # wall time is left out so identical runs give identical bytes
        out = {"seed": self.seed, "config": to_jsonable(self.config),
               "entries": [e.to_json() for e in self.entries], "pass": self.passed}
        if self.extra:
            out.update(to_jsonable(self.extra))
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def _fmt(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return f"{z.real:+.12g}"
    return f"{z.real:+.10g}{z.imag:+.10g}j"


def format_entry(e: VerificationEntry) -> str:
    lines = [f"== {e.relation} [{e.label}]"]
    for i, t in enumerate(e.terms):
        lines.append(f"  {i:>3}  {_fmt(t)}")
    lines.append(f"  sum       {_fmt(e.lhs)}")
    lines.append(f"  expected  {_fmt(e.rhs)}")
    lines.append(f"  residual  {e.residual:.3e}  (tol {e.tolerance:.1e})  {'PASS' if e.passed else 'FAIL'}")
    return "\n".join(lines)


def format_report(report: VerificationReport) -> str:
    blocks = [format_entry(e) for e in report.entries]
    status = "PASS" if report.passed else "FAIL"
    blocks.append(f"seed {report.seed}; {len(report.entries)} relations; overall {status}; "
                  f"wall time {report.wall_time:.2f} s")
    return "\n\n".join(blocks)
