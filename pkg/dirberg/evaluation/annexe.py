"""
Consistency of evaluation norms N_p = ||delta_s||_{(X^p)*} across exponents:

    (i)   N_p >= N_q1 N_q2            when 1/p = 1/q1 + 1/q2
    (ii)  N_p >= N_q                  when q >= p
    (iii) N_pm <= N_p^{1/m}

H^p and B^p have exact N_p; for A^p_mu only an interval [lower, upper] is known, and a
relation passes when it is not contradicted by the intervals.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import pandas as pd

from dirberg import APP_NAME
from dirberg.evaluation.evaluation import (
    eval_bound_ap_even,
    eval_bound_ap_general,
    eval_lower_ap,
    eval_norm_bp,
    eval_norm_hp,
)
from dirberg.measures.measures import AlphaMeasure, MeasureSpec
from dirberg.norms.sampling import SamplerConfig
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)

RELATIVE_TOL = 1e-12
SPACES = ("Hp", "Bp", "Ap")


@dataclass
class AnnexeComparison:
    space: str
    sigma: float
    table: pd.DataFrame
    checks: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check["passed"] for check in self.checks)

    def to_dict(self) -> dict:
        return {"space": self.space, "sigma": self.sigma, "estimates": self.table.to_dict(orient="records"),
                "checks": self.checks, "passed": self.passed}


def _is_even(p: float) -> bool:
    return p >= 2 and p == int(p) and int(p) % 2 == 0


def _estimates(space: str, sigma: float, ps: Sequence[float], mu: Optional[MeasureSpec], N: int,
               cfg: Optional[SamplerConfig]) -> pd.DataFrame:
    rows = []
    for p in ps:
        if space == "Hp":
            value = eval_norm_hp(sigma, p).value
            rows.append({"p": p, "lower": value, "upper": value, "std_error": 0.0})
        elif space == "Bp":
            value = eval_norm_bp(sigma, p).value
            rows.append({"p": p, "lower": value, "upper": value, "std_error": 0.0})
        else:
            upper = eval_bound_ap_even(mu, sigma, p) if _is_even(p) else eval_bound_ap_general(mu, sigma, p)
            lower = eval_lower_ap(mu, sigma, p, N=N, cfg=None if _is_even(p) else cfg)
            rows.append({"p": p, "lower": lower.value, "upper": upper.value,
                         "std_error": lower.parameters.get("norm_std_error", 0.0)})
    return pd.DataFrame(rows, columns=["p", "lower", "upper", "std_error"])


def _check(relation: str, detail: str, lhs: float, rhs: float, tolerance: float) -> dict:
    """Relation lhs >= rhs up to tolerance."""
    return {"relation": relation, "detail": detail, "lhs": lhs, "rhs": rhs, "passed": bool(lhs >= rhs - tolerance)}


def _relations(table: pd.DataFrame) -> List[dict]:
    rows = {float(row.p): row for row in table.itertuples(index=False)}
    ps = sorted(rows)
    tol = lambda *values: RELATIVE_TOL * max(1.0, *values)
    checks = []
    for p in ps:
        row = rows[p]
        checks.append(_check("sandwich", f"p={p}", row.upper, row.lower, tol(row.upper)))
    for q1, q2 in itertools.combinations_with_replacement(ps, 2):
        target = 1.0 / (1.0 / q1 + 1.0 / q2)
        matches = [p for p in ps if abs(p - target) <= 1e-12 * target]
        for p in matches:
            lhs, rhs = rows[p].upper, rows[q1].lower * rows[q2].lower
            checks.append(_check("product", f"p={p}, q1={q1}, q2={q2}", lhs, rhs, tol(lhs, rhs)))
    for p, q in itertools.combinations(ps, 2):
        lhs, rhs = rows[p].upper, rows[q].lower
        checks.append(_check("monotone", f"p={p} <= q={q}", lhs, rhs, tol(lhs, rhs)))
    for p, pm in itertools.combinations(ps, 2):
        m = pm / p
        if abs(m - round(m)) > 1e-12 or round(m) < 2:
            continue
        lhs, rhs = rows[p].upper ** (1.0 / round(m)), rows[pm].lower
        checks.append(_check("power", f"p={p}, m={round(m)}", lhs, rhs, tol(lhs, rhs)))
    return checks


def annexe_compare(space: str, s: complex, ps: Sequence[float], mu: Optional[MeasureSpec] = None,
                   N: int = 2000, cfg: Optional[SamplerConfig] = None) -> AnnexeComparison:
    if space not in SPACES:
        raise DomainError(f"space must be one of {SPACES}, got {space}")
    if not ps:
        raise DomainError("at least one exponent is needed")
    sigma = complex(s).real
    mu = AlphaMeasure(0.0) if (space == "Ap" and mu is None) else mu
    table = _estimates(space, sigma, ps, mu, N, cfg)
    checks = _relations(table)
    logger.info(f"Annexe comparison for {space} at sigma={sigma}: {sum(c['passed'] for c in checks)}/{len(checks)} relations hold")
    return AnnexeComparison(space, sigma, table, checks)


def power_identity_gap(space: str, sigma: float, p: float, m: int) -> float:
    """|N_pm - N_p^{1/m}| for the exact spaces, where the power relation is an equality."""
    if space not in ("Hp", "Bp"):
        raise DomainError(f"equality in the power relation is known for Hp and Bp only, got {space}")
    norm: Callable = eval_norm_hp if space == "Hp" else eval_norm_bp
    return abs(norm(sigma, p * m).value - norm(sigma, p).value ** (1.0 / m))
