import datetime
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import wraps
from typing import Callable, Dict, Optional, Sequence

import pandas as pd

from dirberg import APP_NAME
from dirberg.services.errors import ConfigError
from dirberg.services.output import plain, to_json_text

logger = logging.getLogger(APP_NAME)

PASS = "pass"
FAIL = "fail"


@dataclass
class VerificationReport:
    """
    Outcome of one check. status is pass iff |lhs - rhs| <= tolerance and every entry of
    conditions holds; exact reports carry Fractions or ints with tolerance 0.
    Inequality checks report the violation as lhs against rhs = 0.
    """
    name: str
    status: str
    lhs: object
    rhs: object
    tolerance: float
    parameters: Dict[str, object] = field(default_factory=dict)
    conditions: Dict[str, bool] = field(default_factory=dict)
    runtime_ms: int = 0
    surrogate: bool = False

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timing: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "lhs": self.lhs, "rhs": self.rhs,
               "tolerance": self.tolerance, "parameters": self.parameters, "conditions": self.conditions,
               "surrogate": self.surrogate}
        if timing:
            out["runtime_ms"] = self.runtime_ms
        return plain(out)

    def to_json(self, timing: bool = False) -> str:
        return to_json_text(self.to_dict(timing))

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        try:
            return cls(data["name"], data["status"], data["lhs"], data["rhs"], float(data["tolerance"]),
                       dict(data.get("parameters", {})), dict(data.get("conditions", {})),
                       int(data.get("runtime_ms", 0)), bool(data.get("surrogate", False)))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"malformed report entry: {e}")


def _difference(lhs, rhs) -> object:
    if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
        return abs(Fraction(lhs) - Fraction(rhs))
    return abs(complex(lhs) - complex(rhs))


def compare(name: str, lhs, rhs, tolerance: float = 0.0, parameters: Optional[dict] = None,
            conditions: Optional[Dict[str, bool]] = None, surrogate: bool = False) -> VerificationReport:
    conditions = {key: bool(value) for key, value in (conditions or {}).items()}
    within = _difference(lhs, rhs) <= tolerance
    status = PASS if within and all(conditions.values()) else FAIL
    return VerificationReport(name, status, lhs, rhs, tolerance, dict(parameters or {}), conditions,
                              surrogate=surrogate)


def violation(name: str, margins: Sequence[float], parameters: Optional[dict] = None,
              conditions: Optional[Dict[str, bool]] = None, surrogate: bool = False) -> VerificationReport:
    """Inequality check: margins are (small side - large side); pass iff none is positive."""
    worst = max((float(m) for m in margins), default=0.0)
    parameters = dict(parameters or {})
    parameters.setdefault("worst_margin", worst)
    parameters.setdefault("checked", len(margins))
    return compare(name, max(worst, 0.0), 0.0, 0.0, parameters, conditions, surrogate)


def combine(name: str, reports: Sequence[VerificationReport], parameters: Optional[dict] = None) -> VerificationReport:
    """One report standing for many exact sub-checks: lhs sums the sub-report gaps."""
    gap = sum((_difference(r.lhs, r.rhs) for r in reports), Fraction(0))
    failed = [r.parameters for r in reports if not r.passed]
    parameters = dict(parameters or {})
    parameters.update(checked=len(reports), failed=failed[:10])
    report = compare(name, gap, 0, 0.0, parameters, {"all_passed": not failed})
    report.runtime_ms = sum(r.runtime_ms for r in reports)
    return report


def timed(check: Callable[..., VerificationReport]) -> Callable[..., VerificationReport]:
    @wraps(check)
    def run(*args, **kwargs) -> VerificationReport:
        t = datetime.datetime.now()
        report = check(*args, **kwargs)
        t = datetime.datetime.now() - t
        report.runtime_ms = int(round(t.total_seconds() * 1000))
        logger.info(f"{report.name}: {report.status} in {round(t.total_seconds(), 2)} seconds.")
        return report
    return run


def report_table(reports: Sequence[VerificationReport]) -> pd.DataFrame:
    rows = [{"name": r.name, "status": r.status, "lhs": plain(r.lhs), "rhs": plain(r.rhs), "tolerance": r.tolerance,
             "surrogate": r.surrogate, "runtime_ms": r.runtime_ms} for r in reports]
    return pd.DataFrame(rows, columns=["name", "status", "lhs", "rhs", "tolerance", "surrogate", "runtime_ms"])
