import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import DirichletPolynomial, from_json, required_primes
from dirberg.evaluation.evaluation import (
    EvalBound,
    disk_eval_bound,
    eval_bound_ap_even,
    eval_bound_ap_general,
    eval_bound_dp,
    eval_norm_a2,
    eval_norm_bp,
    eval_norm_hp,
    kernel_a2,
    kernel_bp,
)
from dirberg.measures.measures import measure_from_config
from dirberg.norms.norms import (
    a2_norm,
    ap_norm,
    b2_norm,
    bp_norm_mc,
    d2_norm,
    dirichlet_space_norm,
    even_bp_norm,
    even_hp_norm,
    h2_norm,
    mc_hp_norm,
)
from dirberg.norms.sampling import NormEstimate, SamplerConfig
from dirberg.services import constants
from dirberg.services.config import RunConfig
from dirberg.services.errors import ConfigError
from dirberg.verification.report import VerificationReport, report_table
from dirberg.verification.suites import run_suite

logger = logging.getLogger(APP_NAME)

KERNEL_SPACES = ["a2", "b2"]


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.getLevelName((level or constants.LOG_LEVEL).upper()),
        format="%(asctime)s %(levelname)-8s %(message)s",
        datefmt="%H:%M:%S",
    )


def _even(p: float) -> bool:
    return p == int(p) and int(p) % 2 == 0


def _echo(cfg: RunConfig) -> dict:
    """The effective config, without the suite table unless the command is verify."""
    return cfg.model_dump(exclude=None if cfg.command == "verify" else {"suites"})


def load_polynomial(cfg: RunConfig) -> DirichletPolynomial:
    if cfg.poly:
        return from_json(cfg.poly)
    if cfg.poly_file:
        path = Path(cfg.poly_file)
        if not path.exists():
            raise ConfigError(f"polynomial file {cfg.poly_file} does not exist")
        return from_json(path.read_text())
    raise ConfigError("a polynomial is required: pass --poly or --poly-file")


def _sampler(cfg: RunConfig, f: DirichletPolynomial, domain: str) -> SamplerConfig:
    return SamplerConfig(K=cfg.sampler.primes or required_primes(f), samples=cfg.sampler.samples,
                         seed=cfg.sampler.seed, domain=domain)


def compute_norm(cfg: RunConfig, f: DirichletPolynomial) -> NormEstimate:
    space, p = cfg.space, cfg.p
    mu = measure_from_config(cfg.measure)
    if space == "h2":
        return h2_norm(f)
    if space == "b2":
        return b2_norm(f)
    if space == "a2":
        return a2_norm(f, mu)
    if space == "d2":
        return d2_norm(f, mu)
    if space == "hp":
        return even_hp_norm(f, p) if _even(p) else mc_hp_norm(f, p, _sampler(cfg, f, "torus"))
    if space == "bp":
        return even_bp_norm(f, p) if _even(p) else bp_norm_mc(f, p, _sampler(cfg, f, "polydisk"))
    if space == "ap":
        return ap_norm(f, mu, p, None if _even(p) else _sampler(cfg, f, "torus"))
    if space == "dp":
        return dirichlet_space_norm(f, mu, p, None if _even(p) else _sampler(cfg, f, "torus"))
    raise ConfigError(f"unknown space {space!r}, expected one of {constants.SPACES_NORM}")


def run_norm(cfg: RunConfig) -> dict:
    f = load_polynomial(cfg)
    logger.debug(f"Norm of a polynomial with N={f.N} in {cfg.space}, p={cfg.p}")
    estimate = compute_norm(cfg, f)
    return {"space": cfg.space, "p": cfg.p, "N": f.N, "estimate": estimate.to_dict(), "config": _echo(cfg)}


def evaluation_bound(cfg: RunConfig, s: complex) -> EvalBound:
    space, p = cfg.space, cfg.p
    mu = measure_from_config(cfg.measure)
    if space == "hp":
        return eval_norm_hp(s, p)
    if space == "bp":
        return eval_norm_bp(s, p)
    if space == "a2":
        return eval_norm_a2(mu, s)
    if space == "ap":
        return eval_bound_ap_even(mu, s, p) if _even(p) else eval_bound_ap_general(mu, s, p, eta_points=cfg.eta_points)
    if space == "dp":
        return eval_bound_dp(mu, s, p)
    if space == "disk":
        if cfg.z is None:
            raise ConfigError("the disk space needs a point --z")
        return disk_eval_bound(None, complex(*cfg.z), p, eta_points=cfg.eta_points)
    raise ConfigError(f"unknown space {space!r}, expected one of {constants.SPACES_EVAL}")


def run_eval_norm(cfg: RunConfig) -> dict:
    s = complex(*cfg.z) if cfg.space == "disk" and cfg.z is not None else cfg.complex_s()
    bound = evaluation_bound(cfg, s)
    return {"point": s, "bound": bound.to_dict(), "config": _echo(cfg)}


def run_eval_scan(cfg: RunConfig) -> pd.DataFrame:
    """One row per sigma on the linear grid [sigma_min, sigma_max]."""
    if cfg.space not in constants.SPACES_SCAN:
        raise ConfigError(f"eval-scan supports {constants.SPACES_SCAN}, got {cfg.space!r}")
    sigmas = np.linspace(cfg.sigma_min, cfg.sigma_max, cfg.points)
    rows = []
    for sigma in sigmas:
        bound = evaluation_bound(cfg, complex(float(sigma), 0.0))
        rows.append({"sigma": float(sigma), "value": bound.value, "kind": bound.kind, "space": cfg.space, "p": cfg.p})
    logger.info(f"Scanned {len(rows)} points of the {cfg.space} evaluation norm")
    return pd.DataFrame(rows, columns=["sigma", "value", "kind", "space", "p"])


def run_kernel(cfg: RunConfig) -> dict:
    if cfg.space not in KERNEL_SPACES:
        raise ConfigError(f"kernel supports {KERNEL_SPACES}, got {cfg.space!r}")
    if cfg.w is None:
        raise ConfigError("the kernel needs a second point --w")
    s, w = cfg.complex_s(), complex(*cfg.w)
    if cfg.space == "b2":
        kernel = kernel_bp(s, w, cfg.N)
    else:
        kernel = kernel_a2(measure_from_config(cfg.measure), s, w, cfg.N)
    return {"space": cfg.space, "s": s, "w": w, "kernel": kernel.to_dict(), "config": _echo(cfg)}


def run_verify(cfg: RunConfig) -> List[VerificationReport]:
    if not cfg.suite:
        raise ConfigError(f"a suite is required, expected one of {constants.SUITES}")
    return run_suite(cfg.suite, cfg.suites)


def load_reports(text: str) -> List[VerificationReport]:
    """Reports from a verify output: either the report array or the object holding it."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"report input is not valid JSON: {e}")
    if isinstance(data, dict):
        data = data.get("reports")
    if not isinstance(data, list):
        raise ConfigError("report input must hold a JSON array of reports")
    return [VerificationReport.from_dict(entry) for entry in data]


def run_report(cfg: RunConfig) -> str:
    if cfg.input:
        path = Path(cfg.input)
        if not path.exists():
            raise ConfigError(f"report file {cfg.input} does not exist")
        text = path.read_text()
    else:
        text = sys.stdin.read()
    table = report_table(load_reports(text))
    if "runtime_ms" in table and not table["runtime_ms"].any():
        table = table.drop(columns=["runtime_ms"])
    return table.to_string(index=False)
