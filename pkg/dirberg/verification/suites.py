import datetime
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional

from dirberg import APP_NAME
from dirberg.services import constants
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import ConfigError
from dirberg.verification.asymptotics import asymptotics_suite
from dirberg.verification.coefficients import coefficients_suite
from dirberg.verification.embeddings import embeddings_suite
from dirberg.verification.identities import identities_suite
from dirberg.verification.littlewood_paley import littlewood_paley_suite
from dirberg.verification.multipliers import multipliers_suite
from dirberg.verification.point_evaluation import point_evaluation_suite
from dirberg.verification.report import VerificationReport

logger = logging.getLogger(APP_NAME)

SUITES: Dict[str, Callable[[SuiteConfig], List]] = {
    "identities": identities_suite,
    "asymptotics": asymptotics_suite,
    "littlewood-paley": littlewood_paley_suite,
    "multipliers": multipliers_suite,
    "embeddings": lambda cfg: embeddings_suite(cfg) + point_evaluation_suite(cfg),
    "coefficients": coefficients_suite,
}


def run_suite(name: str, cfg: Optional[SuiteConfig] = None, threads: Optional[int] = None) -> List[VerificationReport]:
    """Run every check of a suite; reports come back in declaration order whatever the thread count."""
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}, expected one of {sorted(SUITES)}")
    cfg = SuiteConfig() if cfg is None else cfg
    threads = constants.THREADS if threads is None else threads
    checks = SUITES[name](cfg)
    logger.info(f"Running suite {name} ({len(checks)} checks, {threads} threads)")
    t = datetime.datetime.now()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda check: check(), checks))
    else:
        reports = [check() for check in checks]
    t = datetime.datetime.now() - t
    failed = sum(not report.passed for report in reports)
    logger.info(f"Suite {name}: {len(reports) - failed}/{len(reports)} passed in {round(t.total_seconds(), 2)} seconds.")
    return reports
