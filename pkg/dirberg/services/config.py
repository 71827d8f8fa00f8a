import json
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from dirberg import APP_NAME
from dirberg.services import constants
from dirberg.services.errors import ConfigError

logger = logging.getLogger(APP_NAME)


class MeasureConfig(BaseModel):
    """
    Probability measure on (0, inf) as it appears in config files, e.g.
    {"type": "alpha", "alpha": 0.0}, {"type": "dirac0"} or
    {"type": "density", "family": "gamma", "shape": 2.0, "rate": 3.0, "cutoff": 40.0}
    """
    model_config = ConfigDict(extra="forbid")

    type: Literal["alpha", "dirac0", "density"] = constants.MEASURE_ALPHA
    alpha: float = 0.0
    family: Literal["gamma", "uniform", "half_normal"] = "gamma"
    shape: float = 1.0
    rate: float = 2.0
    scale: float = 1.0
    cutoff: Optional[float] = None

    @model_validator(mode="after")
    def check_parameters(self):
        if self.type == constants.MEASURE_ALPHA and not self.alpha > -1:
            raise ValueError(f"alpha must be > -1, got {self.alpha}")
        if self.type == constants.MEASURE_DENSITY:
            if self.cutoff is None or self.cutoff <= 0:
                raise ValueError("density measures need a positive cutoff")
            if self.family == "gamma" and (self.shape <= 0 or self.rate <= 0):
                raise ValueError("gamma density needs shape > 0 and rate > 0")
            if self.family in ("uniform", "half_normal") and self.scale <= 0:
                raise ValueError(f"{self.family} density needs scale > 0")
        return self


class SamplerSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    primes: Optional[int] = Field(default=None, ge=1)
    samples: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    domain: Literal["torus", "polydisk"] = "torus"


class SuiteConfig(BaseModel):
    """
    Windows, tolerances and trial counts of the verification suites.
    Defaults reproduce the acceptance scale.
    """
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=20240101, ge=0, lt=2**64)
    samples: int = 100_000
    # identities
    binomial_max_n: int = 40
    binomial_degree: int = 300
    alternating_max: int = 60
    divisor_max_m: int = 6
    divisor_max_n: int = 100_000
    zeta_power_n: int = 2_000
    # asymptotics
    divisor_n: int = constants.DIVISOR_N
    euler_p_max: int = constants.EULER_P_MAX
    divisor_ms: List[int] = [1, 2, 3]
    divisor_sigmas: List[float] = [0.505, 0.51, 0.75, 1.0]
    # S(sigma) (2 sigma - 1)^{m^2} / gamma_m must lie within 1 +- band at divisor_ratio_sigma
    divisor_ratio_sigma: float = 0.505
    divisor_ratio_band: Dict[int, float] = {1: 0.1, 2: 0.1, 3: 0.2}
    divisor_cross_sigmas: List[float] = [0.8, 0.9, 1.0]
    zeta_power_window: Tuple[float, float] = (0.501, 0.53)
    zeta_power_tol: Dict[int, float] = {1: 0.02, 2: 0.05}
    blowup_window: Tuple[float, float] = (0.502, 0.53)
    blowup_points: int = 8
    blowup_tol: float = 0.10
    blowup_p_max: int = 100_000
    eval_sharpness_sigma: float = 0.5005
    eval_sharpness_tol: float = 0.05
    eval_even_window: Tuple[float, float] = (0.5005, 0.505)
    eval_even_tol: float = 0.05
    eval_even_p: float = 4.0
    general_bound_window: Tuple[float, float] = (0.51, 2.0)
    general_bound_factor: float = 10.0
    general_bound_p: float = 3.0
    general_bound_points: int = 12
    dp_log_window: Tuple[float, float] = (0.501, 0.6)
    dp_log_tol: float = 0.15
    dp_power_window: Tuple[float, float] = (0.5005, 0.505)
    dp_power_tol: float = 0.10
    disk_radii: List[float] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99]
    disk_constant: float = 10.0
    disk_ps: List[float] = [1.0, 2.0, 3.0]
    fit_residual_max: float = 0.05
    fit_points: int = 8
    # littlewood-paley
    lp_alphas: List[float] = [0.0, 1.0]
    lp_n_max: int = 1000
    lp_n_points: int = 25
    lp_tol: float = 1e-8
    lp_b2_tol: float = 1e-10
    # multipliers
    multiplier_j_max: int = 10_000
    multiplier_a_list: List[float] = [0.02, 0.04, 0.06, 0.08, 0.1]
    multiplier_coef_tol: float = 0.03
    # embeddings and coefficients
    contraction_trials: int = 1000
    contraction_max_degree: int = 200
    embedding_trials: int = 100
    embedding_ps: List[float] = [1.0, 1.5, 2.0]
    embedding_max_degree: int = 30
    coefficient_trials: int = 200
    coefficient_ps: List[float] = [1.0, 1.5, 3.0, 4.0]
    coefficient_max_degree: int = 30
    embedding_samples: int = 20_000
    contraction_alpha: float = 0.0
    coefficient_samples: int = 20_000
    mc_samples: int = 1_000_000
    t_epsilon_samples: int = 4_096
    decay_ns: List[int] = [10, 100, 1_000, 10_000, 100_000]
    eval_lower_sigma: float = 0.8
    eval_lower_n: int = 10_000
    eval_lower_fraction: float = 0.9
    polydisk_sigmas: List[float] = [0.6, 1.0]
    polydisk_p_max: int = 100_000
    polydisk_tol: float = 0.05
    mc_polynomials: int = 50
    t_epsilon_list: List[float] = [0.25, 0.5, 1.0]
    t_epsilon_trials: int = 200
    t_epsilon_max_degree: int = 500
    t_epsilon_growth: float = 0.25
    witness_sigmas: List[float] = [0.6, 1.0]
    witness_prime_bound: int = 100_000
    witness_max_exponent: int = 40
    witness_fraction: float = 0.9
    annexe_sigmas: List[float] = [0.6, 0.75, 1.0]
    annexe_ps: List[float] = [2.0, 4.0]
    annexe_n: int = 2_000


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Optional[str] = None
    space: Optional[str] = None
    p: float = 2.0
    sigma: Optional[float] = None
    s: Optional[Tuple[float, float]] = None
    w: Optional[Tuple[float, float]] = None
    z: Optional[Tuple[float, float]] = None
    sigma_min: float = 0.51
    sigma_max: float = 2.0
    points: int = 50
    N: int = constants.KERNEL_N
    poly: Optional[str] = None
    poly_file: Optional[str] = None
    eta_points: int = constants.ETA_GRID_SIZE
    suite: Optional[str] = None
    output: Optional[str] = None
    output_type: Literal["json", "csv"] = "json"
    input: Optional[str] = None
    measure: MeasureConfig = MeasureConfig()
    sampler: SamplerSettings = SamplerSettings()
    suites: SuiteConfig = SuiteConfig()

    @field_validator("p")
    @classmethod
    def check_p(cls, value):
        if not value >= 1:
            raise ValueError(f"p must be >= 1, got {value}")
        return value

    @field_validator("points", "N", "eta_points")
    @classmethod
    def check_positive(cls, value):
        if value < 1:
            raise ValueError(f"expected a positive integer, got {value}")
        return value

    def complex_s(self) -> complex:
        if self.s is not None:
            return complex(*self.s)
        if self.sigma is not None:
            return complex(self.sigma, 0.0)
        raise ConfigError("one of --sigma or --s is required")


def load_config_file(path: Optional[str]) -> dict:
    if not path:
        return {}
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        data = json.loads(config_path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def build_run_config(flags: dict, config_path: Optional[str] = None) -> RunConfig:
    """
    Merge defaults, config file and flags (flags win). Flags set to None are treated
    as absent so that argparse defaults never shadow the config file.
    """
    file_values = load_config_file(config_path)
    flag_values = {}
    for key, value in flags.items():
        if value is None:
            continue
        if isinstance(value, dict):
            value = {k: v for k, v in value.items() if v is not None}
            if not value:
                continue
        flag_values[key] = value
    merged = _merge(file_values, flag_values)
    logger.debug(f"Effective config keys: {sorted(merged)}")
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}")
