import os

### Runtime environment ###
# Worker threads for Monte Carlo blocks. Results do not depend on it.
THREADS = int(os.getenv("THREADS", "1"))
LOG_LEVEL = os.getenv("LOG_LEVEL", default="INFO")
# Exact even-p norms refuse products with more coefficients than this.
COEFF_BUDGET = int(float(os.getenv("DIRBERG_COEFF_BUDGET", "1e7")))
# Samples per RNG block; part of the (seed, index) -> sample key.
MC_BLOCK = int(os.getenv("DIRBERG_MC_BLOCK", "1024"))
STRICT_TAILS = os.getenv("DIRBERG_STRICT_TAILS", "true").strip().lower() in {"1", "true", "yes", "on"}

### Numerical defaults ###
ZETA_TOL = 1e-12
# Terms summed directly before the Euler-Maclaurin tail.
ZETA_TERMS = 1000
QUAD_TOL = 1e-10
MASS_TOL = 1e-8
LAGUERRE_START_NODES = 16
LAGUERRE_MAX_NODES = 512
AP_QUAD_NODES = 32
LEGENDRE_PANELS = 64
LEGENDRE_ORDER = 16
ETA_GRID_SIZE = 32
KERNEL_N = 10_000
DIVISOR_N = 1_000_000
EULER_P_MAX = 1_000_000
SUPPORTED_BOUND = 10**9

### Output ###
FLOAT_DIGITS = 17
FLOAT_FORMAT = "%.17g"
OUTPUT_TYPES = ["json", "csv"]

### Exit codes ###
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

### Measure config keys ###
MEASURE_ALPHA = "alpha"
MEASURE_DIRAC = "dirac0"
MEASURE_DENSITY = "density"

SUITES = ["identities", "asymptotics", "littlewood-paley", "multipliers", "embeddings", "coefficients"]
SPACES_NORM = ["h2", "a2", "b2", "hp", "ap", "bp", "dp", "d2"]
SPACES_EVAL = ["hp", "a2", "ap", "bp", "dp", "disk"]
SPACES_SCAN = ["hp", "a2", "ap", "bp", "dp"]
