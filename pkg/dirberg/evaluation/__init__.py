from dirberg.evaluation.annexe import AnnexeComparison, annexe_compare, power_identity_gap
from dirberg.evaluation.evaluation import (
    EvalBound,
    KernelSum,
    bergman_disk_kernel_norm,
    bp_kernel_witness,
    disk_dirichlet_eval_bound,
    disk_eval_bound,
    eta_grid,
    eval_bound_ap_even,
    eval_bound_ap_general,
    eval_bound_ap_zero,
    eval_bound_dp,
    eval_lower_ap,
    eval_norm_a2,
    eval_norm_bp,
    eval_norm_hp,
    eval_norm_polydisk,
    kernel_a2,
    kernel_bp,
)
from dirberg.evaluation.zeta import log_weighted_zeta, zeta, zeta_minus_one, zeta_prime
