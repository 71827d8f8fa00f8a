from dirberg.norms.norms import (
    a2_norm,
    ap_norm,
    b2_norm,
    bp_norm_mc,
    d2_norm,
    dirichlet_space_norm,
    even_ap_norm,
    even_bp_norm,
    even_hp_norm,
    h2_norm,
    mc_hp_norm,
    paired_estimates,
    sample_power_means,
    sampler_for,
)
from dirberg.norms.sampling import NormEstimate, SamplerConfig, sample_character
