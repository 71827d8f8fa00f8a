from dirberg.measures.measures import (
    AlphaMeasure,
    Density,
    DiracAtZero,
    MeasureSpec,
    QuadratureResult,
    bergman_weight,
    bergman_weight_quadrature,
    beta_h,
    density,
    gamma_density,
    half_normal_density,
    integrate,
    integrate_with_error,
    laguerre_rule,
    mass_below,
    measure_from_config,
    quadrature_rule,
    tilde_weight,
    uniform_density,
)
from dirberg.measures.weights import WeightSequence, weight_sequence
