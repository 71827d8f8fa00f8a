from dirberg.dirichlet_poly.polynomial import (
    Character,
    DirichletPolynomial,
    MultiPolynomial,
    bohr_drop,
    bohr_lift,
    derivative,
    dilate,
    evaluate,
    evaluate_lift,
    exponent_matrix,
    from_json,
    log_table,
    multiply,
    power,
    required_primes,
    to_json,
    translate,
    twist,
    vertical_translate,
)
