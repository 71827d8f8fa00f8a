from dirberg.services import constants


class DirbergError(Exception):
    exit_code = constants.EXIT_NUMERICAL


class ConfigError(DirbergError, ValueError):
    exit_code = constants.EXIT_CONFIG


class DomainError(DirbergError, ValueError):
    """Raised when an argument lies outside the domain of an operation (Re s <= 1/2, q <= 0, ...)."""
    exit_code = constants.EXIT_CONFIG


class NumericalError(DirbergError, ArithmeticError):
    exit_code = constants.EXIT_NUMERICAL


class QuadratureError(NumericalError):
    pass


class TruncationError(NumericalError):
    pass


class BudgetExceeded(NumericalError):
    pass


class DivergentTailError(NumericalError):
    pass


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, DirbergError):
        return error.exit_code
    return constants.EXIT_NUMERICAL
