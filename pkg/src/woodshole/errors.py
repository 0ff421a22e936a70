"""Exception hierarchy.  The CLI maps these onto exit codes."""


class WoodsHoleError(Exception):
    exit_code = 3


class InputError(WoodsHoleError, ValueError):
    """Malformed or inconsistent input data."""

    exit_code = 2


class NumericalFailure(WoodsHoleError):
    """Path tracking or refinement did not succeed."""


class NumericalIndeterminacy(NumericalFailure):
    """All components vanish numerically at the evaluation point."""


class HypothesisViolation(WoodsHoleError):
    """Input is outside the non-degenerate setting the identities require."""


class BasePointError(HypothesisViolation):
    """Candidate endomorphism has a common zero of its components."""


class NonTransversalError(HypothesisViolation):
    """A fixed point has det(I - J) numerically zero, or fixed points were missed."""


class DegenerateSingularity(HypothesisViolation):
    pass


class DicriticError(HypothesisViolation):
    pass


class ChartError(NumericalFailure):
    """Requested affine chart is unusable at the given point."""
