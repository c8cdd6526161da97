"""Exception types shared across the toolkit."""


class FramekitError(Exception):
    """Base class for all toolkit errors."""


class NotSquare(FramekitError):
    pass


class NotHermitian(FramekitError):
    pass


class NotPSD(FramekitError):
    pass


class IllConditionedSplit(FramekitError):
    """Core and nilpotent spectra are too close to separate reliably."""


class DimensionMismatch(FramekitError):
    pass


class BlockOutsideSubspace(FramekitError):
    pass


class NotAFusionFrame(FramekitError):
    pass


class LocalVectorOutsideSubspace(FramekitError):
    pass


class DeficientLocalFrame(FramekitError):
    """A local frame fails to span its subspace with a positive lower bound."""


class OracleMismatch(FramekitError):
    """Closed-form value and the independent bisection oracle disagree."""


class HypothesisFailed(FramekitError):
    """A checker hypothesis does not hold on the given instance."""

    def __init__(self, clause, residual=None):
        self.clause = clause
        self.residual = residual
        msg = clause if residual is None else f"{clause} (residual {residual:.6e})"
        super().__init__(msg)


class AdmissibilityFailed(HypothesisFailed):
    """Constants fall outside a checker's admissibility window."""


class ZeroDrazin(HypothesisFailed):
    """The Drazin inverse is zero, so the derived bounds are vacuous."""


class InvalidConfig(FramekitError):
    pass
