"""Exception hierarchy.

Model-domain problems subclass :class:`ModelDomainError` so the command line
can map them to a single exit status.
"""


class ModelDomainError(ValueError):
    """A model input lies outside the region where the model is defined.

    ``param`` names the offending parameter when there is a single one.
    """

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


class SolverError(RuntimeError):
    """A bracketing search could not proceed; the message carries diagnostics."""


class NonMonotoneCrossing(ModelDomainError):
    """The formal-minus-informal profit gap does not cross zero exactly once upward.

    ``brackets`` lists every ``(a_left, a_right)`` grid interval containing a
    sign change.
    """

    def __init__(self, brackets, message=None):
        self.brackets = [(float(lo), float(hi)) for lo, hi in brackets]
        if message is None:
            listed = ", ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in self.brackets)
            message = f"profit gap changes sign {len(self.brackets)} time(s): {listed}"
        super().__init__(message)


class NoAffectedWorkers(ModelDomainError):
    """No firm pays less than the proposed minimum wage."""


class UndefinedOwe(ModelDomainError):
    """The affected workers' average wage did not change."""


class UsageError(ValueError):
    """Bad request from the caller, e.g. an unknown sweep parameter."""


class ConfigError(ValueError):
    """Configuration file missing, unparsable, or violating a constraint."""


class SingularDesign(ModelDomainError):
    """Regression design has no variation in the regressor."""


class CensoringTooRestrictive(ModelDomainError):
    """A study simulation hit its attempt budget before publishing enough studies."""
