"""Exception and warning types shared across the package."""


class InvalidParameterError(ValueError):
    """A physical or numerical parameter is outside its valid domain."""


class ConfigError(ValueError):
    """An experiment configuration failed validation.

    Carries the full list of offending fields so a user can fix everything in
    one pass instead of replaying errors one at a time.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


class IntegrationError(RuntimeError):
    """State-vector propagation violated a hard numerical contract."""

    def __init__(self, message, step_index=None):
        self.step_index = step_index
        if step_index is not None:
            message = f"{message} (at step {step_index})"
        super().__init__(message)


class FitFailureError(RuntimeError):
    """A curve fit could not produce a usable parameter estimate."""


class ChargingLimitWarning(UserWarning):
    """Charging energy is not safely dominant over the Josephson energy.

    The two-state description of each island assumes E_C/E_J >= 10; outside
    that range results are still computed but should be treated as
    qualitative.
    """
