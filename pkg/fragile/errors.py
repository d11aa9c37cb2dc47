"""Exception types raised by the fragile package."""


class MalformedOperatorError(ValueError):
    pass


class ZeroBetaError(ZeroDivisionError):
    pass


class ChainTooShortError(ValueError):
    pass


class SiteNotInGeometryError(KeyError):
    pass


class EmptyCloudError(ValueError):
    pass


class SingularPotentialError(ArithmeticError):
    pass


class NearSpectrumError(ArithmeticError):
    """The shifted operator is (numerically) singular at this frequency."""

    def __init__(self, message, rcond=None):
        super().__init__(message)
        self.rcond = rcond


class FitWindowError(ValueError):
    pass


class BranchPointError(ValueError):
    pass


class NoEquienergySolutionError(ValueError):
    pass


class OnSpectrumError(ArithmeticError):
    pass


class InvalidCertificateError(ValueError):
    pass


class StepSizeError(ValueError):
    pass


class AmplitudeUnderflowError(ArithmeticError):
    pass


class ConfigError(ValueError):
    """Configuration failed validation. `diagnostics` lists every finding."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = [str(d) for d in self.diagnostics]
        super().__init__("Invalid config:\n  " + "\n  ".join(lines))


class ScenarioError(RuntimeError):
    pass
