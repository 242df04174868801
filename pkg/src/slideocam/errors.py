"""Exception hierarchy.

Every error carries the name of the module that raised it so the CLI can
report where a run failed.
"""


class SlideOCamError(Exception):
    module = "slideocam"


class ValidationError(SlideOCamError, ValueError):
    """A parameter or config value is out of its allowed range."""

    module = "validation"

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class SingularityError(SlideOCamError, ZeroDivisionError):
    """eta = e/p sits on 1/(2*pi), where the profile coefficients blow up."""

    module = "cam-core"


class DomainError(SlideOCamError, ValueError):
    module = "cam-core"


class FrameMismatchError(SlideOCamError, ValueError):
    module = "cam-core"


class DegenerateSpeedError(SlideOCamError, ArithmeticError):
    module = "cam-core"


class NoRootInBracket(SlideOCamError, ArithmeticError):
    module = "geometry-solver"


class ClosureFailure(SlideOCamError, ArithmeticError):
    module = "geometry-solver"


class DegeneratePolyline(SlideOCamError, ValueError):
    module = "geometry-solver"


class PreconditionError(SlideOCamError, ValueError):
    module = "analysis"


class ConfigError(SlideOCamError, ValueError):
    """Malformed config text. ``line``/``column`` are 1-based when known."""

    module = "export-io"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
