"""Exception hierarchy.

Library code raises these; only ``cli.main`` turns them into exit codes.
"""


class ConifoldError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(ConifoldError, ValueError):
    """Shapes or ambient dimensions do not fit together."""


class SchemaError(ConifoldError, ValueError):
    """Malformed JSON / YAML input."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NotSquareError(DimensionError):
    pass


class NotNilpotentError(ConifoldError, ValueError):
    pass


class NotUnipotentError(ConifoldError, ValueError):
    pass


class SingularMatrixError(ConifoldError, ValueError):
    pass


class PresentationError(ConifoldError, ValueError):
    """Block relations of an extension presentation are violated."""


class InvalidZigZagError(ConifoldError, ValueError):
    """A tuple failed the complex / exactness checks.

    ``report`` is the :class:`conifold.zigzag.ValidationReport` that failed.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid zig-zag, failing positions: {', '.join(report.failures)}")


class OutOfScopeError(ConifoldError, NotImplementedError):
    pass


class InvalidMorphismError(ConifoldError, ValueError):
    """Four maps that do not commute with the zig-zag structure maps."""
