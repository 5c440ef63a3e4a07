"""Exception types shared across the package."""


class StructureError(ValueError):
    """Shape, dimension, or factor-structure violation."""


class NumericError(RuntimeError):
    """Numerical failure, e.g. an eigensolver that did not converge."""


class ContractError(ValueError):
    """A caller-supplied object violated its stated contract."""


class ClassificationError(RuntimeError):
    """A classification could not be decided at the requested tolerance."""
