"""Exception hierarchy.

Point indices carried by exceptions are 1-based, matching the messages and
the JSON formats. Library functions themselves take 0-based indices.
"""

from __future__ import annotations


class QmiError(Exception):
    """Base class for every error raised by this package."""


class InputError(QmiError, ValueError):
    """Invalid input data (the CLI maps these to exit code 1)."""


class ConsistencyError(QmiError, RuntimeError):
    """Two routes that must agree did not (CLI exit code 2)."""


class _Indexed(InputError):
    def __init__(self, *points: int, detail: str = ""):
        self.points = tuple(points)
        msg = f"{type(self).__name__}({', '.join(map(str, points))})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


# metric axioms
class DiagonalError(_Indexed):
    pass


class AsymmetryError(_Indexed):
    pass


class NonPositiveError(_Indexed):
    pass


class TriangleError(_Indexed):
    pass


# magic unitaries
class NotProjection(_Indexed):
    pass


class RowSum(_Indexed):
    pass


class ColSum(_Indexed):
    pass


class ShapeError(InputError):
    pass


class NonSquare(ShapeError):
    pass


class DimMismatch(ShapeError):
    pass


class LengthMismatch(ShapeError):
    pass


class PointCountMismatch(ShapeError):
    pass


class NotBijection(InputError):
    pass


class NotUnitary(InputError):
    pass


class InvalidState(InputError):
    pass


class NullConjugator(InputError):
    """The conjugating element has (numerically) zero weight in the state."""


class RelationViolation(InputError):
    def __init__(self, relation: str, residual: float):
        self.relation = relation
        self.residual = residual
        super().__init__(f"RelationViolation({relation}): residual {residual:.3e}")


class CommutativityViolation(InputError):
    def __init__(self, pair: tuple[str, str], residual: float):
        self.pair = pair
        self.residual = residual
        super().__init__(f"CommutativityViolation{pair}: residual {residual:.3e}")


class CommutationRequired(InputError):
    """A transport certificate was requested for a grid that does not commute with d."""


class InternalDisagreement(ConsistencyError):
    """The matrix-residual and quadruple criteria gave different answers."""


class Inconsistent(ConsistencyError):
    """Corroborating samples contradict the commutation verdict."""
