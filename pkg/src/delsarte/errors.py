"""Exception hierarchy.

Input problems derive from :class:`InputError`; failures that can only mean
the implementation itself is wrong derive from :class:`ImplementationFault`.
The CLI maps the two families to different exit codes.
"""


class DelsarteError(Exception):
    """Base class for every error raised by this package."""


class InputError(DelsarteError, ValueError):
    """Bad user input: malformed files, invalid parameters, axiom failures."""


class ImplementationFault(DelsarteError):
    """A proven statement failed; this falsifies the code, not the theorem."""


# scheme axioms / spectra
class SchemeAxiomError(InputError):
    pass


class NotSymmetric(SchemeAxiomError):
    pass


class DiagonalNotIdentityRelation(SchemeAxiomError):
    pass


class EmptyRelation(SchemeAxiomError):
    pass


class InconsistentIntersectionNumber(SchemeAxiomError):
    def __init__(self, i, j, k, witness, values):
        self.i, self.j, self.k, self.witness, self.values = i, j, k, witness, values
        super().__init__(
            f"p[{i}][{j}][{k}] not constant: pair {witness} gives {values[1]}, "
            f"expected {values[0]}"
        )


class NotAScheme(SchemeAxiomError):
    pass


class EigensystemNotSeparated(InputError):
    pass


class NegativeKrein(InputError):
    def __init__(self, i, j, k, value):
        self.i, self.j, self.k, self.value = i, j, k, value
        super().__init__(f"Krein number q[{i}][{j}][{k}] = {value} < 0")


class ParameterOutOfRange(InputError):
    pass


class NotPolynomialScheme(InputError):
    pass


# subsets
class EmptySubset(InputError):
    pass


class DuplicateVertex(InputError):
    pass


class VertexOutOfRange(InputError):
    pass


class SchemeTooLarge(InputError):
    pass


class SubsetTooLarge(InputError):
    pass


class NegativeDual(InputError):
    def __init__(self, j, value):
        self.j, self.value = j, value
        super().__init__(f"dual distribution entry b[{j}] = {value} < 0")


class PreconditionFailed(InputError):
    pass


class BasePointNotInSubset(InputError):
    pass


# polynomials
class RepeatedRoot(InputError):
    pass


class NotAnnihilator(InputError):
    pass


# spherical
class DimensionTooSmall(InputError):
    pass


class NegativeMoment(InputError):
    def __init__(self, k, value):
        self.k, self.value = k, value
        super().__init__(f"moment b[{k}] = {value} is negative beyond tolerance")


class InvalidPointSet(InputError):
    pass


# theorem-level failures
class TheoremViolation(ImplementationFault):
    pass


class BoundViolation(ImplementationFault):
    pass


class PositivityViolation(ImplementationFault):
    pass


class ReproductionMismatch(ImplementationFault):
    """A computed example value differs from the recorded expectation."""
