"""Exception hierarchy shared by all modules.

Every error that carries a witness stores it on ``.witness`` so reports can
serialize the offending elements.
"""


class PeifferError(Exception):
    """Base class for all library errors."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BadSpec(PeifferError):
    """Malformed structured input (tables, generators, structure constants)."""


class AxiomViolation(PeifferError):
    """An algebraic axiom failed (associativity, inverses, Jacobi, ...)."""


class CapExceeded(PeifferError):
    """A construction would exceed the configured order / dimension cap."""


class AmbientMismatch(PeifferError):
    """Operands live over different ambient objects."""


class NotNormal(PeifferError):
    """Subobject is not normal (not conjugation-stable / not an ideal)."""


class ActionInvalid(PeifferError):
    """Action table fails validation."""


class NotEquivariant(PeifferError):
    """Boundary or morphism is not equivariant; witness is an offending pair."""


class InvalidMorphism(PeifferError):
    """A structure map fails the over-base or homomorphism conditions."""


class StabilityViolation(PeifferError):
    """A carrier expected to be action-stable is not."""


class NotSurjective(PeifferError):
    """A map required to be surjective misses part of its codomain."""


class NotCommuting(PeifferError):
    """The four maps of a square do not commute."""


class NotDouble(PeifferError):
    """Comparison map to the pullback is not surjective; witness not hit."""


class NotCentral(PeifferError):
    """Operation requires a central extension."""


class NotShortExact(PeifferError):
    """The given pair of maps is not a short exact sequence."""


class NonzeroBoundary(PeifferError):
    """Submodule was required to have zero boundary."""


class UnknownProperty(PeifferError):
    """verify was asked for a property name that is not registered."""
