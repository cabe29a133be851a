"""Shared exception types for the findim package."""

from __future__ import annotations


class FindimError(Exception):
    """Base class for all package-specific errors."""


#### exact linear algebra ##############################################


class DimensionMismatch(FindimError):
    """Shapes of matrices/vectors are incompatible for the operation."""


class UnsupportedField(FindimError):
    """The operation is not available over the ambient field."""


#### algebras ##########################################################


class NotIdempotent(FindimError):
    """The supplied element does not satisfy e*e = e."""


class DegreeCapExceeded(FindimError):
    """Path-degree reduction did not stabilize below the degree cap."""


class NonHomogeneousRelation(FindimError):
    """A quiver relation is not a homogeneous admissible combination."""


#### modules and morphisms #############################################


class AlgebraMismatch(FindimError):
    """Modules/morphisms live over different algebras."""


class NotComposable(FindimError):
    """Morphism composition with mismatched endpoints."""


class IndexOutOfRange(FindimError):
    """An idempotent/vertex index is out of range."""


class RadicalUnavailable(FindimError):
    """A radical-dependent operation was requested but no radical exists."""


class DecompositionInconclusive(FindimError):
    """No splitting endomorphism was found but locality is not certified."""


class NonSplitEnd(FindimError):
    """An endomorphism ring has a division quotient larger than the field."""


#### homological algebra ###############################################


class NotGenerated(FindimError):
    """The target is not generated by the approximant (sequence not exact)."""


class NotInjective(FindimError):
    """The reference module of a relative dominant dimension is not injective."""


class CornerUnavailable(FindimError):
    """No idempotent cuts out the projective-injective corner (dm = 0)."""


class Inconclusive(FindimError):
    """A cap was hit before the computation could decide."""


class OutOfRange(FindimError):
    """Canonical tilting index outside 1..dm(A)."""


class NotBB(FindimError):
    """The supplied module cannot define a BB-tilting module."""


class NotAddExact(FindimError):
    """The three-term sequence is not add(M)-exact."""


class ClosureFailure(FindimError):
    """Internal consistency failure: a block product left its subspace."""


class NotSelfInjective(FindimError):
    """The construction requires a self-injective algebra."""


class ProjectiveSummand(FindimError):
    """The module must not contain nonzero projective direct summands."""


#### CLI ###############################################################


class MalformedInput(FindimError):
    """An input file could not be parsed/validated; carries a location hint."""
