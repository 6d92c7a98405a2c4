"""Exception types shared across the package.

Scope errors (inputs outside what v1 handles) are distinguished from
internal/precision errors so the CLI can map them to exit codes.
"""


class PadicHeightsError(Exception):
    """Base class for all package errors."""


class ScopeError(PadicHeightsError):
    """The request is valid mathematics but outside the supported scope."""


# -- p-adic arithmetic ------------------------------------------------------

class PrecisionExhausted(PadicHeightsError):
    """An operation needed significant digits that are no longer available."""


class DivisionByZero(PadicHeightsError, ZeroDivisionError):
    """Inversion of a value that is zero to working precision."""


class NotAUnit(PadicHeightsError):
    """A unit (valuation zero) was required."""


class OutOfConvergenceDomain(PadicHeightsError):
    """Series argument outside its p-adic convergence domain."""


# -- polynomials and series -------------------------------------------------

class DivisionByNonUnitLeading(PadicHeightsError):
    """Polynomial division by a divisor whose leading coefficient is not invertible."""


class NonComposable(PadicHeightsError):
    """Series composition requires the inner series to have positive lowest exponent."""


class NonInvertible(PadicHeightsError):
    """Series inversion requires an invertible lowest coefficient."""


# -- curves, divisors, reduction --------------------------------------------

class BadReduction(ScopeError):
    """The curve does not have good reduction at the requested prime."""


class BadReductionAtQ(ScopeError):
    """Intersection data requested at a prime of bad reduction."""


class BadIntegrality(ScopeError):
    """Point coordinates are not p-integral (and the point is not infinity)."""


class UnsupportedSupport(ScopeError):
    """Divisor support outside scope: non-rational or odd Weierstrass configuration."""


class SingularAtCenter(PadicHeightsError):
    """Local expansion requested at a pole of the differential."""


# -- integration ------------------------------------------------------------

class DifferentDisks(PadicHeightsError):
    """Tiny integral endpoints must lie in one residue disk."""


class EndpointAtPole(PadicHeightsError):
    """Integration endpoint coincides with a pole of the integrand."""


class SingularDiskEndpoint(ScopeError):
    """Integration endpoint reduces into a singular disk of the integrand."""


# -- cohomology -------------------------------------------------------------

class NotOrdinary(ScopeError):
    """Unit-root subspace undefined: reduction is not ordinary to working precision."""


class DegenerateInput(PadicHeightsError):
    """A subspace failed a required complementarity/rank condition."""


# -- heights ----------------------------------------------------------------

class OverlappingSupport(ScopeError):
    """Height divisors must have disjoint supports."""


class SupportsCollideModP(ScopeError):
    """Divisor supports meet modulo p (v1 requires disjoint reductions)."""


class BadPrimeContact(ScopeError):
    """Supports meet at a prime of bad reduction; needs a regular model (out of scope)."""


class NotClassCharacter(PadicHeightsError):
    """Character data violates the idele class relations over Q."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnramifiedAtP(PadicHeightsError):
    """The character is unramified at p (t = 0), which the pairing forbids."""
