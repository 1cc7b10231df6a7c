"""Exception types shared across the toolkit.

Every domain error raised by the library is a subclass of OrbcatError, so
callers (in particular the CLI) can distinguish domain failures from bugs.
"""


class OrbcatError(Exception):
    """Base class for all domain errors."""


class CapExceeded(OrbcatError):
    """Group closure grew past the configured order cap."""


class RingMismatch(OrbcatError):
    """Operation applied to a matrix over the wrong ring."""


class NotAComplex(OrbcatError):
    """Consecutive differentials do not compose to zero."""


class ObjectMismatch(OrbcatError):
    """Attempt to compose morphisms whose endpoints do not match."""


class NotASubgroup(OrbcatError):
    """Expected a subgroup relation that does not hold."""


class IsotropyNotInFamily(OrbcatError):
    """Equivariant cell has an isotropy group outside the chosen family."""


class FunctorNotAdditive(OrbcatError):
    """A functor's morphism table violates composition or identities."""


class NotBijective(OrbcatError):
    """Data does not describe a bijection of the ray set."""


class InfiniteOrder(OrbcatError):
    """Operation requires a finite-order element."""


class FiniteOrder(OrbcatError):
    """Operation requires an infinite-order element."""


class NotNormalised(OrbcatError):
    """Virtually cyclic input data is not normalised as required."""
