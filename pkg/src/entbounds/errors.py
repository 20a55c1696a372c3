"""Exception hierarchy shared by all modules."""


class EntBoundsError(Exception):
    """Base class for errors raised by this package."""


class InvalidSpectrum(EntBoundsError, ValueError):
    pass


class InvalidParameter(EntBoundsError, ValueError):
    pass


class InvalidState(EntBoundsError, ValueError):
    pass


class EntanglementOutOfRange(EntBoundsError, ValueError):
    """Requested entanglement lies outside ``[0, ln N_A]``."""


class DegenerateRegime(EntBoundsError):
    """Entanglement is at or below ``ln d`` where the bound is flat and no
    inverse temperature exists."""


class SolverFailure(EntBoundsError, RuntimeError):
    pass
