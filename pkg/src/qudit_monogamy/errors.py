"""Exception types raised across the package."""


class EntanglementError(ValueError):
    """Base class for numerical-contract violations."""


class InvalidStateError(EntanglementError):
    """Amplitudes or matrices that do not describe a valid state."""


class NotPSDError(EntanglementError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class MalformedStateFileError(InvalidStateError):
    """A state file that cannot be parsed into amplitudes at all."""
