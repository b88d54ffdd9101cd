"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class NotHomogeneous(InputError):
    pass


class ArityCapExceeded(InputError):
    pass


class CapExceeded(ArithmeticError):
    """A polynomial result would exceed the configured degree cap."""


class NotHamiltonian(InputError):
    pass


class PreconditionError(InputError):
    pass
