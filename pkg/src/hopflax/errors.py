"""Exception types shared across the package."""


class HopfLaxError(Exception):
    """Base class for every error raised by hopflax."""


class EmptyWindow(HopfLaxError):
    """A series operation produced a truncation window with no known exponent."""


class WindowTooNarrow(HopfLaxError):
    """The truncation window cannot support the requested computation."""


class NotHolomorphic(HopfLaxError):
    """Evaluation at zero was requested for a series with a pole part."""


class UnitComponent(HopfLaxError):
    """The reduced coproduct was applied to an element with an empty-forest term."""


class NotHomogeneous(HopfLaxError):
    """An infinitesimal character is supported on more than one degree."""


class NotLocal(HopfLaxError):
    """A character failed the locality test where locality is required."""


class ShiftOutOfWindow(HopfLaxError):
    """A lambda-shift moved a value outside the window needed downstream."""


class ResourceCap(HopfLaxError):
    """An enumeration exceeded its configured size cap."""


class CutoffMismatch(HopfLaxError):
    """Two double-algebra elements were built at different degree cutoffs."""
