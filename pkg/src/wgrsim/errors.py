"""Exception types shared across the package."""


class WgrsimError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(WgrsimError):
    """A parameter or configuration value violates its constraints."""


class BandEdgeError(WgrsimError):
    """Frequency at or beyond the propagating band edge, where sin(k) -> 0."""


class PoleError(WgrsimError):
    """Evaluation requested exactly at a resonator pole of the effective potential."""


class LayoutError(WgrsimError):
    """Lattice layout is inconsistent with the system parameters."""


class GeometryError(WgrsimError):
    """An initial state does not fit on the requested lattice."""


class ToleranceError(WgrsimError):
    """A numerical accuracy contract was violated during propagation."""


class SingularError(WgrsimError):
    """Dense resolvent inversion failed."""


class ParseError(WgrsimError):
    """A run configuration document is malformed."""
