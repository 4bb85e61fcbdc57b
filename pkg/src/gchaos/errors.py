"""Exception hierarchy shared by every module and by the CLI exit-code map."""


class GChaosError(Exception):
    """Base class for all library errors."""

    exit_code = 5


class DomainError(GChaosError, ValueError):
    """A point lies outside the domain of the map it was fed to."""

    exit_code = 3


class CompositionError(GChaosError, ValueError):
    """The range of an inner map escapes the domain of the outer map."""

    exit_code = 3


class NotInvertibleError(GChaosError, ValueError):
    """A map is not a strictly monotone surjection onto its codomain."""

    exit_code = 3


class ResourceCapError(GChaosError):
    """A configured size guard (breakpoints, ball size) was exceeded."""

    exit_code = 4


class ParseError(GChaosError, ValueError):
    """Malformed system file, certificate or report."""

    exit_code = 2


class InvalidSystemError(GChaosError, ValueError):
    """A system parsed but violates the G-space axioms."""

    exit_code = 3
