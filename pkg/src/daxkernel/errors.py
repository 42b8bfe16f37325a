"""Exception hierarchy shared across the package."""


class DaxKernelError(Exception):
    """Base class for all errors raised by dax-kernel."""


class GroupParseError(DaxKernelError):
    """Syntax error in a presentation, word or ring-element literal.

    Carries the offset of the offending character in ``position``.
    """

    def __init__(self, message, text, position):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class UnsupportedClassError(DaxKernelError):
    """Presentation describes a group class without a decidable normal form."""


class UnknownGeneratorError(DaxKernelError):
    """A word refers to a generator the group spec does not declare."""


class SpecMismatchError(DaxKernelError):
    """Operands belong to different group specs."""


class PairingDataError(DaxKernelError):
    """Stored pairing rows are inconsistent with the group's relations."""


class ModeError(DaxKernelError):
    """Operation called in the wrong scene mode (arcs vs circles)."""


class SceneError(DaxKernelError):
    """Invalid or inconsistent scene data.  CLI exit code 2."""


class WindowOverflowError(DaxKernelError):
    """A relation or value cannot be supported on the generator window.

    CLI exit code 3.  ``offender`` holds a printable description of the
    relation that did not fit.
    """

    def __init__(self, message, offender=None):
        super().__init__(message)
        self.offender = offender
