"""Exception hierarchy.  Everything a user can trigger with bad input derives
from :class:`InputError`, which the CLI maps to exit code 2."""


class InputError(ValueError):
    pass


class SchemaError(InputError):
    pass


class AlgebraValidationError(InputError):
    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else None
        super().__init__(f"algebra failed validation ({len(report.violations)} violations); first: {first}")


class RepresentationError(InputError):
    pass


class UnsupportedBasisError(InputError):
    pass


class ParityError(InputError):
    """An operation that needs a homogeneous element received a mixed one."""


class PreconditionError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column, self.message = line, col, message
        super().__init__(f"{message} (line {line}, column {col})")
