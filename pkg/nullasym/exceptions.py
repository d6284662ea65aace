"""Exception hierarchy shared by the library and the command line."""


class NullAsymError(Exception):
    """Base class for all errors raised by nullasym."""


class InvalidInputError(NullAsymError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class ResolutionError(NullAsymError):
    """The requested quadrature order cannot resolve the integrand."""

    def __init__(self, message: str, required_order: int):
        super().__init__(f"{message} (required order: {required_order})")
        self.required_order = required_order


class SchemaMismatchError(NullAsymError):
    """Reports written under different schema versions were merged."""


class CaseCollisionError(NullAsymError):
    """Two merged reports carry the same case id."""

    def __init__(self, case_id: str, provenances):
        listed = ', '.join(sorted(provenances))
        super().__init__(f"case id {case_id!r} appears in several reports: {listed}")
        self.case_id = case_id
        self.provenances = tuple(sorted(provenances))


class UnknownExperimentError(NullAsymError, KeyError):
    """The runner was asked for an experiment that is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else 'unknown experiment'
