"""Exception hierarchy shared by all modules."""


class DomainFlowError(Exception):
    """Base class for every domain or solver error raised by the package."""


class DegenerateCurve(DomainFlowError):
    pass


class OutsideCollar(DomainFlowError):
    pass


class NewtonFailure(DomainFlowError):
    pass


class OrderTooHigh(DomainFlowError):
    pass


class NotInChart(DomainFlowError):
    """A domain cannot be represented in the requested chart.

    ``parameter`` carries the offending curve parameter when one is known.
    """

    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class SingularLinearization(DomainFlowError):
    pass


class OutsideDomain(DomainFlowError):
    pass


class SingularSystem(DomainFlowError):
    pass


class ChartTangency(DomainFlowError):
    pass
