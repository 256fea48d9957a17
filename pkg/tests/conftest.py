import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from domainflow.charts import Chart, DomainRep
from domainflow.geometry import Circle, Ellipse

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def unit_disk():
    return DomainRep.reference(Chart.over(Circle(n=128)))


@pytest.fixture
def ellipse():
    return Ellipse(a=2.0, b=1.0, n=128)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
