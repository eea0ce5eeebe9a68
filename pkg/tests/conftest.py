import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from packview import PacketParams, SpatialGrid

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def bec():
    """The reference two-packet setup: d=2, beta=0.1, phi=0, hbar=m=1."""
    return PacketParams(beta=0.1, d=2.0, phi=0.0)


@pytest.fixture
def wide_grid():
    return SpatialGrid(-80.0, 80.0, 8192)


@pytest.fixture
def grid():
    return SpatialGrid(-40.0, 40.0, 8192)


@pytest.fixture
def report(request):
    """Record one verdict line for the acceptance summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def add(label, ok, detail):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
