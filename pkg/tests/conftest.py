from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from instances import load_fixture

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def _problem_fixture(name):
    @pytest.fixture(scope="session", name=name)
    def fixture():
        return load_fixture(name)

    return fixture


example1 = _problem_fixture("example1")
example2 = _problem_fixture("example2")
example3 = _problem_fixture("example3")
interrupter_chain = _problem_fixture("interrupter_chain")
ceiling_only_unique_em = _problem_fixture("ceiling_only_unique_em")
floor_only_unique_em = _problem_fixture("floor_only_unique_em")
two_student_swap = _problem_fixture("two_student_swap")
two_student_swap_relaxed = _problem_fixture("two_student_swap_relaxed")
