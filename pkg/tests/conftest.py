from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st
import pytest

from kdelaunay.experiments import SampleSpec, sample

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)


def points_in(d, min_size=1, max_size=6):
    return st.lists(st.tuples(*[rationals] * d), min_size=min_size, max_size=max_size,
                    unique=True)


def ball(n, d, seed):
    """Seeded uniform ball sample; rational and in general position almost surely."""
    return sample(SampleSpec("unit_ball", n, d, seed=seed))


@pytest.fixture
def triangle():
    return [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
