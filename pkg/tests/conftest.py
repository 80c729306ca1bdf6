"""Shared test configuration: a deterministic hypothesis profile so the
suite produces the same verdicts on every run."""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "deterministic",
    derandomize=True,
    deadline=None,
    max_examples=80,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")
