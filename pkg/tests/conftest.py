import time
from dataclasses import dataclass, field

import pytest
from hypothesis import HealthCheck, settings

from j2sym import PermutationGroup, j2data, pipeline

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@dataclass
class BuiltPipeline:
    data: object
    result: object
    letters: dict
    graph: object
    report: dict
    ok: bool
    verify_seconds: float
    extra: dict = field(default_factory=dict)


@pytest.fixture(scope="session")
def built() -> BuiltPipeline:
    """The full construction and verification, run once for the session."""
    data = j2data.load_builtin()
    t0 = time.monotonic()
    result = pipeline.construct_image(data)
    report, ok = pipeline.run_verify(data, result=result)
    verify_seconds = time.monotonic() - t0
    letters = pipeline.letter_images(result)
    graph = pipeline.build_graph(result)
    return BuiltPipeline(
        data=data,
        result=result,
        letters=letters,
        graph=graph,
        report=report,
        ok=ok,
        verify_seconds=verify_seconds,
    )


@pytest.fixture(scope="session")
def control_group(built) -> PermutationGroup:
    return built.result.control
