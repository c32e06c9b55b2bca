from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from morerep.distributions import BINARY, Distribution, EvaluationSpace  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


def distributions(n: int | None = None, min_size: int = 2, max_size: int = 6):
    """Hypothesis strategy for valid distributions on generic spaces."""

    @st.composite
    def build(draw):
        size = n if n is not None else draw(st.integers(min_size, max_size))
        raw = draw(
            st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=size, max_size=size).filter(
                lambda v: sum(v) > 1e-3
            )
        )
        total = sum(raw)
        return Distribution(EvaluationSpace.of_size(size), tuple(v / total for v in raw))

    return build()


def binary(p_good: float) -> Distribution:
    return Distribution(BINARY, (1.0 - p_good, p_good))


# -- acceptance verdicts ----------------------------------------------------

_VERDICTS: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        detail = dict(item.user_properties).get("detail", "")
        _VERDICTS.append((mark.args[0], status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, status, detail in _VERDICTS:
        terminalreporter.write_line(f"criterion {key:<3} {status}  {detail}")
