import numpy as np
import pytest

from qesextic import AnsatzParams

_ACCEPTANCE: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome; printed in the terminal summary."""
    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((number, title, bool(passed), detail))
        return bool(passed)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number:2d}. {title}" + (f"  ({detail})" if detail else ""))


def draw_params(rng: np.random.Generator, mode: str, bound: float = 2.0) -> AnsatzParams:
    """Admissible (b1, b2, b3) with |b| <= bound; PT mode uses imaginary b1, b3."""
    b1, b2, b3 = rng.uniform(-bound, bound, 3)
    unit = 1j if mode == "pt" else 1.0
    return AnsatzParams(unit * b1, b2, unit * b3)


@pytest.fixture
def rng():
    return np.random.default_rng(20001)
