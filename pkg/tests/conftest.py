import numpy as np
import pytest

from lopmpm.instance import GeneratorSpec, LopInstance, generate_instance, parse_instance

TINY3_TEXT = "3\n0 1 2\n3 0 4\n5 6 0\n"

_acceptance_lines = []


def record_criterion(label: str, passed: bool, detail: str = "", status: str = "") -> None:
    status = status or ("PASS" if passed else "FAIL")
    _acceptance_lines.append(f"{status}  {label}" + (f"  ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def tiny3() -> LopInstance:
    return parse_instance(TINY3_TEXT, name="tiny3")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_instance(rng, n, low=0, high=100) -> LopInstance:
    return generate_instance(GeneratorSpec(n=n, weight_low=low, weight_high=high,
                                           seed=int(rng.integers(2**63))))


def symmetric_instance(rng, n) -> LopInstance:
    w = rng.integers(-50, 50, size=(n, n))
    return LopInstance("sym", w + w.T)
