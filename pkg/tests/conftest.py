import pytest

from splitsync.core import Automaton, Symbol

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record(criterion: int, status: str, detail: str = "") -> None:
    _ACCEPTANCE[criterion] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status}" + (f"  {detail}" if detail else ""))


def intro_automaton() -> Automaton:
    a = Symbol.from_sets([[1, 3], [2], [1]])
    b = Symbol.from_sets([[2], [1], [2, 3]])
    return Automaton(3, [a, b], ["a", "b"])


@pytest.fixture
def intro() -> Automaton:
    return intro_automaton()
