from contextlib import contextmanager

import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion.

    The context yields a list; strings appended to it are shown after the verdict.
    """

    @contextmanager
    def record(label):
        notes = []
        try:
            yield notes
        except BaseException as exc:
            _ACCEPTANCE.append(f"[FAIL] {label}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            print(_ACCEPTANCE[-1])
            raise
        _ACCEPTANCE.append(f"[PASS] {label}" + "".join(f"; {n}" for n in notes))
        print(_ACCEPTANCE[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


