import pytest


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" not in props or rep.when != "call":
                continue
            lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL",
                          props.get("measured", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, measured in sorted(lines):
        suffix = f"  ({measured})" if measured else ""
        terminalreporter.write_line(f"[{verdict}] {label}{suffix}")


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test; call ``.measured(text)`` to attach values."""

    class _Tag:
        def __init__(self):
            self.label = None

        def __call__(self, label):
            self.label = label
            record_property("criterion", label)
            return self

        def measured(self, text):
            record_property("measured", text)

    return _Tag()
