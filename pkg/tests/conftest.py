from hypothesis import HealthCheck, settings

settings.register_profile("htpq", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("htpq")

# PASS/FAIL lines from the acceptance suite, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
