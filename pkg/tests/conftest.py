from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title, note = ACCEPTANCE[n]
        line = f"{status} criterion {n:2d}: {title}"
        terminalreporter.write_line(line + (f" [{note}]" if note else ""))
