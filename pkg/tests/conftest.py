import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# acceptance tests record (criterion, part, ok, detail); one verdict line per criterion is printed
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, part: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))


def acceptance_lines() -> list[str]:
    lines = []
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{name} {'ok' if ok else 'FAILED'} ({text})" for name, ok, text in parts)
        lines.append(f"AC{crit:<3} {verdict}  {detail}")
    return lines


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
