import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption(
        "--longrun",
        action="store_true",
        default=False,
        help="run the multi-hour V(N) sweep to N = 5,770,001",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--longrun"):
        return
    skip = pytest.mark.skip(reason="long run; enable with --longrun")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
