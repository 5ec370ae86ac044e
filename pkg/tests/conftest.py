from importlib import resources
from pathlib import Path

import pytest

from attrcat.signature import parse_signature

DATA = Path(str(resources.files("attrcat") / "data"))


def read(name: str) -> str:
    return (DATA / name).read_text()


def named_terms() -> dict[str, str]:
    out = {}
    for line in read("robot_ball.terms").splitlines():
        line = line.split("#", 1)[0].strip()
        if line and not line.split(":", 1)[1].strip().startswith("@"):
            name, term = line.split(":", 1)
            out[name.strip()] = term.strip()
    return out


@pytest.fixture(scope="session")
def sig():
    return parse_signature(read("robot_ball.attr"))


@pytest.fixture(scope="session")
def terms():
    return named_terms()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("[", 1)[1].split("]", 1)[0])):
            terminalreporter.write_line(line)
