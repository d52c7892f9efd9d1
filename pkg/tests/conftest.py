from __future__ import annotations

from pathlib import Path

import pytest

from sartool.catalog import Catalog, load_json_resource
from sartool.synthesizer import SynthConfig, synthesize

GOLDEN = Path(__file__).parent / "golden"
CORPUS_SIZE = 5000
CORPUS_SEED = 0


@pytest.fixture(scope="session")
def golden() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def corpus():
    """The 5,000-example corpus shared by the corpus-level checks."""
    return synthesize(SynthConfig(seed=CORPUS_SEED), CORPUS_SIZE)


@pytest.fixture(scope="session")
def small_catalog() -> Catalog:
    """Catalog restricted to button, textbox and text2speech."""
    manifest = load_json_resource("catalog.json")
    manifest["components"] = {k: manifest["components"][k] for k in ("button", "textbox", "text2speech")}
    return Catalog(manifest)


SPEAK_IT_NL = ('make an app with a textbox, a button named "Speak", and a text2speech; '
               "when the button is clicked, speak the textbox")
SPEAK_IT_SAR = ("<complist> <textbox> <button> string0 </button> <text2speech> </complist> "
                "<code> <button1_clicked> <speak> <textbox1text> </speak> </button1_clicked> </code>")


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = "PASS" if report.outcome == "passed" else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"{_criteria[name]:5}  {name}")
