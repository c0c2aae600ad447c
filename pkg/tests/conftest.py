import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def error_showcase_source() -> str:
    return (FIXTURES / "error_showcase.lp").read_text(encoding="utf-8")


@pytest.fixture
def safety_corpus() -> list:
    data = json.loads((FIXTURES / "safety_corpus.json").read_text(encoding="utf-8"))
    return data["cases"]


@pytest.fixture
def safety_deviations() -> list:
    data = json.loads((FIXTURES / "safety_deviations.json").read_text(encoding="utf-8"))
    return data["cases"]


@pytest.fixture
def multifile_dir(tmp_path) -> Path:
    target = tmp_path / "multifile"
    target.mkdir()
    for name in ("instance.lp", "encoding.lp", "ezasp.json"):
        (target / name).write_text(
            (FIXTURES / "multifile" / name).read_text(encoding="utf-8"), encoding="utf-8"
        )
    return target


def unsafe_display_names(report) -> set:
    """Unsafe variable names with anonymous ids collapsed to '_'."""
    return {("_" if name.startswith("_#") else name) for name in report.unsafe_names}
