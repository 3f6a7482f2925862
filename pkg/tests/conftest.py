import json
from pathlib import Path

import pytest

from coexist_sim.cli import load_scenario
from coexist_sim.profiles import default_attenuation_profile, default_raman_profile
from coexist_sim.schemas import DetectorModel, ThermalEnvironment

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


@pytest.fixture
def paper_plan_path() -> Path:
    return SCENARIOS / "paper_plan.json"


@pytest.fixture
def desk_path() -> Path:
    return SCENARIOS / "desk_scenario.json"


@pytest.fixture
def desk(desk_path):
    return load_scenario(desk_path)


@pytest.fixture
def raman_profile():
    return default_raman_profile(profile_dir="")


@pytest.fixture
def attenuation():
    return default_attenuation_profile(profile_dir="")


@pytest.fixture
def room():
    return ThermalEnvironment(temperature_k=293.0)


@pytest.fixture
def detector():
    return DetectorModel(gate_rate_hz=1e8, gate_width_s=1e-9, efficiency=0.1, dark_rate_cps=100.0)


@pytest.fixture
def write_doc(tmp_path):
    """Write a scenario dict to a temp file and return the path as str."""

    def _write(doc, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc, indent=2))
        return str(path)

    return _write


@pytest.fixture
def moved_quantum_doc(paper_plan_path):
    doc = json.loads(paper_plan_path.read_text())
    for ch in doc["plan"]["channels"]:
        if ch["role"] == "quantum":
            ch["center_thz"] = 228.849205  # 1310 nm
    doc["link"]["elements"][-1]["center_thz"] = 228.849205
    return doc
