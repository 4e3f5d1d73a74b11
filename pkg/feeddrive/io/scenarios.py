import json
from importlib import resources
from pathlib import Path

from pydantic import ValidationError

from feeddrive.core.errors import ScenarioError
from feeddrive.engine.scenario import SCENARIO_FORMAT_VERSION, Scenario


SCENARIO_SUFFIX = ".json"


def _bundled_dir():
    return resources.files("feeddrive") / "data" / "scenarios"


def list_scenarios() -> list[str]:
    return sorted(p.name.removesuffix(SCENARIO_SUFFIX) for p in _bundled_dir().iterdir() if p.name.endswith(SCENARIO_SUFFIX))


def parse_scenario(text: str, source: str = "<string>", source_dir: str | None = None) -> Scenario:
    try:
        scenario = Scenario.model_validate_json(text)
    except ValidationError as e:
        raise ScenarioError(f"{source}: invalid scenario\n{e}") from e
    if scenario.format_version != SCENARIO_FORMAT_VERSION:
        raise ScenarioError(f"{source}: unsupported format_version {scenario.format_version}")
    return scenario.model_copy(update={"source_dir": source_dir})


def load_scenario(name_or_path: str | Path) -> Scenario:
    """Load a scenario file, or a bundled scenario by name.

    Relative files named inside the scenario (sampled paths, RST exports,
    profiles) resolve against the scenario's directory.
    """
    candidate = Path(name_or_path)
    if candidate.is_file():
        return parse_scenario(candidate.read_text(encoding="utf-8"), str(candidate), str(candidate.resolve().parent))
    name = str(name_or_path).removesuffix(SCENARIO_SUFFIX)
    bundled = _bundled_dir() / f"{name}{SCENARIO_SUFFIX}"
    if not bundled.is_file():
        raise ScenarioError(f"no scenario file or bundled scenario named '{name_or_path}' (bundled: {', '.join(list_scenarios())})")
    return parse_scenario(bundled.read_text(encoding="utf-8"), f"bundled:{name}", str(Path(str(bundled)).parent))


def save_scenario(scenario: Scenario, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(scenario.model_dump(mode="json"), indent=2) + "\n", encoding="utf-8")
    return path
