import json
import logging
from importlib import resources
from pathlib import Path

from pydantic import ValidationError

from feeddrive.core.errors import ProfileError
from feeddrive.core.parameters import DEFAULT_PLANT_STEP, MachineProfile, require_valid


logger = logging.getLogger(__name__)

PROFILE_SUFFIX = ".json"


def _bundled_dir():
    return resources.files("feeddrive") / "data" / "profiles"


def list_profiles() -> list[str]:
    return sorted(p.name.removesuffix(PROFILE_SUFFIX) for p in _bundled_dir().iterdir() if p.name.endswith(PROFILE_SUFFIX))


def parse_profile(text: str, source: str = "<string>") -> MachineProfile:
    try:
        return MachineProfile.model_validate_json(text)
    except ValidationError as e:
        raise ProfileError(f"{source}: invalid machine profile\n{e}") from e


def load_profile(name_or_path: str | Path, base_dir: str | Path | None = None, validate: bool = True, plant_step: float = DEFAULT_PLANT_STEP) -> MachineProfile:
    """Load a bundled profile by name, or a profile file by path."""
    candidate = Path(name_or_path)
    if base_dir is not None and not candidate.is_absolute() and (Path(base_dir) / candidate).is_file():
        candidate = Path(base_dir) / candidate
    if candidate.is_file():
        text, source = candidate.read_text(encoding="utf-8"), str(candidate)
    else:
        bundled = _bundled_dir() / f"{name_or_path}{PROFILE_SUFFIX}"
        if not bundled.is_file():
            raise ProfileError(f"no profile file or bundled profile named '{name_or_path}' (bundled: {', '.join(list_profiles())})")
        text, source = bundled.read_text(encoding="utf-8"), f"bundled:{name_or_path}"
    profile = parse_profile(text, source)
    if validate:
        for axis in profile.axes.values():
            require_valid(axis, plant_step)
    return profile


def save_profile(profile: MachineProfile, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(profile.model_dump(mode="json"), indent=2) + "\n", encoding="utf-8")
    return path


def profile_rows(profile: MachineProfile) -> tuple[list[str], list[list[str]]]:
    """(axis names, rows of [field, value per axis]) with numbers printed as stored."""
    axes = list(profile.axes)
    dumps = {a: profile.axes[a].model_dump(mode="json") for a in axes}
    fields: list[str] = []
    for dump in dumps.values():
        for key, value in dump.items():
            names = [f"{key}.{sub}" for sub in value] if isinstance(value, dict) else [key]
            fields += [n for n in names if n not in fields]

    def cell(dump: dict, field: str) -> str:
        value = dump
        for part in field.split("."):
            value = value.get(part) if isinstance(value, dict) else None
        if value is None:
            return "-"
        return repr(value) if isinstance(value, float) else str(value)

    return axes, [[f] + [cell(dumps[a], f) for a in axes] for f in fields]
