import json
from pathlib import Path

from pydantic import BaseModel, ValidationError

from feeddrive.core.errors import SynthesisError
from feeddrive.gpc.synthesis import RstPolynomials


RST_FORMAT_VERSION = 1


class RstExport(BaseModel):
    format_version: int = RST_FORMAT_VERSION
    axis: str | None = None
    rst: RstPolynomials


def save_rst(rst: RstPolynomials, path: str | Path, axis: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = RstExport(axis=axis, rst=rst)
    path.write_text(json.dumps(doc.model_dump(mode="json"), indent=2) + "\n", encoding="utf-8")
    return path


def load_rst(path: str | Path) -> RstPolynomials:
    path = Path(path)
    try:
        doc = RstExport.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        raise SynthesisError(f"{path}: cannot read RST export ({e})") from e
    if doc.format_version != RST_FORMAT_VERSION:
        raise SynthesisError(f"{path}: unsupported format_version {doc.format_version}")
    s1, gap = doc.rst.static_checks()
    if abs(s1) > 1e-9 or abs(gap) > 1e-9 * max(1.0, abs(sum(doc.rst.r))):
        raise SynthesisError(f"{path}: RST export violates S(1) = 0 or T(1) = R(1)")
    return doc.rst
