import json

import pytest

from feeddrive.core.errors import ProfileError
from feeddrive.io import list_profiles, load_profile, parse_profile, profile_rows, save_profile


class TestProfiles:
    def test_bundled(self):
        assert "mikron_ucp710" in list_profiles()

    def test_published_values(self, profile):
        x = profile.axis("X")
        assert x.k_p == 1.5
        assert x.alpha == 0.009
        assert x.friction.i0 == 1.043

    def test_save_and_reload(self, tmp_path, profile):
        path = save_profile(profile, tmp_path / "copy.json")
        assert load_profile(path) == profile

    def test_relative_to_base_dir(self, tmp_path, profile):
        save_profile(profile, tmp_path / "machine.json")
        assert load_profile("machine.json", base_dir=tmp_path).name == profile.name

    def test_unknown_name(self):
        with pytest.raises(ProfileError, match="no profile file or bundled profile named 'nope'"):
            load_profile("nope")

    def test_invalid_json(self):
        with pytest.raises(ProfileError, match="invalid machine profile"):
            parse_profile('{"name": "x", "axes": {"X": {"name": "X"}}}', "inline")

    def test_validation_on_load(self, tmp_path, profile):
        doc = profile.model_dump(mode="json")
        doc["axes"]["X"]["t_sv"] = 0.00031
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(ProfileError):
            load_profile(path)
        assert load_profile(path, validate=False).axis("X").t_sv == 0.00031

    def test_rows_print_numbers_as_stored(self, profile):
        axes, rows = profile_rows(profile)
        assert axes[:3] == ["X", "Y", "Z"]
        by_field = {r[0]: r[1:] for r in rows}
        assert by_field["tffw"][0] == "0.002034"
        assert by_field["friction.a"][0] == "1.576"
