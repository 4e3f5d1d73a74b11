import numpy as np
import pytest

from feeddrive.core.errors import TraceFormatError
from feeddrive.core.trace import Trace


class TestTrace:
    def test_times(self):
        tr = Trace(dt=0.5, t0=1.0, channels={"sp": [0.0, 1.0, 2.0]})
        np.testing.assert_allclose(tr.times, [1.0, 1.5, 2.0])
        assert len(tr) == 3

    def test_unequal_lengths(self):
        with pytest.raises(TraceFormatError, match="unequal lengths"):
            Trace(dt=1.0, channels={"sp": [0.0, 1.0], "sv": [0.0]})

    def test_unknown_channel(self):
        with pytest.raises(TraceFormatError, match="unknown channel"):
            Trace(dt=1.0, channels={"speed": [0.0]})

    def test_non_positive_dt(self):
        with pytest.raises(TraceFormatError):
            Trace(dt=0.0, channels={"sp": [0.0]})

    def test_missing_channel(self):
        with pytest.raises(TraceFormatError, match="no channel 'sv'"):
            Trace(dt=1.0, channels={"sp": [0.0]})["sv"]

    def test_with_channels_and_select(self):
        tr = Trace(dt=1.0, channels={"sp": [0.0, 1.0]}, units={"sp": "m"})
        tr2 = tr.with_channels({"sv": np.array([1.0, 1.0])}, {"sv": "m/s"})
        assert set(tr2.channels) == {"sp", "sv"}
        assert tr2.select(["sv"]).unit("sv") == "m/s"
        assert "sp" not in tr2.select(["sv"])

    def test_equals_is_bitwise(self):
        a = Trace(dt=1.0, channels={"sp": [0.1, 0.2]})
        b = Trace(dt=1.0, channels={"sp": [0.1, 0.2]})
        c = Trace(dt=1.0, channels={"sp": [0.1, np.nextafter(0.2, 1.0)]})
        assert a.equals(b)
        assert not a.equals(c)
