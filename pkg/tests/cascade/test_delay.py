import pytest

from feeddrive.cascade.delay import DelayLine, delay_steps


class TestDelaySteps:
    def test_nine_ms(self):
        assert delay_steps(0.009, 25e-6) == 360

    def test_zero(self):
        assert delay_steps(0.0, 25e-6) == 0

    @pytest.mark.parametrize("delay", [0.00901, -25e-6])
    def test_rejects_non_multiples(self, delay):
        with pytest.raises(ValueError):
            delay_steps(delay, 25e-6)


class TestDelayLine:
    def test_transport_delay(self):
        line = DelayLine(3, initial=-1.0)
        assert [line.push(v) for v in (1.0, 2.0, 3.0, 4.0, 5.0)] == [-1.0, -1.0, -1.0, 1.0, 2.0]
        assert len(line) == 3

    def test_zero_length_passes_through(self):
        line = DelayLine(0)
        assert line.push(7.0) == 7.0
