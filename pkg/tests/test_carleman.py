import numpy as np
import pytest

from azarin.carleman import (CarlemanTransform, RealMeasure,
                             carleman_bound_report, spectrum_jump_scan)

LEBESGUE = RealMeasure(pieces=((None, None, 1.0, 0.0),))


class TestValue:
    def test_lebesgue_closed_form(self):
        ct = CarlemanTransform(LEBESGUE)
        for x in np.linspace(-5.0, 5.0, 7):
            for y in (0.1, 1.0, 4.0, -0.1, -2.0):
                z = complex(x, y)
                assert abs(ct.value(z) - 1j / z) < 1e-10

    def test_lebesgue_quadrature_oracle(self):
        # independent coarse Riemann check of the damped integral
        ct = CarlemanTransform(LEBESGUE)
        z = 0.7 + 0.9j
        ts = np.linspace(0.0, 60.0, 600001)
        riemann = np.trapezoid(np.exp(1j * ts * z), ts)
        assert abs(ct.value(z) - riemann) < 1e-6

    def test_halved_atom_at_origin(self):
        ct = CarlemanTransform(RealMeasure(atoms=((0.0, 1.0),)))
        assert ct.value(2.0 + 1.0j) == pytest.approx(0.5)
        assert ct.value(2.0 - 1.0j) == pytest.approx(-0.5)

    def test_linearity(self):
        a = RealMeasure(pieces=((None, None, 1.0, 0.0),))
        b = RealMeasure(atoms=((1.0, 2.0),))
        both = RealMeasure(atoms=((1.0, 2.0),), pieces=((None, None, 1.0, 0.0),))
        z = 0.3 + 0.5j
        assert CarlemanTransform(both).value(z) == pytest.approx(
            CarlemanTransform(a).value(z) + CarlemanTransform(b).value(z))

    def test_real_axis_rejected(self):
        with pytest.raises(ValueError):
            CarlemanTransform(LEBESGUE).value(1.0 + 0.0j)


class TestBound:
    def test_lebesgue_within_unit_bound(self):
        rep = carleman_bound_report(CarlemanTransform(LEBESGUE), 1.0)
        assert rep.passed

    def test_atom_at_origin_within_bound(self):
        ct = CarlemanTransform(RealMeasure(atoms=((0.0, 1.0),)))
        rep = carleman_bound_report(ct, 1.0)
        assert rep.passed
        assert rep.max_ratio <= 0.5

    def test_declared_constant_too_small_fails(self):
        ct = CarlemanTransform(RealMeasure(pieces=((None, None, 3.0, 0.0),)))
        rep = carleman_bound_report(ct, 1.0)
        assert not rep.passed


class TestJumpScan:
    def test_lebesgue_flags_origin_only(self):
        rep = spectrum_jump_scan(CarlemanTransform(LEBESGUE), (-1.0, 1.0))
        assert rep.flagged == (0.0,)

    def test_oscillatory_measure_flags_frequency(self):
        ct = CarlemanTransform(RealMeasure(pieces=((None, None, 1.0, -3.0),)))
        rep = spectrum_jump_scan(ct, (2.0, 4.0))
        assert len(rep.flagged) >= 1
        assert all(abs(x - 3.0) <= 0.05 for x in rep.flagged)

    def test_zero_measure_flags_nothing(self):
        rep = spectrum_jump_scan(CarlemanTransform(RealMeasure()), (-1.0, 1.0))
        assert rep.flagged == ()
