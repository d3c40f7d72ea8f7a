import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcbalance.colorspace import (D65, SRGB_TO_XYZ, AdaptationModel, adaptation_basis,
                                  linear_rgb_to_xyz, srgb_decode, srgb_encode, xyz_to_lab,
                                  xyz_to_linear_rgb)
from mcbalance.errors import DomainError


class TestSrgbTransfer:
    def test_fixed_points(self):
        np.testing.assert_array_equal(srgb_decode((0, 0, 0)), [0, 0, 0])
        np.testing.assert_array_equal(srgb_decode((1, 1, 1)), [1, 1, 1])
        np.testing.assert_array_equal(srgb_encode((0, 0, 0)), [0, 0, 0])

    def test_mid_gray(self):
        # ((0.5 + 0.055) / 1.055) ** 2.4 evaluated by hand
        np.testing.assert_allclose(srgb_decode((0.5, 0.5, 0.5)), [0.21404114048223255] * 3,
                                   rtol=0, atol=1e-15)
        np.testing.assert_allclose(srgb_decode((0.5, 0.5, 0.5)), [0.21404] * 3, atol=5e-6)

    def test_linear_segment(self):
        assert srgb_decode((0.04, 0.04045, 0.02))[0] == pytest.approx(0.04 / 12.92)
        assert srgb_decode((0.04, 0.04045, 0.02))[1] == pytest.approx(0.04045 / 12.92)

    def test_segments_meet_at_threshold(self):
        lo = 0.04045 / 12.92
        hi = ((0.04045 + 0.055) / 1.055) ** 2.4
        assert abs(lo - hi) < 1e-7

    @pytest.mark.parametrize("bad", [(-0.01, 0, 0), (0, 1.0001, 0), (math.nan, 0, 0)])
    def test_decode_domain(self, bad):
        with pytest.raises(DomainError):
            srgb_decode(bad)

    def test_encode_clamps(self):
        out = srgb_encode((-0.2, 0.5, 1.3))
        assert out[0] == 0.0
        assert out[1] == srgb_encode((0.5, 0.5, 0.5))[1]
        assert out[2] == 1.0

    def test_round_trip_grid(self):
        v = np.linspace(0.0, 1.0, 3001)
        trip = np.stack([v, v[::-1], v], axis=-1)
        np.testing.assert_allclose(srgb_encode(srgb_decode(trip)), trip, rtol=0, atol=1e-9)

    @pytest.mark.parametrize("v", [round(0.1 * i, 1) for i in range(11)])
    def test_round_trip_tenths(self, v):
        assert srgb_encode(srgb_decode((v, v, v)))[0] == pytest.approx(v, abs=1e-9)


class TestRgbXyz:
    def test_white_is_d65(self):
        np.testing.assert_allclose(linear_rgb_to_xyz((1, 1, 1)), [0.95047, 1.0, 1.08883],
                                   atol=5e-4)
        # second table: the 7-decimal matrix row sums
        np.testing.assert_allclose(linear_rgb_to_xyz((1, 1, 1)),
                                   [0.9504700, 1.0000001, 1.0888300], atol=5e-4)

    def test_black(self):
        np.testing.assert_array_equal(linear_rgb_to_xyz((0, 0, 0)), [0, 0, 0])
        np.testing.assert_array_equal(xyz_to_linear_rgb((0, 0, 0)), [0, 0, 0])

    def test_d65_to_white(self):
        np.testing.assert_allclose(xyz_to_linear_rgb(D65), [1, 1, 1], atol=5e-4)

    def test_inverse_pair(self, rng):
        v = rng.uniform(-0.5, 1.5, size=(1000, 3))
        np.testing.assert_allclose(xyz_to_linear_rgb(linear_rgb_to_xyz(v)), v, rtol=0, atol=1e-9)

    def test_out_of_gamut_passes_through(self):
        # near-monochromatic 520 nm: x~0.074, y~0.834
        x, y = 0.0743, 0.8338
        rgb = xyz_to_linear_rgb((x / y, 1.0, (1 - x - y) / y))
        assert rgb.min() < 0.0

    def test_matrix_is_four_decimal(self):
        np.testing.assert_array_equal(np.round(SRGB_TO_XYZ, 4), SRGB_TO_XYZ)


class TestAdaptationBasis:
    def test_bradford_literal(self):
        np.testing.assert_array_equal(adaptation_basis("bradford"), [
            [0.8951, 0.2664, -0.1614],
            [-0.7502, 1.7135, 0.0367],
            [0.0389, -0.0685, 1.0296],
        ])

    def test_xyz_scaling_identity(self):
        np.testing.assert_array_equal(adaptation_basis(AdaptationModel.XYZ_SCALING), np.eye(3))

    def test_von_kries_hpe(self):
        m = adaptation_basis("vonkries")
        np.testing.assert_array_equal(m[2], [0, 0, 0.91822])
        # the D65-normalized form sends D65 to unit cone response
        np.testing.assert_allclose(m @ np.array(D65), [1.0, 1.0, 1.0], atol=5e-4)

    @pytest.mark.parametrize("model", list(AdaptationModel))
    def test_inverse(self, model):
        np.testing.assert_allclose(model.basis @ model.basis_inverse, np.eye(3), rtol=0,
                                   atol=1e-12)

    def test_parse(self):
        assert AdaptationModel.parse("von-kries") is AdaptationModel.VON_KRIES
        assert AdaptationModel.parse("XYZ") is AdaptationModel.XYZ_SCALING
        with pytest.raises(ValueError):
            AdaptationModel.parse("cat02")

    def test_basis_is_a_copy(self):
        AdaptationModel.BRADFORD.basis[0, 0] = 99.0
        assert AdaptationModel.BRADFORD.basis[0, 0] == 0.8951


class TestLab:
    def test_white(self):
        np.testing.assert_allclose(xyz_to_lab(D65), [100, 0, 0], atol=1e-12)
        np.testing.assert_allclose(xyz_to_lab((0.5, 0.6, 0.7), white=(0.5, 0.6, 0.7)),
                                   [100, 0, 0], atol=1e-12)

    def test_black(self):
        np.testing.assert_allclose(xyz_to_lab((0, 0, 0)), [0, 0, 0], atol=1e-12)

    def test_textbook_value(self):
        # scalar evaluation of f(t) per channel, D65 white
        np.testing.assert_allclose(xyz_to_lab((0.2, 0.3, 0.4)),
                                   [61.65422220953167, -37.32133643640634, -9.353076097916624],
                                   rtol=1e-12)

    def test_linear_branch(self):
        y = 0.5 * (6 / 29) ** 3
        lab = xyz_to_lab((D65.x * y, y, D65.z * y))
        assert lab[0] == pytest.approx(116 * (y / (3 * (6 / 29) ** 2) + 4 / 29) - 16)
        assert lab[0] == pytest.approx(903.2963 * y, rel=1e-4)

    @pytest.mark.parametrize("white", [(0, 1, 1), (1, -1, 1)])
    def test_bad_white(self, white):
        with pytest.raises(DomainError):
            xyz_to_lab((0.2, 0.2, 0.2), white=white)

    @given(st.lists(st.integers(0, 200_000), min_size=2, max_size=30, unique=True))
    def test_monotone_in_y_for_neutrals(self, steps):
        ys = np.sort(np.array(steps)) / 100_000
        neutrals = ys[:, None] * np.array(D65)
        lightness = xyz_to_lab(neutrals)[:, 0]
        assert np.all(np.diff(lightness) > 0)
