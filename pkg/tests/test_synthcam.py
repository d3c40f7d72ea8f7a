import numpy as np
import pytest

from conftest import BRADFORD_CAST
from mcbalance.balance import multi_color_balance_matrix, white_balance_matrix
from mcbalance.colorspace import (AdaptationModel, ColorXYZ, linear_rgb_to_xyz, srgb_decode)
from mcbalance.errors import ConfigError
from mcbalance.image import ColorSpace, Region, apply_correction, region_mean
from mcbalance.metrics import reproduction_angular_error
from mcbalance.synthcam import (CHART_COLORS, CHART_PATCHES, CHART_SRGB8, IlluminantCast, Patch,
                                PatchScene, chart_scene, render)


class TestChart:
    def test_layout(self, chart):
        assert len(chart.patches) == 24
        chart.validate()
        assert chart.width == 2 * 8 + 6 * 20 - 4
        assert chart.height == 2 * 8 + 4 * 20 - 4

    def test_copies_are_renamed(self, chart_twice):
        names = [p.region.label for p in chart_twice.patches]
        assert len(names) == len(set(names)) == 48
        assert chart_twice.patch("red_2").color == chart_twice.patch("red").color

    def test_xyz_rederived_from_srgb8(self):
        for (name, frozen), rgb8 in zip(CHART_PATCHES, CHART_SRGB8):
            xyz = linear_rgb_to_xyz(srgb_decode(np.array(rgb8) / 255.0))
            np.testing.assert_allclose(frozen, xyz, rtol=0, atol=5e-7, err_msg=name)

    def test_names_unique_and_neutral_white(self):
        names = [n for n, _ in CHART_PATCHES]
        assert len(set(names)) == 24
        w = np.array(CHART_COLORS["white"])
        assert reproduction_angular_error(w, (0.95047, 1.0, 1.08883)) < 0.02

    def test_bad_copies(self):
        with pytest.raises(ConfigError):
            chart_scene(copies=0)


class TestSceneValidation:
    def test_overlap(self):
        a = Patch(Region(0, 0, 4, 4, "a"), ColorXYZ(0.1, 0.1, 0.1))
        b = Patch(Region(3, 3, 4, 4, "b"), ColorXYZ(0.2, 0.2, 0.2))
        with pytest.raises(ConfigError, match="overlap"):
            PatchScene(10, 10, [a, b])

    def test_outside_canvas(self):
        a = Patch(Region(8, 8, 4, 4, "a"), ColorXYZ(0.1, 0.1, 0.1))
        with pytest.raises(ConfigError, match="outside"):
            PatchScene(10, 10, [a])

    def test_duplicate_name(self):
        a = Patch(Region(0, 0, 2, 2, "a"), ColorXYZ(0.1, 0.1, 0.1))
        b = Patch(Region(5, 5, 2, 2, "a"), ColorXYZ(0.1, 0.1, 0.1))
        with pytest.raises(ConfigError, match="duplicate"):
            PatchScene(10, 10, [a, b])

    def test_non_finite(self):
        a = Patch(Region(0, 0, 2, 2, "a"), ColorXYZ(np.nan, 0.1, 0.1))
        with pytest.raises(ConfigError):
            PatchScene(10, 10, [a])


class TestCast:
    def test_identity_exact(self, chart):
        img = render(chart)
        assert img.space is ColorSpace.XYZ
        for p in chart.patches:
            assert region_mean(img, p.region) == p.color

    def test_xyz_scaling(self):
        cast = IlluminantCast("xyz", (2, 1, 1))
        np.testing.assert_array_equal(cast.apply((0.3, 0.3, 0.3)), (0.6, 0.3, 0.3))

    @pytest.mark.parametrize("gains", [(0, 1, 1), (1, -1, 1), (1, 1)])
    def test_bad_gains(self, gains):
        with pytest.raises(ConfigError):
            IlluminantCast("bradford", gains)

    @pytest.mark.parametrize("model", list(AdaptationModel))
    def test_matched_white_balance_inverts(self, chart, model):
        cast = IlluminantCast(model, (1.2, 0.95, 0.8))
        img = render(chart, cast)
        white = chart.patch("white")
        m = white_balance_matrix(region_mean(img, white.region), white.color, model)
        out = apply_correction(img, m)
        for p in chart.patches:
            np.testing.assert_allclose(region_mean(out, p.region), p.color, rtol=0, atol=1e-10)

    def test_mismatched_model_leaves_chromatic_error(self, chart):
        img = render(chart, BRADFORD_CAST)
        white = chart.patch("white")
        m = white_balance_matrix(region_mean(img, white.region), white.color, "xyz")
        out = apply_correction(img, m)
        assert reproduction_angular_error(region_mean(out, white.region), white.color) < 1e-8
        errs = [reproduction_angular_error(region_mean(out, chart.patch(n).region),
                                           chart.patch(n).color) for n in ("red", "green", "blue")]
        assert max(errs) > 1e-3

    def test_multi_color_fixes_targets(self, chart):
        img = render(chart, BRADFORD_CAST)
        names = ("red", "green", "blue")
        m = multi_color_balance_matrix([region_mean(img, chart.patch(n).region) for n in names],
                                       [chart.patch(n).color for n in names])
        out = apply_correction(img, m)
        for n in names:
            p = chart.patch(n)
            assert reproduction_angular_error(region_mean(out, p.region), p.color) < 1e-8


class TestRender:
    def test_deterministic(self, chart):
        a = render(chart, BRADFORD_CAST, noise_sigma=0.01, seed=7)
        b = render(chart, BRADFORD_CAST, noise_sigma=0.01, seed=7)
        np.testing.assert_array_equal(a.pixels, b.pixels)
        c = render(chart, BRADFORD_CAST, noise_sigma=0.01, seed=8)
        assert not np.array_equal(a.pixels, c.pixels)

    def test_noise_truncated_at_zero(self, chart):
        img = render(chart, noise_sigma=0.5, seed=1)
        assert img.pixels.min() == 0.0

    def test_noise_statistics(self, chart):
        clean = render(chart)
        noisy = render(chart, noise_sigma=0.005, seed=3)
        diff = (noisy.pixels - clean.pixels)[clean.pixels > 0.05]
        assert abs(diff.mean()) < 2e-4
        assert diff.std() == pytest.approx(0.005, rel=0.05)

    def test_background(self, chart):
        img = render(chart)
        np.testing.assert_array_equal(img.pixels[0, 0], chart.background)

    def test_dtype(self, chart):
        assert render(chart, dtype=np.float32).pixels.dtype == np.float32

    def test_negative_sigma(self, chart):
        with pytest.raises(ConfigError):
            render(chart, noise_sigma=-1)
