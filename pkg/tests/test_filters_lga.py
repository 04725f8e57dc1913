import numpy as np
import pytest

from printproof.core import load_image
from printproof.errors import ImageTooSmall
from printproof.filters import LgaParams, lga_map

from conftest import png_bytes


def _ramp_image(step_per_col, w=32, h=16):
    """Blue channel rises left to right; red/green flat."""
    arr = np.zeros((h, w, 3), dtype=np.uint8)
    arr[:, :, 2] = (np.arange(w) * step_per_col).clip(0, 255).astype(np.uint8)
    return load_image(png_bytes(arr))


def test_constant_image_uniform_half():
    arr = np.full((8, 8, 3), 77, dtype=np.uint8)
    amap = lga_map(load_image(png_bytes(arr)))
    assert amap.channels == 3
    assert np.all(amap.values[:, :, 0] == 0.5)
    assert np.all(amap.values[:, :, 1] == 0.5)
    assert np.all(amap.values[:, :, 2] == 0.0)


def test_horizontal_ramp_positive_gx():
    amap = lga_map(_ramp_image(4), LgaParams(normalized=True))
    interior = amap.values[2:-2, 2:-2]
    assert np.all(interior[:, :, 0] > 0.5)
    assert np.allclose(interior[:, :, 1], 0.5, atol=1e-9)


def test_ramp_slope_doubling_doubles_gx():
    # with normalization off, the red offset from 0.5 is linear in the slope
    p = LgaParams(intensity=10, normalized=False)
    shallow = lga_map(_ramp_image(2), p).values[4, 8, 0] - 0.5
    steep = lga_map(_ramp_image(4), p).values[4, 8, 0] - 0.5
    assert steep == pytest.approx(2.0 * shallow, rel=1e-9)
    # and the Sobel response on a ramp is 8x the per-pixel step
    step = 2 / 255
    assert shallow == pytest.approx(0.1 * 4.0 * 8.0 * step, rel=1e-9)


def test_defaults_match_shipped_configuration():
    p = LgaParams()
    assert (p.intensity, p.channel, p.normalized) == (95, "blue", True)
    amap = lga_map(_ramp_image(3), p)
    assert amap.params_digest == LgaParams(95, "blue", True).digest()


def test_normalized_keeps_values_in_bounds():
    rng = np.random.default_rng(70)
    arr = rng.integers(0, 256, (30, 40, 3), dtype=np.uint8)
    amap = lga_map(load_image(png_bytes(arr)))
    assert amap.values.min() >= 0.0
    assert amap.values.max() <= 1.0


def test_too_small_image():
    arr = np.zeros((2, 5, 3), dtype=np.uint8)
    with pytest.raises(ImageTooSmall):
        lga_map(load_image(png_bytes(arr)))
