import numpy as np
import pytest
from PIL import Image
import io

from printproof.core import (
    compute_hash,
    extract_channel,
    load_image,
    make_map,
    map_to_png,
    nearest_rank_percentile,
    normalize_map,
    raster_to_png,
)
from printproof.errors import CorruptStream, InvalidPercentile, UnsupportedFormat

from conftest import png_bytes

# published SHA-256 test vectors
SHA256_EMPTY = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
SHA256_ABC = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_hash_vectors():
    assert compute_hash(b"").digest == SHA256_EMPTY
    assert compute_hash(b"abc").digest == SHA256_ABC


def test_hash_deterministic():
    payload = b"\x00\x01\x02printproof"
    assert compute_hash(payload) == compute_hash(payload)


def test_load_minimal_png():
    arr = np.full((1, 1, 3), 255, dtype=np.uint8)
    img = load_image(png_bytes(arr))
    assert (img.width, img.height) == (1, 1)
    assert img.pixels[0, 0].tolist() == [255, 255, 255]
    assert img.source_format == "png"


def test_load_jpeg_dimensions(jpeg_634x821):
    img = load_image(jpeg_634x821)
    assert (img.width, img.height) == (634, 821)
    assert img.source_format == "jpeg"


def test_load_unknown_magic():
    with pytest.raises(UnsupportedFormat):
        load_image(b"GIF89a not supported")


def test_load_truncated_jpeg():
    with pytest.raises(CorruptStream):
        load_image(b"\xff\xd8")


def test_load_truncated_mid_stream(small_jpeg):
    with pytest.raises(CorruptStream):
        load_image(small_jpeg[: len(small_jpeg) // 2])


def test_png_roundtrip_lossless():
    rng = np.random.default_rng(0)
    arr = rng.integers(0, 256, (37, 53, 3), dtype=np.uint8)
    img = load_image(png_bytes(arr))
    again = load_image(raster_to_png(img))
    assert np.array_equal(img.pixels, again.pixels)


def test_extract_channel_pure_blue():
    arr = np.zeros((4, 5, 3), dtype=np.uint8)
    arr[:, :, 2] = 255
    img = load_image(png_bytes(arr))
    assert np.all(extract_channel(img, "blue") == 1.0)
    assert np.all(extract_channel(img, "red") == 0.0)


def test_extract_channel_luminance_gray():
    arr = np.full((3, 3, 3), 128, dtype=np.uint8)
    img = load_image(png_bytes(arr))
    lum = extract_channel(img, "luminance")
    assert np.all(lum == 128 / 255)
    assert lum[0, 0] == pytest.approx(0.50196, abs=1e-5)


def test_luminance_achromatic_exact_everywhere():
    arr = np.repeat(np.arange(256, dtype=np.uint8).reshape(16, 16, 1), 3, axis=2)
    img = load_image(png_bytes(arr))
    lum = extract_channel(img, "luminance")
    assert np.array_equal(lum, extract_channel(img, "red"))


def test_normalize_global_max_identity():
    out = normalize_map(np.array([[0.0, 0.5, 1.0]]), "global_max")
    assert out.tolist() == [[0.0, 0.5, 1.0]]


def test_normalize_all_zero():
    out = normalize_map(np.zeros((4, 4)), "global_max")
    assert np.all(out == 0.0)


def test_normalize_percentile_nearest_rank():
    plane = np.array([[1.0, 2.0, 3.0, 4.0, 100.0]])
    out = normalize_map(plane, "percentile", percentile=80)
    assert out.tolist() == [[0.25, 0.5, 0.75, 1.0, 1.0]]


def test_normalize_bad_percentile():
    with pytest.raises(InvalidPercentile):
        normalize_map(np.ones((2, 2)), "percentile", percentile=0)
    with pytest.raises(InvalidPercentile):
        normalize_map(np.ones((2, 2)), "percentile", percentile=101)


def test_nearest_rank_examples():
    vals = np.array([1.0, 2.0, 3.0, 4.0, 100.0])
    assert nearest_rank_percentile(vals, 80) == 4.0
    assert nearest_rank_percentile(vals, 100) == 100.0
    assert nearest_rank_percentile(vals, 1) == 1.0


def test_channel_then_normalize_stays_in_bounds():
    rng = np.random.default_rng(5)
    arr = rng.integers(0, 256, (20, 30, 3), dtype=np.uint8)
    img = load_image(png_bytes(arr))
    for channel in ("red", "green", "blue", "luminance"):
        plane = normalize_map(extract_channel(img, channel), "global_max")
        assert plane.min() >= 0.0 and plane.max() <= 1.0


def test_map_png_carries_params_text():
    plane = np.linspace(0, 1, 12).reshape(3, 4)
    m = make_map(plane, "noise", "f" * 64)
    png = map_to_png(m)
    with Image.open(io.BytesIO(png)) as im:
        assert im.text["printproof:params"] == "f" * 64
        assert im.text["printproof:kind"] == "noise"
        assert im.size == (4, 3)


def test_map_png_deterministic():
    rng = np.random.default_rng(9)
    plane = rng.random((16, 16))
    m = make_map(plane, "ela", "0" * 64)
    assert map_to_png(m) == map_to_png(m)
