import pytest

from printproof.errors import BadProfileSignature, MissingChunk
from printproof.metadata import parse_icc

from conftest import build_icc_profile, icc_app2_chunks


def test_adobe_rgb_shaped_profile():
    summary = parse_icc(icc_app2_chunks(build_icc_profile()))
    assert summary.description == "Adobe RGB (1998)"
    assert summary.creation_datetime == "1999:06:03 00:00:00"
    assert summary.profile_cmm_type == "ADBE"
    assert summary.version == "2.1.0"
    assert summary.device_class == "Display Device Profile"
    assert summary.color_space == "RGB"
    assert summary.rendering_intent == "Perceptual"
    assert summary.white_point == pytest.approx((0.95045, 1.0, 1.08905), abs=1e-4)


def test_multichunk_reassembly():
    profile = build_icc_profile()
    summary = parse_icc(icc_app2_chunks(profile, n_chunks=3))
    assert summary.description == "Adobe RGB (1998)"


def test_header_only_profile_empty_description():
    profile = build_icc_profile()[:128] + b"\x00\x00\x00\x00"
    summary = parse_icc(icc_app2_chunks(profile))
    assert summary.description == ""


def test_missing_chunk():
    profile = build_icc_profile()
    chunks = icc_app2_chunks(profile, n_chunks=2)[:1]
    with pytest.raises(MissingChunk):
        parse_icc(chunks)


def test_bad_signature():
    profile = bytearray(build_icc_profile())
    profile[36:40] = b"nope"
    with pytest.raises(BadProfileSignature):
        parse_icc(icc_app2_chunks(bytes(profile)))
