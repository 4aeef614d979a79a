import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgrowth.grid import (
    GrayImage,
    LabelMap,
    Mask,
    PgmFormatError,
    SeedEncodingError,
    WeightMap,
    decode_labelmap,
    encode_labelmap,
    image_to_mask,
    load_pgm,
    mask_to_image,
    pgm_bytes,
    pgm_from_bytes,
    save_pgm,
)


def test_load_pgm_basic_header(tmp_path):
    raw = b"P5\n3 2\n255\n" + bytes([1, 2, 3, 4, 5, 6])
    p = tmp_path / "a.pgm"
    p.write_bytes(raw)
    img = load_pgm(p)
    assert img.rows == 2 and img.cols == 3
    assert img.max_representable == 255
    assert img.pixels.tolist() == [[1, 2, 3], [4, 5, 6]]


def test_load_pgm_16bit_big_endian(tmp_path):
    samples = np.array([[256, 65535], [0, 513]], dtype=">u2")
    raw = b"P5\n2 2\n65535\n" + samples.tobytes()
    p = tmp_path / "w.pgm"
    p.write_bytes(raw)
    img = load_pgm(p)
    assert img.max_representable == 65535
    assert img.pixels.tolist() == [[256, 65535], [0, 513]]


def test_load_pgm_truncated_body_names_offset(tmp_path):
    p = tmp_path / "t.pgm"
    p.write_bytes(b"P5\n3 2\n255\n" + bytes([1, 2, 3]))
    with pytest.raises(PgmFormatError, match=r"unexpected end of pixel data at byte 14"):
        load_pgm(p)


def test_load_pgm_bad_magic(tmp_path):
    p = tmp_path / "m.pgm"
    p.write_bytes(b"P2\n1 1\n255\n0")
    with pytest.raises(PgmFormatError, match="byte 0"):
        load_pgm(p)


@pytest.mark.parametrize("maxval", [0, 65536, 100000])
def test_load_pgm_bad_maxval(tmp_path, maxval):
    p = tmp_path / "v.pgm"
    p.write_bytes(f"P5\n1 1\n{maxval}\n".encode() + b"\0\0\0")
    with pytest.raises(PgmFormatError, match="maxval"):
        load_pgm(p)


def test_load_pgm_comments_allowed(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# a comment\n2 1\n255\n\x08\x09")
    img = load_pgm(p)
    assert img.pixels.tolist() == [[8, 9]]


def test_save_pgm_single_pixel(tmp_path):
    img = GrayImage(np.array([[0]], dtype=np.int32), max_representable=255)
    p = tmp_path / "one.pgm"
    save_pgm(img, p)
    assert p.read_bytes() == b"P5\n1 1\n255\n\x00"


def test_save_pgm_io_error():
    img = GrayImage(np.array([[0]], dtype=np.int32))
    with pytest.raises(OSError):
        save_pgm(img, "/nonexistent-dir/x.pgm")


@settings(max_examples=50, deadline=None)
@given(
    rows=st.integers(1, 12),
    cols=st.integers(1, 12),
    maxval=st.sampled_from([1, 7, 255, 256, 65535]),
    seed=st.integers(0, 2**31),
)
def test_pgm_round_trip_property(rows, cols, maxval, seed):
    rng = np.random.default_rng(seed)
    img = GrayImage(rng.integers(0, maxval + 1, size=(rows, cols)).astype(np.int32), maxval)
    again = pgm_from_bytes(pgm_bytes(img))
    assert again == img


def test_pgm_file_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    img = GrayImage(rng.integers(0, 300, size=(5, 7)).astype(np.int32), max_representable=1000)
    p = tmp_path / "rt.pgm"
    save_pgm(img, p)
    assert load_pgm(p) == img


def test_label_encoding_round_trip():
    rng = np.random.default_rng(3)
    labels = LabelMap(rng.choice([-1, 0, 1], size=(9, 4)).astype(np.int8))
    img = encode_labelmap(labels)
    assert set(np.unique(img.pixels)) <= {0, 128, 255}
    assert decode_labelmap(img) == labels


def test_label_encoding_fixed_values():
    labels = LabelMap(np.array([[0, -1, 1]], dtype=np.int8))
    img = encode_labelmap(labels)
    assert img.pixels.tolist() == [[0, 128, 255]]
    assert decode_labelmap(encode_labelmap(LabelMap.unlabelled(2, 2))).seed_count() == 0


def test_decode_rejects_stray_value():
    img = GrayImage(np.array([[0, 7]], dtype=np.int32))
    with pytest.raises(SeedEncodingError, match=r"invalid seed encoding at \(0,1\)"):
        decode_labelmap(img)


def test_row_major_addressing_convention():
    # the byte at flat offset i*cols+j in a PGM body is pixel (i, j)
    arr = np.zeros((4, 5), dtype=np.int32)
    arr[2, 3] = 200
    body = pgm_bytes(GrayImage(arr))[len(b"P5\n5 4\n255\n") :]
    assert body[2 * 5 + 3] == 200
    assert sum(body) == 200


def test_grids_are_immutable():
    img = GrayImage(np.array([[1, 2]], dtype=np.int32))
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 5
    m = Mask(np.array([[True, False]]))
    with pytest.raises(ValueError):
        m.bits[0, 0] = False


def test_validation_errors():
    with pytest.raises(ValueError):
        GrayImage(np.array([[-1]], dtype=np.int32))
    with pytest.raises(ValueError):
        GrayImage(np.array([[300]], dtype=np.int32), max_representable=255)
    with pytest.raises(ValueError):
        LabelMap(np.array([[2]], dtype=np.int8))
    with pytest.raises(ValueError):
        WeightMap(np.array([[1.5]]))


def test_mask_image_round_trip():
    m = Mask(np.array([[True, False], [False, True]]))
    assert image_to_mask(mask_to_image(m)) == m
