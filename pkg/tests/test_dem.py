import io
import json

import numpy as np
import pytest
from PIL import Image

from orthocover.dem import (DEMFormatError, grid_from_json, heightfield_from_json, heightfield_to_json,
                            load_dem, parse_pgm, write_pgm)
from orthocover.terrain import HeightField


def _png(arr, mode):
    buf = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def test_constant_pgm():
    hf = load_dem(b"P2\n3 3\n255\n" + b"128 " * 9)
    assert hf.elevations.shape == (3, 3)
    assert np.all(hf.elevations == 128.0)


def test_identity_read_binary():
    data = b"P5\n2 2\n255\n" + bytes([0, 255, 0, 255])
    np.testing.assert_array_equal(load_dem(data).elevations, [[0, 255], [0, 255]])


def test_pgm_comments_and_ascii():
    data = b"P2\n# made by hand\n3 2 # width height\n255\n1 2 3\n4 5 6\n"
    np.testing.assert_array_equal(parse_pgm(data), [[1, 2, 3], [4, 5, 6]])


@pytest.mark.parametrize("payload", [
    b"P7\n2 2\n255\n0000",
    b"P2\n2 x\n255\n1 2 3 4",
    b"P2\n0 2\n255\n",
    b"P2\n2 2\n65535\n1 2 3 4",
    b"P5\n2 2\n255\n\x00\x01",
    b"P2\n2 2\n255\n1 2 3",
    b"P2\n2 2\n100\n1 2 3 200",
    b"",
    b"GIF89a",
])
def test_malformed_inputs(payload):
    with pytest.raises(DEMFormatError):
        load_dem(payload)


def test_png_gray_and_rgb():
    gray = (np.arange(20, dtype=np.uint8) * 10).reshape(4, 5)
    np.testing.assert_array_equal(load_dem(_png(gray, "L")).elevations, gray)
    red = np.zeros((10, 10, 3), dtype=np.uint8)
    red[..., 0] = 255
    hf = load_dem(_png(red, "RGB"))
    assert hf.elevations.shape == (10, 10)
    np.testing.assert_allclose(hf.elevations, 0.299 * 255)


def test_png_16bit_rejected():
    arr = np.full((3, 3), 1000, dtype=np.uint16)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    with pytest.raises(DEMFormatError):
        load_dem(buf.getvalue())


def test_pgm_round_trip(tmp_path):
    grid = np.array([[0, 17, 255], [300, -4, 128.4]])
    for binary in (True, False):
        back = load_dem(write_pgm(grid, binary=binary)).elevations
        np.testing.assert_array_equal(back, [[0, 17, 255], [255, 0, 128]])
    path = tmp_path / "g.pgm"
    path.write_bytes(write_pgm(grid))
    assert load_dem(str(path)).rows == 2


def test_json_round_trip():
    hf = HeightField(np.arange(6.0).reshape(2, 3), spacing=(0.5, 0.25), origin=(1.0, 2.0))
    obj = json.loads(json.dumps(heightfield_to_json(hf)))
    assert obj["rows"] == 2 and obj["cols"] == 3 and obj["data"] == [0, 1, 2, 3, 4, 5]
    back = heightfield_from_json(obj)
    np.testing.assert_array_equal(back.elevations, hf.elevations)
    assert back.spacing == hf.spacing and back.origin == hf.origin
    with pytest.raises(ValueError):
        grid_from_json({"rows": 2, "cols": 2, "data": [1, 2, 3]})
