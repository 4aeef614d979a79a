import base64
import copy

import numpy as np
import pytest
from fastapi.testclient import TestClient

from bgrowth.grid import GrayImage, LabelMap, encode_labelmap, pgm_bytes, pgm_from_bytes
from bgrowth.seedgen import PhantomSpec, generate_phantom, sloppy_seeds
from bgrowth.server import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def b64_image(arr, maxrep=255):
    return base64.b64encode(pgm_bytes(GrayImage(np.asarray(arr, dtype=np.int32), maxrep))).decode()


def b64_labels(arr):
    return base64.b64encode(pgm_bytes(encode_labelmap(LabelMap(np.asarray(arr, dtype=np.int8))))).decode()


def decode_labels_payload(payload):
    from bgrowth.grid import decode_labelmap

    return decode_labelmap(pgm_from_bytes(base64.b64decode(payload)))


@pytest.fixture
def uniform_request():
    seeds = np.zeros((3, 3), dtype=np.int8)
    seeds[1, 1] = 1
    return {
        "image": b64_image(np.full((3, 3), 7)),
        "seeds": b64_labels(seeds),
        "method": "bgrowth",
    }


def test_health(client):
    r = client.get("/api/health")
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == "ok"
    assert "version" in body


def test_segment_uniform_all_foreground(client, uniform_request):
    r = client.post("/api/segment", json=uniform_request)
    assert r.status_code == 200
    body = r.json()
    labels = decode_labels_payload(body["labels"])
    assert (labels.labels == 1).all()
    assert body["iterations_run"] >= 1
    assert "metrics" not in body
    assert "trace" not in body


def test_segment_with_gt_returns_metrics(client, uniform_request):
    req = dict(uniform_request)
    req["gt"] = b64_image(np.full((3, 3), 255))
    r = client.post("/api/segment", json=req)
    assert r.status_code == 200
    m = r.json()["metrics"]
    assert m["jaccard"] == 1.0
    assert m["method"] == "bgrowth"
    assert set(m) >= {"accuracy", "jaccard", "dice", "precision", "recall", "f_measure"}


def test_segment_trace_capped_and_decodable(client):
    case = generate_phantom(PhantomSpec(rows=32, cols=32, rng_seed=6))
    seeds = sloppy_seeds(case.gt, 0.5, 4)
    req = {
        "image": base64.b64encode(pgm_bytes(case.image)).decode(),
        "seeds": base64.b64encode(pgm_bytes(encode_labelmap(seeds))).decode(),
        "method": "bgrowth",
        "trace": True,
        "max_iters": 30,
    }
    r = client.post("/api/segment", json=req)
    assert r.status_code == 200
    trace = r.json()["trace"]
    assert 1 <= len(trace) <= 64
    assert trace[-1]["iteration"] == r.json()["iterations_run"]
    for entry in trace:
        decode_labels_payload(entry["labels"])


def test_segment_dimension_mismatch_400(client, uniform_request):
    req = dict(uniform_request)
    req["seeds"] = b64_labels(np.zeros((2, 2), dtype=np.int8))
    r = client.post("/api/segment", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == "dimension_mismatch"


def test_segment_no_seeds_400(client, uniform_request):
    req = dict(uniform_request)
    req["seeds"] = b64_labels(np.zeros((3, 3), dtype=np.int8))
    r = client.post("/api/segment", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == "no_seeds"
    req.pop("seeds")
    r = client.post("/api/segment", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == "no_seeds"


def test_segment_bad_encoding_400(client, uniform_request):
    req = dict(uniform_request)
    req["image"] = "!!!not-base64!!!"
    assert client.post("/api/segment", json=req).json()["error"] == "bad_base64"
    req["image"] = base64.b64encode(b"P5 broken").decode()
    r = client.post("/api/segment", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == "bad_pgm"


def test_segment_bad_seed_values_400(client, uniform_request):
    req = dict(uniform_request)
    req["seeds"] = b64_image(np.full((3, 3), 7))  # 7 is not a seed value
    r = client.post("/api/segment", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == "bad_seed_encoding"


def test_segment_unknown_method_400(client, uniform_request):
    req = dict(uniform_request)
    req["method"] = "magic"
    r = client.post("/api/segment", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == "unknown_method"


def test_pixel_budget_413():
    tiny = TestClient(create_app(pixel_budget=8))
    seeds = np.zeros((3, 3), dtype=np.int8)
    seeds[0, 0] = 1
    req = {"image": b64_image(np.zeros((3, 3))), "seeds": b64_labels(seeds)}
    r = tiny.post("/api/segment", json=req)
    assert r.status_code == 413
    assert r.json()["error"] == "pixel_budget_exceeded"
    assert tiny.get("/api/phantom", params={"rows": 64, "cols": 64}).status_code == 413


def test_segment_otsu_without_seeds_ok(client):
    arr = np.zeros((4, 4), dtype=np.int32)
    arr[:, 2:] = 255
    r = client.post("/api/segment", json={"image": b64_image(arr), "method": "otsu"})
    assert r.status_code == 200
    labels = decode_labels_payload(r.json()["labels"])
    assert (labels.labels[:, 2:] == 1).all()
    assert r.json()["iterations_run"] == 0


def test_segment_idempotent_modulo_elapsed(client, uniform_request):
    a = client.post("/api/segment", json=uniform_request).json()
    b = client.post("/api/segment", json=uniform_request).json()
    a.pop("elapsed_s")
    b.pop("elapsed_s")
    assert a == b


def test_phantom_deterministic_payload(client):
    q = {"rng_seed": 12, "rows": 40, "cols": 40}
    a = client.get("/api/phantom", params=q)
    b = client.get("/api/phantom", params=q)
    assert a.status_code == 200
    assert a.content == b.content  # byte-identical
    body = a.json()
    img = pgm_from_bytes(base64.b64decode(body["image"]))
    assert (img.rows, img.cols) == (40, 40)
    decode_labels_payload(body["seeds"])


def test_phantom_negative_sigma_400(client):
    r = client.get("/api/phantom", params={"noise_sigma": -2})
    assert r.status_code == 400
    assert r.json()["error"] == "bad_phantom_spec"


def test_malformed_body_400(client):
    r = client.post("/api/segment", json={"method": "bgrowth"})  # image missing
    assert r.status_code == 400
    assert r.json()["error"] == "invalid_request"
