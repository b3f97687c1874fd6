from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from embedsvc import WordVectorModel, create_app

VOCAB = {
    "alpha": [1.0, 0.0, 0.0, 0.0],
    "beta": [0.0, 1.0, 0.0, 0.0],
    "gamma": [0.0, 0.0, 1.0, 0.0],
}


def make_client(max_batch: int = 8) -> TestClient:
    import numpy as np

    vectors = {k: np.asarray(v, dtype=float) for k, v in VOCAB.items()}
    model = WordVectorModel(vectors, dim=4)
    return TestClient(create_app(model, max_batch=max_batch))


@pytest.fixture(scope="module")
def client():
    return make_client()


class TestHealth:
    def test_shape(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok", "dim": 4}


class TestEmbed:
    def test_happy_path_preserves_order(self, client):
        response = client.post("/embed", json={"texts": ["beta", "alpha"]})
        assert response.status_code == 200
        body = response.json()
        assert body["provider_id"] == "wordvec-d4"
        assert body["dim"] == 4
        assert body["vectors"] == [[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]

    def test_empty_batch_still_reports_identity(self, client):
        # The engine probes identity with an empty batch; it must round-trip.
        response = client.post("/embed", json={"texts": []})
        assert response.status_code == 200
        body = response.json()
        assert body["vectors"] == []
        assert body["provider_id"] == "wordvec-d4"
        assert body["dim"] == 4

    def test_empty_string_embeds_to_zero_vector(self, client):
        response = client.post("/embed", json={"texts": [""]})
        assert response.json()["vectors"] == [[0.0, 0.0, 0.0, 0.0]]

    def test_batch_at_the_cap_passes(self):
        client = make_client(max_batch=3)
        response = client.post("/embed", json={"texts": ["alpha"] * 3})
        assert response.status_code == 200

    def test_batch_over_the_cap_is_413(self):
        client = make_client(max_batch=3)
        response = client.post("/embed", json={"texts": ["alpha"] * 4})
        assert response.status_code == 413
        assert "limit of 3" in response.json()["detail"]

    @pytest.mark.parametrize("raw", [b"{nope", b"\xff\xfe{}", b""])
    def test_unreadable_body_is_400(self, client, raw):
        response = client.post("/embed", content=raw, headers={"content-type": "application/json"})
        assert response.status_code == 400

    @pytest.mark.parametrize("payload", [
        {},
        {"text": ["a"]},
        {"texts": "not a list"},
        {"texts": ["ok", 3]},
        {"texts": [None]},
        {"texts": [["nested"]]},
        {"texts": ["a"], "extra": 1},
        ["just", "a", "list"],
        "a string",
        42,
    ])
    def test_wrong_shape_is_422(self, client, payload):
        response = client.post("/embed", json=payload)
        assert response.status_code == 422
        assert response.json()["detail"]

    def test_concurrent_requests_keep_their_own_order(self, client):
        def roundtrip(i: int):
            words = ["alpha", "beta", "gamma"][i % 3 :] + ["alpha"]
            response = client.post("/embed", json={"texts": words})
            return words, response.json()["vectors"]

        with ThreadPoolExecutor(max_workers=8) as pool:
            for words, vectors in pool.map(roundtrip, range(32)):
                expected = [VOCAB[w] for w in words]
                assert vectors == expected
