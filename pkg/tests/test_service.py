"""HTTP service surface."""

import pytest
from fastapi.testclient import TestClient

from sfdgen.pipeline import GenerateOptions, generate
from sfdgen.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"


class TestValidate:
    def test_valid_model(self, client, world2_source):
        resp = client.post("/validate", json={"source": world2_source})
        assert resp.status_code == 200
        assert resp.json() == {"valid": True, "diagnostics": []}

    def test_invalid_model_lists_diagnostics(self, client):
        bad = '{"variables":[{"name":"a","kind":"auxiliary","depends_on":["x"]}]}'
        resp = client.post("/validate", json={"source": bad})
        assert resp.status_code == 200
        body = resp.json()
        assert body["valid"] is False
        assert body["diagnostics"]

    def test_edge_list_format(self, client):
        resp = client.post("/validate",
                           json={"source": "a b\n", "format": "edge-list"})
        assert resp.json()["valid"] is True

    def test_empty_model_flagged(self, client):
        resp = client.post("/validate", json={"source": '{"variables": []}'})
        body = resp.json()
        assert body["valid"] is False
        assert any(d["rule"] == "empty-model" for d in body["diagnostics"])


class TestGenerate:
    def test_world2(self, client, world2_source):
        resp = client.post("/generate", json={"source": world2_source})
        assert resp.status_code == 200
        body = resp.json()
        assert body["report"]["variable_count"] == 100
        assert len(body["diagrams"]) == body["report"]["module_count"]
        assert body["layout"].startswith("{")
        assert body["layout_filename"] == "layout.json"
        assert "diagram generation report" in body["report_text"]

    def test_matches_in_process_run(self, client, market42_source):
        resp = client.post("/generate", json={
            "source": market42_source, "cluster": "none", "seed": 7})
        local = generate(market42_source, GenerateOptions(cluster="none", seed=7))
        body = resp.json()
        assert body["layout"] == local.layout_text
        assert [d["svg"] for d in body["diagrams"]] == \
               [d.svg for d in local.diagrams]

    def test_invalid_model_is_400(self, client):
        resp = client.post("/generate", json={"source": '{"variables": []}'})
        assert resp.status_code == 400
        assert resp.json()["detail"]["stage"] == "validate"

    def test_bad_hints_is_422(self, client, market42_source):
        resp = client.post("/generate", json={
            "source": market42_source, "hints": "A: 424242\n"})
        assert resp.status_code == 422
        assert resp.json()["detail"]["stage"] == "modularize"

    def test_schema_validation(self, client):
        resp = client.post("/generate", json={"source": "a b\n",
                                              "cluster": "bogus"})
        assert resp.status_code == 422

    def test_threshold_bound(self, client):
        resp = client.post("/generate", json={"source": "a b\n",
                                              "threshold": 1})
        assert resp.status_code == 422
