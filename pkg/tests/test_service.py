import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from uwbench.service.app import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_water_classes_default(client):
    response = client.get("/water-classes")
    assert response.status_code == 200
    body = response.json()
    assert [c["class_id"] for c in body["classes"]] == \
        ["I", "II", "III", "1C", "3C", "5C", "7C", "9C"]
    assert all(len(c["beta"]) == 3 for c in body["classes"])


def test_water_classes_missing_table_is_config_error(client):
    response = client.get("/water-classes", params={"coefficients": "/nope.csv"})
    assert response.status_code == 400
    assert response.json()["kind"] == "config"


def test_simulate_and_eval_flow(client, rgbd_tree, tmp_path):
    rgb_root, depth_root, _ = rgbd_tree(n=2)
    out = tmp_path / "out"
    response = client.post("/simulate", json={
        "rgb_root": str(rgb_root),
        "depth_root": str(depth_root),
        "output_dir": str(out),
        "options": {"seed": 4},
    })
    assert response.status_code == 200
    body = response.json()
    assert body["total"] == 2 and body["rendered"] == 2
    assert (out / "manifest.jsonl").is_file()

    response = client.post("/eval", json={
        "pred_root": str(out / "depth"),
        "gt_root": str(depth_root),
        "options": {},
        "include_records": True,
    })
    assert response.status_code == 200
    body = response.json()
    assert body["summary"]["abs_rel"] == 0.0
    assert body["summary"]["delta"][0] == 1.0
    assert len(body["records"]) == 2


def test_simulate_bad_options_is_config_error(client, rgbd_tree, tmp_path):
    rgb_root, depth_root, _ = rgbd_tree(n=1)
    response = client.post("/simulate", json={
        "rgb_root": str(rgb_root),
        "depth_root": str(depth_root),
        "output_dir": str(tmp_path / "out"),
        "options": {"color_space": "hsv"},
    })
    assert response.status_code == 400
    assert response.json()["kind"] == "config"


def test_eval_missing_tree_is_data_error(client, tmp_path):
    response = client.post("/eval", json={
        "pred_root": str(tmp_path / "nope"),
        "gt_root": str(tmp_path / "nope2"),
        "options": {},
    })
    assert response.status_code == 422
    assert response.json()["kind"] == "data"


def test_manifest_endpoint(client, rgbd_tree, tmp_path):
    rgb_root, depth_root, _ = rgbd_tree(n=3)
    path = tmp_path / "m.jsonl"
    response = client.post("/manifest", json={
        "rgb_root": str(rgb_root),
        "depth_root": str(depth_root),
        "output_path": str(path),
        "options": {"seed": 1},
    })
    assert response.status_code == 200
    assert response.json()["records"] == 3
    assert path.is_file()


def test_grid_endpoint(client, rgbd_tree, tmp_path):
    rgb_root, depth_root, _ = rgbd_tree(n=1)
    out = tmp_path / "grid.png"
    response = client.post("/grid", json={
        "rgb_path": str(rgb_root / "im000.png"),
        "depth_path": str(depth_root / "im000.pfm"),
        "output_path": str(out),
        "options": {},
    })
    assert response.status_code == 200
    body = response.json()
    assert body["tiles"] == 10
    grid = np.asarray(Image.open(out))
    assert grid.shape == (body["height"], body["width"], 3)


def test_table_endpoint(client):
    response = client.post("/table", json={
        "rows": [
            {"model": "A", "cells": {"SQUID": [0.1, 0.9]}},
            {"model": "B", "cells": {"SQUID": None}},
        ],
        "fmt": "md",
    })
    assert response.status_code == 200
    text = response.json()["text"]
    assert "**0.1000**" in text and "--" in text

    response = client.post("/table", json={"fmt": "md"})
    assert response.status_code == 422
    assert response.json()["kind"] == "data"
