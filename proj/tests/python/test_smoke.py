import json
import os
import pathlib

import numpy as np
import pytest

import adaptrom

ROOT = pathlib.Path(__file__).resolve().parents[2]
CONFIGS = pathlib.Path(os.environ.get("ADAPTROM_CONFIG_DIR", ROOT / "configs"))

SMALL_BRATU = {
    "problem": {"id": "bratu", "cells": 10},
    "snapshots": {"count": 20},
    "pod": {"modes": 3},
    "adaptive": {"n_sel": 10, "max_modes": 20},
    "evaluation": [{"lambda": 1.5}],
    "strategies": ["local-opt", "f-rom"],
}


def test_pod_matches_numpy_svd():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((30, 8))
    vectors, sv = adaptrom.pod(x)
    ref = np.linalg.svd(x, compute_uv=False)
    np.testing.assert_allclose(sv, ref, rtol=1e-12)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(vectors.shape[1]), atol=1e-12)


def test_local_update_cancels_selected_residual():
    rng = np.random.default_rng(1)
    n, k, n_sel = 40, 4, 12
    phi, _ = np.linalg.qr(rng.standard_normal((n, k)))
    q = rng.standard_normal(k)
    jac = rng.standard_normal((n, n))
    r = rng.standard_normal(n)
    psi = adaptrom.local_additional_basis(phi, q, jac, r, n_sel)
    rows = adaptrom.select_rows(r, n_sel)
    f = r - jac @ (phi @ q)
    local = (jac @ (psi @ q) + f)[rows]
    assert np.linalg.norm(local) <= 1e-10 * np.linalg.norm(r[rows])


def test_from_basis_solves_jacobian_system():
    rng = np.random.default_rng(2)
    jac = rng.standard_normal((25, 25)) + 25 * np.eye(25)
    r = rng.standard_normal(25)
    psi = adaptrom.from_additional_basis(jac, r)
    assert psi.shape == (25, 1)
    assert np.linalg.norm(jac @ psi[:, 0] - r) <= 1e-10 * np.linalg.norm(r)


def test_extension_adds_one_direction():
    rng = np.random.default_rng(3)
    phi, _ = np.linalg.qr(rng.standard_normal((10, 3)))
    basis, added = adaptrom.extend_and_orthonormalize(phi, rng.standard_normal((10, 1)))
    assert added == 1
    np.testing.assert_allclose(basis.T @ basis, np.eye(4), atol=1e-12)


def test_romx_round_trip(tmp_path):
    m = np.arange(12.0).reshape(3, 4) / 7.0
    path = tmp_path / "m.romx"
    adaptrom.write_romx(str(path), m)
    assert path.read_bytes()[:4] == b"ROMX"
    np.testing.assert_array_equal(adaptrom.read_romx(str(path)), m)


def test_run_and_bench():
    records = adaptrom.run(SMALL_BRATU)
    assert [r["strategy"] for r in records] == ["local-opt", "f-rom"]
    assert all(r["ok"] for r in records)
    table = adaptrom.bench(SMALL_BRATU)
    assert [row["model"] for row in table["rows"]] == ["full", "local-opt", "f-rom"]


def test_bad_config_raises():
    with pytest.raises(adaptrom.AdaptromError):
        adaptrom.validate_config({"problem": {"id": "bratu"}, "unknown": 1})


@pytest.mark.parametrize("name", ["bratu", "burgers", "heat"])
def test_shipped_configs_match_schema(name):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((ROOT / "schemas" / "experiment.schema.json").read_text())
    config = json.loads((CONFIGS / f"{name}.json").read_text())
    jsonschema.validate(config, schema)
    adaptrom.validate_config(config)
