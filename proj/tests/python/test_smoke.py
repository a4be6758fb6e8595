import json
import math

import pytest

import mpx


def rot(theta):
    return mpx.rotation2(theta)


def test_classify_rotation():
    P = rot(-2 * math.pi / 5)
    cls = mpx.classify(P, 5)
    assert cls.n == 1
    assert cls.p == 0
    assert cls.j[0] == 1
    assert cls.admissible
    assert cls.margin() == 3


def test_symplectic_checks():
    assert mpx.is_symplectic(rot(0.7))
    J = mpx.standard_J(2)
    assert mpx.is_symplectic(J)


def test_index_pipelines_agree():
    P = rot(-2 * math.pi / 5)
    i, nu = mpx.index(P, 5, 1.0, seed=11)
    gi, gnu, stab = mpx.galerkin_index(P, 5, 1.0, seed=11)
    assert (i, nu) == (gi, gnu)
    assert stab < 512


def test_bott_sum():
    P = rot(-2 * math.pi / 5)
    assert mpx.bott_sum_check(P, 5, 1.0, seed=7, m=3)


def test_certify_quartic():
    c, s = math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5)
    cfg = {
        "n": 1,
        "k": 5,
        "tau": 1.0,
        "P": [[c, s], [-s, c]],
        "hamiltonian": {"type": "radial_power", "power": 4.0, "coeff": 0.25},
        "solver": {"guess": [2.26, 0.01], "restarts": 2},
        "seed": 3,
    }
    cert = json.loads(mpx.certify_json(json.dumps(cfg)))
    assert cert["verdict"] == "certified_ktau"
    assert abs(cert["numeric_period"]["lambda_min"] - 5.0) < 1e-6


def test_bad_config_raises():
    with pytest.raises(mpx.MpxError):
        mpx.certify_json("{}")
