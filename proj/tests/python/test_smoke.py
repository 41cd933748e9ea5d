import math

import numpy as np
import pytest

import coolmap

PLUS = np.full((2, 2), 0.5)
GROUND = np.diag([1.0, 0.0])


def pure(a, b):
    psi = np.array([a, b], dtype=complex)
    return np.outer(psi, psi.conj())


def test_check_and_synthesize_round_trip():
    d = coolmap.check(PLUS, GROUND)
    assert d["feasible"]
    s = coolmap.synthesize(PLUS, GROUND)
    assert s["round_trip_deviation"] < 1e-12
    out = coolmap.apply_map(s["map"], PLUS)
    assert np.allclose(out, GROUND, atol=1e-12)
    ks = coolmap.kraus_operators(s["map"])
    assert np.allclose(sum(k.conj().T @ k for k in ks), np.eye(2), atol=1e-12)


def test_infeasible_reports_violation():
    d = coolmap.check(PLUS, pure(math.sqrt(0.7), math.sqrt(0.3)))
    assert not d["feasible"]
    assert d["violation"]["kind"] == "QNotPSD"


def test_invalid_state_raises_with_kind():
    with pytest.raises(coolmap.CoolmapError) as e:
        coolmap.check(np.array([[0.5, 0.6], [0.6, 0.5]]), GROUND)
    assert e.value.args[0] == "NotPSD"


def test_majorization():
    assert coolmap.ut_majorizes([0.2, 0.3, 0.5], [0.5, 0.3, 0.2])
    assert not coolmap.ut_majorizes([1.0, 0.0], [0.0, 1.0])
    p = coolmap.construct_utcs([0.2, 0.3, 0.5], [0.5, 0.3, 0.2])
    assert np.allclose(np.tril(p, -1), 0)
    assert np.allclose(p.sum(axis=0), 1)
    assert np.allclose(p @ [0.2, 0.3, 0.5], [0.5, 0.3, 0.2])
    assert coolmap.thermo_majorizes([0.5, 0.5], [0.85, 0.15], [0, 1], math.log(4))
    assert not coolmap.thermo_majorizes([0.5, 0.5], [0.9, 0.1], [0, 1], math.log(4))


def test_monotones_and_gp_channel():
    m = coolmap.monotones(np.eye(2) / 2)
    assert m["nu_I"] == pytest.approx(0.5)
    target = pure(math.sqrt(0.7), math.sqrt(0.3))
    ks = coolmap.gp_two_level(PLUS, target)
    out = sum(k @ PLUS @ k.conj().T for k in ks)
    assert np.allclose(out, target, atol=1e-9)


def test_dilate_synthesized_map():
    s = coolmap.synthesize(PLUS, GROUND)
    r = coolmap.dilate({"energies": [0, 1], **s["map"]})
    assert r["passes"]


def test_region_and_fuzz():
    rows = coolmap.region(0.5, samples=500, seed=3)
    assert rows and all(len(r) == 6 for r in rows)
    assert all(r[2] <= r[4] + 1e-9 for r in rows if r[0] == "cooling")
    summary, violations = coolmap.fuzz(3, trials=50, seed=2)
    assert summary["trials"] == 50
    assert violations == []
