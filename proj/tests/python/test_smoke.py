import json
import math

import numpy as np
import pytest

import cbohf

H2_STO3G = -1.116714325062551  # PySCF, cartesian, R = 1.4 bohr
HF_STO3G = -98.57075753747823


def hf_molecule():
    return cbohf.Molecule([("F", 0.0, 0.0, 0.0), ("H", 0.0, 0.0, 1.7325)])


def test_h2_rhf_energy():
    mol = cbohf.Molecule([("H", 0.0, 0.0, 0.0), ("H", 0.0, 0.0, 1.4)])
    res = cbohf.rhf(mol, "sto-3g")
    assert res["converged"]
    assert abs(res["energy"] - H2_STO3G) < 1e-8
    assert res["density"].shape == (2, 2)


def test_gauge_origin_defaults_to_charge_center():
    mol = hf_molecule()
    assert np.allclose(mol.gauge_origin, [0.0, 0.0, 0.17325])
    assert mol.electron_count == 10


def test_mode_volume_from_field():
    omega = cbohf.convert_units(4467.0, "cm-1", "hartree")
    eps = cbohf.convert_units(2.0, "V/nm", "au_field")
    lam = cbohf.lambda_from_field(eps, omega)
    vol = cbohf.convert_units(cbohf.mode_volume(lam), "bohr3", "nm3")
    assert abs(vol - 1.25) / 1.25 < 0.01


def test_zero_coupling_is_plain_rhf():
    res = cbohf.optimize_qc(hf_molecule(), "sto-3g", [0.0, 0.0, 0.0], 0.02)
    assert abs(res["E_CBO"] - HF_STO3G) < 1e-9
    assert abs(res["q"]) < 1e-12


def test_optimized_q_identity():
    lam = [0.0, 0.0, 0.038554905895756865]
    omega = cbohf.convert_units(4467.0, "cm-1", "hartree")
    res = cbohf.optimize_qc(hf_molecule(), "sto-3g", lam, omega)
    assert res["converged"]
    assert abs(res["E_lin"] + 2 * res["E_dis"]) < 1e-10 * abs(res["E_lin"])
    assert abs(res["q"] - 0.964237641774848) < 1e-6
    parts = res["E_el"] + res["E_lin"] + res["E_dse"] + res["E_dis"]
    assert abs(parts - res["E_CBO"]) < 1e-10


def test_ensemble_single_molecule_matches_optimize_qc():
    omega = cbohf.convert_units(4467.0, "cm-1", "hartree")
    lam0 = 0.0289161794218
    one = cbohf.optimize_qc(hf_molecule(), "sto-3g", [0, 0, lam0], omega)
    ens = cbohf.dilute_ensemble(hf_molecule(), 1, lambda0=lam0, omega=omega)
    assert abs(ens["E_CBO"] - one["E_CBO"]) < 1e-9
    assert len(ens["molecules"]) == 1


def test_antiparallel_pair_has_no_displacement():
    omega = cbohf.convert_units(4467.0, "cm-1", "hartree")
    ens = cbohf.dilute_ensemble(hf_molecule(), 2, pattern="antiparallel", lambda0=0.03, omega=omega)
    assert abs(ens["q"]) < 1e-8
    assert ens["n_groups"] == 2


def test_run_scan_returns_tables():
    cfg = {"scan": {"type": "qc", "values": [0.0, 0.5, 1.0]}, "basis": "sto-3g",
           "cavity": {"fields_v_per_nm": [1.0]}}
    out = cbohf.run_scan(json.dumps(cfg))
    assert out["flagged"] == 0
    table = out["tables"]["qc_scan"]
    col = table["columns"].index("E_lin")
    assert len(table["rows"]) == 3
    assert table["rows"][0][col] == 0.0
    echoed = json.loads(out["config"])
    assert echoed["scan"]["values"] == [0.0, 0.5, 1.0]


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        cbohf.Molecule([("Xx", 0.0, 0.0, 0.0)])
    with pytest.raises(ValueError):
        cbohf.run_scan(json.dumps({"scan": {"type": "qc"}, "bogus": 1}))
    assert math.isclose(cbohf.boys_function(0, 0.0), 1.0)
