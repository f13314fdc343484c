#!/usr/bin/env python3
"""Generate frozen reference values for the C++ test-suite.

Uses PySCF as an independent integral/SCF program and a small NumPy
cavity-HF loop built directly on PySCF integrals.  The output is written to
tests/data/reference_values.json and committed; the tests never call Python.

    python3 tools/reference/pyscf_reference.py
"""
import json
import pathlib

import mpmath
import numpy as np
from pyscf import gto, scf

HARTREE_CM = 219474.6313632
FIELD_AU_VNM = 514.2206748
OMEGA = 4467.0 / HARTREE_CM

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "data" / "reference_values.json"


def mol_cart(atom, basis):
    return gto.M(atom=atom, unit="Bohr", basis=basis, cart=True, verbose=0)


def normalized_ints(mol, origin):
    s = mol.intor("int1e_ovlp")
    scale = 1.0 / np.sqrt(np.diag(s))
    sc = np.outer(scale, scale)
    S = s * sc
    T = mol.intor("int1e_kin") * sc
    V = mol.intor("int1e_nuc") * sc
    with mol.with_common_orig(origin):
        r = mol.intor("int1e_r") * sc[None]
        rr = mol.intor("int1e_rr") * sc[None]
    eri = mol.intor("int2e")
    eri = np.einsum("ijkl,i,j,k,l->ijkl", eri, scale, scale, scale, scale)
    return S, T, V, r, rr.reshape(3, 3, *S.shape), eri


def charge_center(mol):
    z = mol.atom_charges()
    return (z[:, None] * mol.atom_coords()).sum(0) / z.sum()


def cavity_rhf(mol, lam, q, origin, tol=1e-13):
    """Closed-shell cavity HF at fixed q using PySCF integrals only."""
    S, T, V, r, rr, eri = normalized_ints(mol, origin)
    h = T + V
    nocc = mol.nelectron // 2
    d = np.einsum("a,aij->ij", lam, r)
    q2 = np.einsum("a,b,abij->ij", lam, lam, rr)
    mu_nuc = (mol.atom_charges()[:, None] * (mol.atom_coords() - origin)).sum(0)
    b = float(lam @ mu_nuc)
    w = OMEGA

    def fock(P):
        J = np.einsum("ijkl,kl->ij", eri, P)
        K = np.einsum("ikjl,kl->ij", eri, P)
        t = np.trace(P @ d)
        return h + J - 0.5 * K + w * q * d + 0.5 * q2 + t * d - 0.5 * d @ P @ d - b * d

    def energies(P):
        J = np.einsum("ijkl,kl->ij", eri, P)
        K = np.einsum("ikjl,kl->ij", eri, P)
        t = np.trace(P @ d)
        e = {
            "E_el": 0.5 * np.trace(P @ (2 * h + J - 0.5 * K)) + mol.energy_nuc(),
            "E_lin": w * q * t - w * q * b,
            "E_dis": 0.5 * w * w * q * q,
            "E_dse_1e": 0.5 * np.trace(P @ q2),
            "E_dse_2J": 0.5 * t * t,
            "E_dse_2K": -0.25 * np.trace(P @ d @ P @ d),
            "E_dse_en": -b * t,
            "E_dse_nuc": 0.5 * b * b,
        }
        e["E_dse_total"] = sum(e[k] for k in ("E_dse_1e", "E_dse_2J", "E_dse_2K", "E_dse_en", "E_dse_nuc"))
        e["E_CBO"] = e["E_el"] + e["E_lin"] + e["E_dse_total"] + e["E_dis"]
        mu = -np.einsum("aij,ij->a", r, P) + mu_nuc
        return e, mu

    sval, svec = np.linalg.eigh(S)
    X = svec @ np.diag(sval ** -0.5) @ svec.T
    P = np.zeros_like(S)
    e_old = 0.0
    for _ in range(500):
        F = fock(P)
        eps, Cp = np.linalg.eigh(X.T @ F @ X)
        C = X @ Cp
        Pn = 2 * C[:, :nocc] @ C[:, :nocc].T
        P = 0.5 * P + 0.5 * Pn if _ < 3 else Pn
        e, _mu = energies(P)
        if abs(e["E_CBO"] - e_old) < tol and np.abs(Pn - P).max() < 1e-11:
            break
        e_old = e["E_CBO"]
    e, mu = energies(P)
    return e, mu


def cavity_opt(mol, lam, origin):
    q = 0.0
    for _ in range(200):
        _, mu = cavity_rhf(mol, lam, q, origin)
        qn = float(lam @ mu) / OMEGA
        if abs(qn - q) < 1e-12:
            q = qn
            break
        q = qn
    e, mu = cavity_rhf(mol, lam, q, origin)
    return q, e, mu



def write_nwchem(path, elements, basis):
    """Dump a PySCF basis in NWChem text, shells in PySCF order."""
    lines = ['BASIS "ao basis" CARTESIAN']
    for el in elements:
        for sh in gto.basis.load(basis, el):
            lines.append(f"{el}    {'SPDFG'[sh[0]]}")
            for pr in sh[1:]:
                lines.append("  " + "  ".join(repr(float(x)) for x in pr))
    lines.append("END")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def rhf_energy(atom, basis):
    mol = mol_cart(atom, basis)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    e = mf.kernel()
    return mol, mf, e


def boys(m, t):
    return float(mpmath.quad(lambda u: u ** (2 * m) * mpmath.e ** (-t * u * u), [0, 1]))


def main():
    mpmath.mp.dps = 30
    ref = {}

    mol, mf, e = rhf_energy("H 0 0 0; H 0 0 1.4", "sto-3g")
    S = mol.intor("int1e_ovlp")
    ref["h2_sto3g"] = {
        "energy": e,
        "homo": float(mf.mo_energy[0]),
        "overlap_12": float(S[0, 1]),
        "eri_1111": float(mol.intor("int2e")[0, 0, 0, 0]),
    }

    hf_atoms = "F 0 0 0; H 0 0 1.7325"
    for basis, key in (("sto-3g", "hf_sto3g"), ("6-31g", "hf_631g"), ("aug-cc-pvdz", "hf_augccpvdz_cart")):
        mol, mf, e = rhf_energy(hf_atoms, basis)
        dip = mf.dip_moment(unit="AU", verbose=0)
        ref[key] = {"energy": e, "dipole_z": float(dip[2]), "nbf": mol.nao}

    # Integral matrices for an off-axis molecule with s, p and d shells.
    atom = "F 0.1 -0.2 0.05; H 0.4 0.3 1.8"
    origin = np.array([0.25, -0.15, 0.4])
    mol = mol_cart(atom, "6-31g*")
    write_nwchem(OUT.parent / "fh_631gs.nw", ["H", "F"], "6-31g*")
    S, T, V, r, rr, eri = normalized_ints(mol, origin)
    rng = np.random.default_rng(7)
    n = S.shape[0]
    quartets = rng.integers(0, n, size=(300, 4))
    ref["fh_631gs_ints"] = {
        "atoms": [["F", 0.1, -0.2, 0.05], ["H", 0.4, 0.3, 1.8]],
        "origin": origin.tolist(),
        "nbf": n,
        "S": S.tolist(),
        "T": T.tolist(),
        "V": V.tolist(),
        "D": [r[a].tolist() for a in range(3)],
        "Q": [rr[a, b].tolist() for a, b in ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))],
        "eri_samples": [[int(i), int(j), int(k), int(l), float(eri[i, j, k, l])] for i, j, k, l in quartets],
    }

    # Cavity HF on HF/STO-3G with an independent NumPy loop.
    mol = mol_cart(hf_atoms, "sto-3g")
    cc = charge_center(mol)
    eps = 2.0 / FIELD_AU_VNM
    lam0 = np.sqrt(2.0 / OMEGA) * eps
    cav = {}
    e, mu = cavity_rhf(mol, np.array([0, 0, lam0]), 0.5, cc)
    cav["aligned_fixed_q0.5"] = {"lambda": [0, 0, lam0], "q": 0.5, "origin": cc.tolist(), **e, "mu": mu.tolist()}
    q, e, mu = cavity_opt(mol, np.array([0, 0, lam0]), cc)
    cav["aligned_opt"] = {"lambda": [0, 0, lam0], "q": q, "origin": cc.tolist(), **e, "mu": mu.tolist()}
    lam = np.array([lam0, lam0, 0]) / np.sqrt(2)
    q, e, mu = cavity_opt(mol, lam, cc)
    cav["perp_opt"] = {"lambda": lam.tolist(), "q": q, "origin": cc.tolist(), **e, "mu": mu.tolist()}
    lam = np.array([0.3, -0.2, 0.9])
    lam = lam0 * lam / np.linalg.norm(lam)
    shifted = np.array([0.3, -0.4, 0.2])
    e, mu = cavity_rhf(mol, lam, -0.7, shifted)
    cav["tilted_shifted_fixed"] = {"lambda": lam.tolist(), "q": -0.7, "origin": shifted.tolist(), **e, "mu": mu.tolist()}
    ref["hf_sto3g_cavity"] = cav

    ref["boys"] = [[m, t, boys(m, t)] for m in (0, 1, 2, 5, 8, 12) for t in (0.0, 1e-9, 0.3, 2.5, 11.0, 24.9, 25.1, 40.0, 120.0)]

    OUT.write_text(json.dumps(ref, indent=1) + "\n")
    print("wrote", OUT)


if __name__ == "__main__":
    main()
