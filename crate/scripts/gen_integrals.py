"""Generate STO-3G FCIDUMP fixtures for H2, LiH and BeH2.

Molecules are placed on the X axis. Only sigma-type molecular orbitals are
kept (orbitals with no weight on p_y / p_z atomic functions), which gives
2, 4 and 5 spatial orbitals for H2, LiH and BeH2.

Usage: python scripts/gen_integrals.py OUT_DIR [--scan]
"""
import sys
import numpy as np
from pyscf import gto, scf, ao2mo
from pyscf.tools import fcidump


def geometry(name, dist):
    if name == "h2":
        return f"H 0 0 0; H {dist} 0 0"
    if name == "lih":
        return f"Li 0 0 0; H {dist} 0 0"
    if name == "beh2":
        return f"H {-dist} 0 0; Be 0 0 0; H {dist} 0 0"
    raise ValueError(name)


def sigma_orbitals(mol, mo_coeff):
    labels = mol.ao_labels()
    pyz = [i for i, l in enumerate(labels) if l.strip().endswith(("py", "pz"))]
    keep = []
    for j in range(mo_coeff.shape[1]):
        if np.sum(mo_coeff[pyz, j] ** 2) < 1e-8:
            keep.append(j)
    return keep


def write(name, dist, out_dir):
    mol = gto.M(atom=geometry(name, dist), basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    keep = sigma_orbitals(mol, mf.mo_coeff)
    c = mf.mo_coeff[:, keep]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(8, ao2mo.kernel(mol, c), len(keep))
    path = f"{out_dir}/{name}_{dist:.3f}.fcidump"
    fcidump.from_integrals(path, h1, eri, len(keep), mol.nelectron, mol.energy_nuc(), tol=1e-12)
    print(path, len(keep), mol.nelectron)


if __name__ == "__main__":
    out = sys.argv[1]
    write("h2", 0.735, out)
    write("lih", 1.6, out)
    write("beh2", 1.3, out)
    if "--scan" in sys.argv:
        for d in (0.5, 0.9, 1.3, 1.7, 2.1, 2.5):
            write("h2", d, out)
