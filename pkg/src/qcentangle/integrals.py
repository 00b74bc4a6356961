"""Closed-form integrals over contracted s-type Gaussians.

Primitive integrals are evaluated for all primitive tuples at once via the
Gaussian product theorem and then contracted onto the basis functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .molbasis import Molecule, OrbitalBasis

_TAYLOR_SWITCH = 1e-6
# F0(x) = sum_k (-x)^k / (k! (2k + 1)), first six terms
_TAYLOR = np.array([(-1) ** k / (math.factorial(k) * (2 * k + 1)) for k in range(6)])


def boys_f0(x):
    """Zeroth-order Boys function, F0(x) = (1/2) sqrt(pi/x) erf(sqrt(x)).

    Accepts scalars or arrays. Below ``x = 1e-6`` a six-term Taylor series
    is used so the function is smooth through zero.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("boys_f0 is defined for x >= 0 only")
    small = x < _TAYLOR_SWITCH
    out = np.empty_like(x)
    xs = x[small]
    out[small] = np.polynomial.polynomial.polyval(xs, _TAYLOR)
    xl = x[~small]
    sq = np.sqrt(xl)
    out[~small] = 0.5 * math.sqrt(math.pi) * erf(sq) / sq
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class IntegralSet:
    """One- and two-electron integrals in a (spatial) orbital basis.

    ``eri[p, q, r, s]`` is (pq|rs) in chemists' notation.
    """

    overlap: np.ndarray
    hcore: np.ndarray
    eri: np.ndarray
    nuclear_repulsion: float = 0.0
    kinetic: np.ndarray | None = None
    potential: np.ndarray | None = None

    @property
    def m(self) -> int:
        return self.hcore.shape[0]


def nuclear_repulsion(mol: Molecule) -> float:
    xyz, z = mol.coords, mol.charges
    energy = 0.0
    for i in range(len(z)):
        for j in range(i):
            r = float(np.linalg.norm(xyz[i] - xyz[j]))
            if r == 0.0:
                if z[i] != 0 and z[j] != 0:
                    raise ValueError(f"nuclei {j} and {i} coincide; nuclear repulsion is singular")
                continue
            energy += z[i] * z[j] / r
    return energy


def _pair_data(xyz, a):
    p = a[:, None] + a[None, :]
    mu = a[:, None] * a[None, :] / p
    diff = xyz[:, None, :] - xyz[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    centre = (a[:, None, None] * xyz[:, None, :] + a[None, :, None] * xyz[None, :, :]) / p[..., None]
    return p, mu, r2, centre


def compute_integrals(ob: OrbitalBasis, mol: Molecule) -> IntegralSet:
    """Overlap, kinetic, nuclear attraction and ERI tensor for ``ob``."""
    e_nuc = nuclear_repulsion(mol)
    xyz, a, c, owner = ob.primitives()
    m = ob.m
    p, mu, r2, P = _pair_data(xyz, a)
    pref = np.exp(-mu * r2)

    s_prim = (math.pi / p) ** 1.5 * pref
    t_prim = mu * (3.0 - 2.0 * mu * r2) * s_prim

    v_prim = np.zeros_like(s_prim)
    for zc, C in zip(mol.charges, mol.coords):
        pc2 = np.sum((P - C) ** 2, axis=-1)
        v_prim -= zc * (2.0 * math.pi / p) * pref * boys_f0(p * pc2)

    # (ij|kl) over primitives
    pp = p[:, :, None, None]
    qq = p[None, None, :, :]
    PQ = P[:, :, None, None, :] - P[None, None, :, :, :]
    pq2 = np.einsum("ijklx,ijklx->ijkl", PQ, PQ)
    rho = pp * qq / (pp + qq)
    g_prim = (2.0 * math.pi**2.5 / (pp * qq * np.sqrt(pp + qq))
              * pref[:, :, None, None] * pref[None, None, :, :] * boys_f0(rho * pq2))

    # contract primitive index -> basis function index
    n = len(a)
    cmat = np.zeros((n, m))
    cmat[np.arange(n), owner] = c
    S = cmat.T @ s_prim @ cmat
    T = cmat.T @ t_prim @ cmat
    V = cmat.T @ v_prim @ cmat
    eri = np.einsum("ijkl,ip,jq,kr,ls->pqrs", g_prim, cmat, cmat, cmat, cmat, optimize=True)

    S = 0.5 * (S + S.T)
    T = 0.5 * (T + T.T)
    V = 0.5 * (V + V.T)
    eri = symmetrize_eri(eri)
    return IntegralSet(S, T + V, eri, e_nuc, kinetic=T, potential=V)


def symmetrize_eri(eri: np.ndarray) -> np.ndarray:
    """Average over the 8 permutations that leave real (pq|rs) invariant."""
    e = eri + eri.transpose(1, 0, 2, 3)
    e = e + e.transpose(0, 1, 3, 2)
    e = e + e.transpose(2, 3, 0, 1)
    return e / 8.0
