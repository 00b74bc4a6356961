"""Independent reference computations used by the tests.

None of these reuse the closed-form integral, Slater-Condon or partial-trace
code paths of the package.
"""

from __future__ import annotations

import itertools
import math

import mpmath
import numpy as np
from scipy.special import erf


def boys_mp(x, dps=30):
    """F0(x) = int_0^1 exp(-x t^2) dt by mpmath quadrature."""
    with mpmath.workdps(dps):
        return float(mpmath.quad(lambda t: mpmath.exp(-x * t * t), [0, 1]))


# --- 3-D quadrature ----------------------------------------------------------

def spherical_grid(center, n_r=80, n_theta=48, n_phi=48, r_scale=1.0):
    """Product grid in spherical coordinates about ``center``.

    Radial nodes are Gauss-Legendre on [0, 1] mapped by r = s x / (1 - x)
    (Becke-style), polar nodes Gauss-Legendre in cos(theta), azimuthal nodes
    equally spaced (exact for trigonometric polynomials).
    """
    x, wx = np.polynomial.legendre.leggauss(n_r)
    x = 0.5 * (x + 1.0)
    wx = 0.5 * wx
    r = r_scale * x / (1.0 - x)
    wr = wx * r_scale / (1.0 - x) ** 2 * r**2
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    wp = np.full(n_phi, 2 * math.pi / n_phi)
    R, CT, PH = np.meshgrid(r, ct, phi, indexing="ij")
    ST = np.sqrt(1.0 - CT**2)
    pts = np.stack([R * ST * np.cos(PH), R * ST * np.sin(PH), R * CT], axis=-1).reshape(-1, 3)
    w = (wr[:, None, None] * wt[None, :, None] * wp[None, None, :]).ravel()
    return pts + np.asarray(center, dtype=float), w, R.ravel()


def contracted_values(fn, center, pts):
    """Values of a contracted s function on ``pts``."""
    d2 = np.sum((pts - center) ** 2, axis=1)
    out = np.zeros(len(pts))
    for a, c in zip(fn.shell.exponents, fn.shell.norm_coefficients):
        out += c * np.exp(-a * d2)
    return out


def contracted_laplacian(fn, center, pts):
    d2 = np.sum((pts - center) ** 2, axis=1)
    out = np.zeros(len(pts))
    for a, c in zip(fn.shell.exponents, fn.shell.norm_coefficients):
        out += c * (4 * a * a * d2 - 6 * a) * np.exp(-a * d2)
    return out


def gaussian_potential(pts, center, exponent):
    """Electrostatic potential of exp(-q |r - Q|^2) (unnormalized)."""
    d = np.sqrt(np.sum((pts - center) ** 2, axis=1))
    q = exponent
    vol = (math.pi / q) ** 1.5
    out = np.empty_like(d)
    small = d < 1e-8
    out[small] = vol * 2.0 * math.sqrt(q / math.pi)
    out[~small] = vol * erf(math.sqrt(q) * d[~small]) / d[~small]
    return out


class QuadratureOracle:
    """Integrals over an OrbitalBasis by brute-force numerical integration."""

    def __init__(self, ob, mol, n_r=90, n_theta=60, n_phi=60):
        self.ob = ob
        self.mol = mol
        self.centers = ob.centers
        self.n = (n_r, n_theta, n_phi)
        mid = self.centers.mean(axis=0)
        self.grid = spherical_grid(mid, *self.n)

    def _vals(self, mu, pts):
        fn = self.ob.functions[mu]
        return contracted_values(fn, self.centers[fn.center], pts)

    def overlap(self, mu, nu):
        pts, w, _ = self.grid
        return float(np.sum(w * self._vals(mu, pts) * self._vals(nu, pts)))

    def kinetic(self, mu, nu):
        pts, w, _ = self.grid
        fn = self.ob.functions[nu]
        lap = contracted_laplacian(fn, self.centers[fn.center], pts)
        return float(-0.5 * np.sum(w * self._vals(mu, pts) * lap))

    def nuclear(self, mu, nu):
        total = 0.0
        for zc, C in zip(self.mol.charges, self.mol.coords):
            pts, w, r = spherical_grid(C, *self.n)
            # r^2 from the weights cancels the 1/r singularity analytically
            vals = self._vals(mu, pts) * self._vals(nu, pts)
            with np.errstate(divide="ignore", invalid="ignore"):
                total -= zc * float(np.sum(np.where(r > 0, w * vals / r, 0.0)))
        return total

    def eri(self, p, q, r, s):
        """(pq|rs): numerical integral of phi_p phi_q times the exact
        potential of the Gaussian pieces of phi_r phi_s."""
        pts, w, _ = self.grid
        rho = self._vals(p, pts) * self._vals(q, pts)
        fr, fs = self.ob.functions[r], self.ob.functions[s]
        A, B = self.centers[fr.center], self.centers[fs.center]
        pot = np.zeros(len(pts))
        for a, ca in zip(fr.shell.exponents, fr.shell.norm_coefficients):
            for b, cb in zip(fs.shell.exponents, fs.shell.norm_coefficients):
                pab = a + b
                P = (a * A + b * B) / pab
                k = math.exp(-a * b / pab * float(np.sum((A - B) ** 2)))
                pot += ca * cb * k * gaussian_potential(pts, P, pab)
        return float(np.sum(w * rho * pot))


# --- first-quantized CI -----------------------------------------------------

def first_quantized_hamiltonian(h, g, dets, e_nuc=0.0):
    """<D_i|H|D_j> with D = (phi_p(1) phi_q(2) - phi_q(1) phi_p(2)) / sqrt(2).

    ``h`` and ``g`` are spin-orbital integrals, g[p, q, r, s] = (pq|rs).
    """
    n = h.shape[0]
    eye = np.eye(n)
    H2 = np.kron(h, eye) + np.kron(eye, h)
    H2 = H2 + np.einsum("acbd->abcd", g).reshape(n * n, n * n)
    basis = []
    for det in dets:
        p, q = [k for k in range(n) if det >> k & 1]
        v = np.zeros((n, n))
        v[p, q], v[q, p] = 1.0, -1.0
        basis.append(v.ravel() / math.sqrt(2.0))
    B = np.array(basis).T
    return B.T @ H2 @ B + e_nuc * np.eye(len(dets))


# --- Fock space via Jordan-Wigner ---------------------------------------------

def _annihilator(n_modes, p):
    """Matrix of a_p on the 2^n Fock space; basis index bit k = occupation of
    mode k, and the Jordan-Wigner string runs over modes < p."""
    dim = 1 << n_modes
    A = np.zeros((dim, dim))
    for state in range(dim):
        if state >> p & 1:
            sign = -1.0 if bin(state & ((1 << p) - 1)).count("1") % 2 else 1.0
            A[state ^ (1 << p), state] = sign
    return A


def fock_state_from_omega(omega):
    """|Phi> = sum_ab w_ab a+_a a+_b |vac> as a dense Fock-space vector."""
    n = omega.shape[0]
    vac = np.zeros(1 << n)
    vac[0] = 1.0
    create = [_annihilator(n, p).T for p in range(n)]
    psi = np.zeros(1 << n)
    for a, b in itertools.product(range(n), repeat=2):
        if omega[a, b] != 0.0:
            psi += omega[a, b] * (create[a] @ (create[b] @ vac))
    return psi


def fock_state_from_ci(ci):
    n = ci.space.n_modes
    create = [_annihilator(n, p).T for p in range(n)]
    vac = np.zeros(1 << n)
    vac[0] = 1.0
    psi = np.zeros(1 << n)
    for c, det in zip(ci.amplitudes, ci.space.dets):
        p, q = [k for k in range(n) if det >> k & 1]
        psi += c * (create[p] @ (create[q] @ vac))
    return psi


def prefix_reduced_density(psi, n_modes, n_keep):
    """Reduced density matrix of modes 0..n_keep-1 of a Fock vector.

    With the Jordan-Wigner strings running over lower modes, tracing out the
    trailing modes is an ordinary tensor partial trace.
    """
    # index = sum_k n_k 2^k, so the kept modes are the fastest-varying bits
    mat = psi.reshape(1 << (n_modes - n_keep), 1 << n_keep)
    return mat.T @ mat
