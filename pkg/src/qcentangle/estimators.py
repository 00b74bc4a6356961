"""scikit-learn style wrappers.

The solvers are exposed as estimators with ``fit`` and fitted attributes
ending in an underscore, and the two curve generators as transformers
mapping a column of distances to a table of energies and entropies. They
support ``get_params``/``set_params``/``clone`` and can sit in a
:class:`sklearn.pipeline.Pipeline`.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import spinmodel
from .ci import CIVector, build_hamiltonian, enumerate_determinants, lowest_eigenpair
from .entanglement import partial_trace_modes, von_neumann_entropy
from .integrals import IntegralSet
from .molbasis import diatomic
from .pipeline import REFERENCES, analyze_system
from .scf import SpinOrbitalIntegrals, run_rhf, run_uhf


def _check_integrals(X):
    if not isinstance(X, (IntegralSet, SpinOrbitalIntegrals)):
        raise TypeError(f"expected an IntegralSet, got {type(X).__name__}")
    return X


def _check_distances(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != 1:
        raise ValueError(f"expected a single column of distances, got shape {X.shape}")
    if np.any(X <= 0):
        raise ValueError("distances must be positive")
    return X


class HartreeFock(BaseEstimator):
    """RHF or UHF on an AO :class:`IntegralSet`.

    Fitted attributes: ``energy_``, ``mo_coeff_``, ``mo_energy_``,
    ``n_iter_``, ``converged_``.
    """

    def __init__(self, reference="rhf", guess_mix=math.pi / 8, max_iter=200,
                 diis_size=6, damping=0.5):
        self.reference = reference
        self.guess_mix = guess_mix
        self.max_iter = max_iter
        self.diis_size = diis_size
        self.damping = damping

    def fit(self, X, y=None):
        ints = _check_integrals(X)
        if self.reference not in REFERENCES:
            raise ValueError(f"reference must be one of {REFERENCES}, got {self.reference!r}")
        opts = dict(max_iter=self.max_iter, diis_size=self.diis_size, damping=self.damping)
        if self.reference == "rhf":
            res = run_rhf(ints, 2, **opts)
        else:
            res = run_uhf(ints, 2, self.guess_mix, **opts)
        self.result_ = res
        self.energy_ = res.energy
        self.mo_coeff_ = res.mo_coeff
        self.mo_energy_ = res.mo_energy
        self.n_iter_ = res.n_iter
        self.converged_ = res.converged
        return self


class FullCI(BaseEstimator):
    """Two-electron FCI on MO or spin-orbital integrals.

    Fitted attributes: ``energy_``, ``ci_`` (a :class:`CIVector`),
    ``hamiltonian_``.
    """

    def __init__(self, degeneracy_tol=0.0):
        self.degeneracy_tol = degeneracy_tol

    def fit(self, X, y=None):
        ints = _check_integrals(X)
        m = ints.n_modes // 2 if isinstance(ints, SpinOrbitalIntegrals) else ints.m
        space = enumerate_determinants(m)
        H = build_hamiltonian(ints, space)
        self.energy_, _ = lowest_eigenpair(H)
        _, self.ci_ = lowest_eigenpair(H, space, space.reference, self.degeneracy_tol)
        self.hamiltonian_ = H
        return self


class OrbitalEntanglement(BaseEstimator):
    """Von Neumann entropy of a set of kept modes of a CI state.

    ``keep`` is a tuple of 0-based modes; ``None`` means spatial orbital 1
    (modes 0 and 1).
    """

    def __init__(self, keep=None):
        self.keep = keep

    def fit(self, X, y=None):
        if not isinstance(X, CIVector):
            raise TypeError(f"expected a CIVector, got {type(X).__name__}")
        keep = (0, 1) if self.keep is None else tuple(self.keep)
        self.rdm_ = partial_trace_modes(X, keep)
        self.entropy_ = von_neumann_entropy(self.rdm_)
        return self

    def score(self, X, y=None):
        check_is_fitted(self, "entropy_")
        return self.entropy_


class H2Dissociation(TransformerMixin, BaseEstimator):
    """Map H2 bond lengths (angstrom) to energies and orbital entropies.

    Output columns follow :meth:`get_feature_names_out`. Stateless: ``fit``
    only validates the input.
    """

    _columns = ("E_RHF", "E_UHF", "E_FCI", "E_c", "S_spatial", "S_spinmode")

    def __init__(self, basis="3-21g", reference="uhf", orbital=0, mode=0,
                 guess_mix=math.pi / 8):
        self.basis = basis
        self.reference = reference
        self.orbital = orbital
        self.mode = mode
        self.guess_mix = guess_mix

    def fit(self, X, y=None):
        X = _check_distances(X)
        if self.reference not in REFERENCES:
            raise ValueError(f"reference must be one of {REFERENCES}, got {self.reference!r}")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = _check_distances(X)
        out = np.empty((X.shape[0], len(self._columns)))
        for n, r in enumerate(X[:, 0]):
            (row,) = analyze_system(diatomic("H", "H", r, units="angstrom"), self.basis,
                                    (self.reference,), self.orbital, self.mode, self.guess_mix)
            out[n] = [row.E_RHF, row.E_UHF, row.E_FCI, row.E_c, row.S_spatial, row.S_spinmode]
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(self._columns, dtype=object)


class SpinPairEntanglement(TransformerMixin, BaseEstimator):
    """Map spin separations R (bohr) to ground-state entropy of the two-spin model."""

    def __init__(self, B=0.1, gamma=1.0):
        self.B = B
        self.gamma = gamma

    def fit(self, X, y=None):
        _check_distances(X)
        if self.B == 0:
            raise ValueError("field strength B must be nonzero")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = _check_distances(X)
        rows = spinmodel.sweep_entanglement(X[:, 0], [self.B], self.gamma)
        return np.array([[s] for _, _, s in rows])

    def get_feature_names_out(self, input_features=None):
        return np.array(["S"], dtype=object)

