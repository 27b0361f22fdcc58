"""Lindblad generators, their duals, propagation and stationary states.

Superoperators act on column-stacked operators, so a generator on a
d-dimensional system is a d^2 x d^2 matrix.  Propagation uses a full
matrix exponential for small systems and sparse Krylov-style actions
(``expm_multiply``) beyond that.
"""

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from . import qcore
from .qcore import (
    DegenerateSteadyStateError,
    QuantumState,
    as_operator,
    require_hermitian,
    unvec,
    vec,
)

DENSE_PROPAGATION_DIM = 12   # largest system dimension kept dense
STATIONARY_GAP_TOL = 1e-9    # uniqueness gate on the second-smallest |eigenvalue|


class LindbladModel:
    """Effective Hamiltonian, jump operators and the rate matrix.

    The rate matrix must be Hermitian positive semidefinite; ``rates``
    may be given as a 1d array of diagonal rates or omitted entirely
    (identity) when the jump operators already absorb their rates.
    """

    def __init__(self, h_bar, jump_ops, rates=None):
        self.h_bar = require_hermitian(h_bar, name="h_bar")
        self.jump_ops = [as_operator(v, "jump operator") for v in jump_ops]
        d = self.h_bar.shape[0]
        for v in self.jump_ops:
            if v.shape[0] != d:
                raise ValueError("jump operator dimension mismatch")
        n = len(self.jump_ops)
        if rates is None:
            rates = np.eye(n)
        rates = np.asarray(rates, dtype=complex)
        if rates.ndim == 1:
            rates = np.diag(rates)
        if rates.shape != (n, n):
            raise ValueError(f"rate matrix shape {rates.shape} != ({n}, {n})")
        if n:
            if np.abs(rates - rates.conj().T).max() > qcore.VALID_TOL:
                raise ValueError("rate matrix is not Hermitian")
            if np.linalg.eigvalsh(0.5 * (rates + rates.conj().T)).min() < -qcore.VALID_TOL:
                raise ValueError("rate matrix is not positive semidefinite")
        self.rates = rates

    @property
    def dim(self):
        return self.h_bar.shape[0]


class Superoperator:
    """Matrix representation of a map on column-stacked operators."""

    def __init__(self, matrix, dim, kind=None):
        self.matrix = matrix
        self.dim = dim
        self.kind = kind  # "forward", "dual" or None

    @property
    def is_sparse(self):
        return scipy.sparse.issparse(self.matrix)

    def dense(self):
        return self.matrix.toarray() if self.is_sparse else self.matrix

    def apply(self, operator):
        return unvec(self.matrix @ vec(operator), self.dim)


def _generator(model, dual, sparse):
    d = model.dim
    eye = scipy.sparse.identity(d, format="csr") if sparse else np.eye(d)
    kron = scipy.sparse.kron if sparse else np.kron
    h = scipy.sparse.csr_matrix(model.h_bar) if sparse else model.h_bar
    sign = 1j if dual else -1j
    gen = sign * (kron(eye, h) - kron(h.T, eye))
    for mu, v_mu in enumerate(model.jump_ops):
        vm = scipy.sparse.csr_matrix(v_mu) if sparse else v_mu
        for nu, v_nu in enumerate(model.jump_ops):
            a = model.rates[mu, nu]
            if a == 0:
                continue
            vn = scipy.sparse.csr_matrix(v_nu) if sparse else v_nu
            vdv = vn.conj().T @ vm
            if dual:
                sandwich = kron(vm.T, vn.conj().T)
            else:
                sandwich = kron(vn.conj(), vm)
            gen = gen + a * (sandwich - 0.5 * (kron(eye, vdv) + kron(vdv.T, eye)))
    if sparse:
        gen = scipy.sparse.csr_matrix(gen)
    return gen


def liouvillian(model, sparse=None):
    """Forward generator of d(rho)/dt; annihilates the trace functional."""
    if sparse is None:
        sparse = model.dim > DENSE_PROPAGATION_DIM
    return Superoperator(_generator(model, dual=False, sparse=sparse), model.dim, kind="forward")


def dual_liouvillian(model, sparse=None):
    """Adjoint generator for Heisenberg-picture operators.

    dA/dt = +i[h_bar, A] + sum a_mu_nu (V_nu^dag A V_mu
    - (V_nu^dag V_mu A + A V_nu^dag V_mu)/2).  It annihilates the
    identity but generally does not preserve the trace.
    """
    if sparse is None:
        sparse = model.dim > DENSE_PROPAGATION_DIM
    return Superoperator(_generator(model, dual=True, sparse=sparse), model.dim, kind="dual")


def propagate(g, x0, t, trace_tol=1e-10):
    """exp(t G) applied to an operator, devectorized.

    Forward generators must preserve the trace of ``x0`` to
    ``trace_tol``; a violation signals a broken generator.
    """
    x0 = as_operator(x0, "x0")
    if x0.shape[0] != g.dim:
        raise ValueError(f"operator dimension {x0.shape[0]} != superoperator dim {g.dim}")
    v = vec(x0)
    if g.is_sparse:
        out = scipy.sparse.linalg.expm_multiply(g.matrix * t, v)
    else:
        out = scipy.linalg.expm(g.matrix * t) @ v
    result = unvec(out, g.dim)
    if g.kind == "forward":
        drift = abs(np.trace(result) - np.trace(x0))
        if drift > trace_tol * max(1.0, abs(np.trace(x0))):
            raise RuntimeError(f"forward propagation changed the trace by {drift:.3e}")
    return result


def propagate_series(g, x0, times, trace_tol=1e-10):
    """Propagate one operator to every time in ``times`` (ascending)."""
    times = np.asarray(times, dtype=float)
    return [propagate(g, x0, t, trace_tol=trace_tol) for t in times]


def generator_spectrum(g):
    """Eigenvalues of the generator (dense route)."""
    return np.linalg.eigvals(g.dense())


def spectral_gap(g, zero_tol=1e-9):
    """Slowest nonzero relaxation rate |Re lambda| of the generator."""
    evals = generator_spectrum(g)
    rates = np.abs(evals.real[np.abs(evals) > zero_tol])
    if rates.size == 0:
        raise ValueError("generator has no decaying modes")
    return float(rates.min())


def stationary_state(g, gap_tol=STATIONARY_GAP_TOL, residual_tol=1e-9):
    """Unique unit-trace null vector of a forward generator.

    Raises DegenerateSteadyStateError when a second eigenvalue sits
    inside the uniqueness gate, since the degree of quantumness is only
    defined for dynamics whose stationary state is independent of the
    initial condition.
    """
    if g.dim > 2 * DENSE_PROPAGATION_DIM:
        raise ValueError(
            f"stationary_state needs the dense eigenproblem; dim {g.dim} is too large"
        )
    mat = g.dense()
    evals, evecs = scipy.linalg.eig(mat)
    order = np.argsort(np.abs(evals))
    if len(order) > 1 and np.abs(evals[order[1]]) < gap_tol:
        raise DegenerateSteadyStateError(
            f"two generator eigenvalues below {gap_tol:.0e}: "
            f"{evals[order[0]]:.2e}, {evals[order[1]]:.2e}"
        )
    rho = unvec(evecs[:, order[0]], g.dim)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise DegenerateSteadyStateError("null vector is traceless; no stationary state")
    rho = rho / tr
    residual = np.abs(g.apply(rho)).max()
    if residual > residual_tol:
        raise RuntimeError(f"stationary-state residual {residual:.3e} exceeds {residual_tol:.0e}")
    return QuantumState(rho, tol=1e-8)


def time_reversed_state(rho):
    """Entrywise complex conjugate in the computational basis.

    Realizes the time-reversal that turns the stationary state into the
    object whose top eigenvector is the reported optimal initial state.
    The spectrum is untouched; only eigenvectors conjugate.
    """
    m = rho.matrix if isinstance(rho, QuantumState) else QuantumState(rho).matrix
    dims = rho.dims if isinstance(rho, QuantumState) else None
    return QuantumState(m.conj(), dims=dims)


def kraus_from_superoperator(g, tol=1e-12):
    """Kraus operators of a completely positive map given as a matrix.

    Goes through the Choi matrix; small negative Choi eigenvalues are
    clipped at ``tol`` times the largest one.
    """
    d = g.dim
    mat = g.dense()
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=complex)
            e_ij[i, j] = 1.0
            block = unvec(mat @ vec(e_ij), d)
            choi += np.kron(e_ij, block)
    choi = 0.5 * (choi + choi.conj().T)
    evals, evecs = np.linalg.eigh(choi)
    kraus = []
    floor = tol * max(evals.max(), 1.0)
    for lam, col in zip(evals, evecs.T):
        if lam < -100 * floor:
            raise ValueError(f"map is not completely positive (Choi eigenvalue {lam:.3e})")
        if lam > floor:
            # Choi eigenvector component (i, m) holds K[m, i]
            kraus.append(np.sqrt(lam) * col.reshape(d, d).T)
    return kraus
