"""Quantumness measures for Markovian generators.

``q_series`` follows the convention validated against the closed forms
of the worked models: Q_t is the system trace of the Heisenberg-picture
flow started from the initial state,

    Q_t = Tr[A_t],   dA/dt = L*[A],   A_0 = rho_0,

which by the trace pairing equals Tr[rho_0 e^{tL}[I]].  Its stationary
limit is therefore dim * Tr[rho_inf rho_0].  Time reversal enters only
through the reported optimal state: the degree of quantumness is the
same for the stationary state and its conjugate (their spectra agree),
but the eigenvector that the report carries belongs to the conjugated
stationary state, and the propagated series attains 1 + D_Q when
started from the conjugate of that reported state.
"""

import numpy as np

from . import dynamics, qcore
from .qcore import BoundViolationError, QuantumState, as_operator, state_matrix


class QuantumnessSeries:
    """Sampled (t, Q_t) pairs with the dimensional bound attached."""

    def __init__(self, times, values, dim_s, bound_tol=1e-8):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1d arrays of equal length")
        if times.size and np.any(np.diff(times) < 0):
            raise ValueError("times must be ascending")
        if times.size and times[0] == 0.0 and abs(values[0] - 1.0) > 1e-9:
            raise ValueError(f"Q at t=0 is {values[0]}, expected 1")
        if values.size and (values.min() < -bound_tol or values.max() > dim_s + bound_tol):
            raise BoundViolationError(
                f"series leaves [0, {dim_s}]: min {values.min():.3e}, max {values.max():.6e}"
            )
        self.times = times
        self.values = values
        self.dim_s = int(dim_s)

    def __len__(self):
        return self.times.size

    def to_csv(self, path):
        """Write "t,Q" rows with 12 significant digits and \\n endings."""
        with open(path, "w", newline="") as fh:
            fh.write(csv_text(self.times, self.values))


def csv_text(times, values, header="t,Q"):
    lines = [header]
    for t, v in zip(times, values):
        lines.append(f"{t:.12g},{v:.12g}")
    return "\n".join(lines) + "\n"


class QuantumnessReport:
    """Degree of quantumness, optimal initial state and stationary data."""

    def __init__(self, dq, optimal_state, q_infinity, stationary):
        dim = stationary.dim
        if dq < -1e-12 or dq > dim - 1 + 1e-8:
            raise ValueError(f"dq={dq} outside [0, {dim - 1}]")
        evals = np.linalg.eigvalsh(optimal_state.matrix)
        if evals[:-1].max(initial=0.0) > 1e-10:
            raise ValueError("optimal state is not rank one")
        self.dq = float(dq)
        self.optimal_state = optimal_state
        self.q_infinity = float(q_infinity)
        self.stationary = stationary


def q_functional_series(model, times):
    """Operators X_t = e^{tL}[I] such that Q_t(rho_0) = Tr[rho_0 X_t].

    One propagation serves every initial state; used by sweeps and the
    acceptance batches.
    """
    g = dynamics.liouvillian(model)
    eye = np.eye(model.dim, dtype=complex)
    return dynamics.propagate_series(g, eye, times)


def q_series(model, rho0, times, bound_tol=1e-8):
    """Quantumness series of a Lindblad model for one initial state.

    Propagates the adjoint generator from A_0 = rho_0 and records the
    trace; values outside [0, dim] beyond ``bound_tol`` abort.
    """
    rho0 = state_matrix(rho0)
    gd = dynamics.dual_liouvillian(model)
    values = [
        np.trace(a).real
        for a in dynamics.propagate_series(gd, rho0, times)
    ]
    return QuantumnessSeries(times, values, model.dim, bound_tol=bound_tol)


def q_stationary(model, rho0):
    """Stationary value of the propagated series, dim * Tr[rho_inf rho_0].

    This is the t -> infinity limit of ``q_series`` whenever the
    stationary state is unique, and reproduces the closed stationary
    forms of the worked models.
    """
    rho_inf = dynamics.stationary_state(dynamics.liouvillian(model))
    rho0 = state_matrix(rho0)
    return float(model.dim * np.trace(rho_inf.matrix @ rho0).real)


def dq_geometric(stationary, rho0):
    """Departure functional |dim * Tr[stationary rho_0] - 1|.

    Pass the conjugated stationary state to evaluate the time-reversed
    functional whose maximizer is the reported optimal state; pass the
    stationary state itself for the propagated-limit departure.  Both
    share the same maximum, dim * maxeig - 1.
    """
    stat = state_matrix(stationary)
    rho0 = state_matrix(rho0)
    if stat.shape != rho0.shape:
        raise ValueError("state dimensions differ")
    dim = stat.shape[0]
    return float(abs(dim * np.trace(stat @ rho0).real - 1.0))


def degree_of_quantumness(model):
    """Maximal asymptotic departure of Q from 1 over initial states.

    D_Q = dim * maxeig(rho_inf) - 1 whenever that branch dominates;
    the minimum-eigenvalue branch |dim * mineig - 1| is also evaluated
    and the larger departure reported (ties go to the upper branch).
    The optimal state is the matching eigenprojector of the conjugated
    stationary state.
    """
    rho_inf = dynamics.stationary_state(dynamics.liouvillian(model))
    reversed_stat = dynamics.time_reversed_state(rho_inf)
    spec = qcore.hermitian_eigensystem(reversed_stat.matrix)
    dim = model.dim
    upper = dim * spec.eigenvalues[-1] - 1.0
    lower = abs(dim * spec.eigenvalues[0] - 1.0)
    if upper >= lower:
        dq, vector = upper, spec.eigenvectors[:, -1]
    else:
        dq, vector = lower, spec.eigenvectors[:, 0]
    optimal = QuantumState.pure(vector)
    q_inf = dim * (spec.eigenvalues[-1] if upper >= lower else spec.eigenvalues[0])
    return QuantumnessReport(dq, optimal, q_inf, rho_inf)


def renormalized_degree(stationary):
    """Largest eigenvalue of the (possibly truncated) stationary state.

    The infinite-dimensional replacement for the degree of quantumness:
    the maximum of Tr[conj(rho_inf) rho_0] over initial states, attained
    at the top eigenprojector.  Conjugation leaves it unchanged.
    """
    stat = state_matrix(stationary)
    return float(np.linalg.eigvalsh(stat).max())


def unitality_check(kraus, channel_tol=1e-8, unital_tol=1e-10):
    """Whether a Kraus family is unital: sum T T^dag = I.

    Returns (is_unital, residual) with residual the max-entry deviation
    of sum T T^dag from the identity.  The input must be a valid channel
    (sum T^dag T = I to ``channel_tol``).
    """
    kraus = [as_operator(t, "Kraus operator") for t in kraus]
    if not kraus:
        raise ValueError("empty Kraus list")
    d = kraus[0].shape[0]
    eye = np.eye(d)
    complete = sum(t.conj().T @ t for t in kraus)
    dev = np.abs(complete - eye).max()
    if dev > channel_tol:
        raise ValueError(f"not a channel: sum T^dag T deviates from I by {dev:.3e}")
    residual = float(np.abs(sum(t @ t.conj().T for t in kraus) - eye).max())
    return residual <= unital_tol, residual
