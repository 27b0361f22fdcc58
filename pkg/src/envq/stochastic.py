"""Classical-noise and collisional dynamics.

Both constructions realize system evolutions driven by classical
stochastic processes, so their quantumness series must stay pinned at
1: per noise realization the dual map is a unitary conjugation, and a
collision channel with trace-preserving dual leaves the dual-chain
trace invariant.  The non-unital collision channels exercised in the
tests are deliberate counterexamples, not part of that guarantee.

Randomness is counter-based: every path owns a Philox stream derived
from (seed, path index), so results are independent of evaluation
order and bitwise reproducible.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from . import qcore, quantumness
from .qcore import QuantumState, as_operator, require_hermitian, state_matrix, unvec, vec

NOISE_FAMILIES = ("gaussian-white", "ornstein-uhlenbeck", "telegraph")
WAITING_FAMILIES = ("exponential", "gamma", "deterministic")


def path_rng(seed, path_index):
    """Philox generator for one path of one seeded run."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(path_index),))
    return np.random.Generator(np.random.Philox(ss))


# ---------------------------------------------------------------------------
# noise processes and stochastic Hamiltonians

@dataclass(frozen=True)
class NoiseProcess:
    """Scalar classical noise coupled through a Hermitian operator."""

    family: str
    amplitude: float
    correlation_time: float
    coupling: object

    def __post_init__(self):
        if self.family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.family!r}")
        if self.correlation_time < 0:
            raise ValueError("correlation_time must be nonnegative")
        if self.family != "gaussian-white" and self.correlation_time <= 0:
            raise ValueError(f"{self.family} noise needs a positive correlation time")
        object.__setattr__(
            self, "coupling", require_hermitian(self.coupling, name="noise coupling")
        )


@dataclass(frozen=True)
class NoisePath:
    """Piecewise-constant realization: values held over durations."""

    durations: np.ndarray
    values: np.ndarray

    @property
    def t_max(self):
        return float(self.durations.sum())


def sample_noise_path(process, t_max, dt, seed, path_index=0):
    """Reproducible single realization on [0, t_max].

    White noise is represented by per-step values whose time integrals
    carry the correct Wiener increments; the colored families hold the
    step rule dt <= correlation_time / 10.  Telegraph paths switch at
    exact exponential-clock times.
    """
    if dt <= 0 or t_max <= 0:
        raise ValueError("t_max and dt must be positive")
    if process.family != "gaussian-white" and dt > process.correlation_time / 10.0:
        raise ValueError("dt must not exceed correlation_time / 10 for colored noise")
    rng = path_rng(seed, path_index)
    a = process.amplitude
    if process.family == "telegraph":
        rate = 0.5 / process.correlation_time
        sign = 1.0 if rng.random() < 0.5 else -1.0
        durations, values = [], []
        elapsed = 0.0
        while elapsed < t_max:
            wait = rng.exponential(1.0 / rate) if rate > 0 else t_max
            step = min(wait, t_max - elapsed)
            durations.append(step)
            values.append(sign * a)
            sign = -sign
            elapsed += step
        return NoisePath(np.asarray(durations), np.asarray(values))
    n = int(np.ceil(t_max / dt))
    durations = np.full(n, dt)
    durations[-1] = t_max - dt * (n - 1)
    if process.family == "gaussian-white":
        z = rng.standard_normal(n)
        values = a * z / np.sqrt(durations)
    else:  # ornstein-uhlenbeck, exact discretization from stationarity
        tau = process.correlation_time
        decay = np.exp(-durations / tau)
        z = rng.standard_normal(n)
        values = np.empty(n)
        x = a * rng.standard_normal()
        for k in range(n):
            values[k] = x
            x = x * decay[k] + a * np.sqrt(1.0 - decay[k] ** 2) * z[k]
    return NoisePath(durations, values)


def _segment_unitary(h0, coupling, value, duration, diag_fast):
    if diag_fast:
        phases = np.exp(-1j * duration * (np.diag(h0).real + value * np.diag(coupling).real))
        return np.diag(phases)
    return qcore.matrix_exponential(-1j * duration * (h0 + value * coupling))


def _unitaries_on_grid(h0, coupling, path, times):
    """Cumulative path unitaries evaluated at the requested times."""
    d = h0.shape[0]
    diag_fast = (
        np.abs(h0 - np.diag(np.diag(h0))).max() < 1e-14
        and np.abs(coupling - np.diag(np.diag(coupling))).max() < 1e-14
    )
    out = np.empty((len(times), d, d), dtype=complex)
    u = np.eye(d, dtype=complex)
    k = 0
    start = 0.0
    eps = 1e-12 * max(path.t_max, 1.0)
    for dur, x in zip(path.durations, path.values):
        while k < len(times) and times[k] <= start + dur + eps:
            out[k] = _segment_unitary(h0, coupling, x, times[k] - start, diag_fast) @ u
            k += 1
        u = _segment_unitary(h0, coupling, x, dur, diag_fast) @ u
        start += dur
    if k < len(times):
        raise ValueError("requested times extend beyond the sampled path")
    return out


def stochastic_q(process, base_h, rho0, times, n_paths, seed, dt=None):
    """Ensemble quantumness series under a stochastic Hamiltonian.

    Per realization the dual map is unitary conjugation, so every path
    contributes exactly 1; the returned standard error is the honest
    (vanishing) spread of the path values.
    """
    h0 = require_hermitian(base_h, name="base Hamiltonian")
    rho0 = state_matrix(rho0)
    times = np.asarray(times, dtype=float)
    if dt is None:
        dt = _default_dt(process, times)
    t_max = float(times.max()) if times.size else dt
    samples = np.empty((n_paths, times.size))
    for p in range(n_paths):
        path = sample_noise_path(process, max(t_max, dt), dt, seed, path_index=p)
        us = _unitaries_on_grid(h0, process.coupling, path, times)
        samples[p] = [np.trace(u.conj().T @ rho0 @ u).real for u in us]
    mean = samples.mean(axis=0)
    stderr = samples.std(axis=0, ddof=1) / np.sqrt(n_paths) if n_paths > 1 else np.zeros_like(mean)
    series = quantumness.QuantumnessSeries(times, mean, h0.shape[0])
    return series, stderr


def stochastic_average_state(process, base_h, rho0, times, n_paths, seed, dt=None):
    """Noise-averaged states and the aggregate elementwise stderr scale.

    Returns (states, stderr) where states[k] is the ensemble mean
    density matrix at times[k] and stderr[k] collects
    sqrt(sum_ij Var[rho_ij] / n_paths).
    """
    h0 = require_hermitian(base_h, name="base Hamiltonian")
    rho0 = state_matrix(rho0)
    times = np.asarray(times, dtype=float)
    if dt is None:
        dt = _default_dt(process, times)
    t_max = float(times.max()) if times.size else dt
    d = h0.shape[0]
    acc = np.zeros((times.size, d, d), dtype=complex)
    acc_sq = np.zeros((times.size, d, d))
    for p in range(n_paths):
        path = sample_noise_path(process, max(t_max, dt), dt, seed, path_index=p)
        us = _unitaries_on_grid(h0, process.coupling, path, times)
        for k, u in enumerate(us):
            r = u @ rho0 @ u.conj().T
            acc[k] += r
            acc_sq[k] += r.real ** 2 + r.imag ** 2
    mean = acc / n_paths
    var = acc_sq / n_paths - (mean.real ** 2 + mean.imag ** 2)
    stderr = np.sqrt(np.clip(var, 0.0, None).sum(axis=(1, 2)) / max(n_paths - 1, 1))
    states = [0.5 * (m + m.conj().T) for m in mean]
    return states, stderr


def _default_dt(process, times):
    t_max = float(np.max(times)) if np.size(times) else 1.0
    if process.family == "gaussian-white":
        return max(t_max, 1e-6) / 400.0
    return process.correlation_time / 20.0


# ---------------------------------------------------------------------------
# renewal waiting times

@dataclass(frozen=True)
class WaitingTime:
    """Renewal waiting-time distribution between collisions."""

    family: str
    rate: float = None
    shape: float = None
    period: float = None

    def __post_init__(self):
        if self.family not in WAITING_FAMILIES:
            raise ValueError(f"unknown waiting family {self.family!r}")
        if self.family == "exponential" and not (self.rate and self.rate > 0):
            raise ValueError("exponential waiting needs rate > 0")
        if self.family == "gamma":
            if not (self.rate and self.rate > 0 and self.shape and self.shape >= 1):
                raise ValueError("gamma waiting needs rate > 0 and shape >= 1")
        if self.family == "deterministic" and not (self.period and self.period > 0):
            raise ValueError("deterministic waiting needs period > 0")

    def mean(self):
        if self.family == "exponential":
            return 1.0 / self.rate
        if self.family == "gamma":
            return self.shape / self.rate
        return self.period

    def sample(self, rng, size=None):
        if self.family == "exponential":
            return rng.exponential(1.0 / self.rate, size=size)
        if self.family == "gamma":
            return rng.gamma(self.shape, 1.0 / self.rate, size=size)
        return np.full(size, self.period) if size is not None else self.period

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "exponential":
            return self.rate * np.exp(-self.rate * t)
        if self.family == "gamma":
            return scipy.stats.gamma.pdf(t, a=self.shape, scale=1.0 / self.rate)
        raise ValueError("deterministic waiting has no density")

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "exponential":
            return np.exp(-self.rate * t)
        if self.family == "gamma":
            return scipy.stats.gamma.sf(t, a=self.shape, scale=1.0 / self.rate)
        return (t < self.period).astype(float)

    def excess_event_prob(self, t, n):
        """P(more than n collisions happen by time t)."""
        if self.family == "deterministic":
            return 1.0 if t >= (n + 1) * self.period else 0.0
        a = (n + 1) * (self.shape if self.family == "gamma" else 1.0)
        return float(scipy.stats.gamma.cdf(t, a=a, scale=1.0 / self.rate))


# ---------------------------------------------------------------------------
# collisional models

@dataclass
class CollisionalModel:
    """Free Hamiltonian evolution interrupted by channel collisions."""

    free_hamiltonian: object
    collision: list
    waiting: WaitingTime
    _eig: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.free_hamiltonian = require_hermitian(self.free_hamiltonian, name="free Hamiltonian")
        self.collision = [as_operator(t, "Kraus operator") for t in self.collision]
        d = self.dim
        comp = sum(t.conj().T @ t for t in self.collision)
        dev = np.abs(comp - np.eye(d)).max()
        if dev > 1e-10:
            raise ValueError(f"collision is not a channel (sum T^dag T off by {dev:.3e})")

    @property
    def dim(self):
        return self.free_hamiltonian.shape[0]

    def free_unitary(self, t):
        if self._eig is None:
            spec = qcore.hermitian_eigensystem(self.free_hamiltonian)
            self._eig = (spec.eigenvalues, spec.eigenvectors)
        w, v = self._eig
        return (v * np.exp(-1j * w * t)) @ v.conj().T

    def apply_collision(self, x):
        return sum(t @ x @ t.conj().T for t in self.collision)

    def collision_superoperator(self):
        return sum(np.kron(t.conj(), t) for t in self.collision)


def dual_trace_check(kraus, channel_tol=1e-8, unital_tol=1e-10):
    """Trace preservation of the dual collision map.

    Tr[E*[A]] = Tr[A] on an operator basis is equivalent to
    sum T T^dag = I, so this simply delegates to the unitality check.
    """
    return quantumness.unitality_check(kraus, channel_tol=channel_tol, unital_tol=unital_tol)


def _series_chain(model, x0, times, step=None, n_max=None, tail_tol=1e-8):
    """Deterministic renewal average of the collision chain applied to x0.

    Works on an internal uniform grid with a product-trapezoidal
    convolution.  The survival weight is the discrete complement of the
    quadrature cumulative, which makes the renewal telescoping exact on
    the grid; with a trace-preserving dual collision the chain applied
    to the identity then stays the identity to roundoff.
    """
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be nonnegative")
    t_max = float(times.max()) if times.size else 0.0
    w = model.waiting
    if w.family == "deterministic":
        return _deterministic_chain(model, x0, times)
    mean = w.mean()
    if step is None:
        step = mean / 100.0
    n_grid = max(2, int(np.ceil(t_max / step)))
    if n_grid > 60000:
        raise ValueError("series grid too fine; raise step or lower t_max")
    grid = step * np.arange(n_grid + 1)
    if n_max is None:
        n_max = 1
        while w.excess_event_prob(grid[-1], n_max) > tail_tol:
            n_max += 1
            if n_max > 500:
                raise ValueError("waiting tail does not close below the tolerance")
    elif w.excess_event_prob(grid[-1], n_max) > tail_tol:
        raise ValueError(
            f"n_max={n_max} leaves tail probability "
            f"{w.excess_event_prob(grid[-1], n_max):.2e} > {tail_tol:.0e}"
        )
    d = model.dim
    free = np.empty((n_grid + 1, d * d, d * d), dtype=complex)
    for k, t in enumerate(grid):
        u = model.free_unitary(t)
        free[k] = np.kron(u.conj(), u)
    wk = w.pdf(grid)
    # discrete complement of the trapezoidal cumulative
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (wk[1:] + wk[:-1]) * step)])
    surv = np.clip(1.0 - cdf, 0.0, None)
    e_mat = model.collision_superoperator()
    kern = wk[:, None, None] * np.einsum("ab,kbc->kac", e_mat, free)
    v0 = vec(x0)
    b = np.einsum("kab,b->ka", kern, v0)  # collision-arrival density on the grid
    b_total = b.copy()
    for _ in range(1, n_max):
        nxt = np.zeros_like(b)
        for k in range(1, n_grid + 1):
            # trapezoid over j of kern[k-j] b[j]: interior sum plus half-endpoints
            conv = np.einsum("jab,jb->a", kern[k - 1::-1], b[1:k + 1])
            conv += 0.5 * (kern[k] @ b[0] - kern[0] @ b[k])
            nxt[k] = step * conv
        b = nxt
        b_total += b
        if np.abs(b).max() * mean < 1e-14 * max(np.abs(v0).max(), 1.0):
            break
    out = np.empty((n_grid + 1, d * d), dtype=complex)
    for k in range(n_grid + 1):
        direct = surv[k] * (free[k] @ v0)
        if k == 0:
            out[k] = direct
            continue
        sk = surv[: k + 1][::-1, None, None] * free[k::-1]
        conv = np.einsum("jab,jb->a", sk[: k + 1], b_total[: k + 1])
        conv -= 0.5 * (sk[0] @ b_total[0] + sk[k] @ b_total[k])
        out[k] = direct + step * conv
    result = np.empty((times.size, d * d), dtype=complex)
    for c in range(d * d):
        result[:, c] = np.interp(times, grid, out[:, c].real) + 1j * np.interp(
            times, grid, out[:, c].imag
        )
    return [unvec(r, d) for r in result]


def _deterministic_chain(model, x0, times):
    period = model.waiting.period
    out = []
    step_map_cache = {}
    for t in np.asarray(times, dtype=float):
        n = int(np.floor((t + 1e-12 * period) / period))
        if n not in step_map_cache:
            x = np.asarray(x0, dtype=complex)
            u = model.free_unitary(period)
            for _ in range(n):
                x = model.apply_collision(u @ x @ u.conj().T)
            step_map_cache[n] = x
        x = step_map_cache[n]
        rest = t - n * period
        u = model.free_unitary(rest)
        out.append(u @ x @ u.conj().T)
    return out


def _monte_carlo_chain(model, x0, times, n_paths, seed):
    """Average of the random collision chain applied to x0.

    Returns (means, stderr) with stderr the aggregate elementwise
    standard-error scale sqrt(sum_ij Var / n_paths).
    """
    times = np.asarray(times, dtype=float)
    t_max = float(times.max()) if times.size else 0.0
    d = model.dim
    acc = np.zeros((times.size, d, d), dtype=complex)
    acc_sq = np.zeros((times.size, d, d))
    for p in range(n_paths):
        rng = path_rng(seed, p)
        event_times = []
        elapsed = model.waiting.sample(rng)
        while elapsed <= t_max:
            event_times.append(elapsed)
            elapsed += model.waiting.sample(rng)
        x = np.asarray(x0, dtype=complex)
        now = 0.0
        ev = 0
        for k, t in enumerate(times):
            while ev < len(event_times) and event_times[ev] <= t:
                u = model.free_unitary(event_times[ev] - now)
                x = model.apply_collision(u @ x @ u.conj().T)
                now = event_times[ev]
                ev += 1
            u = model.free_unitary(t - now)
            snapshot = u @ x @ u.conj().T
            acc[k] += snapshot
            acc_sq[k] += snapshot.real ** 2 + snapshot.imag ** 2
    mean = acc / n_paths
    var = acc_sq / n_paths - (mean.real ** 2 + mean.imag ** 2)
    stderr = np.sqrt(np.clip(var, 0.0, None).sum(axis=(1, 2)) / max(n_paths - 1, 1))
    return [0.5 * (m + m.conj().T) for m in mean], stderr


def collisional_state(model, rho0, t, mode="series", n_paths=None, seed=None,
                      step=None, n_max=None, tail_tol=1e-8):
    """System state of the collisional dynamics at one time."""
    states = collisional_states(
        model, rho0, [t], mode=mode, n_paths=n_paths, seed=seed, step=step,
        n_max=n_max, tail_tol=tail_tol,
    )
    return states[0]


def collisional_states(model, rho0, times, mode="series", n_paths=None, seed=None,
                       step=None, n_max=None, tail_tol=1e-8):
    """States on a time grid, by deterministic series or Monte Carlo."""
    rho0 = state_matrix(rho0)
    if mode == "series":
        mats = _series_chain(model, rho0, times, step=step, n_max=n_max, tail_tol=tail_tol)
    elif mode == "monte-carlo":
        if n_paths is None or seed is None:
            raise ValueError("monte-carlo mode needs n_paths and seed")
        mats, _ = _monte_carlo_chain(model, rho0, times, n_paths, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    # series-mode snapshots carry the quadrature error of the chain
    return [QuantumState(0.5 * (m + m.conj().T), tol=2e-4) for m in mats]


def collisional_q(model, rho0, times, mode="series", n_paths=None, seed=None,
                  step=None, n_max=None, tail_tol=1e-8, bound_tol=1e-8):
    """Quantumness series of the collisional dynamics.

    Uses the trace pairing: the dual-chain trace of rho0 equals
    Tr[rho0 C_t[I]] with C_t the forward chain applied to the identity,
    so a single chain evaluation serves the whole series.
    """
    rho0 = state_matrix(rho0)
    eye = np.eye(model.dim, dtype=complex)
    if mode == "series":
        mats = _series_chain(model, eye, times, step=step, n_max=n_max, tail_tol=tail_tol)
    elif mode == "monte-carlo":
        if n_paths is None or seed is None:
            raise ValueError("monte-carlo mode needs n_paths and seed")
        mats, _ = _monte_carlo_chain(model, eye, times, n_paths, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    values = [np.trace(rho0 @ m).real for m in mats]
    return quantumness.QuantumnessSeries(times, values, model.dim, bound_tol=bound_tol)
