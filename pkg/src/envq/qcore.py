"""Dense complex linear algebra and quantum-information primitives.

Conventions fixed here for the whole package:

* operators are dense ``numpy`` complex arrays in row-major semantic order;
* vectorization stacks columns (Fortran order), so that
  ``vec(A X B) = kron(B.T, A) @ vec(X)``;
* validity checks default to tolerance ``1e-10`` and reconstruction
  checks to ``1e-9``, overridable per call.
"""

import numpy as np
import scipy.linalg

# centralized default tolerances
VALID_TOL = 1e-10   # hermiticity / trace / positivity of states
RECON_TOL = 1e-9    # eigendecomposition reconstruction residual
HERM_INPUT_TOL = 1e-8  # hermiticity required of eigensystem inputs


class BoundViolationError(RuntimeError):
    """A computed quantumness value left its dimensional bounds."""


class DegenerateSteadyStateError(RuntimeError):
    """The generator has no unique stationary state."""


# ---------------------------------------------------------------------------
# elementary operators

sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
sigma_z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# basis order (|+>, |->) with sigma_z|+> = +|+>; sigma_minus lowers
sigma_minus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
sigma_plus = sigma_minus.conj().T


def identity(dim):
    return np.eye(dim, dtype=complex)


def ket(dim, index):
    """Computational-basis column vector |index> of length dim."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def destroy(dim):
    """Truncated bosonic annihilation operator on a dim-level ladder."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number_operator(dim):
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def bloch_vector_state(theta, phi):
    """Pure qubit state cos(theta/2)|+> + e^{i phi} sin(theta/2)|->."""
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])


# ---------------------------------------------------------------------------
# shape and validity helpers

def as_operator(m, name="operator"):
    """Coerce to a square complex ndarray, raising ValueError otherwise."""
    a = np.asarray(getattr(m, "matrix", m), dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def is_hermitian(m, tol=VALID_TOL):
    m = np.asarray(m)
    return np.abs(m - m.conj().T).max() <= tol


def require_hermitian(m, tol=VALID_TOL, name="operator"):
    m = as_operator(m, name)
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise ValueError(f"{name} is not Hermitian (max deviation {dev:.3e} > {tol:.0e})")
    return m


def vec(m):
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v, dim=None):
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if dim is None:
        dim = round(np.sqrt(v.size))
    return v.reshape(dim, dim, order="F")


def trace_distance(a, b):
    """Half trace norm of the difference of two Hermitian matrices."""
    delta = as_operator(a) - as_operator(b)
    return 0.5 * np.abs(np.linalg.eigvalsh(0.5 * (delta + delta.conj().T))).sum()


# ---------------------------------------------------------------------------
# core operations

def tensor_product(*ops):
    """Kronecker product of one or more operators, in the given order."""
    if not ops:
        raise ValueError("tensor_product needs at least one factor")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(m, dims, keep):
    """Trace out all tensor factors except those listed in ``keep``.

    Parameters
    ----------
    m : array_like
        Square matrix on the full tensor-product space.
    dims : sequence of int
        Dimension of each tensor factor; their product must equal the
        matrix dimension.
    keep : int or sequence of int
        Indices of the factors to keep, in increasing order of factor.

    Returns
    -------
    ndarray
        Reduced matrix over the kept factors.  The total trace is
        preserved.
    """
    m = as_operator(m, "partial_trace input")
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != m.shape[0]:
        raise ValueError(f"product of dims {dims} does not match matrix dimension {m.shape[0]}")
    if np.isscalar(keep):
        keep = [int(keep)]
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    reshaped = m.reshape(dims + dims)
    row_idx = list(range(n))
    col_idx = [i if i not in keep else n + i for i in range(n)]
    out_idx = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(reshaped, row_idx + col_idx, out_idx)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(d_keep, d_keep)


def matrix_exponential(m, method="auto"):
    """Matrix exponential ``exp(m)``.

    ``method="auto"`` takes a spectral route when the input is Hermitian
    or anti-Hermitian and otherwise falls back to scaling-and-squaring
    with the order-13 rational approximant (``scipy.linalg.expm``).
    ``"pade"`` and ``"spectral"`` force one route; the spectral route
    rejects inputs that are neither Hermitian nor anti-Hermitian.
    """
    m = as_operator(m, "matrix_exponential input")
    if method not in ("auto", "pade", "spectral"):
        raise ValueError(f"unknown method {method!r}")
    if method != "pade":
        scale = max(np.abs(m).max(), 1.0)
        herm = np.abs(m - m.conj().T).max() <= 1e-13 * scale
        anti = np.abs(m + m.conj().T).max() <= 1e-13 * scale
        if herm or anti:
            h = m if herm else -1j * m
            w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
            phase = np.exp(w) if herm else np.exp(1j * w)
            return (v * phase) @ v.conj().T
        if method == "spectral":
            raise ValueError("spectral route needs a Hermitian or anti-Hermitian input")
    return scipy.linalg.expm(m)


class Spectrum:
    """Full eigensystem of a Hermitian matrix, eigenvalues ascending."""

    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(eigenvectors, dtype=complex)

    def max_eigenvalue(self):
        return self.eigenvalues[-1]

    def max_eigenvector(self):
        return self.eigenvectors[:, -1]

    def reconstruct(self):
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def hermitian_eigensystem(h, tol=HERM_INPUT_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    h = require_hermitian(h, tol=tol, name="eigensystem input")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    spec = Spectrum(w, v)
    resid = np.abs(spec.reconstruct() - h).max()
    if resid > RECON_TOL * max(1.0, np.abs(w).max()):
        raise RuntimeError(f"eigendecomposition residual {resid:.3e} too large")
    return spec


def concurrence(rho):
    """Wootters concurrence of a two-qubit state, in [0, 1].

    C(rho) = max(0, mu1 - mu2 - mu3 - mu4) where the mu_i are the
    square roots, in decreasing order, of the eigenvalues of
    rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y).  Pure states take
    the equivalent spin-flip overlap |psi^T (sigma_y x sigma_y) psi|,
    which avoids square roots of the numerically-zero eigenvalues.
    """
    m = as_operator(rho, "concurrence input")
    if m.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 two-qubit state, got {m.shape}")
    yy = tensor_product(sigma_y, sigma_y)
    purity = np.trace(m @ m).real
    if abs(purity - 1.0) < 1e-12:
        w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
        psi = v[:, -1]
        return float(abs(psi @ yy @ psi))
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    sqrt_m = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    r = sqrt_m @ (yy @ m.conj() @ yy) @ sqrt_m
    evals = np.linalg.eigvalsh(0.5 * (r + r.conj().T))
    mu = np.sqrt(np.clip(np.sort(evals)[::-1], 0.0, None))
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


# ---------------------------------------------------------------------------
# states

class QuantumState:
    """Density matrix with validity checks and tensor-factor bookkeeping.

    Hermiticity and unit trace are enforced to ``tol`` and the minimum
    eigenvalue must not fall below ``-tol``.
    """

    def __init__(self, matrix, dims=None, tol=VALID_TOL):
        m = as_operator(matrix, "state")
        dev = np.abs(m - m.conj().T).max()
        if dev > tol:
            raise ValueError(f"state not Hermitian (deviation {dev:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > tol:
            raise ValueError(f"state trace {tr} is not 1")
        min_eig = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
        if min_eig < -tol:
            raise ValueError(f"state not positive semidefinite (min eigenvalue {min_eig:.3e})")
        self.matrix = m
        if dims is None:
            dims = [m.shape[0]]
        dims = [int(d) for d in dims]
        if int(np.prod(dims)) != m.shape[0]:
            raise ValueError(f"dims {dims} inconsistent with dimension {m.shape[0]}")
        self.dims = dims

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector, dims=None):
        v = np.asarray(vector, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()), dims=dims)

    @classmethod
    def maximally_mixed(cls, dim, dims=None):
        return cls(np.eye(dim, dtype=complex) / dim, dims=dims)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.matrix
        return self.matrix.astype(dtype)

    def __repr__(self):
        return f"QuantumState(dim={self.dim}, dims={self.dims})"


def state_matrix(state):
    """Matrix of a QuantumState, or a validated plain density matrix."""
    if isinstance(state, QuantumState):
        return state.matrix
    return QuantumState(state).matrix


def random_state(dim, rng, rank=None):
    """Haar-ish random density matrix (Wishart construction)."""
    rank = rank or dim
    m = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = m @ m.conj().T
    return QuantumState(rho / np.trace(rho).real)


def random_pure_state(dim, rng):
    return QuantumState.pure(rng.normal(size=dim) + 1j * rng.normal(size=dim))


# ---------------------------------------------------------------------------
# shared matrix text format: "rows cols" then whitespace-separated
# "re+imi" entries in row-major order

def format_complex(z, digits=17):
    z = complex(z)
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def parse_complex(token):
    """Parse one "re+imi" token; plain reals and pure imaginaries allowed."""
    s = token.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex token")
    if s.endswith("i"):
        body = s[:-1]
        # split off the imaginary coefficient at the last sign that is not
        # part of an exponent
        idx = None
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                idx = k
                break
        if idx is None:
            re_part, im_part = "0", body if body not in ("", "+", "-") else body + "1"
        else:
            re_part, im_part = body[:idx], body[idx:]
            if im_part in ("+", "-"):
                im_part += "1"
        if im_part in ("",):
            im_part = "1"
        return complex(float(re_part or "0"), float(im_part))
    return complex(float(s), 0.0)


def format_matrix_text(m, digits=17):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    rows, cols = m.shape
    entries = " ".join(format_complex(z, digits) for z in m.reshape(-1))
    return f"{rows} {cols} {entries}"


def parse_matrix_text(text):
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix text needs 'rows cols' followed by entries")
    rows, cols = int(tokens[0]), int(tokens[1])
    entries = tokens[2:]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    data = [parse_complex(tok) for tok in entries]
    return np.array(data, dtype=complex).reshape(rows, cols)
