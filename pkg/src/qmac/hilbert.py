"""Dense linear algebra and entropy primitives on small multipartite Hilbert spaces.

Every state carries an explicit tuple of subsystem dimensions, and all factor
bookkeeping (tensor order, partial traces, permutations) refers to those
dimensions.  Entropies and rates are in bits (base-2 logarithms) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HERMITICITY_TOL",
    "POSITIVITY_TOL",
    "TRACE_TOL",
    "NORM_TOL",
    "EIG_CLIP",
    "PAULIS",
    "DensityOperator",
    "PureState",
    "tensor",
    "product_state",
    "projector",
    "basis_state",
    "bell_state",
    "maximally_mixed",
    "partial_trace",
    "permute_systems",
    "hermitian_eigenvalues",
    "von_neumann_entropy",
    "shannon_entropy",
    "entropy_directional_derivative",
    "haar_pure",
    "random_density",
    "random_traceless_hermitian",
]

HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
# Eigenvalues / probabilities below this are treated as exact zeros in entropies.
EIG_CLIP = 1e-12
PROB_NEG_TOL = 1e-12
PROB_SUM_TOL = 1e-9


def _pauli_tuple():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    ops = (np.eye(2, dtype=complex), sx, sy, sz)
    for op in ops:
        op.setflags(write=False)
    return ops


#: Identity and the three Pauli matrices, indexed 0..3 as (I, x, y, z).
PAULIS = _pauli_tuple()


def _as_dims(dims, total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    if math.prod(dims) != total:
        raise ValueError(f"dims {dims} do not multiply to total dimension {total}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive-semidefinite, unit-trace matrix with attached factor dims."""

    mat: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density operator must be a square matrix")
        dims = _as_dims(self.dims, mat.shape[0])
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density operator is not Hermitian")
        if abs(mat.trace() - 1.0) > TRACE_TOL:
            raise ValueError(f"density operator trace {mat.trace():.6g} differs from 1")
        if np.linalg.eigvalsh(mat)[0] < -POSITIVITY_TOL:
            raise ValueError("density operator has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector with attached factor dims."""

    vec: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        vec = np.array(self.vec, dtype=complex).ravel()
        dims = _as_dims(self.dims, vec.size)
        if abs(np.linalg.norm(vec) - 1.0) > NORM_TOL:
            raise ValueError("state vector is not normalized")
        vec.setflags(write=False)
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.vec.size

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.vec, self.vec.conj()), self.dims)


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the first argument's indices major."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def product_state(*states: DensityOperator) -> DensityOperator:
    """Tensor product of density operators; factor dims are concatenated."""
    if not states:
        raise ValueError("need at least one state")
    mat = states[0].mat
    dims: tuple[int, ...] = states[0].dims
    for s in states[1:]:
        mat = np.kron(mat, s.mat)
        dims = dims + s.dims
    return DensityOperator(mat, dims)


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj())


def basis_state(dim: int, index: int) -> PureState:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return PureState(v, (dim,))


def bell_state(index: int) -> PureState:
    """Two-qubit Bell state (sigma_index on the first qubit of (|00>+|11>)/sqrt(2))."""
    plus = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return PureState(tensor(PAULIS[index], np.eye(2)) @ plus, (2, 2))


def maximally_mixed(dims) -> DensityOperator:
    dims = tuple(int(d) for d in dims)
    d = math.prod(dims)
    return DensityOperator(np.eye(d, dtype=complex) / d, dims)


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced state on the factor subset ``keep`` (original factor order retained)."""
    dims = rho.dims
    n = len(dims)
    kept = sorted({int(k) for k in keep})
    if not kept:
        raise ValueError("keep must name at least one subsystem")
    if kept[0] < 0 or kept[-1] >= n:
        raise ValueError(f"subsystem index out of range for {n} factors")
    t = rho.mat.reshape(dims + dims)
    kept_set = set(kept)
    row = list(range(n))
    col = [n + i if i in kept_set else i for i in range(n)]
    out = [i for i in kept] + [n + i for i in kept]
    reduced = np.einsum(t, row + col, out)
    d = math.prod(dims[i] for i in kept)
    return DensityOperator(reduced.reshape(d, d), tuple(dims[i] for i in kept))


def permute_systems(rho: DensityOperator, perm) -> DensityOperator:
    """Reorder tensor factors: new factor k is old factor perm[k]."""
    dims = rho.dims
    n = len(dims)
    perm = [int(x) for x in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} factors")
    t = rho.mat.reshape(dims + dims)
    axes = perm + [n + x for x in perm]
    mat = t.transpose(axes).reshape(rho.dim, rho.dim)
    return DensityOperator(mat, tuple(dims[x] for x in perm))


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, sorted in descending order."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)[::-1]


def von_neumann_entropy(rho: DensityOperator) -> float:
    """S(rho) = -Tr[rho log2 rho] in bits."""
    w = np.linalg.eigvalsh(rho.mat)
    w = w[w > EIG_CLIP]
    if w.size == 0:
        return 0.0
    return float(max(-(w @ np.log2(w)), 0.0))


def shannon_entropy(probs) -> float:
    """H(p) = -sum p_i log2 p_i with 0 log 0 := 0."""
    p = np.asarray(probs, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("empty distribution")
    if p.min() < -PROB_NEG_TOL:
        raise ValueError(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities sum to {p.sum():.12g}, not 1")
    q = p[p > EIG_CLIP]
    if q.size == 0:
        return 0.0
    return float(max(-(q @ np.log2(q)), 0.0))


def entropy_directional_derivative(rho: DensityOperator, delta) -> float:
    """Derivative of S(rho + a*delta) at a=0 for traceless Hermitian delta.

    Equals -Tr[delta log2 rho].  Raises if delta has support on a null
    eigendirection of rho, where the derivative diverges.
    """
    d = np.asarray(delta, dtype=complex)
    if d.shape != rho.mat.shape:
        raise ValueError("direction shape does not match state")
    if np.max(np.abs(d - d.conj().T)) > HERMITICITY_TOL:
        raise ValueError("direction is not Hermitian")
    if abs(d.trace()) > HERMITICITY_TOL:
        raise ValueError(f"direction has trace {d.trace():.3g}, expected 0")
    w, v = np.linalg.eigh(rho.mat)
    diag = np.real(np.einsum("ij,jk,ki->i", v.conj().T, d, v))
    support = w > EIG_CLIP
    if np.any(~support & (np.abs(diag) > 1e-10)):
        raise ValueError("state is singular along the direction; derivative diverges")
    return float(-(diag[support] @ np.log2(w[support])))


def haar_pure(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state on the given factors."""
    dims = tuple(int(d) for d in dims)
    d = math.prod(dims)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z), dims)


def random_density(dims, rng: np.random.Generator) -> DensityOperator:
    """Full-rank random mixed state (Hilbert-Schmidt measure)."""
    dims = tuple(int(d) for d in dims)
    d = math.prod(dims)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityOperator(m / m.trace().real, dims)


def random_traceless_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random traceless Hermitian matrix with unit Frobenius norm."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2
    h -= np.eye(dim) * (h.trace() / dim)
    return h / np.linalg.norm(h)
