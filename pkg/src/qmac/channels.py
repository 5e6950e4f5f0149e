"""Completely positive trace-preserving maps in Kraus form, plus the model channels.

Channels are stored as Kraus-operator lists with declared input/output factor
dimensions; :func:`apply` is the only evaluation path.  Input factors follow
the sender-major convention: the factors of one channel copy are listed
(first-sender input, second-sender input, ...), copies left to right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qmac.hilbert import (
    HERMITICITY_TOL,
    PAULIS,
    DensityOperator,
    basis_state,
    projector,
    tensor,
)

__all__ = [
    "TP_TOL",
    "KrausChannel",
    "apply",
    "apply_matrix",
    "tensor_channels",
    "compose",
    "identity_channel",
    "unitary_channel",
    "depolarizing",
    "dephasing",
    "controlled_pauli_unitary",
    "phi_p",
    "psi_id",
    "gamma_p",
]

# Trace-preservation tolerance for sum_k K^dag K = I.
TP_TOL = 1e-10


def _check_prob(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map given by a finite Kraus list with declared input/output factors."""

    kraus: tuple[np.ndarray, ...]
    in_dims: tuple[int, ...]
    out_dims: tuple[int, ...]

    def __post_init__(self):
        in_dims = tuple(int(d) for d in self.in_dims)
        out_dims = tuple(int(d) for d in self.out_dims)
        din = math.prod(in_dims)
        dout = math.prod(out_dims)
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (dout, din):
                raise ValueError(f"Kraus shape {k.shape} does not match dims ({dout}, {din})")
            k.setflags(write=False)
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(din))) > TP_TOL:
            raise ValueError("Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus", ops)
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)

    @property
    def in_dim(self) -> int:
        return math.prod(self.in_dims)

    @property
    def out_dim(self) -> int:
        return math.prod(self.out_dims)


def apply(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Channel action sum_k K rho K^dag as a validated state."""
    if rho.dims != ch.in_dims:
        raise ValueError(f"state dims {rho.dims} do not match channel input {ch.in_dims}")
    return DensityOperator(apply_matrix(ch, rho.mat), ch.out_dims)


def apply_matrix(ch: KrausChannel, mat) -> np.ndarray:
    """Linear action of the channel on an arbitrary matrix (no state validation)."""
    m = np.asarray(mat, dtype=complex)
    if m.shape != (ch.in_dim, ch.in_dim):
        raise ValueError(f"matrix shape {m.shape} does not match channel input {ch.in_dim}")
    out = np.zeros((ch.out_dim, ch.out_dim), dtype=complex)
    for k in ch.kraus:
        out += k @ m @ k.conj().T
    return out


def tensor_channels(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Parallel use of two channels; Kraus set {K_i (x) L_j}, dims concatenated."""
    ops = [np.kron(k, l) for k in a.kraus for l in b.kraus]
    return KrausChannel(ops, a.in_dims + b.in_dims, a.out_dims + b.out_dims)


def compose(after: KrausChannel, before: KrausChannel) -> KrausChannel:
    """Channel composition after(before(rho)); Kraus set of products."""
    if before.out_dims != after.in_dims:
        raise ValueError(
            f"cannot compose: intermediate dims {before.out_dims} vs {after.in_dims}"
        )
    ops = [ka @ kb for ka in after.kraus for kb in before.kraus]
    return KrausChannel(ops, before.in_dims, after.out_dims)


def identity_channel(dims) -> KrausChannel:
    dims = tuple(int(d) for d in dims)
    return KrausChannel((np.eye(math.prod(dims)),), dims, dims)


def unitary_channel(u, in_dims, out_dims=None) -> KrausChannel:
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > HERMITICITY_TOL:
        raise ValueError("matrix is not unitary")
    return KrausChannel((u,), in_dims, out_dims if out_dims is not None else in_dims)


def _weyl(d: int, a: int, b: int) -> np.ndarray:
    # Discrete shift-and-clock operator X^a Z^b on d levels.
    x = np.zeros((d, d), dtype=complex)
    for k in range(d):
        x[(k + a) % d, k] = 1.0
    z = np.diag(np.exp(2j * np.pi * b * np.arange(d) / d))
    return x @ z


def depolarizing(d: int, p: float) -> KrausChannel:
    """Depolarizing channel on d levels: rho -> (1-p) rho + p I/d.

    Kraus realization: sqrt(1 - p + p/d^2) I plus the d^2 - 1 non-identity
    discrete Weyl operators, each weighted sqrt(p)/d.
    """
    p = _check_prob(p)
    if d < 1:
        raise ValueError("dimension must be positive")
    ops = [math.sqrt(1.0 - p + p / d**2) * np.eye(d, dtype=complex)]
    if p > 0:
        w = math.sqrt(p) / d
        ops.extend(
            w * _weyl(d, a, b) for a in range(d) for b in range(d) if (a, b) != (0, 0)
        )
    return KrausChannel(ops, (d,), (d,))


def dephasing(d: int) -> KrausChannel:
    """Complete dephasing in the standard basis (kills off-diagonal entries)."""
    ops = [projector(basis_state(d, k).vec) for k in range(d)]
    return KrausChannel(ops, (d,), (d,))


def controlled_pauli_unitary() -> np.ndarray:
    """8x8 block-diagonal unitary: a four-level control selects the Pauli on a qubit."""
    u = np.zeros((8, 8), dtype=complex)
    for i in range(4):
        u += tensor(projector(basis_state(4, i).vec), PAULIS[i])
    return u


def phi_p(p: float) -> KrausChannel:
    """Two-sender channel with a noisy dense-coding structure.

    The first sender supplies a four-level register that selects a Pauli
    applied to the second sender's qubit; afterwards the register output
    passes through depolarizing noise of strength p.  Action:
    rho -> (1-p) U rho U^dag + p (I/4) (x) Tr_reg[U rho U^dag],
    with U the controlled-Pauli unitary.  Input factors (4, 2), output (4, 2).
    """
    u = unitary_channel(controlled_pauli_unitary(), (4, 2))
    noise = tensor_channels(depolarizing(4, _check_prob(p)), identity_channel((2,)))
    return compose(noise, u)


def psi_id() -> KrausChannel:
    """Ideal channel transmitting one qubit from each of the two senders."""
    return identity_channel((2, 2))


def gamma_p(p: float) -> KrausChannel:
    """Three-sender channel: qubit, four-level register, qubit -> two qubits.

    With probability 1-p the register selects a Pauli applied to the first
    qubit, with probability p a Pauli applied to the third; the register is
    then discarded.  Input factors (2, 4, 2), output factors (2, 2).
    """
    p = _check_prob(p)
    up = np.zeros((16, 16), dtype=complex)
    down = np.zeros((16, 16), dtype=complex)
    for j in range(4):
        ej = projector(basis_state(4, j).vec)
        up += tensor(PAULIS[j], tensor(ej, np.eye(2)))
        down += tensor(np.eye(2), tensor(ej, PAULIS[j]))
    ops = []
    for b in range(4):
        bra = np.zeros((1, 4), dtype=complex)
        bra[0, b] = 1.0
        cut = np.kron(np.eye(2), np.kron(bra, np.eye(2)))  # (4, 16)
        if p < 1:
            ops.append(math.sqrt(1.0 - p) * cut @ up)
        if p > 0:
            ops.append(math.sqrt(p) * cut @ down)
    return KrausChannel(ops, (2, 4, 2), (2, 2))
