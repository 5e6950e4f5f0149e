"""Holevo quantities, rate formulas, and ensemble optimization for the model channels.

Contains the two-sender mutual-information triple, closed forms for the
single-use and entangled two-use rates of the noisy dense-coding channel, a
seeded brute-force ensemble search, and numerical extremality checks for the
total- and minimum-output-entropy claims those closed forms rest on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qmac.channels import (
    KrausChannel,
    apply,
    apply_matrix,
    controlled_pauli_unitary,
    identity_channel,
    phi_p,
    psi_id,
    tensor_channels,
)
from qmac.hilbert import (
    EIG_CLIP,
    PROB_NEG_TOL,
    PROB_SUM_TOL,
    DensityOperator,
    PureState,
    basis_state,
    bell_state,
    haar_pure,
    maximally_mixed,
    entropy_directional_derivative,
    permute_systems,
    product_state,
    random_density,
    random_traceless_hermitian,
    shannon_entropy,
    tensor,
)

__all__ = [
    "Ensemble",
    "MacInfoTriple",
    "SearchConfig",
    "ChiSearchResult",
    "ExtremalityReport",
    "MinOutputReport",
    "basis_ensemble",
    "random_pure_ensemble",
    "holevo_chi",
    "mac_mutual_informations",
    "chi1_closed_form",
    "chi2_prime_closed_form",
    "chi2_prime_protocol",
    "superadditivity_gap",
    "chi1_bruteforce",
    "remote_dc_rate",
    "dense_coding_rate",
    "entropy_max_check",
    "min_output_entropy_scan",
]


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise parameter {p} outside [0, 1]")
    return p


def _entropy(mat: np.ndarray) -> float:
    # Base-2 entropy of a Hermitian PSD matrix, eigenvalues below EIG_CLIP dropped.
    w = np.linalg.eigvalsh(mat)
    w = w[w > EIG_CLIP]
    if w.size == 0:
        return 0.0
    return float(max(-(w @ np.log2(w)), 0.0))


def _xlog2(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log2(x)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability vector paired with a list of equal-dims states (a code alphabet)."""

    probs: np.ndarray
    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).ravel()
        states = tuple(self.states)
        if probs.size != len(states) or not states:
            raise ValueError("need one probability per state")
        if probs.min() < -PROB_NEG_TOL:
            raise ValueError(f"negative ensemble probability {probs.min():.3g}")
        if abs(probs.sum() - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"ensemble probabilities sum to {probs.sum():.12g}")
        dims = states[0].dims
        if any(s.dims != dims for s in states):
            raise ValueError("ensemble states have inconsistent dims")
        probs = np.maximum(probs, 0.0)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.states[0].dims

    @classmethod
    def uniform(cls, states) -> "Ensemble":
        states = tuple(states)
        return cls(np.full(len(states), 1.0 / len(states)), states)

    @classmethod
    def from_pure(cls, probs, pure_states) -> "Ensemble":
        return cls(probs, tuple(s.density() for s in pure_states))


def basis_ensemble(dim: int, indices=None) -> Ensemble:
    """Uniform ensemble over a subset of the standard basis (all of it by default)."""
    if indices is None:
        indices = range(dim)
    return Ensemble.uniform([basis_state(dim, i).density() for i in indices])


def random_pure_ensemble(dim: int, size: int, rng: np.random.Generator) -> Ensemble:
    """Haar-random pure states with flat-Dirichlet probabilities."""
    states = [haar_pure((dim,), rng).density() for _ in range(size)]
    return Ensemble(rng.dirichlet(np.ones(size)), tuple(states))


@dataclass(frozen=True)
class MacInfoTriple:
    """Conditional and joint Holevo informations of a two-sender code, in bits."""

    i_a_c_given_b: float
    i_b_c_given_a: float
    i_ab_c: float

    def __post_init__(self):
        for name, value in (
            ("i_a_c_given_b", self.i_a_c_given_b),
            ("i_b_c_given_a", self.i_b_c_given_a),
            ("i_ab_c", self.i_ab_c),
        ):
            if value < -1e-9:
                raise ValueError(f"{name} = {value:.3g} is negative")


def holevo_chi(ch: KrausChannel, ens: Ensemble) -> float:
    """chi = S(Phi(avg)) - sum_i p_i S(Phi(rho_i)) in bits."""
    outs = [apply(ch, s).mat for s in ens.states]
    avg = sum(p * o for p, o in zip(ens.probs, outs))
    chi = _entropy(avg) - sum(p * _entropy(o) for p, o in zip(ens.probs, outs))
    if -1e-9 < chi < 0.0:
        chi = 0.0
    return float(chi)


def mac_mutual_informations(
    ch: KrausChannel, alice: Ensemble, bob: Ensemble
) -> MacInfoTriple:
    """Rate-bound triple of a two-sender code: (I(A:C|B), I(B:C|A), I(AB:C)).

    Conditionals are computed by explicit conditioning, e.g. I(A:C|B) is the
    Bob-average of the Holevo quantity of Alice's ensemble at fixed Bob input.
    """
    if alice.dims + bob.dims != ch.in_dims:
        raise ValueError(
            f"ensemble dims {alice.dims} + {bob.dims} do not match channel input {ch.in_dims}"
        )
    pa, pb = alice.probs, bob.probs
    outs = [
        [apply(ch, product_state(sa, sb)).mat for sb in bob.states]
        for sa in alice.states
    ]
    ent = [[_entropy(o) for o in row] for row in outs]

    i_a_b = 0.0  # I(A:C|B)
    for j, qj in enumerate(pb):
        avg_j = sum(pa[i] * outs[i][j] for i in range(len(pa)))
        i_a_b += qj * (_entropy(avg_j) - sum(pa[i] * ent[i][j] for i in range(len(pa))))
    i_b_a = 0.0  # I(B:C|A)
    for i, pi in enumerate(pa):
        avg_i = sum(pb[j] * outs[i][j] for j in range(len(pb)))
        i_b_a += pi * (_entropy(avg_i) - sum(pb[j] * ent[i][j] for j in range(len(pb))))
    avg = sum(
        pa[i] * pb[j] * outs[i][j] for i in range(len(pa)) for j in range(len(pb))
    )
    i_ab = _entropy(avg) - sum(
        pa[i] * pb[j] * ent[i][j] for i in range(len(pa)) for j in range(len(pb))
    )

    clip = lambda x: 0.0 if -1e-9 < x < 0.0 else x
    triple = MacInfoTriple(clip(i_a_b), clip(i_b_a), clip(i_ab))
    if triple.i_ab_c > math.log2(ch.out_dim) + 1e-9:
        raise ValueError("joint information exceeds the output dimension bound")
    return triple


def chi1_closed_form(p: float) -> float:
    """Maximal single-use rate of the register sender through the noisy channel.

    H((2-p)/8 x4, p/8 x4) - H(1-3p/4, p/4, p/4, p/4); decreases from 2 bits
    at p=0 to 1 bit at p=1.
    """
    p = _check_p(p)
    total = shannon_entropy([(2.0 - p) / 8] * 4 + [p / 8] * 4)
    signal = shannon_entropy([1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])
    return total - signal


def chi2_prime_closed_form(p: float) -> float:
    """Per-use rate of the two-use protocol with an entangled qubit pair.

    The average two-use output has eigenvalue (2-p)p/64 with multiplicity 48
    and (4-6p+3p^2)/64 with multiplicity 16; halving its entropy and
    subtracting the per-use signal entropy H(1-3p/4, p/4, p/4, p/4) gives the
    rate.  Matches :func:`chi2_prime_protocol` to numerical precision.
    """
    p = _check_p(p)
    lam1 = (2.0 - p) * p / 64.0
    lam2 = (4.0 - 6.0 * p + 3.0 * p * p) / 64.0
    avg_per_use = -(24.0 * _xlog2(lam1) + 8.0 * _xlog2(lam2))
    signal = shannon_entropy([1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])
    return avg_per_use - signal


def chi2_prime_protocol(p: float) -> float:
    """Per-use rate of the explicit sixteen-state two-use coding.

    The qubit sender routes the halves of a Bell pair into the two uses; the
    register sender encodes all sixteen products of basis states with equal
    probabilities.  Returns the Holevo quantity of the sixteen outputs
    divided by two (per channel use).
    """
    p = _check_p(p)
    # Apply the two copies one after the other; equivalent to the parallel
    # channel but with 8x fewer Kraus terms.
    first = tensor_channels(phi_p(p), identity_channel((4, 2)))
    second = tensor_channels(identity_channel((4, 2)), phi_p(p))
    bell = bell_state(0).density()
    outs = []
    for i in range(4):
        for j in range(4):
            inp = product_state(
                basis_state(4, i).density(), basis_state(4, j).density(), bell
            )  # factor order (A1, A2, B1, B2)
            inp = permute_systems(inp, (0, 2, 1, 3))  # -> (A1, B1, A2, B2)
            outs.append(apply(second, apply(first, inp)).mat)
    avg = sum(outs) / 16.0
    chi_total = _entropy(avg) - sum(_entropy(o) for o in outs) / 16.0
    return chi_total / 2.0


def superadditivity_gap(p: float) -> float:
    """Entangled-coding advantage chi2' - chi1; zero at p in {0, 1}, positive between."""
    return chi2_prime_closed_form(p) - chi1_closed_form(p)


@dataclass(frozen=True)
class SearchConfig:
    """Budget for the seeded random-restart ensemble searches."""

    restarts: int = 50
    seed: int = 0
    iterations: int = 200
    initial_step: float = 0.25

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.iterations < 0:
            raise ValueError("iteration budget must be nonnegative")
        if not self.initial_step > 0:
            raise ValueError("initial step must be positive")


@dataclass(frozen=True)
class ChiSearchResult:
    value: float
    probs: np.ndarray
    alice_states: tuple[np.ndarray, ...]
    bob_state: np.ndarray
    restart: int


def _restart_rng(seed: int, k: int) -> np.random.Generator:
    # Counter-style splitting: stream k is independent of how many restarts run.
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(k,)))


def _coordinate_ascent(objective, theta, iterations, step0):
    """Derivative-free ascent: cycle coordinates, try +/- step, shrink geometrically."""
    best = objective(theta)
    n = theta.size
    if iterations > 1:
        decay = (1e-3 / step0) ** (1.0 / (iterations - 1))
    else:
        decay = 1.0
    step = step0
    for t in range(iterations):
        k = t % n
        for sign in (1.0, -1.0):
            cand = theta.copy()
            cand[k] += sign * step
            val = objective(cand)
            if val > best:
                best, theta = val, cand
                break
        step *= decay
    return best, theta


def _normalize_vec(raw: np.ndarray, dim: int) -> np.ndarray:
    v = raw[:dim] + 1j * raw[dim:]
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    return v / norm


def _decode_weights(raw: np.ndarray) -> np.ndarray:
    w = np.abs(raw)
    total = w.sum()
    if total < 1e-12:
        return np.full(raw.size, 1.0 / raw.size)
    return w / total


def _phi_signal(p: float, u_mat: np.ndarray, avec: np.ndarray, bvec: np.ndarray):
    # Output of the noisy channel on the pure product input avec (x) bvec.
    phi = u_mat @ np.kron(avec, bvec)
    pure = np.outer(phi, phi.conj())
    reduced = np.einsum("abad->bd", pure.reshape(4, 2, 4, 2))
    return (1.0 - p) * pure + (p / 4.0) * np.kron(np.eye(4), reduced)


def _chi_of(probs, mats) -> float:
    avg = sum(p * m for p, m in zip(probs, mats))
    return _entropy(avg) - sum(p * _entropy(m) for p, m in zip(probs, mats))


def chi1_bruteforce(p: float, cfg: SearchConfig | None = None) -> ChiSearchResult:
    """Best single-use rate over size-4 pure Alice ensembles and pure Bob qubits.

    Restart 0 is the deterministic candidate (uniform standard basis, Bob |0>),
    so the reported optimum is never below the closed-form value; remaining
    restarts draw Haar states and Dirichlet weights from split seed streams
    and refine by coordinate ascent.
    """
    p = _check_p(p)
    cfg = cfg if cfg is not None else SearchConfig()
    u_mat = controlled_pauli_unitary()

    def objective(theta: np.ndarray) -> float:
        alice = [_normalize_vec(theta[8 * i : 8 * i + 8], 4) for i in range(4)]
        bob = _normalize_vec(theta[32:36], 2)
        probs = _decode_weights(theta[36:40])
        mats = [_phi_signal(p, u_mat, a, bob) for a in alice]
        return _chi_of(probs, mats)

    def initial_theta(k: int) -> np.ndarray:
        theta = np.zeros(40)
        if k == 0:
            for i in range(4):
                theta[8 * i + i] = 1.0
            theta[32] = 1.0
            theta[36:40] = 0.25
            return theta
        rng = _restart_rng(cfg.seed, k)
        for i in range(4):
            z = haar_pure((4,), rng).vec
            theta[8 * i : 8 * i + 4] = z.real
            theta[8 * i + 4 : 8 * i + 8] = z.imag
        v = haar_pure((2,), rng).vec
        theta[32:34] = v.real
        theta[34:36] = v.imag
        theta[36:40] = rng.dirichlet(np.ones(4))
        return theta

    best_val, best_theta, best_k = -np.inf, None, -1
    for k in range(cfg.restarts):
        val, theta = _coordinate_ascent(
            objective, initial_theta(k), cfg.iterations, cfg.initial_step
        )
        if val > best_val:
            best_val, best_theta, best_k = val, theta, k

    alice = tuple(_normalize_vec(best_theta[8 * i : 8 * i + 8], 4) for i in range(4))
    bob = _normalize_vec(best_theta[32:36], 2)
    probs = _decode_weights(best_theta[36:40])
    return ChiSearchResult(float(best_val), probs, alice, bob, best_k)


def remote_dc_rate(p: float) -> float:
    """Alice rate of the dense-coding protocol across the noisy channel and an ideal one.

    The qubit sender routes a Bell pair's halves into the noisy channel's qubit
    input and the ideal channel's qubit; the register sender encodes the four
    basis states.  The four outputs keep orthogonal Bell factors, so the rate
    is exactly 2 bits for every p.
    """
    p = _check_p(p)
    ch = tensor_channels(phi_p(p), psi_id())  # factors (A, B1, A2, B2)
    fixed = basis_state(2, 0).density()
    bell = bell_state(0).density()
    outs = []
    for i in range(4):
        inp = product_state(basis_state(4, i).density(), fixed, bell)  # (A, A2, B1, B2)
        inp = permute_systems(inp, (0, 2, 1, 3))  # -> (A, B1, A2, B2)
        outs.append(apply(ch, inp).mat)
    return float(_chi_of(np.full(4, 0.25), outs))


def dense_coding_rate() -> float:
    """Holevo quantity of the four Bell states with equal weights (2 bits)."""
    ens = Ensemble.uniform([bell_state(i).density() for i in range(4)])
    return holevo_chi(identity_channel((2, 2)), ens)


@dataclass(frozen=True)
class ExtremalityReport:
    """Outcome of the total-output-entropy maximality check."""

    p: float
    trials: int
    max_violation: float
    max_derivative: float
    passed: bool


def entropy_max_check(p: float, trials: int, seed: int) -> ExtremalityReport:
    """Check that the maximally mixed register maximizes total output entropy.

    Samples random register states rho and qubit states v and verifies
    S(Phi(rho (x) v)) <= S(Phi(I/4 (x) v)) + 1e-9; additionally verifies the
    entropy's directional derivative at I/4 vanishes (within 1e-7) along 20
    random traceless directions.  Rejects p=0, where the reference output is
    rank deficient and the derivative formula does not apply.
    """
    p = _check_p(p)
    if p == 0.0:
        raise ValueError("p=0 gives a rank-deficient output; derivative check undefined")
    if trials < 1:
        raise ValueError("need at least one trial")
    ch = phi_p(p)
    rng = np.random.default_rng(seed)
    mixed = maximally_mixed((4,))
    max_violation = -np.inf
    for _ in range(trials):
        v = haar_pure((2,), rng).density()
        rho = random_density((4,), rng)
        s = _entropy(apply(ch, product_state(rho, v)).mat)
        s_ref = _entropy(apply(ch, product_state(mixed, v)).mat)
        max_violation = max(max_violation, s - s_ref)

    v0 = haar_pure((2,), rng).density()
    reference = apply(ch, product_state(mixed, v0))
    max_derivative = 0.0
    for _ in range(20):
        delta_in = tensor(random_traceless_hermitian(4, rng), v0.mat)
        delta_out = apply_matrix(ch, delta_in)
        d = entropy_directional_derivative(reference, delta_out)
        max_derivative = max(max_derivative, abs(d))

    passed = max_violation <= 1e-9 and max_derivative < 1e-7
    return ExtremalityReport(p, trials, float(max_violation), float(max_derivative), passed)


@dataclass(frozen=True)
class MinOutputReport:
    """Outcome of the minimum-output-entropy scan."""

    p: float
    trials: int
    max_violation: float
    equality_gap: float
    passed: bool


def min_output_entropy_scan(p: float, trials: int, seed: int) -> MinOutputReport:
    """Scan Haar-random pure inputs (entangled allowed) against the product minimum.

    Verifies S(Phi(psi)) >= H(1-3p/4, p/4, p/4, p/4) - 1e-9 over ``trials``
    Haar inputs on the full 4x2 input space, and that the bound is attained
    (within 1e-12) by basis-register pure-qubit products |i>|v>.
    """
    p = _check_p(p)
    if trials < 1:
        raise ValueError("need at least one trial")
    ch = phi_p(p)
    rng = np.random.default_rng(seed)
    h_min = shannon_entropy([1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])
    max_violation = -np.inf
    for _ in range(trials):
        psi = haar_pure((4, 2), rng).density()
        max_violation = max(max_violation, h_min - _entropy(apply(ch, psi).mat))

    equality_gap = 0.0
    v = haar_pure((2,), rng)
    for i in range(4):
        inp = product_state(basis_state(4, i).density(), v.density())
        equality_gap = max(equality_gap, abs(_entropy(apply(ch, inp).mat) - h_min))

    passed = max_violation <= 1e-9 and equality_gap <= 1e-12
    return MinOutputReport(p, trials, float(max_violation), float(equality_gap), passed)
