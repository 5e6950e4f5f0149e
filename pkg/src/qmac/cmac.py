"""Classical multiple-access channels: rate regions, additivity checks, capacity.

A channel is a conditional probability table p(y | x_1, ..., x_n) over finite
alphabets.  The module provides the subset-parametrized rate-region bounds, a
numerical verification that region additivity holds for products of classical
channels, a certified Blahut-Arimoto solver, and the classical reduction that
bounds the register sender's regularized rate through the three-sender
quantum channel.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from qmac.channels import gamma_p, identity_channel, tensor_channels
from qmac.hilbert import basis_state, bell_state, product_state, permute_systems
from qmac.infoq import Ensemble, SearchConfig, holevo_chi
from qmac.infoq import _chi_of, _coordinate_ascent
from qmac.regions import Halfspace, RateRegion2D, SamplingConfig, convex_hull
from qmac.regions import hausdorff_distance, minkowski_sum, region_from_halfspaces, subset

__all__ = [
    "ClassicalMac",
    "AdditivityReport",
    "RegionAdditivityDemo",
    "mac_region",
    "mac_region_2d",
    "sampled_mac_region",
    "product_mac",
    "additivity_check",
    "additivity_sweep",
    "random_mac",
    "region_additivity_demo",
    "blahut_arimoto",
    "lambda2_channel",
    "gamma_rb_bound",
    "gamma_single_copy_rb",
    "gamma_entangled_rb",
    "xor_mac",
    "bsc_pair_mac",
    "identity_mac",
    "crossover_for_entropy",
    "mac_to_json",
    "mac_from_json",
]

ROW_TOL = 1e-9


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


@dataclass(frozen=True, eq=False)
class ClassicalMac:
    """Finite-alphabet channel p(y | x_1, ..., x_n), one alphabet per sender."""

    input_sizes: tuple[int, ...]
    output_size: int
    table: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.input_sizes)
        out = int(self.output_size)
        if not sizes or any(s < 1 for s in sizes) or out < 1:
            raise ValueError("alphabet sizes must be positive")
        t = np.array(self.table, dtype=float)
        if t.shape != sizes + (out,):
            raise ValueError(f"table shape {t.shape} does not match {sizes + (out,)}")
        if t.min() < -1e-12:
            raise ValueError(f"negative channel probability {t.min():.3g}")
        t = np.maximum(t, 0.0)
        rows = t.sum(axis=-1)
        if np.max(np.abs(rows - 1.0)) > ROW_TOL:
            raise ValueError("channel rows are not probability distributions")
        t.setflags(write=False)
        object.__setattr__(self, "input_sizes", sizes)
        object.__setattr__(self, "output_size", out)
        object.__setattr__(self, "table", t)

    @property
    def senders(self) -> int:
        return len(self.input_sizes)


def _check_dists(dists, sizes) -> list[np.ndarray]:
    dists = [np.asarray(d, dtype=float).ravel() for d in dists]
    if len(dists) != len(sizes):
        raise ValueError(f"expected {len(sizes)} sender distributions, got {len(dists)}")
    for d, s in zip(dists, sizes):
        if d.size != s:
            raise ValueError(f"distribution length {d.size} does not match alphabet {s}")
        if d.min() < -1e-12 or abs(d.sum() - 1.0) > ROW_TOL:
            raise ValueError("sender distribution is not a probability vector")
    return [np.maximum(d, 0.0) for d in dists]


def _plogp(arr: np.ndarray) -> float:
    flat = arr.ravel()
    flat = flat[flat > 0]
    if flat.size == 0:
        return 0.0
    return float(-(flat @ np.log2(flat)))


def _marginal_entropy(joint: np.ndarray, keep_axes) -> float:
    keep = sorted(set(keep_axes))
    other = tuple(ax for ax in range(joint.ndim) if ax not in keep)
    return _plogp(joint.sum(axis=other) if other else joint)


def _cmi(joint: np.ndarray, a_axes, b_axes, c_axes) -> float:
    """I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C) from a joint probability array."""
    a, b, c = list(a_axes), list(b_axes), list(c_axes)
    if not a or not b:
        return 0.0
    value = (
        _marginal_entropy(joint, a + c)
        + _marginal_entropy(joint, b + c)
        - _marginal_entropy(joint, a + b + c)
        - (_marginal_entropy(joint, c) if c else 0.0)
    )
    return float(value)


def _input_joint(ch: ClassicalMac, dists) -> np.ndarray:
    # p(x_1..x_n, y) for product-form sender inputs; input axes 0..n-1, y axis n.
    joint = ch.table.copy()
    n = ch.senders
    for i, d in enumerate(dists):
        shape = [1] * (n + 1)
        shape[i] = d.size
        joint = joint * d.reshape(shape)
    return joint


def mac_region(ch: ClassicalMac, dists) -> list[Halfspace]:
    """Rate bounds R(S) <= I(X(S):Y | X(S^c)) for every nonempty sender subset S.

    Returns the 2^n - 1 constraints as halfspaces in the sender-rate
    coordinates; supported for one and two senders (higher-dimensional rate
    polytopes are out of scope).
    """
    dists = _check_dists(dists, ch.input_sizes)
    n = ch.senders
    if n > 2:
        raise NotImplementedError("rate polytopes with more than two senders are not modeled")
    joint = _input_joint(ch, dists)
    bounds = {}
    for size in range(1, n + 1):
        for s in itertools.combinations(range(n), size):
            comp = [i for i in range(n) if i not in s]
            bounds[s] = max(_cmi(joint, list(s), [n], comp), 0.0)
    if n == 1:
        return [Halfspace(1.0, 0.0, bounds[(0,)])]
    return [
        Halfspace(1.0, 0.0, bounds[(0,)]),
        Halfspace(0.0, 1.0, bounds[(1,)]),
        Halfspace(1.0, 1.0, bounds[(0, 1)]),
    ]


def mac_region_2d(ch: ClassicalMac, dists) -> RateRegion2D:
    """Two-sender rate region of one fixed input distribution as a polygon."""
    if ch.senders != 2:
        raise ValueError("mac_region_2d expects a two-sender channel")
    return region_from_halfspaces(mac_region(ch, dists))


def _subset_dists(size: int):
    for k in range(1, size + 1):
        for combo in itertools.combinations(range(size), k):
            d = np.zeros(size)
            d[list(combo)] = 1.0 / k
            yield d


def sampled_mac_region(ch: ClassicalMac, cfg: SamplingConfig | None = None) -> RateRegion2D:
    """Sampled two-sender region: hull over uniform-subset and random Dirichlet inputs."""
    cfg = cfg if cfg is not None else SamplingConfig()
    if ch.senders != 2:
        raise ValueError("sampled_mac_region expects a two-sender channel")
    s1, s2 = ch.input_sizes
    points = [(0.0, 0.0)]
    for d1 in _subset_dists(s1):
        for d2 in _subset_dists(s2):
            points.extend(mac_region_2d(ch, [d1, d2]).vertices)
    for k in range(cfg.samples):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(k,)))
        dists = [rng.dirichlet(np.ones(s1)), rng.dirichlet(np.ones(s2))]
        points.extend(mac_region_2d(ch, dists).vertices)
    return convex_hull(points)


def product_mac(c1: ClassicalMac, c2: ClassicalMac) -> ClassicalMac:
    """Parallel use of two channels with senders kept identified across copies.

    Sender i's alphabet becomes the pair (x_{i,1}, x_{i,2}) encoded as
    x_{i,1} * |X_{i,2}| + x_{i,2}; the output is the pair (y_1, y_2) encoded
    as y_1 * |Y_2| + y_2.
    """
    if c1.senders != c2.senders:
        raise ValueError("channels must have the same number of senders")
    n = c1.senders
    tmp = np.multiply.outer(c1.table, c2.table)
    # Axes: (x_11..x_n1, y1, x_12..x_n2, y2) -> (x_11, x_12, ..., y1, y2).
    order = []
    for i in range(n):
        order.extend([i, n + 1 + i])
    order.extend([n, 2 * n + 1])
    tmp = tmp.transpose(order)
    sizes = tuple(a * b for a, b in zip(c1.input_sizes, c2.input_sizes))
    out = c1.output_size * c2.output_size
    return ClassicalMac(sizes, out, tmp.reshape(sizes + (out,)))


@dataclass(frozen=True)
class AdditivityReport:
    """Worst observed violation of the region-additivity inequality."""

    check: str
    trials: int
    max_violation: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "pass": self.passed,
        }


def _pair_joint(c1: ClassicalMac, c2: ClassicalMac, sender_joints) -> np.ndarray:
    # Joint law of all inputs and both outputs when sender i draws the pair
    # (x_{i,1}, x_{i,2}) from sender_joints[i], independently across senders.
    # Axes: sender i owns (2i, 2i+1); y1 = 2n, y2 = 2n+1.
    n = c1.senders
    operands = []
    for i, r in enumerate(sender_joints):
        operands.extend([r, [2 * i, 2 * i + 1]])
    operands.extend([c1.table, [2 * i for i in range(n)] + [2 * n]])
    operands.extend([c2.table, [2 * i + 1 for i in range(n)] + [2 * n + 1]])
    return np.einsum(*operands, list(range(2 * n + 2)))


def _single_copy_infos(ch: ClassicalMac, dists) -> dict:
    n = ch.senders
    joint = _input_joint(ch, dists)
    infos = {(): 0.0}
    for size in range(1, n + 1):
        for s in itertools.combinations(range(n), size):
            comp = [i for i in range(n) if i not in s]
            infos[s] = _cmi(joint, list(s), [n], comp)
    return infos


def additivity_check(
    c1: ClassicalMac, c2: ClassicalMac, trials: int, seed: int
) -> AdditivityReport:
    """Verify I(X(S):Y|X(S^c)) <= I(X(S_1):Y_1|X(S_1^c)) + I(X(S_2):Y_2|X(S_2^c)).

    The joint-channel conditional information is evaluated for random
    per-sender joint distributions over the copy pair (correlation across the
    two copies is allowed within each sender, senders stay independent); the
    right-hand side uses the induced single-copy marginals.  All subset pairs
    (S_1, S_2) are checked on every trial.
    """
    if c1.senders != c2.senders:
        raise ValueError("channels must have the same number of senders")
    if trials < 1:
        raise ValueError("need at least one trial")
    n = c1.senders
    rng = np.random.default_rng(seed)
    max_violation = -np.inf
    subsets = [s for k in range(n + 1) for s in itertools.combinations(range(n), k)]
    for _ in range(trials):
        sender_joints = [
            rng.dirichlet(np.ones(a * b)).reshape(a, b)
            for a, b in zip(c1.input_sizes, c2.input_sizes)
        ]
        joint = _pair_joint(c1, c2, sender_joints)
        infos1 = _single_copy_infos(c1, [r.sum(axis=1) for r in sender_joints])
        infos2 = _single_copy_infos(c2, [r.sum(axis=0) for r in sender_joints])
        y_axes = [2 * n, 2 * n + 1]
        for s1 in subsets:
            for s2 in subsets:
                if not s1 and not s2:
                    continue
                a_axes = [2 * i for i in s1] + [2 * i + 1 for i in s2]
                c_axes = [ax for ax in range(2 * n) if ax not in a_axes]
                lhs = _cmi(joint, a_axes, y_axes, c_axes)
                max_violation = max(max_violation, lhs - infos1[s1] - infos2[s2])
    return AdditivityReport(
        "classical-additivity", trials, float(max_violation), max_violation <= 1e-9
    )


def random_mac(
    rng: np.random.Generator, n_senders: int = 2, max_alphabet: int = 4, max_output: int = 4
) -> ClassicalMac:
    """Random channel: alphabet sizes in [2, max], rows drawn flat on the simplex."""
    sizes = tuple(int(rng.integers(2, max_alphabet + 1)) for _ in range(n_senders))
    out = int(rng.integers(2, max_output + 1))
    table = rng.dirichlet(np.ones(out), size=sizes)
    return ClassicalMac(sizes, out, table)


def additivity_sweep(
    pairs: int, trials_per_pair: int, seed: int, n_senders: int = 2, max_alphabet: int = 4
) -> AdditivityReport:
    """Run :func:`additivity_check` over many random channel pairs; aggregate the worst case."""
    if pairs < 1:
        raise ValueError("need at least one channel pair")
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for k in range(pairs):
        c1 = random_mac(rng, n_senders, max_alphabet)
        c2 = random_mac(rng, n_senders, max_alphabet)
        report = additivity_check(c1, c2, trials_per_pair, seed=int(rng.integers(2**63)))
        worst = max(worst, report.max_violation)
    return AdditivityReport("classical-additivity", pairs, float(worst), worst <= 1e-9)


@dataclass(frozen=True)
class RegionAdditivityDemo:
    """Separate-use Minkowski sum versus the sampled product-channel region."""

    first_region: RateRegion2D
    second_region: RateRegion2D
    sum_region: RateRegion2D
    product_region: RateRegion2D
    hausdorff: float
    product_in_sum: bool
    sum_in_product: bool


def region_additivity_demo(
    c1: ClassicalMac, c2: ClassicalMac, cfg: SamplingConfig | None = None
) -> RegionAdditivityDemo:
    """Sample both sides of region additivity for a pair of two-sender channels.

    The product channel joins the copies sender-wise (arbitrary correlation
    within each sender), so numerical equality of its sampled region with the
    Minkowski sum of the separate regions is the additivity statement.
    """
    cfg = cfg if cfg is not None else SamplingConfig()
    if c1.senders != 2 or c2.senders != 2:
        raise ValueError("region_additivity_demo expects two-sender channels")
    r1 = sampled_mac_region(c1, cfg)
    r2 = sampled_mac_region(c2, cfg)
    total = minkowski_sum(r1, r2)
    prod = sampled_mac_region(product_mac(c1, c2), cfg)
    return RegionAdditivityDemo(
        first_region=r1,
        second_region=r2,
        sum_region=total,
        product_region=prod,
        hausdorff=hausdorff_distance(total, prod),
        product_in_sum=subset(prod, total, tol=1e-3),
        sum_in_product=subset(total, prod, tol=1e-3),
    )


def blahut_arimoto(ch: ClassicalMac, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Capacity of a single-sender channel with a certified stopping rule.

    Iterates the alternating-maximization update and stops once the standard
    upper bound (max-row divergence from the current output law) and lower
    bound differ by less than ``tol``; the returned midpoint is then within
    tol of the capacity.
    """
    if ch.senders != 1:
        raise ValueError("blahut_arimoto expects a single-sender channel")
    table = ch.table  # (m, Y)
    m = table.shape[0]
    mask = table > 0
    logs = np.zeros_like(table)
    logs[mask] = np.log2(table[mask])
    r = np.full(m, 1.0 / m)
    for _ in range(max_iter):
        q = r @ table
        # Columns with q == 0 carry no channel weight; guard the log and mask them out.
        logq = np.log2(np.maximum(q, 1e-300))
        d = np.sum(table * np.where(mask, logs - logq[None, :], 0.0), axis=1)
        lower = float(r @ d)
        upper = float(d.max())
        if upper - lower < tol:
            return max((lower + upper) / 2.0, 0.0)
        r = r * np.exp2(d - d.max())
        r /= r.sum()
    raise RuntimeError(f"Blahut-Arimoto did not converge within {max_iter} iterations")


def lambda2_channel(p: float) -> ClassicalMac:
    """Classical reduction of the register's second branch: 0 -> 0; i -> i w.p. p, else 0."""
    p = _check_p(p)
    table = np.zeros((4, 4))
    table[0, 0] = 1.0
    for i in range(1, 4):
        table[i, i] = p
        table[i, 0] += 1.0 - p
    return ClassicalMac((4,), 4, table)


def gamma_rb_bound(p: float) -> float:
    """Regularized bound on the register sender's rate: max I(B:B_2) + 1 bits.

    The receiver is granted the second branch's classical output for free, so
    the bound holds for any number of channel uses; it rises from 1 bit at
    p=0 to 3 bits at p=1 and stays below 1.81 for all p <= 0.5.
    """
    return blahut_arimoto(lambda2_channel(p)) + 1.0


def _gamma_signals(p: float):
    ch = gamma_p(p)
    inputs = [basis_state(4, j).density().mat for j in range(4)]

    def signals(psi1: np.ndarray, psi2: np.ndarray) -> list[np.ndarray]:
        pr1 = np.outer(psi1, psi1.conj())
        pr2 = np.outer(psi2, psi2.conj())
        outs = []
        for ej in inputs:
            inp = np.kron(pr1, np.kron(ej, pr2))
            out = np.zeros((4, 4), dtype=complex)
            for k in ch.kraus:
                out += k @ inp @ k.conj().T
            outs.append(out)
        return outs

    return signals


def gamma_single_copy_rb(p: float, cfg: SearchConfig | None = None) -> float:
    """Best single-use register rate with the side senders fixed to pure products.

    Maximizes the Holevo quantity of the register's basis ensemble over the
    basis probabilities and both side states via seeded random restarts with
    coordinate ascent; never exceeds 1 bit (plus numerical slack).
    """
    p = _check_p(p)
    cfg = cfg if cfg is not None else SearchConfig(restarts=40, seed=0)
    signals = _gamma_signals(p)

    def decode(theta):
        v1 = theta[0:2] + 1j * theta[2:4]
        v2 = theta[4:6] + 1j * theta[6:8]
        n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
        v1 = np.array([1.0, 0.0], dtype=complex) if n1 < 1e-12 else v1 / n1
        v2 = np.array([1.0, 0.0], dtype=complex) if n2 < 1e-12 else v2 / n2
        w = np.abs(theta[8:12])
        probs = np.full(4, 0.25) if w.sum() < 1e-12 else w / w.sum()
        return v1, v2, probs

    def objective(theta):
        v1, v2, probs = decode(theta)
        return _chi_of(probs, signals(v1, v2))

    best = -np.inf
    for k in range(cfg.restarts):
        theta = np.zeros(12)
        if k == 0:
            theta[0] = theta[4] = 1.0
            theta[8:12] = 0.25
        else:
            rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(k,)))
            theta[0:8] = rng.standard_normal(8)
            theta[8:12] = rng.dirichlet(np.ones(4))
        val, _ = _coordinate_ascent(objective, theta, cfg.iterations, cfg.initial_step)
        best = max(best, val)
    return float(best)


def gamma_entangled_rb(p: float) -> float:
    """Register rate when both side senders share Bell pairs with ideal channels.

    Each side sender feeds one half of a Bell pair into the three-sender
    channel while the other half travels through an identity channel; the
    register's four basis messages then arrive with Holevo quantity exactly
    2 bits, for every branch probability p.
    """
    p = _check_p(p)
    ch = tensor_channels(gamma_p(p), identity_channel((2, 2)))  # (A1, B, A2, E1, E2)
    bell = bell_state(0).density()
    states = []
    for j in range(4):
        inp = product_state(bell, basis_state(4, j).density(), bell)  # (A1,E1,B,A2,E2)
        states.append(permute_systems(inp, (0, 2, 3, 1, 4)))  # -> (A1,B,A2,E1,E2)
    return holevo_chi(ch, Ensemble.uniform(states))


def xor_mac() -> ClassicalMac:
    """Two-sender binary channel whose output is the XOR of the inputs."""
    table = np.zeros((2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            table[x1, x2, x1 ^ x2] = 1.0
    return ClassicalMac((2, 2), 2, table)


def crossover_for_entropy(h: float) -> float:
    """Crossover probability q in [0, 1/2] of a binary symmetric channel with H(q) = h."""
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"entropy {h} outside [0, 1]")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    from scipy.optimize import brentq

    def f(q):
        return -q * math.log2(q) - (1 - q) * math.log2(1 - q) - h

    return float(brentq(f, 1e-12, 0.5, xtol=1e-15))


def bsc_pair_mac(h1: float = 0.5, h2: float = 0.0) -> ClassicalMac:
    """Two independent binary symmetric channels packaged as one two-sender channel.

    Sender i's bit passes through a BSC with crossover entropy ``h_i``; the
    output is the pair of received bits (encoded as y_1 * 2 + y_2).
    """
    q1, q2 = crossover_for_entropy(h1), crossover_for_entropy(h2)
    b1 = np.array([[1 - q1, q1], [q1, 1 - q1]])
    b2 = np.array([[1 - q2, q2], [q2, 1 - q2]])
    table = np.einsum("ac,bd->abcd", b1, b2).reshape(2, 2, 4)
    return ClassicalMac((2, 2), 4, table)


def identity_mac(sizes=(2, 2)) -> ClassicalMac:
    """Noiseless channel delivering every sender's symbol (output is the input tuple)."""
    sizes = tuple(int(s) for s in sizes)
    out = math.prod(sizes)
    table = np.zeros(sizes + (out,))
    for idx in np.ndindex(*sizes):
        table[idx + (int(np.ravel_multi_index(idx, sizes)),)] = 1.0
    return ClassicalMac(sizes, out, table)


def mac_to_json(ch: ClassicalMac) -> dict:
    """JSON layout {input_sizes, output_size, table} with nested probability lists."""
    return {
        "input_sizes": list(ch.input_sizes),
        "output_size": ch.output_size,
        "table": ch.table.tolist(),
    }


def mac_from_json(data: dict) -> ClassicalMac:
    return ClassicalMac(
        tuple(data["input_sizes"]), int(data["output_size"]), np.array(data["table"])
    )
