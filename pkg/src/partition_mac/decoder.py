"""Typical-set edge construction and the partition decoder for K=2.

An edge {i,j} enters the candidate graph iff the pair [y, x_i OR x_j] is
strongly typical for the pair-feedback kernel.  The working test checks,
per feedback block (rounds with y_t = w), only the count of rounds where
both codewords are zero; the sufficient variant widens the slack to 2*eps
and the necessary variant narrows it to eps/2, bracketing the full
four-pattern test.  Patterns with zero probability must have zero count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, JointKernel
from .codebook import ExperimentConfig, TransmissionMatrix
from .graphs import CandidateGraph, lies_on_odd_cycle, min_edge_bipartize, norm_edge, two_coloring

_SLACK_FACTOR = {"sufficient": 2.0, "necessary": 0.5}


def count_patterns(vectors, pattern) -> int:
    """Number of positions where the aligned vectors spell out the pattern."""
    arrs = [np.asarray(v) for v in vectors]
    t = arrs[0].shape[0]
    if any(a.shape != (t,) for a in arrs):
        raise ValueError("vectors must share a common length")
    if len(arrs) != len(pattern):
        raise ValueError("pattern arity must match the number of vectors")
    mask = np.ones(t, dtype=bool)
    for a, bit in zip(arrs, pattern):
        mask &= a == bit
    return int(mask.sum())


def pattern_counts(vectors) -> dict:
    """Full table of pattern counts over L aligned bit vectors; the counts
    always sum to the common length."""
    from itertools import product

    arity = len(vectors)
    table = {pat: count_patterns(vectors, pat) for pat in product((0, 1), repeat=arity)}
    assert sum(table.values()) == np.asarray(vectors[0]).shape[0]
    return table


def full_typical_membership(y: np.ndarray, v: np.ndarray, kernel: JointKernel, eps: float) -> bool:
    """Strong typicality of [y, v] against p_{y,y0}: every positive-probability
    pattern within eps/4 of its expectation, zero-probability patterns absent."""
    y = np.asarray(y)
    v = np.asarray(v)
    if y.shape != v.shape:
        raise ValueError("feedback vectors must share a length")
    t = y.shape[0]
    for (w, w0), prob in kernel.pyy0.items():
        n = count_patterns((y, v), (w, w0))
        if prob > 0.0:
            if abs(n / t - prob) > eps / 4.0:
                return False
        elif n != 0:
            return False
    return True


def marginal_typical(y: np.ndarray, kernel: JointKernel, eps: float, strictness: str = "sufficient") -> bool:
    """Typicality of y alone: |N(1|y)/T - p1| <= eps'/4."""
    y = np.asarray(y)
    band = _SLACK_FACTOR[strictness] * eps / 4.0
    return abs(float(np.count_nonzero(y)) / y.shape[0] - kernel.p1) <= band


@dataclass(frozen=True)
class BlockSplit:
    """Round indices split by the observed feedback bit, with optional
    per-pattern counts against the true pair's codewords."""

    t1_indices: np.ndarray
    t0_indices: np.ndarray
    n_rounds: int
    pattern_counts: dict | None = None

    @classmethod
    def from_feedback(cls, y: np.ndarray, x1: np.ndarray | None = None, x2: np.ndarray | None = None):
        y = np.asarray(y)
        t1 = np.flatnonzero(y == 1)
        t0 = np.flatnonzero(y == 0)
        counts = None
        if x1 is not None and x2 is not None:
            counts = {}
            for w, idx in ((1, t1), (0, t0)):
                for u in (0, 1):
                    for v in (0, 1):
                        counts[(w, u, v)] = int(np.count_nonzero((np.asarray(x1)[idx] == u) & (np.asarray(x2)[idx] == v)))
        return cls(t1_indices=t1, t0_indices=t0, n_rounds=y.shape[0], pattern_counts=counts)

    @property
    def t1(self) -> int:
        return self.t1_indices.shape[0]

    @property
    def t0(self) -> int:
        return self.t0_indices.shape[0]

    def block(self, w: int) -> np.ndarray:
        return self.t1_indices if w == 1 else self.t0_indices


def _block_count_ok(count: int, block_len: int, t: int, p_w0: float, p_w1: float, band: float) -> bool:
    # count = rounds in the block where both codewords are zero; the
    # complementary (w,1) pattern count is block_len - count.
    if p_w0 > 0.0:
        if abs(count / t - p_w0) > band:
            return False
    elif count != 0:
        return False
    if p_w1 == 0.0 and count != block_len:
        return False
    return True


def simplified_edge_test(
    split: BlockSplit,
    xi: np.ndarray,
    xj: np.ndarray,
    kernel: JointKernel,
    eps: float,
    strictness: str = "sufficient",
) -> bool:
    """Per-block zero-pattern test for one candidate pair.

    Assumes y already passed its marginal test.  The slack is 2*eps in
    sufficient mode and eps/2 in necessary mode; comparison bands are
    closed at the boundary.
    """
    xi = np.asarray(xi)
    xj = np.asarray(xj)
    band = _SLACK_FACTOR[strictness] * eps / 4.0
    t = split.n_rounds
    for w in (1, 0):
        idx = split.block(w)
        count = int(np.count_nonzero((xi[idx] == 0) & (xj[idx] == 0)))
        if not _block_count_ok(count, idx.shape[0], t, kernel.pyy0[(w, 0)], kernel.pyy0[(w, 1)], band):
            return False
    return True


def build_candidate_graph(
    x: TransmissionMatrix,
    y: np.ndarray,
    kernel: JointKernel,
    eps: float,
    strictness: str = "sufficient",
) -> CandidateGraph:
    """Run the edge test over all N(N-1)/2 pairs.

    If y itself fails the marginal typicality test the graph is empty and
    flagged (marginal_passed=False), which is distinct from an empty edge
    set under a passing y.
    """
    n = x.n_users
    if not marginal_typical(y, kernel, eps, strictness):
        return CandidateGraph(n_vertices=n, edges=frozenset(), marginal_passed=False)
    y = np.asarray(y)
    t = y.shape[0]
    band = _SLACK_FACTOR[strictness] * eps / 4.0
    edges = None
    for w in (1, 0):
        zeros = (x.bits[:, y == w] == 0).astype(np.int64)
        both_zero = zeros @ zeros.T
        block_len = int(np.count_nonzero(y == w))
        p_w0 = kernel.pyy0[(w, 0)]
        p_w1 = kernel.pyy0[(w, 1)]
        if p_w0 > 0.0:
            ok = np.abs(both_zero / t - p_w0) <= band
        else:
            ok = both_zero == 0
        if p_w1 == 0.0:
            ok &= both_zero == block_len
        edges = ok if edges is None else (edges & ok)
    iu, ju = np.triu_indices(n, k=1)
    mask = edges[iu, ju]
    pairs = frozenset((int(i) + 1, int(j) + 1) for i, j in zip(iu[mask], ju[mask]))
    return CandidateGraph(n_vertices=n, edges=pairs)


def decode(
    x: TransmissionMatrix,
    y: np.ndarray,
    cfg: ExperimentConfig,
    ch: ChannelParams,
    node_budget: int = 10**6,
) -> np.ndarray:
    """Full pipeline: candidate graph -> minimum edge bipartization ->
    canonical 2-coloring.  Always returns a valid 2-partition label vector."""
    if cfg.k_active != 2:
        raise ValueError("decoder requires exactly 2 active users")
    kernel = JointKernel(p=cfg.design_p, channel=ch)
    graph = build_candidate_graph(x, y, kernel, cfg.epsilon, cfg.strictness)
    kept, _deleted = min_edge_bipartize(graph, node_budget=node_budget)
    return two_coloring(kept)


def suboptimal_success(
    x: TransmissionMatrix,
    y: np.ndarray,
    s0: np.ndarray,
    cfg: ExperimentConfig,
    ch: ChannelParams,
) -> bool:
    """Analysis criterion: the true pair's edge is present and lies on no
    odd cycle of the candidate graph."""
    actives = np.flatnonzero(np.asarray(s0)) + 1
    if actives.shape[0] != 2:
        raise ValueError("status vector must mark exactly 2 active users")
    kernel = JointKernel(p=cfg.design_p, channel=ch)
    graph = build_candidate_graph(x, y, kernel, cfg.epsilon, cfg.strictness)
    true_edge = norm_edge(int(actives[0]), int(actives[1]))
    if true_edge not in graph.edges:
        return False
    return not lies_on_odd_cycle(graph, true_edge)


def distortion(s: np.ndarray, z: np.ndarray) -> int:
    """0 iff every pair of active users got distinct labels, else 1."""
    s = np.asarray(s)
    z = np.asarray(z)
    if s.shape != z.shape:
        raise ValueError("status and partition vectors must share a length")
    labels = z[s == 1]
    return 0 if len(np.unique(labels)) == labels.shape[0] else 1


def pair_log_likelihoods(x: TransmissionMatrix, y: np.ndarray, kernel: JointKernel) -> dict:
    """log p(y | x_i OR x_j) for every unordered pair, -inf where impossible."""
    y = np.asarray(y)
    logp = np.full((2, 2), -np.inf)
    for w in (0, 1):
        for w0 in (0, 1):
            prob = kernel.obs_prob(w, w0)
            if prob > 0.0:
                logp[w, w0] = np.log(prob)
    n = x.n_users
    out = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            v = x.row(i) | x.row(j)
            out[(i, j)] = float(logp[y, v].sum())
    return out


def bayesian_decode(x: TransmissionMatrix, y: np.ndarray, kernel: JointKernel, budget: int = 16) -> np.ndarray:
    """Exact Bayesian partition decoder for tiny N.

    Maximizes W(z) = sum over pairs {i,j} with z_i != z_j of p(y | x_i OR x_j)
    over all 2-partitions; accumulation is done in a shifted log domain and
    ties resolve to the lexicographically smallest label vector.
    """
    n = x.n_users
    if n > budget:
        raise ValueError(f"exhaustive decoding limited to {budget} users, got {n}")
    loglik = pair_log_likelihoods(x, y, kernel)
    finite = [v for v in loglik.values() if np.isfinite(v)]
    shift = max(finite) if finite else 0.0
    masks = np.arange(1 << n, dtype=np.int64)
    weights = np.zeros(1 << n)
    for (i, j), ll in loglik.items():
        if not np.isfinite(ll):
            continue
        # user i maps to bit (n - i): mask order equals lex order on labels
        cross = ((masks >> (n - i)) & 1) != ((masks >> (n - j)) & 1)
        weights[cross] += np.exp(ll - shift)
    weights[0] = -1.0
    weights[-1] = -1.0
    # mathematical ties reach float within ulps; take the lex-smallest of the
    # near-maximal set so the tie-break is insensitive to summation order
    w_max = float(weights.max())
    best = int(np.flatnonzero(weights >= w_max - 1e-12 * max(w_max, 1.0))[0])
    labels = np.array([(best >> (n - i)) & 1 for i in range(1, n + 1)], dtype=np.int64) + 1
    return labels
