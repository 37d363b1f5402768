"""Noisy Boolean-OR multi-access channel and its probability kernels.

The noiseless feedback in round t is the OR of the scheduled bits of the
active users; observation noise flips 0->1 with probability q10 and
1->0 with probability q01, independently per round.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Crossover probabilities of the binary observation noise."""

    q10: float
    q01: float

    def __post_init__(self):
        if not (0.0 <= self.q10 <= 1.0 and 0.0 <= self.q01 <= 1.0):
            raise ValueError(f"crossover probabilities must lie in [0,1], got q10={self.q10}, q01={self.q01}")

    def flip_prob(self, w: int, w0: int) -> float:
        """P(y=w | y0=w0)."""
        if w0 == 0:
            return self.q10 if w == 1 else 1.0 - self.q10
        return 1.0 - self.q01 if w == 1 else self.q01


def is_degenerate(q10: float, q01: float, tol: float = 1e-9) -> bool:
    """True when q10+q01 = 1: the output carries no information about the input."""
    return abs(q10 + q01 - 1.0) <= tol


def status_vector(n_users: int, actives) -> np.ndarray:
    """Length-N 0/1 vector with ones at the (1-based) active users."""
    s = np.zeros(n_users, dtype=np.uint8)
    for i in actives:
        if not (1 <= i <= n_users):
            raise ValueError(f"active user {i} outside 1..{n_users}")
        s[i - 1] = 1
    return s


def or_superpose(x: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Noise-free feedback y0[t] = OR over active users i of x[i,t].

    Accepts any population count >= 0 (the empty OR is all zeros); the
    decoder-side operations require exactly two actives.
    """
    x = np.asarray(x)
    s = np.asarray(s)
    if x.ndim != 2 or s.ndim != 1 or x.shape[0] != s.shape[0]:
        raise ValueError(f"shape mismatch: X is {x.shape}, s has length {s.shape}")
    active = np.flatnonzero(s)
    if active.size == 0:
        return np.zeros(x.shape[1], dtype=np.uint8)
    return (x[active].any(axis=0)).astype(np.uint8)


def apply_noise(y0: np.ndarray, ch: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently: 0->1 w.p. q10, 1->0 w.p. q01.

    Consumes exactly len(y0) uniform draws, in round order.
    """
    y0 = np.asarray(y0)
    u = rng.random(y0.shape[0])
    flip = np.where(y0 == 1, u < ch.q01, u < ch.q10)
    return (y0 ^ flip).astype(np.uint8)


def pair_feedback_table(p: float, ch: ChannelParams, k: int = 2) -> dict:
    """Joint p_{y,y0}(w,w0) for K active users with iid Bernoulli(p) codewords.

    p_{y,y0}(w,1) = p(w|1) * (1-(1-p)^K),  p_{y,y0}(w,0) = p(w|0) * (1-p)^K.
    """
    silent = (1.0 - p) ** k
    return {
        (1, 1): ch.flip_prob(1, 1) * (1.0 - silent),
        (0, 1): ch.flip_prob(0, 1) * (1.0 - silent),
        (1, 0): ch.flip_prob(1, 0) * silent,
        (0, 0): ch.flip_prob(0, 0) * silent,
    }


def triple_pattern_table(p: float, ch: ChannelParams) -> dict:
    """Joint p_{y,x1,x2}(w,u,v) = p(w | u OR v) * p_x(u) * p_x(v) for K=2."""
    px = {0: 1.0 - p, 1: p}
    out = {}
    for w in (0, 1):
        for u in (0, 1):
            for v in (0, 1):
                out[(w, u, v)] = ch.flip_prob(w, u | v) * px[u] * px[v]
    return out


@dataclass(frozen=True)
class JointKernel:
    """All joint/marginal probabilities derived from (p, q10, q01) at K actives."""

    p: float
    channel: ChannelParams
    k: int = 2
    pyy0: dict = field(init=False)
    pyx1x2: dict = field(init=False)
    p1: float = field(init=False)
    p0: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"design probability must lie in (0,1), got {self.p}")
        pyy0 = pair_feedback_table(self.p, self.channel, self.k)
        object.__setattr__(self, "pyy0", pyy0)
        object.__setattr__(self, "pyx1x2", triple_pattern_table(self.p, self.channel) if self.k == 2 else None)
        p1 = pyy0[(1, 1)] + pyy0[(1, 0)]
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p0", 1.0 - p1)
        assert abs(sum(pyy0.values()) - 1.0) <= _NORM_TOL
        if self.pyx1x2 is not None:
            assert abs(sum(self.pyx1x2.values()) - 1.0) <= _NORM_TOL
        assert abs(self.p1 + self.p0 - 1.0) <= _NORM_TOL

    def py(self, w: int) -> float:
        return self.p1 if w == 1 else self.p0

    def obs_prob(self, w: int, w0: int) -> float:
        """P(y=w | y0=w0)."""
        return self.channel.flip_prob(w, w0)


def joint_pattern_prob(kernel: JointKernel, pattern) -> float:
    """Closed-form p_{y,y0}(w,w0) for an observation/noise-free bit pair."""
    w, w0 = pattern
    if w not in (0, 1) or w0 not in (0, 1):
        raise ValueError(f"pattern bits must be 0/1, got {pattern}")
    return kernel.pyy0[(w, w0)]
