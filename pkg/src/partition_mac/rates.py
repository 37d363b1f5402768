"""Rate functions and thresholds of the partition scheme.

C(p,q10,q01) = p1*phi_1 + p0*phi_0 is the achievability exponent of the
sub-optimal decoder (threshold C1 = 1/max_p C); D(p,q10,q01) is the
converse exponent under the same scheme (C2 = 1/D at the C-maximizing p);
Cg is the group-testing rate min{I(x1; x2,y), I(x1,x2; y)/2}.  All rates
are in nats per round.  The channel is degenerate when q10+q01 = 1 (the
feedback is independent of the input) and every rate is zero there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams, is_degenerate, pair_feedback_table, triple_pattern_table

LAMBDA_CLAMP = 50.0
LAMBDA_SCAN = 2048
P_SCAN = 512


@dataclass(frozen=True)
class LdpKernel:
    """Inputs of the large-deviation machinery at one (p, q10, q01) point."""

    p: float
    q10: float
    q01: float
    p1: float = field(init=False)
    p0: float = field(init=False)
    xbar1: float = field(init=False)
    xbar0: float = field(init=False)
    pyy0: dict = field(init=False)
    pyx1x2: dict = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"design probability must lie in (0,1), got {self.p}")
        ch = ChannelParams(q10=self.q10, q01=self.q01)
        pyy0 = pair_feedback_table(self.p, ch, k=2)
        object.__setattr__(self, "pyy0", pyy0)
        object.__setattr__(self, "pyx1x2", triple_pattern_table(self.p, ch))
        p1 = pyy0[(1, 1)] + pyy0[(1, 0)]
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p0", 1.0 - p1)
        q = 1.0 - self.p
        object.__setattr__(self, "xbar1", q * q * self.q10 / self.p1 if self.p1 > 0 else 0.0)
        object.__setattr__(self, "xbar0", q * q * (1.0 - self.q10) / self.p0 if self.p0 > 0 else 0.0)
        assert abs(self.p1 * self.xbar1 + self.p0 * self.xbar0 - q * q) <= 1e-12

    def xbar(self, w: int) -> float:
        return self.xbar1 if w == 1 else self.xbar0

    def pw(self, w: int) -> float:
        return self.p1 if w == 1 else self.p0


@dataclass(frozen=True)
class SupResult:
    lam: float
    value: float
    saturated_lo: bool
    saturated_hi: bool


def _golden_max(f, lo: float, hi: float, xtol: float = 1e-12) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def sup_search(f, lo: float = -LAMBDA_CLAMP, hi: float = LAMBDA_CLAMP, n_scan: int = LAMBDA_SCAN) -> SupResult:
    """Maximize a smooth 1-D objective: dense scan then golden-section refine.

    f must accept numpy arrays.  Saturation at a clamp edge is reported so
    callers can substitute analytic boundary limits.
    """
    xs = np.linspace(lo, hi, n_scan)
    ys = np.asarray(f(xs), dtype=float)
    i = int(np.argmax(ys))
    if i == 0 or i == n_scan - 1:
        return SupResult(lam=float(xs[i]), value=float(ys[i]), saturated_lo=i == 0, saturated_hi=i == n_scan - 1)
    scalar = lambda t: float(f(np.asarray(t, dtype=float)))
    x, v = _golden_max(scalar, float(xs[i - 1]), float(xs[i + 1]))
    if v < ys[i]:
        x, v = float(xs[i]), float(ys[i])
    return SupResult(lam=x, value=v, saturated_lo=False, saturated_hi=False)


def rho_plus(lam, p: float):
    """Larger eigenvalue of the tilted pair-state transition kernel:
    rho_+ = (p + (1-p)e^lam + sqrt((p-(1-p)e^lam)^2 + 4p(1-p))) / 2."""
    e = np.exp(lam)
    q = 1.0 - p
    return 0.5 * (p + q * e + np.sqrt((p - q * e) ** 2 + 4.0 * p * q))


def rho_plus_neg_inf(p: float) -> float:
    """Limit of rho_+ as lam -> -inf."""
    return 0.5 * (p + math.sqrt(p * (4.0 - 3.0 * p)))


def phi(w: int, kernel: LdpKernel) -> float:
    """Block-w exponent: sup over lam of lam*xbar_w - log rho_+(lam).

    The maximizer escapes to -inf when xbar_w = 0 (value -log rho_+(-inf))
    and to +inf when xbar_w = 1 (value -log(1-p)); those analytic limits
    replace the clamped search value on saturation.
    """
    if is_degenerate(kernel.q10, kernel.q01):
        return 0.0
    xbar = kernel.xbar(w)
    p = kernel.p
    obj = lambda lam: lam * xbar - np.log(rho_plus(lam, p))
    res = sup_search(obj)
    if res.saturated_lo:
        return -math.log(rho_plus_neg_inf(p))
    if res.saturated_hi:
        return -math.log(1.0 - p)
    return res.value


def rate_C(p: float, q10: float, q01: float) -> float:
    """Theorem-1 rate C = p1*phi_1 + p0*phi_0 (zero when degenerate or p in {0,1})."""
    if is_degenerate(q10, q01) or p <= 0.0 or p >= 1.0:
        return 0.0
    kernel = LdpKernel(p=p, q10=q10, q01=q01)
    return kernel.p1 * phi(1, kernel) + kernel.p0 * phi(0, kernel)


def phi_prime(w: int, kernel: LdpKernel) -> float:
    """Theorem-2 block exponent:
    (1/p_w) sup_lam [ A log(e^{2 lam}/(p+(1-p)e^{2 lam})) - 2 B log(p+(1-p)e^lam) ]
    with A = p_{y,x1,x2}(w,0,0) and B = p_{y,x1,x2}(w,1,0)."""
    if is_degenerate(kernel.q10, kernel.q01):
        return 0.0
    p = kernel.p
    a = kernel.pyx1x2[(w, 0, 0)]
    b = kernel.pyx1x2[(w, 1, 0)]

    def obj(lam):
        q = 1.0 - p
        return a * (2.0 * lam - np.log(p + q * np.exp(2.0 * lam))) - 2.0 * b * np.log(p + q * np.exp(lam))

    res = sup_search(obj)
    if res.saturated_lo:
        value = -2.0 * b * math.log(p) if a == 0.0 else res.value
    elif res.saturated_hi:
        value = -a * math.log(1.0 - p) if b == 0.0 else res.value
    else:
        value = res.value
    return value / kernel.pw(w)


def rate_D(p: float, q10: float, q01: float) -> float:
    """Theorem-2 rate D = p1*phi'_1 + p0*phi'_0."""
    if is_degenerate(q10, q01) or p <= 0.0 or p >= 1.0:
        return 0.0
    kernel = LdpKernel(p=p, q10=q10, q01=q01)
    return kernel.p1 * phi_prime(1, kernel) + kernel.p0 * phi_prime(0, kernel)


def _mutual_information(joint: np.ndarray) -> float:
    """I(A;B) in nats from a joint probability matrix."""
    pa = joint.sum(axis=1, keepdims=True)
    pb = joint.sum(axis=0, keepdims=True)
    mask = joint > 0.0
    ratio = np.ones_like(joint)
    ratio[mask] = joint[mask] / (pa @ pb)[mask]
    return float(np.sum(joint[mask] * np.log(ratio[mask])))


def rate_Cg(p: float, q10: float, q01: float) -> float:
    """Group-testing rate min{ I(x1; x2,y), I(x1,x2; y)/2 } in nats."""
    if p <= 0.0 or p >= 1.0 or is_degenerate(q10, q01):
        return 0.0
    table = triple_pattern_table(p, ChannelParams(q10=q10, q01=q01))
    # I(x1; x2,y): rows = u, columns = (v,w)
    j1 = np.zeros((2, 4))
    # I(x1,x2; y): rows = (u,v), columns = w
    j2 = np.zeros((4, 2))
    for (w, u, v), prob in table.items():
        j1[u, 2 * v + w] = prob
        j2[2 * u + v, w] = prob
    # mutual informations are nonnegative; clip float noise near zero
    return max(0.0, min(_mutual_information(j1), 0.5 * _mutual_information(j2)))


@dataclass(frozen=True)
class OptimizeResult:
    p_star: float
    value: float


def optimize_over_p(q10: float, q01: float, which: str = "C", n_scan: int = P_SCAN) -> OptimizeResult:
    """Maximize rate_C or rate_Cg over the design probability p in (0,1)."""
    fn = {"C": rate_C, "Cg": rate_Cg}[which]
    if which == "C" and is_degenerate(q10, q01):
        raise ValueError("degenerate channel: the rate curve is identically zero")
    ps = np.arange(1, n_scan + 1) / (n_scan + 1.0)
    vals = np.array([fn(float(p), q10, q01) for p in ps])
    i = int(np.argmax(vals))
    if vals[i] <= 0.0:
        raise ValueError("degenerate channel: the rate curve is identically zero")
    lo = float(ps[max(i - 1, 0)])
    hi = float(ps[min(i + 1, n_scan - 1)])
    x, v = _golden_max(lambda t: fn(t, q10, q01), lo, hi, xtol=1e-10)
    if v < vals[i]:
        x, v = float(ps[i]), float(vals[i])
    return OptimizeResult(p_star=x, value=v)


@dataclass(frozen=True)
class RatePoint:
    """Evaluated rates and thresholds at one (q10, q01) channel point."""

    q10: float
    q01: float
    p_star: float
    C: float
    D: float
    Cg: float
    C1: float
    C2: float
    Cg_threshold: float
    degenerate: bool


def rate_point(q10: float, q01: float, n_scan: int = P_SCAN) -> RatePoint:
    """Optimize C over p, evaluate D at that maximizer, and optimize Cg
    over its own p; thresholds are the reciprocals."""
    if is_degenerate(q10, q01):
        nan = float("nan")
        return RatePoint(q10=q10, q01=q01, p_star=nan, C=0.0, D=0.0, Cg=0.0,
                         C1=nan, C2=nan, Cg_threshold=nan, degenerate=True)
    best_c = optimize_over_p(q10, q01, "C", n_scan)
    best_cg = optimize_over_p(q10, q01, "Cg", n_scan)
    d_at_pstar = rate_D(best_c.p_star, q10, q01)
    return RatePoint(
        q10=q10,
        q01=q01,
        p_star=best_c.p_star,
        C=best_c.value,
        D=d_at_pstar,
        Cg=best_cg.value,
        C1=1.0 / best_c.value,
        C2=1.0 / d_at_pstar,
        Cg_threshold=1.0 / best_cg.value,
        degenerate=False,
    )
