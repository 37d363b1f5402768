"""Large-deviation machinery behind the rate functions.

The cycle-membership event in one feedback block is governed by a
non-stationary Markov chain over codeword-bit pairs; its log moment
generating function has the closed form

    Lambda(M T^w lam) = sum_{u,v} T^w_{u,v} log g_{u,v}(M, lam)

with g expressed through J_M = (rho_+^M - rho_-^M)/(rho_+ - rho_-), the
eigenvalues rho_+- of the tilted 2x2 transfer kernel.  Everything here is
evaluated in a signed log domain so |lam| up to the clamp (50) and M up
to a few dozen stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rates import (
    LAMBDA_CLAMP,
    LdpKernel,
    phi,
    rho_plus,
    sup_search,
    _golden_max,
)

PATTERNS = ((1, 1), (1, 0), (0, 1), (0, 0))


class UnboundedTransformError(ValueError):
    """The Fenchel-Legendre supremum escapes the clamp interval."""


@dataclass(frozen=True)
class MarkovMgfTerms:
    """Spectral quantities of the tilted transfer kernel at one lam."""

    m: int
    lam: float
    alpha: float
    beta: float
    rho_plus: float
    rho_minus: float
    j_m: float
    log_g: dict


def _spectral(lam, p: float):
    e = np.exp(lam)
    q = 1.0 - p
    alpha = p + q * e
    beta = np.sqrt((p - q * e) ** 2 + 4.0 * p * q)
    rp = 0.5 * (alpha + beta)
    rm = p * q * (e - 1.0) / rp  # product identity, avoids cancellation in alpha - beta
    return alpha, beta, rp, rm


def _log_signed_diff(log_a, log_b, sign_b):
    """log(e^log_a - sign_b * e^log_b), assuming the result is positive."""
    log_a = np.asarray(log_a, dtype=float)
    log_b = np.asarray(log_b, dtype=float)
    delta = np.where(np.isneginf(log_b), -np.inf, log_b - log_a)
    return log_a + np.log1p(-sign_b * np.exp(delta))


def _log_eigterm(log_rp, log_rm_abs, sign_rm, k: int, cof_plus, cof_minus):
    """log of [rho_+^k * cof_plus - rho_-^k * cof_minus] with signed cofactors."""
    log_a = k * log_rp + np.log(cof_plus)
    with np.errstate(divide="ignore"):
        log_b = k * log_rm_abs + np.log(np.abs(cof_minus))
    sign_b = (sign_rm ** k) * np.sign(cof_minus)
    return _log_signed_diff(log_a, log_b, sign_b)


def log_g_table(m: int, lam, p: float) -> dict:
    """log g_{u,v}(M, lam) for the four subsequence start patterns:

    g_{1,1} = J_{M-1} + (1-alpha) J_{M-2}
    g_{1,0} = g_{0,1} = J_{M-1}
    g_{0,0} = e^{2 lam} (J_{M-1} - p (1 - e^{-lam}) J_{M-2})
    """
    lam = np.asarray(lam, dtype=float)
    _alpha, beta, rp, rm = _spectral(lam, p)
    log_rp = np.log(rp)
    with np.errstate(divide="ignore"):
        log_rm_abs = np.log(np.abs(rm))
    sign_rm = np.sign(rm)
    log_beta = np.log(beta)
    c = p * (1.0 - np.exp(-lam))
    one = np.ones_like(rp)
    log_g10 = _log_eigterm(log_rp, log_rm_abs, sign_rm, m - 1, one, one) - log_beta
    log_g11 = _log_eigterm(log_rp, log_rm_abs, sign_rm, m - 2, 1.0 - rm, 1.0 - rp) - log_beta
    log_g00 = 2.0 * lam + _log_eigterm(log_rp, log_rm_abs, sign_rm, m - 2, rp - c, rm - c) - log_beta
    return {(1, 1): log_g11, (1, 0): log_g10, (0, 1): log_g10, (0, 0): log_g00}


def j_sequence(m: int, lam: float, p: float) -> list:
    """J_0..J_M by the recurrence J_k = alpha J_{k-1} - (rho_+ rho_-) J_{k-2}."""
    alpha, _beta, rp, rm = _spectral(float(lam), p)
    prod = rp * rm
    j = [0.0, 1.0]
    for _ in range(2, m + 1):
        j.append(alpha * j[-1] - prod * j[-2])
    return j[: m + 1]


def markov_mgf_terms(m: int, lam: float, p: float) -> MarkovMgfTerms:
    _check_m(m)
    alpha, beta, rp, rm = _spectral(float(lam), p)
    return MarkovMgfTerms(
        m=m,
        lam=float(lam),
        alpha=float(alpha),
        beta=float(beta),
        rho_plus=float(rp),
        rho_minus=float(rm),
        j_m=j_sequence(m, lam, p)[m],
        log_g={k: float(v) for k, v in log_g_table(m, lam, p).items()},
    )


def _check_lam(lam) -> None:
    if np.any(np.abs(np.asarray(lam, dtype=float)) > LAMBDA_CLAMP):
        raise ValueError(f"|lam| must not exceed {LAMBDA_CLAMP}")


def _check_m(m: int) -> None:
    if m < 3 or m % 2 == 0:
        raise ValueError(f"cycle length must be odd and >= 3, got {m}")


def log_mgf_from_counts(m: int, lam, counts: dict, p: float):
    """Lambda_{M T^w}(M T^w lam) = sum_{u,v} T^w_{u,v} log g_{u,v}(M, lam).

    counts maps (u,v) start patterns to (possibly fractional) block counts.
    """
    _check_m(m)
    _check_lam(lam)
    table = log_g_table(m, lam, p)
    lam = np.asarray(lam, dtype=float)
    total = np.zeros_like(lam)
    for uv, weight in counts.items():
        if weight != 0.0:
            total = total + weight * table[uv]
    return total if total.shape else float(total)


def markov_log_mgf(m: int, lam, kernel: LdpKernel, block: int, t_rounds: float = 1.0):
    """Block-w log-MGF at the idealized pattern proportions
    T^w_{u,v} = p_{y,x1,x2}(w,u,v) * T."""
    counts = {(u, v): kernel.pyx1x2[(block, u, v)] * t_rounds for (u, v) in PATTERNS}
    return log_mgf_from_counts(m, lam, counts, kernel.p)


def legendre_transform(log_mgf, x: float, lo: float = -LAMBDA_CLAMP, hi: float = LAMBDA_CLAMP) -> float:
    """Fenchel-Legendre transform sup_lam (lam*x - Lambda(lam)).

    log_mgf must accept numpy arrays.  A supremum escaping the clamp
    interval means x lies outside the feasible mean range and is flagged.
    """
    res = sup_search(lambda lam: lam * x - log_mgf(lam), lo=lo, hi=hi)
    if res.saturated_lo or res.saturated_hi:
        raise UnboundedTransformError(f"Legendre supremum saturated the clamp at x={x}")
    return res.value


def lemma3_gap(m: int, p: float, q10: float, q01: float) -> float:
    """Normalized Fenchel-Legendre rate of the length-M cycle chain minus its
    (M-2)/M * phi_1 lower bound; the claim is that this is >= 0.

    Evaluates (1/(M T^1)) Lambda*(M T xbar1 p1) at the idealized counts,
    which is T-free once written per round."""
    _check_m(m)
    kernel = LdpKernel(p=p, q10=q10, q01=q01)
    phi1 = phi(1, kernel)
    scale = m * kernel.p1

    def obj(lam):
        return lam * kernel.xbar1 - markov_log_mgf(m, lam, kernel, block=1) / scale

    res = sup_search(obj)
    return res.value - (m - 2) / m * phi1


def binary_kl(theta: float, ref: float) -> float:
    """KL(Bern(theta) || Bern(ref)) in nats."""
    if not (-1e-9 <= theta <= 1.0 + 1e-9):
        raise ValueError(f"theta must lie in [0,1], got {theta}")
    theta = min(max(theta, 0.0), 1.0)
    out = 0.0
    if theta > 0.0:
        out += theta * math.log(theta / ref)
    if theta < 1.0:
        out += (1.0 - theta) * math.log((1.0 - theta) / (1.0 - ref))
    return out


@dataclass(frozen=True)
class AppendixBResult:
    value: float
    b00: float
    lam_00: float
    lam_10: float
    stationarity_gap: float
    boundary: bool


def appendixB_rate(w: int, p: float, q10: float, q01: float) -> AppendixBResult:
    """Gaertner-Ellis rate of the triangle-completion event in block w.

    The three zero-counts of the third codeword are independent binomials;
    the constraint set forces b10 = b01 = beta00 - b00, so the 3-D inf-sup
    collapses to a 1-D minimization of

        beta00 KL(b00/beta00 || 1-p) + 2 beta10 KL((beta00-b00)/beta10 || 1-p)

    over the feasible b00.  At an interior optimum the per-coordinate
    maximizers satisfy 2 lam*_{1,0} = lam*_{0,0}.
    """
    kernel = LdpKernel(p=p, q10=q10, q01=q01)
    pw = kernel.pw(w)
    beta00 = kernel.pyx1x2[(w, 0, 0)] / pw
    beta10 = kernel.pyx1x2[(w, 1, 0)] / pw
    zero_frac = 1.0 - p
    lo = max(0.0, beta00 - beta10)
    hi = beta00

    def objective(b00: float) -> float:
        return beta00 * binary_kl(b00 / beta00, zero_frac) + 2.0 * beta10 * binary_kl(
            (beta00 - b00) / beta10, zero_frac
        )

    def tilt(theta: float) -> float:
        if theta <= 0.0:
            return -math.inf
        if theta >= 1.0:
            return math.inf
        return math.log(p / (1.0 - p) * theta / (1.0 - theta))

    def stationarity(b00: float) -> float:
        # derivative of the objective; strictly increasing by convexity
        return tilt(b00 / beta00) - 2.0 * tilt((beta00 - b00) / beta10)

    grid = np.linspace(lo, hi, 513)
    vals = np.array([objective(float(b)) for b in grid])
    i = int(np.argmin(vals))
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, len(grid) - 1)])
    if stationarity(a) < 0.0 < stationarity(b):
        for _ in range(200):
            mid = 0.5 * (a + b)
            if mid in (a, b):
                break
            if stationarity(mid) < 0.0:
                a = mid
            else:
                b = mid
        b00 = 0.5 * (a + b)
        value = objective(b00)
    else:
        b00, neg_val = _golden_max(lambda t: -objective(t), a, b, xtol=1e-13)
        value = -neg_val
    if vals[i] < value:
        b00, value = float(grid[i]), float(vals[i])

    span = hi - lo
    boundary = (b00 - lo) <= 1e-9 * span or (hi - b00) <= 1e-9 * span

    lam_00 = tilt(b00 / beta00)
    lam_10 = tilt((beta00 - b00) / beta10)
    gap = abs(2.0 * lam_10 - lam_00) if math.isfinite(lam_00) and math.isfinite(lam_10) else math.inf
    return AppendixBResult(value=value, b00=b00, lam_00=lam_00, lam_10=lam_10, stationarity_gap=gap, boundary=boundary)
