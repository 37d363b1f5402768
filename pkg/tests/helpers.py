"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately naive (loops, exhaustive enumeration,
literal transition matrices) and shares no code with the implementation
paths it checks.
"""

import math
from itertools import combinations, product

import numpy as np

STATES = [(1, 1), (1, 0), (0, 1), (0, 0)]
IDX = {s: i for i, s in enumerate(STATES)}


def tilted_chain_path_sum(m, lam, counts, p):
    """E[exp(lam * #{(0,0) states})] of the concatenated cycle chain, as a
    product of tilted transfer matrices Pi / C_u / T_{u,v}."""
    pi = np.zeros((4, 4))
    for (u, v) in STATES:
        pi[IDX[(v, 1)], IDX[(u, v)]] += p
        pi[IDX[(v, 0)], IDX[(u, v)]] += 1.0 - p

    def c_matrix(u):
        mat = np.zeros((4, 4))
        for (a, b) in STATES:
            mat[IDX[(b, u)], IDX[(a, b)]] = 1.0
        return mat

    tilt = np.array([math.exp(lam) if s == (0, 0) else 1.0 for s in STATES])
    order = []
    for s in STATES:
        order += [s] * int(counts.get(s, 0))
    if not order:
        return 1.0
    vec = None
    for (u, v) in order:
        if vec is None:
            vec = np.zeros(4)
            vec[IDX[(u, v)]] = 1.0
        else:
            mass = vec.sum()
            vec = np.zeros(4)
            vec[IDX[(u, v)]] = mass
        vec[IDX[(u, v)]] *= tilt[IDX[(u, v)]]
        for _ in range(m - 2):
            vec = (tilt[:, None] * pi) @ vec
        vec = (tilt[:, None] * c_matrix(u)) @ vec
    return float(vec.sum())


def brute_on_odd_cycle(n, edges, edge):
    """DFS over all simple paths a..b avoiding the edge itself; the edge lies
    on an odd cycle iff some such path has an even number of edges."""
    a, b = edge
    adj = {v: set() for v in range(1, n + 1)}
    for (i, j) in edges:
        adj[i].add(j)
        adj[j].add(i)

    found = []

    def dfs(v, visited, length):
        if v == b and length >= 2:
            if length % 2 == 0:
                found.append(length)
            return
        for w in adj[v]:
            if w == b and (v, w) in ((a, b), (b, a)) and length == 0:
                continue
            if w in visited:
                continue
            if w == b:
                dfs(w, visited, length + 1)
            else:
                dfs(w, visited | {w}, length + 1)
            if found:
                return

    dfs(a, {a}, 0)
    return bool(found)


def is_bipartite_edges(n, edges):
    color = {}
    adj = {v: set() for v in range(1, n + 1)}
    for (i, j) in edges:
        adj[i].add(j)
        adj[j].add(i)
    for root in adj:
        if root in color:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in color:
                    color[w] = color[v] ^ 1
                    stack.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def brute_min_bipartize(n, edges):
    """Smallest deletion set, lexicographically first among minimums."""
    edge_list = sorted(edges)
    for k in range(len(edge_list) + 1):
        for combo in combinations(edge_list, k):
            if is_bipartite_edges(n, set(edge_list) - set(combo)):
                return k, list(combo)
    raise AssertionError("unreachable")


def naive_edge_test(y, xi, xj, kernel, eps, strictness):
    """Literal per-block recount of the simplified typicality test."""
    factor = {"sufficient": 2.0, "necessary": 0.5}[strictness]
    band = factor * eps / 4.0
    t = len(y)
    for w in (1, 0):
        rounds = [s for s in range(t) if y[s] == w]
        count = sum(1 for s in rounds if xi[s] == 0 and xj[s] == 0)
        p_w0 = kernel.pyy0[(w, 0)]
        p_w1 = kernel.pyy0[(w, 1)]
        if p_w0 > 0.0:
            if abs(count / t - p_w0) > band:
                return False
        elif count != 0:
            return False
        if p_w1 == 0.0 and count != len(rounds):
            return False
    return True


def naive_marginal_test(y, kernel, eps, strictness):
    factor = {"sufficient": 2.0, "necessary": 0.5}[strictness]
    ones = sum(int(b) for b in y)
    return abs(ones / len(y) - kernel.p1) <= factor * eps / 4.0


def brute_bayes(x_bits, y, q10, q01):
    """Exhaustive MAP partition in exact rational arithmetic; among exact
    maximizers the lexicographically smallest label vector is returned."""
    from fractions import Fraction

    q10 = Fraction(str(q10))
    q01 = Fraction(str(q01))

    def obs(w, w0):
        if w0 == 0:
            return q10 if w == 1 else 1 - q10
        return q01 if w == 0 else 1 - q01

    n, t = x_bits.shape
    pair_lik = {}
    for i, j in combinations(range(1, n + 1), 2):
        v = x_bits[i - 1] | x_bits[j - 1]
        lik = Fraction(1)
        for s in range(t):
            lik *= obs(int(y[s]), int(v[s]))
        pair_lik[(i, j)] = lik
    best = None
    best_w = Fraction(-1)
    for labels in product((1, 2), repeat=n):
        if 1 not in labels or 2 not in labels:
            continue
        w = sum((lik for (i, j), lik in pair_lik.items() if labels[i - 1] != labels[j - 1]), Fraction(0))
        if w > best_w:
            best, best_w = labels, w
    return np.array(best), best_w


def exact_mu3(kernel, t, block, counts, s_lo, s_hi):
    """Triple-binomial enumeration of the cycle-completion event."""
    from scipy.stats import binom

    n00 = counts[(block, 0, 0)]
    n01 = counts[(block, 0, 1)]
    n10 = counts[(block, 1, 0)]
    zf = 1.0 - kernel.p
    p00 = binom.pmf(np.arange(n00 + 1), n00, zf)
    p01 = binom.pmf(np.arange(n01 + 1), n01, zf)
    p10 = binom.pmf(np.arange(n10 + 1), n10, zf)
    total = 0.0
    for a00 in range(n00 + 1):
        lo = s_lo - a00
        hi = s_hi - a00
        if hi < 0:
            continue
        m01 = p01[max(lo, 0):min(hi, n01) + 1].sum() if lo <= n01 else 0.0
        m10 = p10[max(lo, 0):min(hi, n10) + 1].sum() if lo <= n10 else 0.0
        total += p00[a00] * m01 * m10
    return float(total)


def random_graph(rng, n, edge_prob):
    edges = set()
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if rng.random() < edge_prob:
                edges.add((i, j))
    return edges
