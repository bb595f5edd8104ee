"""Compiled inner loops for the simulation engine.

These kernels mirror the scalar operations in `policies` and `engine`
exactly; tests assert step-for-step agreement with the pure-Python
reference path. Tie-break coins are consumed from a pregenerated uniform
pool so both paths see identical randomness.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Policy codes shared with engine.py.
P_UCB1 = 0
P_KLUCB = 1  # plain budget log t + c log log t
P_KLUCB_PLUS = 2
P_IMED = 3
P_MOSS = 4
P_THOMPSON = 5

MODE_BEE = 0
MODE_SWARM = 1


@njit(cache=True)
def _kl(p, q):
    out = 0.0
    if p > 0.0:
        out += p * np.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * np.log((1.0 - p) / (1.0 - q))
    return out


@njit(cache=True)
def klucb_solve(pbar, n, budget, tol):
    # Returns the largest feasible q (n * d(pbar, q) <= budget). Terminates
    # on the q-interval width AND the budget-space residual, so the solver
    # stays accurate where the divergence is steep.
    if budget <= 0.0:
        return pbar
    hi = 1.0 - 1e-12
    if n * _kl(pbar, hi) <= budget:
        return hi
    lo = pbar
    vlo = 0.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval exhausted at double precision
        v = n * _kl(pbar, mid)
        if v <= budget:
            lo = mid
            vlo = v
        else:
            hi = mid
        if hi - lo <= tol and budget - vlo <= 1e-8:
            break
    return lo


@njit(cache=True)
def seed_policy_rng(seed):
    np.random.seed(seed)


@njit(cache=True)
def thompson_draws(agreements, consults, out):
    for i in range(agreements.shape[0]):
        out[i] = np.random.beta(
            1.0 + agreements[i], 1.0 + consults[i] - agreements[i]
        )


@njit(cache=True)
def _fill_psi(policy, t, horizon, consults, agreements, klucb_c, tol, psi):
    m = consults.shape[0]
    if policy == P_THOMPSON:
        thompson_draws(agreements, consults, psi)
        return
    if policy == P_IMED:
        pmax = 0.0
        for i in range(m):
            pb = agreements[i] / consults[i]
            if pb > pmax:
                pmax = pb
        for i in range(m):
            n = consults[i]
            pb = agreements[i] / n
            if pmax >= 1.0:
                d = np.inf if pb < 1.0 else 0.0
            else:
                d = _kl(pb, pmax) if pb != pmax else 0.0
            psi[i] = n * d + np.log(n)
        return
    for i in range(m):
        n = consults[i]
        pb = agreements[i] / n
        if policy == P_UCB1:
            psi[i] = pb + np.sqrt(2.0 * np.log(t) / n)
        elif policy == P_KLUCB_PLUS:
            budget = np.log(t / n)
            if budget < 0.0:
                budget = 0.0
            psi[i] = klucb_solve(pb, n, budget, tol)
        elif policy == P_KLUCB:
            logt = np.log(t)
            budget = logt
            if klucb_c > 0.0 and logt > 0.0:
                budget += klucb_c * np.log(logt)
            if budget < 0.0:
                budget = 0.0
            psi[i] = klucb_solve(pb, n, budget, tol)
        else:  # MOSS
            bonus = np.log(horizon / (m * n))
            if bonus < 0.0:
                bonus = 0.0
            psi[i] = pb + np.sqrt(bonus / n)


@njit(cache=True)
def _select_top(psi, m, minimize, committee_out):
    # Repeated strict-extreme scan: ties resolve to the lowest index.
    big = psi.shape[0]
    taken = np.zeros(big, np.uint8)
    for k in range(m):
        best = -1
        bestv = 0.0
        for i in range(big):
            if taken[i] == 1:
                continue
            v = -psi[i] if minimize else psi[i]
            if best < 0 or v > bestv:
                best = i
                bestv = v
        taken[best] = 1
        committee_out[k] = best


@njit(cache=True)
def run_kernel(
    opinions,  # int8 (T, M)
    labels,  # int8 (T,)
    coins,  # float64 pool for tie-breaking
    policy,
    mode,
    oracle_rewards,
    m,
    consults,  # int64 (M,), zeroed in/out
    agreements,  # int64 (M,), zeroed in/out
    leaders,  # int32 (T,) out
    decisions,  # int8 (T,) out
    committees,  # int16 (T, m) out, round-1 row left as -1
    klucb_c,
    tol,
):
    horizon, experts = opinions.shape
    cp = 0  # coin pool pointer
    psi = np.empty(experts, np.float64)

    # Round 1: consult everyone, commit the plain majority vote.
    tot = 0
    for i in range(experts):
        tot += opinions[0, i]
    for i in range(experts):
        ps = tot - opinions[0, i]
        if ps == 0:
            vote = 1 if coins[cp] < 0.5 else -1
            cp += 1
        else:
            vote = 1 if ps > 0 else -1
        if oracle_rewards == 1:
            r = 1 if opinions[0, i] == labels[0] else 0
        else:
            r = 1 if opinions[0, i] == vote else 0
        consults[i] += 1
        agreements[i] += r
    if tot == 0:
        decisions[0] = 1 if coins[cp] < 0.5 else -1
        cp += 1
    else:
        decisions[0] = 1 if tot > 0 else -1
    leaders[0] = -1
    for k in range(m):
        committees[0, k] = -1

    for ti in range(1, horizon):
        t = ti + 1  # 1-based round index
        _fill_psi(policy, t, horizon, consults, agreements, klucb_c, tol, psi)
        _select_top(psi, m, policy == P_IMED, committees[ti])
        comm = committees[ti]
        leader = comm[0]
        leaders[ti] = leader

        tot = 0
        for k in range(m):
            tot += opinions[ti, comm[k]]

        if mode == MODE_BEE:
            decisions[ti] = opinions[ti, leader]

        for k in range(m):
            i = comm[k]
            xi = opinions[ti, i]
            if oracle_rewards == 1:
                r = 1 if xi == labels[ti] else 0
            else:
                ps = tot - xi
                if ps == 0:
                    vote = 1 if coins[cp] < 0.5 else -1
                    cp += 1
                else:
                    vote = 1 if ps > 0 else -1
                r = 1 if xi == vote else 0
            consults[i] += 1
            agreements[i] += r

        if mode == MODE_SWARM:
            s = 0.0
            for k in range(m):
                i = comm[k]
                s += opinions[ti, i] * (agreements[i] / consults[i] - 0.5)
            if s > 0.0:
                decisions[ti] = 1
            elif s < 0.0:
                decisions[ti] = -1
            else:
                decisions[ti] = 1 if coins[cp] < 0.5 else -1
                cp += 1
    return cp


@njit(cache=True)
def lemma_kernel(
    cand_opinions,  # int8 (T, n) candidate opinions
    committee_vote,  # int8 (T,) pinned-committee majority vote
    policy,
    horizon,
    consults,  # int64 (n,) zeroed in/out
    agreements,  # int64 (n,) zeroed in/out
    leaders,  # int32 (T,) out
    klucb_c,
    tol,
):
    n = cand_opinions.shape[1]
    psi = np.empty(n, np.float64)
    pick = np.empty(1, np.int16)
    for ti in range(horizon):
        t = ti + 1
        if ti < n:
            leader = ti  # one forced consultation per candidate
        else:
            _fill_psi(policy, t, horizon, consults, agreements, klucb_c, tol, psi)
            _select_top(psi, 1, policy == P_IMED, pick)
            leader = pick[0]
        r = 1 if cand_opinions[ti, leader] == committee_vote[ti] else 0
        consults[leader] += 1
        agreements[leader] += r
        leaders[ti] = leader
