"""Independent brute-force oracle for small detection chains.

Builds the level rules directly (D=0, X1..Xs, N=s+1) either as the
generated detection table (literal=True: Xi + Xs is null for i < s) or as the
level chain truncated at s (literal=False), enumerates all
configurations, and solves pi (P - I) = 0 with numpy least squares on the
states reachable from the start state (single closed class assumed). Used to freeze expected values in
the C++ unit tests.
"""
import itertools
import sys

import numpy as np


def rule(s, a, b, literal):
    N = s + 1
    if a == 0 and b == 0:
        return None
    if a == 0 or b == 0:
        other = b if a == 0 else a
        if other == 1:
            return None
        return (0, 1) if a == 0 else (1, 0)
    if literal and s in (a, b) and min(a, b) < s:
        return None
    m = min(min(a, b) + 1, N)
    if (m, m) == (a, b):
        return None
    return (m, m)


def chain(n, s, k, beta, strategy, literal=True, start=None):
    S = s + 2
    states = [c for c in itertools.product(range(n + 1), repeat=S) if sum(c) == n]
    idx = {c: i for i, c in enumerate(states)}
    P = np.zeros((len(states), len(states)))
    lp = beta / n if strategy != "none" else 0.0
    for c in states:
        i = idx[c]
        for a in range(S):
            if c[a] == 0 or lp == 0:
                continue
            to = a
            if a != 0:
                to = 1 if strategy == "fp" else s + 1
            nxt = list(c); nxt[a] -= 1; nxt[to] += 1
            P[i, idx[tuple(nxt)]] += lp * c[a] / n
        for a in range(S):
            for b in range(S):
                ways = c[a] * (c[b] - (1 if a == b else 0))
                if ways <= 0:
                    continue
                pr = (1 - lp) * ways / (n * (n - 1))
                r = rule(s, a, b, literal)
                nxt = list(c)
                if r:
                    nxt[a] -= 1; nxt[b] -= 1; nxt[r[0]] += 1; nxt[r[1]] += 1
                P[i, idx[tuple(nxt)]] += pr
    if start is None:
        start = [0] * S
        start[0] = k
        start[s + 1] = n - k
    # Closed class reached from the start state: solve pi (P - I) = 0,
    # sum(pi) = 1 on the reachable set by least squares.
    reach = {idx[tuple(start)]}
    frontier = [idx[tuple(start)]]
    while frontier:
        i = frontier.pop()
        for j in np.nonzero(P[i])[0]:
            if j not in reach:
                reach.add(j)
                frontier.append(j)
    reach = sorted(reach)
    Q = P[np.ix_(reach, reach)]
    A = np.vstack([(Q - np.eye(len(reach))).T, np.ones(len(reach))])
    rhs = np.zeros(len(reach) + 1)
    rhs[-1] = 1
    sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
    pi = np.zeros(len(states))
    pi[reach] = sol
    detect = sum(pi[idx[c]] * (n - c[s + 1]) / n for c in states)
    return detect, pi, states


if __name__ == "__main__":
    for args in [(2, 1, 0, 0.0, "none"), (2, 1, 1, 0.0, "none"), (4, 2, 0, 0.5, "fp"),
                 (3, 2, 1, 0.5, "fn"), (5, 3, 0, 0.5, "fp")]:
        for literal in (True, False):
            d, _, _ = chain(*args, literal=literal)
            print(args, "literal" if literal else "truncated", repr(d))
