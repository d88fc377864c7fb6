"""Independent reference computations used to freeze expected values in the
Rust test suite. Exact arithmetic via fractions; straightforward loops with no
shared code paths with the library.

Run: python3 tools/reference.py
"""
from fractions import Fraction as F
from itertools import combinations, permutations, product
import math

NEG_INF = None


def fr(x):
    return F(str(x))


def mx(*vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def pos(v):
    return F(0) if v is None else max(v, F(0))


def net_from(cells):
    return [[[fr(x) for x in row] for row in cell] for cell in cells]


def ibc_bounds(alpha, order, r):
    """Per-user downlink bound, evaluated term by term at every receiver that
    decodes the user."""
    K = len(alpha)
    out = [[F(0)] * len(alpha[k]) for k in range(K)]
    for k in range(K):
        pi = order[k]
        for l in range(len(pi)):
            u = pi[l]
            if r[k][u] is None:
                continue
            later = mx(*[r[k][pi[x]] for x in range(l + 1, len(pi))])
            best = None
            for m in range(l, len(pi)):
                rx = pi[m]
                a = alpha[k][rx][k]
                inter = mx(*[alpha[k][rx][j] + r[j][lj]
                             for j in range(K) if j != k
                             for lj in range(len(alpha[j])) if r[j][lj] is not None])
                val = a + r[k][u] - mx(F(0), None if later is None else a + later, inter)
                best = val if best is None else min(best, val)
            out[k][u] = max(best, F(0))
    return out


def ibc_gamma(alpha, order, r):
    K = len(alpha)
    out = [[F(0)] * len(alpha[k]) for k in range(K)]
    for k in range(K):
        pi = order[k]
        for l in range(len(pi)):
            u = pi[l]
            later = mx(*[r[k][pi[x]] for x in range(l + 1, len(pi))])
            terms = []
            for m in range(l, len(pi)):
                rx = pi[m]
                inter = mx(*[alpha[k][rx][j] + r[j][lj]
                             for j in range(K) if j != k
                             for lj in range(len(alpha[j])) if r[j][lj] is not None])
                terms.append(pos(inter) - alpha[k][rx][k])
            out[k][u] = alpha[k][u][k] + mx(later, max(terms))
    return out


def imac_gamma(alpha, order, r):
    K = len(alpha)
    out = [[F(0)] * len(alpha[k]) for k in range(K)]
    for k in range(K):
        pi = order[k]
        for l in range(len(pi)):
            earlier = [alpha[k][pi[x]][k] + r[k][pi[x]] for x in range(l) if r[k][pi[x]] is not None]
            foreign = [alpha[j][lj][k] + r[j][lj] for j in range(K) if j != k
                       for lj in range(len(alpha[j])) if r[j][lj] is not None]
            out[k][pi[l]] = max([F(0)] + earlier + foreign)
    return out


def imac_bounds(alpha, order, r):
    g = imac_gamma(alpha, order, r)
    return [[F(0) if r[k][u] is None else max(F(0), alpha[k][u][k] + r[k][u] - g[k][u])
             for u in range(len(alpha[k]))] for k in range(len(alpha))]


def cyc(cells):
    seqs = set()
    for m in range(2, len(cells) + 1):
        for p in permutations(cells, m):
            i = p.index(min(p))
            seqs.add(p[i:] + p[:i])
    return sorted(seqs)


def region(alpha, perms):
    """Constraints as (frozenset of (cell, slot) 1-based, bound)."""
    K = len(alpha)
    cons = []
    active = [k for k in range(K) if perms[k]]
    for i in active:
        for l in range(len(perms[i])):
            users = frozenset((i + 1, perms[i][s] + 1) for s in range(l + 1))
            cons.append((users, alpha[i][perms[i][l]][i]))
    for seq in cyc(active):
        for lens in product(*[range(1, len(perms[i]) + 1) for i in seq]):
            users = set()
            bound = F(0)
            for j, i in enumerate(seq):
                prev = seq[j - 1]
                top = perms[i][lens[j] - 1]
                users |= {(i + 1, perms[i][s] + 1) for s in range(lens[j])}
                bound += alpha[i][top][i] - alpha[i][top][prev]
            cons.append((frozenset(users), bound))
    return cons


def solve(A, b):
    n = len(A)
    M = [row[:] + [bb] for row, bb in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


def lp_max(users, cons, w):
    """Vertex enumeration: every choice of n tight rows among the constraints
    and the non-negativity bounds."""
    n = len(users)
    idx = {u: i for i, u in enumerate(users)}
    rows = []
    for us, b in cons:
        rows.append(([F(1) if u in us else F(0) for u in users], b))
    for i in range(n):
        rows.append(([F(-1) if j == i else F(0) for j in range(n)], F(0)))
    best = None
    for pick in combinations(range(len(rows)), n):
        x = solve([rows[p][0] for p in pick], [rows[p][1] for p in pick])
        if x is None:
            continue
        if all(sum(a * xi for a, xi in zip(row, x)) <= bb for row, bb in rows):
            v = sum(wi * xi for wi, xi in zip(w, x))
            best = v if best is None else max(best, v)
    return best


def all_orders(shape):
    return list(product(*[list(permutations(range(n))) for n in shape]))


def oracle_max(alpha, side, step, depth, w):
    shape = [len(c) for c in alpha]
    levels = []
    i = 0
    while i * step <= depth:
        levels.append(-i * step)
        i += 1
    levels.append(None)
    n = sum(shape)
    best = None
    for order in all_orders(shape):
        for combo in product(levels, repeat=n):
            it = iter(combo)
            r = [[next(it) for _ in range(L)] for L in shape]
            d = (ibc_bounds if side == "ibc" else imac_bounds)(alpha, order, r)
            v = sum(wi * x for wi, x in zip(w, [x for c in d for x in c]))
            best = v if best is None else max(best, v)
    return best


def show(name, v):
    if isinstance(v, list):
        print(name, [[str(x) for x in c] if isinstance(c, list) else str(c) for c in v])
    else:
        print(name, str(v))


def entropy(p):
    return -sum(x * math.log2(x) for x in p if x > 0)


def adt(params, p1, p2):
    m1, m2, n1, n2 = params
    q = max(params)
    size = 1 << q
    ya = [0.0] * size
    yb = [0.0] * size
    x1a = {}
    x1b = {}
    for x1 in range(size):
        for x2 in range(size):
            p = p1[x1] * p2[x2]
            if p == 0:
                continue
            bits1 = [(x1 >> (q - 1 - t)) & 1 for t in range(q)]
            bits2 = [(x2 >> (q - 1 - t)) & 1 for t in range(q)]

            def down(bits, s):
                return [0] * s + bits[:q - s]

            va = [a ^ b for a, b in zip(down(bits1, q - m1), down(bits2, q - m2))]
            vb = [a ^ b for a, b in zip(down(bits1, q - n1), down(bits2, q - n2))]
            ia = int("".join(map(str, va)), 2)
            ib = int("".join(map(str, vb)), 2)
            ya[ia] += p
            yb[ib] += p
            x1a[(x1, ia)] = x1a.get((x1, ia), 0) + p
            x1b[(x1, ib)] = x1b.get((x1, ib), 0) + p
    h1 = entropy(p1)
    return {
        "h_a": entropy(ya),
        "h_b": entropy(yb),
        "info_a": h1 + entropy(ya) - entropy(list(x1a.values())),
        "info_b": h1 + entropy(yb) - entropy(list(x1b.values())),
    }


if __name__ == "__main__":
    three = net_from([
        [[0.5, 0.2, 0.1], [1.1, 0.3, 0.25]],
        [[0.15, 0.9, 0.2]],
        [[0.3, 0.1, 0.7], [0.05, 0.35, 1.3]],
    ])
    order = [(1, 0), (0,), (0, 1)]
    r = [[fr(-0.1), F(0)], [fr(-0.3)], [F(0), fr(-0.45)]]
    show("three ibc gamma", ibc_gamma(three, order, r))
    show("three ibc bounds", ibc_bounds(three, order, r))
    rbar = [[-g for g in c] for c in ibc_gamma(three, order, r)]
    show("three dual rbar", rbar)
    show("three imac bounds of dual", imac_bounds(three, order, rbar))
    r2 = [[None, fr(-0.2)], [F(0)], [fr(-0.6), None]]
    show("three ibc bounds silent", ibc_bounds(three, order, r2))
    show("three imac gamma silent", imac_gamma(three, order, r2))
    show("three imac bounds silent", imac_bounds(three, order, r2))

    full = [list(range(2)), [0], list(range(2))]
    cons = region(three, full)
    print("three identity region constraints", len(cons))
    users = [(1, 1), (1, 2), (2, 1), (3, 1), (3, 2)]
    for w in ([1, 1, 1, 1, 1], [1, 2, 1, 3, 1], [0, 1, 0, 0, 1]):
        show(f"three lp id {w}", lp_max(users, cons, [F(x) for x in w]))
    perms = [[1], [0], [1, 0]]
    cons2 = region(three, perms)
    act = [(1, 2), (2, 1), (3, 1), (3, 2)]
    print("three sub region constraints", len(cons2))
    show("three lp sub ones", lp_max(act, cons2, [F(1)] * 4))

    net_a = net_from([[[0.6, 0.2], [1.0, 0.1]], [[0.3, 1.0]]])
    z = [[F(0), F(0)], [F(0)]]
    ident = [(0, 1), (0,)]
    show("netA ibc gamma r0", ibc_gamma(net_a, ident, z))
    show("netA ibc bounds r0", ibc_bounds(net_a, ident, z))
    show("netA oracle ibc 0.1/2", oracle_max(net_a, "ibc", fr(0.1), F(2), [1, 1, 1]))
    show("netA oracle imac 0.1/2", oracle_max(net_a, "imac", fr(0.1), F(2), [1, 1, 1]))
    net_b = net_from([[[1.0, 0.5], [1.2, 0.4]], [[0.2, 1.0]]])
    show("netB oracle ibc 0.05", oracle_max(net_b, "ibc", fr(0.05), fr(2.2), [1, 1, 1]))

    import random
    rng = random.Random(11)
    raw1 = [rng.random() for _ in range(16)]
    raw2 = [rng.random() for _ in range(16)]
    p1 = [x / sum(raw1) for x in raw1]
    p2 = [x / sum(raw2) for x in raw2]
    print("adt p1", repr(p1))
    print("adt p2", repr(p2))
    print("adt (3,1,4,1)", adt((3, 1, 4, 1), p1, p2))
    print("adt (4,2,4,1)", adt((4, 2, 4, 1), p1, p2))
