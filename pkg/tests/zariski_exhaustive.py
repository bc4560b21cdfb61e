"""Exhaustive comparison of the Zariski kernel with a subset-search oracle.

Every configuration is permuted so that the pairs (self-intersection,
coefficient) are listed in non-decreasing order; since the decomposition
commutes with relabelling (tested separately), checking these
representatives covers every configuration.  The library kernel is
compiled with numba from its own source.  The oracle is independent: it
uses determinants by permutation expansion and tries every support.
"""

from __future__ import annotations

import itertools
import time

import numba
import numpy as np

from ratsurf.zariski import OK, build_kernel

KERNEL = build_kernel(numba.njit)

DIAG = (-1, -2, -3)
OFF = (0, 1, 2)
COEF = (0, 1, 2)


def _perm_tables(kmax: int):
    perms = np.zeros((kmax + 1, 120, 5), dtype=np.int64)
    signs = np.zeros((kmax + 1, 120), dtype=np.int64)
    counts = np.zeros(kmax + 1, dtype=np.int64)
    for k in range(1, kmax + 1):
        for t, p in enumerate(itertools.permutations(range(k))):
            inv = sum(1 for i in range(k) for j in range(i + 1, k) if p[i] > p[j])
            perms[k, t, :k] = p
            signs[k, t] = -1 if inv % 2 else 1
        counts[k] = t + 1
    return perms, signs, counts


PERMS, SIGNS, COUNTS = _perm_tables(5)


@numba.njit
def _pdet(a, k, perms, signs, counts):
    if k == 0:
        return 1
    total = 0
    for t in range(counts[k]):
        prod = signs[k, t]
        for i in range(k):
            prod *= a[i, perms[k, t, i]]
        total += prod
    return total


@numba.njit
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@numba.njit
def oracle_tables(G, perms, signs, counts, negdef, dets, cof):
    """Per support: negative definiteness, determinant and cofactor matrix of the block."""
    n = G.shape[0]
    idx = np.zeros(n, dtype=np.int64)
    blk = np.zeros((n, n), dtype=np.int64)
    sub = np.zeros((n, n), dtype=np.int64)
    for mask in range(1 << n):
        k = 0
        for i in range(n):
            if mask >> i & 1:
                idx[k] = i
                k += 1
        ok = True
        for m in range(1, k + 1):  # leading minors of -block
            for r in range(m):
                for c in range(m):
                    blk[r, c] = -G[idx[r], idx[c]]
            if _pdet(blk, m, perms, signs, counts) <= 0:
                ok = False
                break
        negdef[mask] = ok
        if not ok:
            continue
        for r in range(k):
            for c in range(k):
                blk[r, c] = G[idx[r], idx[c]]
        dets[mask] = _pdet(blk, k, perms, signs, counts)
        for r in range(k):
            for c in range(k):
                rr = 0
                for i in range(k):
                    if i == r:
                        continue
                    cc = 0
                    for j in range(k):
                        if j == c:
                            continue
                        sub[rr, cc] = blk[i, j]
                        cc += 1
                    rr += 1
                sign = 1 if (r + c) % 2 == 0 else -1
                cof[mask, r, c] = sign * _pdet(sub, k - 1, perms, signs, counts)


@numba.njit
def oracle(G, d, num, negdef, dets, cof):
    """Try every support; returns (found, den) with found 0 none, 1 unique, 2 several."""
    n = G.shape[0]
    found = 0
    best_den = 1
    cand = np.zeros(n, dtype=np.int64)
    idx = np.zeros(n, dtype=np.int64)
    gd = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            gd[i] += G[i, j] * d[j]
    for mask in range(1 << n):
        if not negdef[mask]:
            continue
        k = 0
        for i in range(n):
            if mask >> i & 1:
                idx[k] = i
                k += 1
        D = dets[mask]
        s = 1 if D > 0 else -1
        den = D * s
        for i in range(n):
            cand[i] = 0
        good = True
        for col in range(k):  # Cramer: expand the replaced column along cofactors
            v = 0
            for r in range(k):
                v += gd[idx[r]] * cof[mask, r, col]
            cand[idx[col]] = v * s
            if v * s < 0:
                good = False
        if not good:
            continue
        for i in range(n):
            gp = 0
            for j in range(n):
                gp += G[i, j] * (den * d[j] - cand[j])
            if gp < 0 or (mask >> i & 1 and gp != 0):
                good = False
        if not good:
            continue
        g = den
        for i in range(n):
            g = _gcd(g, cand[i])
        den //= g
        for i in range(n):
            cand[i] //= g
        if found == 0:
            found = 1
            best_den = den
            for i in range(n):
                num[i] = cand[i]
        else:
            same = den == best_den
            for i in range(n):
                if cand[i] != num[i]:
                    same = False
            if not same:
                return 2, best_den
    return found, best_den


@numba.njit
def sweep_diagonal(diag, coefs, perms, signs, counts):
    """All off-diagonal patterns for one sorted diagonal, against every listed coefficient vector."""
    n = diag.shape[0]
    total_off = 3 ** (n * (n - 1) // 2)
    G = np.zeros((n, n), dtype=np.int64)
    num_k = np.zeros(n, dtype=np.int64)
    num_o = np.zeros(n, dtype=np.int64)
    negdef = np.zeros(1 << n, dtype=np.bool_)
    dets = np.zeros(1 << n, dtype=np.int64)
    cof = np.zeros((1 << n, n, n), dtype=np.int64)
    cases = 0
    bad = 0
    first = -1
    for i in range(n):
        G[i, i] = diag[i]
    for code in range(total_off):
        c = code
        for i in range(n):
            for j in range(i):
                G[i, j] = c % 3
                G[j, i] = c % 3
                c //= 3
        oracle_tables(G, perms, signs, counts, negdef, dets, cof)
        for t in range(coefs.shape[0]):
            d = coefs[t]
            status, den_k, _ = KERNEL(G, d, num_k)
            found, den_o = oracle(G, d, num_o, negdef, dets, cof)
            cases += 1
            agree = True
            if found == 2:
                agree = False
            elif status == OK:
                if found != 1:
                    agree = False
                else:
                    for i in range(n):
                        if num_k[i] * den_o != num_o[i] * den_k:
                            agree = False
            elif found != 0:
                agree = False
            if not agree:
                bad += 1
                if first < 0:
                    first = code * coefs.shape[0] + t
    return cases, bad, first


def representatives(n: int):
    """Sorted diagonals, each with the coefficient vectors sorted inside blocks of equal diagonal."""
    for diag in itertools.combinations_with_replacement(DIAG, n):
        blocks = [sum(1 for x in diag if x == v) for v in DIAG]
        per_block = [list(itertools.combinations_with_replacement(COEF, b)) for b in blocks]
        coefs = [sum(parts, ()) for parts in itertools.product(*per_block)]
        coefs = [c for c in coefs if any(c)]
        yield np.array(diag, dtype=np.int64), np.array(coefs, dtype=np.int64).reshape(len(coefs), n)


def raw_count(n: int) -> int:
    return 3**n * 3 ** (n * (n - 1) // 2) * (3**n - 1)


def run(max_n: int = 5) -> dict:
    out = {}
    for n in range(1, max_n + 1):
        t0 = time.perf_counter()
        cases = bad = 0
        first = None
        for diag, coefs in representatives(n):
            c, b, f = sweep_diagonal(diag, coefs, PERMS, SIGNS, COUNTS)
            cases += c
            bad += b
            if b and first is None:
                first = (diag.tolist(), int(f))
        out[n] = {
            "representatives": int(cases),
            "configurations_covered": raw_count(n),
            "mismatches": int(bad),
            "first_mismatch": first,
            "seconds": round(time.perf_counter() - t0, 2),
        }
    return out


if __name__ == "__main__":
    for n, r in run().items():
        print(n, r)
