"""Numba kernels for the hot paths: packed GF(2) elimination, min-sum BP,
OSD, randomized distance trials, and the Monte Carlo shot loop.

All kernels operate on bit-packed uint64 arrays (little-endian within a
word: bit j of word w is column 64*w + j).  Randomness uses splitmix64
streams keyed by (seed, trial/shot index), so results are independent of
batching and thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

U64_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def _splitmix64(state):
    state = (state + uint64(0x9E3779B97F4A7C15)) & uint64(0xFFFFFFFFFFFFFFFF)
    z = state
    z = ((z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)) & uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)) & uint64(0xFFFFFFFFFFFFFFFF)
    return state, z ^ (z >> uint64(31))


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> uint64(1)) & uint64(0x5555555555555555))
    x = (x & uint64(0x3333333333333333)) + ((x >> uint64(2)) & uint64(0x3333333333333333))
    x = (x + (x >> uint64(4))) & uint64(0x0F0F0F0F0F0F0F0F)
    return (x * uint64(0x0101010101010101)) >> uint64(56)


@njit(cache=True)
def rank_packed(mat, n_cols):
    """Rank of a row-packed matrix via in-place elimination on a copy."""
    work = mat.copy()
    n_rows, n_words = work.shape
    rank = 0
    for col in range(n_cols):
        w = col >> 6
        bit = U64_ONE << uint64(col & 63)
        pivot = -1
        for r in range(rank, n_rows):
            if work[r, w] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(n_words):
                tmp = work[pivot, j]
                work[pivot, j] = work[rank, j]
                work[rank, j] = tmp
        for r in range(rank + 1, n_rows):
            if work[r, w] & bit:
                for j in range(n_words):
                    work[r, j] ^= work[rank, j]
        rank += 1
        if rank == n_rows:
            break
    return rank


@njit(cache=True)
def distance_trials(
    stack,        # (m0, n_words) packed rows spanning the relevant kernel
    n_cols,
    pair_rows,    # (k, n_words) packed logical partners (pairing test)
    n_trials,
    seed,
    best_in,      # current best weight (e.g. n_cols + 1)
    use_pairs,    # also scan XOR of row pairs of the reduced matrix
):
    """Random-information-set distance search.

    Each trial applies a random column permutation, row-reduces the
    stacked matrix, and scans the reduced rows (optionally row pairs) for
    low-weight vectors with nonzero logical pairing.  Returns
    (best_weight, best_vector_packed, trial_found).
    """
    m0, n_words = stack.shape
    k = pair_rows.shape[0]
    best = best_in
    best_vec = np.zeros(n_words, dtype=np.uint64)
    found_at = -1

    perm = np.empty(n_cols, dtype=np.int64)
    work = np.empty((m0, n_words), dtype=np.uint64)
    row_vec = np.empty(n_words, dtype=np.uint64)

    for trial in range(n_trials):
        state = uint64(seed) ^ (uint64(trial) * uint64(0x9E3779B97F4A7C15))
        state, z = _splitmix64(state)
        # Fisher-Yates permutation of columns.
        for i in range(n_cols):
            perm[i] = i
        for i in range(n_cols - 1, 0, -1):
            state, z = _splitmix64(state)
            j = int(z % uint64(i + 1))
            t = perm[i]
            perm[i] = perm[j]
            perm[j] = t
        # Build the column-permuted packed matrix.
        for r in range(m0):
            for j in range(n_words):
                work[r, j] = uint64(0)
        for r in range(m0):
            for c in range(n_cols):
                src = perm[c]
                w = src >> 6
                if (stack[r, w] >> uint64(src & 63)) & U64_ONE:
                    work[r, c >> 6] |= U64_ONE << uint64(c & 63)
        # Row reduce (forward elimination only).
        rank = 0
        for col in range(n_cols):
            w = col >> 6
            bit = U64_ONE << uint64(col & 63)
            pivot = -1
            for r in range(rank, m0):
                if work[r, w] & bit:
                    pivot = r
                    break
            if pivot < 0:
                continue
            if pivot != rank:
                for j in range(n_words):
                    tmp = work[pivot, j]
                    work[pivot, j] = work[rank, j]
                    work[rank, j] = tmp
            for r in range(m0):
                if r != rank and (work[r, w] & bit):
                    for j in range(n_words):
                        work[r, j] ^= work[rank, j]
            rank += 1
            if rank == m0:
                break
        # Scan rows (and optionally row pairs) for light logical vectors.
        for r in range(m0):
            wt = 0
            for j in range(n_words):
                wt += int(_popcount(work[r, j]))
            if wt == 0 or wt >= best:
                continue
            # Un-permute the row back to original column order.
            for j in range(n_words):
                row_vec[j] = uint64(0)
            for c in range(n_cols):
                if (work[r, c >> 6] >> uint64(c & 63)) & U64_ONE:
                    src = perm[c]
                    row_vec[src >> 6] |= U64_ONE << uint64(src & 63)
            nontrivial = False
            for lr in range(k):
                acc = uint64(0)
                for j in range(n_words):
                    acc ^= row_vec[j] & pair_rows[lr, j]
                if int(_popcount(acc)) & 1:
                    nontrivial = True
                    break
            if nontrivial:
                best = wt
                for j in range(n_words):
                    best_vec[j] = row_vec[j]
                found_at = trial
        if use_pairs:
            for r1 in range(m0):
                for r2 in range(r1 + 1, m0):
                    wt = 0
                    for j in range(n_words):
                        wt += int(_popcount(work[r1, j] ^ work[r2, j]))
                    if wt == 0 or wt >= best:
                        continue
                    for j in range(n_words):
                        row_vec[j] = uint64(0)
                    for c in range(n_cols):
                        if ((work[r1, c >> 6] ^ work[r2, c >> 6]) >> uint64(c & 63)) & U64_ONE:
                            src = perm[c]
                            row_vec[src >> 6] |= U64_ONE << uint64(src & 63)
                    nontrivial = False
                    for lr in range(k):
                        acc = uint64(0)
                        for j in range(n_words):
                            acc ^= row_vec[j] & pair_rows[lr, j]
                        if int(_popcount(acc)) & 1:
                            nontrivial = True
                            break
                    if nontrivial:
                        best = wt
                        for j in range(n_words):
                            best_vec[j] = row_vec[j]
                        found_at = trial
    return best, best_vec, found_at


# ── belief propagation (min-sum, parallel flooding) ──────────────────


@njit(cache=True)
def bp_min_sum(
    check_ptr,    # (m+1,) CSR offsets over checks
    edge_var,     # (E,) variable index of each edge, check-major order
    var_ptr,      # (n+1,) CSR offsets over variables
    var_edge,     # (E,) edge ids incident to each variable
    prior_llr,    # (n,) log((1-p)/p) per column
    syndrome,     # (m,) uint8
    alpha,
    max_iters,
    v2c,          # (E,) float64 scratch
    c2v,          # (E,) float64 scratch
    soft,         # (n,) float64 out
    hard,         # (n,) uint8 out
):
    """Scaled min-sum with parallel schedule; returns (converged, iters).

    Hard decisions use total LLR <= 0 (a tied belief counts as flipped).
    Convergence is H @ hard == syndrome, checked every iteration; the
    channel-only decision counts as iteration 0.
    """
    m = check_ptr.shape[0] - 1
    n = var_ptr.shape[0] - 1

    for v in range(n):
        soft[v] = prior_llr[v]
        hard[v] = 1 if soft[v] <= 0.0 else 0
    ok = True
    for c in range(m):
        par = uint64(0)
        for e in range(check_ptr[c], check_ptr[c + 1]):
            par ^= uint64(hard[edge_var[e]])
        if par != uint64(syndrome[c]):
            ok = False
            break
    if ok:
        return True, 0

    for e in range(var_ptr[n]):
        v2c[e] = 0.0
    for v in range(n):
        for i in range(var_ptr[v], var_ptr[v + 1]):
            v2c[var_edge[i]] = prior_llr[v]

    for it in range(1, max_iters + 1):
        # check -> variable
        for c in range(m):
            start, end = check_ptr[c], check_ptr[c + 1]
            sign = -1.0 if syndrome[c] else 1.0
            min1 = 1e300
            min2 = 1e300
            arg1 = -1
            for e in range(start, end):
                msg = v2c[e]
                mag = -msg if msg < 0.0 else msg
                if msg < 0.0:
                    sign = -sign
                if mag < min1:
                    min2 = min1
                    min1 = mag
                    arg1 = e
                elif mag < min2:
                    min2 = mag
            for e in range(start, end):
                msg = v2c[e]
                s = sign if msg >= 0.0 else -sign
                mag = min2 if e == arg1 else min1
                c2v[e] = alpha * s * mag
        # variable -> check, hard decision
        for v in range(n):
            total = prior_llr[v]
            for i in range(var_ptr[v], var_ptr[v + 1]):
                total += c2v[var_edge[i]]
            soft[v] = total
            hard[v] = 1 if total <= 0.0 else 0
            for i in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[i]
                v2c[e] = total - c2v[e]
        ok = True
        for c in range(m):
            par = uint64(0)
            for e in range(check_ptr[c], check_ptr[c + 1]):
                par ^= uint64(hard[edge_var[e]])
            if par != uint64(syndrome[c]):
                ok = False
                break
        if ok:
            return True, it
    return False, max_iters


# ── ordered statistics decoding ───────────────────────────────────────


@njit(cache=True)
def osd_solve(
    hcols,        # (n, m_words) packed columns of H
    m,            # detector (row) count
    order,        # (n,) column indices sorted most-likely-flipped first
    syndrome,     # (m,) uint8
    weights,      # (n,) per-column weight (prior log-likelihood penalty)
    lam,          # sweep width (0 disables the combination sweep)
    sweep_pairs,  # include weight-2 patterns over the lam columns
    known_rank,   # rank of H (elimination stops after this many pivots)
    e_out,        # (n,) uint8 out
):
    """Reliability-ordered elimination with optional combination sweep.

    Returns 1 on success, 0 when the syndrome is inconsistent with H.
    The base solution inverts the first rank(H) independent columns in
    reliability order; the sweep tries all weight-1 and weight-2 flips
    on the lam most reliable-to-flip rejected columns, keeping the
    lowest prior-weighted total.
    """
    n = order.shape[0]
    for v in range(n):
        e_out[v] = 0

    K = known_rank + 128
    if K > n:
        K = n
    while True:
        kw = (K + 63) >> 6
        work = np.zeros((m, kw), dtype=np.uint64)
        svec = np.empty(m, dtype=np.uint8)
        for r in range(m):
            svec[r] = syndrome[r]
        for j in range(K):
            src = order[j]
            wj = j >> 6
            bj = uint64(1) << uint64(j & 63)
            for wrd in range(hcols.shape[1]):
                bits = hcols[src, wrd]
                while bits:
                    low = bits & (~bits + uint64(1))
                    r = (wrd << 6) + int(_popcount(low - uint64(1)))
                    work[r, wj] |= bj
                    bits ^= low
        pivot_row = np.full(K, -1, dtype=np.int64)
        is_pivot_row = np.zeros(m, dtype=np.uint8)
        pivot_cols = np.empty(known_rank, dtype=np.int64)
        rank = 0
        for j in range(K):
            wj = j >> 6
            bj = uint64(1) << uint64(j & 63)
            piv = -1
            for r in range(m):
                if not is_pivot_row[r] and (work[r, wj] & bj):
                    piv = r
                    break
            if piv < 0:
                continue
            for r in range(m):
                if r != piv and (work[r, wj] & bj):
                    for w in range(kw):
                        work[r, w] ^= work[piv, w]
                    svec[r] ^= svec[piv]
            is_pivot_row[piv] = 1
            pivot_row[j] = piv
            pivot_cols[rank] = j
            rank += 1
            if rank == known_rank:
                break
        if rank == known_rank or K == n:
            break
        K = K * 2 + 64
        if K > n:
            K = n

    if rank < known_rank:
        return 0
    for r in range(m):
        if not is_pivot_row[r] and svec[r]:
            return 0

    # Base solution and its weight.
    base_w = 0.0
    for i in range(known_rank):
        j = pivot_cols[i]
        if svec[pivot_row[j]]:
            base_w += weights[order[j]]

    # Sweep columns: first lam rejected columns within the eliminated block.
    sweep = np.empty(lam, dtype=np.int64)
    n_sweep = 0
    for j in range(K):
        if n_sweep == lam:
            break
        if pivot_row[j] < 0:
            sweep[n_sweep] = j
            n_sweep += 1

    best_w = base_w
    best_s1 = -1
    best_s2 = -1
    for i1 in range(n_sweep):
        j1 = sweep[i1]
        w1 = weights[order[j1]]
        # weight-1 pattern
        cand = w1
        for i in range(known_rank):
            j = pivot_cols[i]
            pr = pivot_row[j]
            bit = uint64(svec[pr]) ^ ((work[pr, j1 >> 6] >> uint64(j1 & 63)) & uint64(1))
            if bit:
                cand += weights[order[j]]
        if cand < best_w - 1e-12:
            best_w = cand
            best_s1 = j1
            best_s2 = -1
        if not sweep_pairs:
            continue
        for i2 in range(i1 + 1, n_sweep):
            j2 = sweep[i2]
            cand = w1 + weights[order[j2]]
            for i in range(known_rank):
                j = pivot_cols[i]
                pr = pivot_row[j]
                bit = (
                    uint64(svec[pr])
                    ^ ((work[pr, j1 >> 6] >> uint64(j1 & 63)) & uint64(1))
                    ^ ((work[pr, j2 >> 6] >> uint64(j2 & 63)) & uint64(1))
                )
                if bit:
                    cand += weights[order[j]]
            if cand < best_w - 1e-12:
                best_w = cand
                best_s1 = j1
                best_s2 = j2

    for i in range(known_rank):
        j = pivot_cols[i]
        pr = pivot_row[j]
        bit = uint64(svec[pr])
        if best_s1 >= 0:
            bit ^= (work[pr, best_s1 >> 6] >> uint64(best_s1 & 63)) & uint64(1)
        if best_s2 >= 0:
            bit ^= (work[pr, best_s2 >> 6] >> uint64(best_s2 & 63)) & uint64(1)
        if bit:
            e_out[order[j]] = 1
    if best_s1 >= 0:
        e_out[order[best_s1]] = 1
    if best_s2 >= 0:
        e_out[order[best_s2]] = 1
    return 1


# ── Monte Carlo memory-experiment shot loop ───────────────────────────


@njit(cache=True)
def run_shots(
    det_cols,      # (ncols, m_words) packed detector columns
    act_cols,      # (ncols,) packed logical actions (k <= 64)
    thresholds,    # (ncols,) uint64 sampling thresholds prior * 2^64
    check_ptr,
    edge_var,
    var_ptr,
    var_edge,
    prior_llr,
    alpha,
    max_iters,
    lam,
    sweep_pairs,
    rank,
    seed,
    shot_start,
    shot_count,
):
    """Sample-decode-compare loop; returns (fails, decoded, bp_failures).

    Shot i draws its own splitmix64 stream keyed by (seed, shot_start+i),
    so counts are reproducible for any chunking or thread layout.
    """
    ncols, m_words = det_cols.shape
    m = check_ptr.shape[0] - 1
    n_edges = edge_var.shape[0]
    v2c = np.empty(n_edges, dtype=np.float64)
    c2v = np.empty(n_edges, dtype=np.float64)
    soft = np.empty(ncols, dtype=np.float64)
    hard = np.empty(ncols, dtype=np.uint8)
    e_osd = np.empty(ncols, dtype=np.uint8)
    syn_packed = np.empty(m_words, dtype=np.uint64)
    syndrome = np.empty(m, dtype=np.uint8)
    faults = np.empty(ncols, dtype=np.int64)

    fails = 0
    decoded = 0
    bp_failures = 0
    for i in range(shot_count):
        shot = uint64(seed) ^ (uint64(shot_start + i) * uint64(0xD1342543DE82EF95))
        state = shot
        n_f = 0
        for c in range(ncols):
            state, z = _splitmix64(state)
            if z < thresholds[c]:
                faults[n_f] = c
                n_f += 1
        if n_f == 0:
            continue
        for w in range(m_words):
            syn_packed[w] = uint64(0)
        truth = uint64(0)
        for fi in range(n_f):
            c = faults[fi]
            for w in range(m_words):
                syn_packed[w] ^= det_cols[c, w]
            truth ^= act_cols[c]
        nonzero = False
        for w in range(m_words):
            if syn_packed[w]:
                nonzero = True
                break
        if not nonzero:
            if truth != uint64(0):
                fails += 1
            continue
        for r in range(m):
            syndrome[r] = (syn_packed[r >> 6] >> uint64(r & 63)) & uint64(1)
        decoded += 1
        converged, _ = bp_min_sum(
            check_ptr, edge_var, var_ptr, var_edge, prior_llr, syndrome,
            alpha, max_iters, v2c, c2v, soft, hard,
        )
        if converged:
            e = hard
        else:
            bp_failures += 1
            order = np.argsort(soft, kind="mergesort").astype(np.int64)
            ok = osd_solve(
                det_cols, m, order, syndrome, prior_llr, lam, sweep_pairs, rank, e_osd
            )
            if not ok:
                # Inconsistent syndrome cannot occur for sampled faults.
                fails += 1
                continue
            e = e_osd
        predicted = uint64(0)
        for c in range(ncols):
            if e[c]:
                predicted ^= act_cols[c]
        if predicted != truth:
            fails += 1
    return fails, decoded, bp_failures
