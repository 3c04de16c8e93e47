"""Pure-numpy kernel: all point pairs within a wrapped l-infinity cutoff.

Sort-and-sweep on coordinate 0 produces candidates, the remaining coordinates
filter them.  The per-pair arithmetic (abs diff, b - diff, min, running max)
matches the compiled kernel operation for operation, so both backends return
bit-identical distances.
"""

import numpy as np

_WINDOW_PAD = 1e-9  # widens the sweep window so prefilter rounding never drops a pair


def wrapped_edge_list(points, box, cutoff=1.0):
    """Return (i, j, dist) arrays for pairs with wrapped l-inf distance <= cutoff, i < j."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n < 2:
        empty_i = np.zeros(0, dtype=np.int64)
        return empty_i, empty_i.copy(), np.zeros(0, dtype=np.float64)

    order = np.argsort(pts[:, 0], kind="stable").astype(np.int64)
    s = pts[order, 0]
    wrap_m = int(np.searchsorted(s, cutoff + _WINDOW_PAD, side="right"))
    aug = np.concatenate([s, s[:wrap_m] + box])
    his = np.searchsorted(aug, s + (cutoff + _WINDOW_PAD), side="right")
    starts = np.arange(1, n + 1, dtype=np.int64)
    counts = np.maximum(his - starts, 0)

    out_i, out_j, out_d = [], [], []
    # chunk the candidate expansion to bound memory
    target = 2_000_000
    p0 = 0
    while p0 < n:
        csum = np.cumsum(counts[p0:])
        p1 = p0 + int(np.searchsorted(csum, target, side="left")) + 1
        p1 = min(p1, n)
        block = slice(p0, p1)
        cnt = counts[block]
        total = int(cnt.sum())
        if total:
            p_idx = np.repeat(np.arange(p0, p1, dtype=np.int64), cnt)
            offs = np.arange(total, dtype=np.int64) - np.repeat(
                np.cumsum(cnt) - cnt, cnt)
            q_aug = starts[p_idx] + offs
            q_idx = np.where(q_aug < n, q_aug, q_aug - n)
            ii = order[p_idx]
            jj = order[q_idx]
            run = np.zeros(total, dtype=np.float64)
            for c in range(pts.shape[1]):
                ad = np.abs(pts[ii, c] - pts[jj, c])
                wd = np.minimum(ad, box - ad)
                keep = wd <= cutoff
                if not keep.all():
                    ii, jj, run, wd = ii[keep], jj[keep], run[keep], wd[keep]
                run = np.maximum(run, wd)
            if ii.size:
                lo = np.minimum(ii, jj)
                hi = np.maximum(ii, jj)
                out_i.append(lo)
                out_j.append(hi)
                out_d.append(run)
        p0 = p1

    if not out_i:
        empty_i = np.zeros(0, dtype=np.int64)
        return empty_i, empty_i.copy(), np.zeros(0, dtype=np.float64)
    return np.concatenate(out_i), np.concatenate(out_j), np.concatenate(out_d)
