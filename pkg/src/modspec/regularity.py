"""Discrepancy machinery: cut norms, mixing bounds, volume-regularity alpha.

Exhaustive maximizations enumerate subsets through bit tables and are hard
capped; larger instances fall back to seeded random subset pairs refined by
greedy single-element flips.  Witnesses are reported with deterministic
lexicographic tie-breaks so repeated runs agree bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoSeparation, TooLarge, ZeroVolume
from .graph import WeightedGraph, vertex_subset
from .clustering import Partition, k_variance, representatives
from .spectral import SpectralDecomposition

MIXING_EXACT_LIMIT = 12
ENUM_LIMIT = 24
FLIP_CAP = 1000
_CHUNK = 1 << 22  # max float64 cells materialized at once by enumerations


def _bit_table(n: int) -> np.ndarray:
    """All 2^n inclusion vectors as a (2^n, n) float array, mask order."""
    masks = np.arange(1 << n, dtype=np.uint32)
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def mixing_discrepancy(g: WeightedGraph, left, right) -> float:
    """|cut weight minus product of volumes| for a volume-normalized graph."""
    li = vertex_subset(left, g.n)
    ri = vertex_subset(right, g.n)
    cut = g.weighted_cut(li, ri)
    vl = float(g.degrees[li].sum()) if li.size else 0.0
    vr = float(g.degrees[ri].sum()) if ri.size else 0.0
    return abs(cut - vl * vr)


def verify_mixing(g: WeightedGraph, *, samples: int | None = None,
                  seed: int | None = None) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Maximum of discrepancy / sqrt(volume product) over nonempty subset pairs.

    Exhaustive over all pairs when ``samples`` is None (needs n <= 12), else
    over ``samples`` seeded random pairs.  The maximum is a lower bound for
    the spectral norm of the normalized modularity matrix; exceeding it
    signals an implementation bug, which tests assert.
    """
    d = g.degrees
    w = g.weights
    n = g.n
    if samples is None:
        if n > MIXING_EXACT_LIMIT:
            raise TooLarge(f"n={n} exceeds exhaustive limit {MIXING_EXACT_LIMIT}")
        bits = _bit_table(n)[1:]
        vols = bits @ d
        cross = bits @ w
        best = -1.0
        best_pair = (0, 0)
        rows_per = max(1, _CHUNK // max(bits.shape[0], 1))
        for start in range(0, bits.shape[0], rows_per):
            stop = min(start + rows_per, bits.shape[0])
            wxy = cross[start:stop] @ bits.T
            prod = np.outer(vols[start:stop], vols)
            with np.errstate(invalid="ignore", divide="ignore"):
                ratio = np.abs(wxy - prod) / np.sqrt(prod)
            ratio[prod <= 0] = 0.0
            flat = int(np.argmax(ratio))
            val = float(ratio.flat[flat])
            if val > best:
                best = val
                best_pair = (start + flat // ratio.shape[1], flat % ratio.shape[1])
        xi, yi = best_pair
        witness = (np.flatnonzero(bits[xi]), np.flatnonzero(bits[yi]))
        return best, witness
    if samples < 1 or seed is None:
        raise ValueError("sampled mode needs samples >= 1 and a seed")
    rng = np.random.Generator(np.random.PCG64(seed))
    bx = rng.random((samples, n)) < 0.5
    by = rng.random((samples, n)) < 0.5
    for bits in (bx, by):
        empty = np.flatnonzero(~bits.any(axis=1))
        while empty.size:
            bits[empty] = rng.random((empty.size, n)) < 0.5
            empty = empty[~bits[empty].any(axis=1)]
    fx = bx.astype(float)
    fy = by.astype(float)
    wxy = np.einsum("ta,ab,tb->t", fx, w, fy)
    prod = (fx @ d) * (fy @ d)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.abs(wxy - prod) / np.sqrt(prod)
    ratio[prod <= 0] = 0.0
    t = int(np.argmax(ratio))
    return float(ratio[t]), (np.flatnonzero(bx[t]), np.flatnonzero(by[t]))


def _row_subset_sums(a: np.ndarray) -> np.ndarray:
    """(2^m, n) array whose row for mask R holds the column sums over R."""
    m, n = a.shape
    out = np.zeros((1 << m, n))
    for r in range(m):
        block = 1 << r
        out[block:2 * block] = out[:block] + a[r]
    return out


def cut_norm_exact(a) -> tuple[float, np.ndarray, np.ndarray]:
    """Exact cut norm with a maximizing row/column subset pair.

    Enumerates row masks by subset-sum doubling, then extends each block of
    row masks over column masks the same way.  Ties go to the smallest
    (row mask, column mask) pair in that order.
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise ValueError("need a 2-d matrix")
    m, n = mat.shape
    if m + n > ENUM_LIMIT:
        raise TooLarge(f"m+n={m + n} exceeds enumeration limit {ENUM_LIMIT}")
    rows = _row_subset_sums(mat)
    best = -1.0
    best_pair = (0, 0)
    rows_per = max(1, _CHUNK >> n)
    for start in range(0, 1 << m, rows_per):
        stop = min(start + rows_per, 1 << m)
        block = np.zeros((stop - start, 1 << n))
        for c in range(n):
            width = 1 << c
            block[:, width:2 * width] = block[:, :width] + rows[start:stop, c:c + 1]
        mags = np.abs(block)
        flat = int(np.argmax(mags))
        val = float(mags.flat[flat])
        if val > best:
            best = val
            best_pair = (start + flat // (1 << n), flat % (1 << n))
    rmask, cmask = best_pair
    rsel = np.flatnonzero([(rmask >> i) & 1 for i in range(m)]).astype(np.intp)
    csel = np.flatnonzero([(cmask >> j) & 1 for j in range(n)]).astype(np.intp)
    return best, rsel, csel


def cut_norm_exact_bilinear(a) -> float:
    """Cut norm by maximizing |x^T A y| over 0/1 vectors; value only.

    Independent of :func:`cut_norm_exact`: builds the inclusion-vector tables
    and goes through two matrix products instead of subset-sum doubling.
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise ValueError("need a 2-d matrix")
    m, n = mat.shape
    if m + n > ENUM_LIMIT:
        raise TooLarge(f"m+n={m + n} exceeds enumeration limit {ENUM_LIMIT}")
    bx = _bit_table(m)
    by = _bit_table(n)
    left = bx @ mat
    best = 0.0
    rows_per = max(1, _CHUNK >> n)
    for start in range(0, 1 << m, rows_per):
        stop = min(start + rows_per, 1 << m)
        vals = np.abs(left[start:stop] @ by.T)
        best = max(best, float(vals.max()))
    return best


def cut_norm_bound(a) -> float:
    """sqrt(m n) times the largest singular value, an upper cut-norm bound."""
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise ValueError("need a 2-d matrix")
    m, n = mat.shape
    if m == 0 or n == 0 or not mat.any():
        return 0.0
    gram = mat.T @ mat
    top = float(np.linalg.eigvalsh((gram + gram.T) / 2.0)[-1])
    return float(np.sqrt(m * n) * np.sqrt(max(top, 0.0)))


def _pair_discrepancy(wab, da, db, rho, xbits, ybits) -> float:
    cut = float(xbits @ wab @ ybits)
    return abs(cut - rho * float(xbits @ da) * float(ybits @ db))


def _local_search(wab, da, db, rho, xbits, ybits) -> tuple[float, np.ndarray, np.ndarray]:
    """Greedy single-element flips, best improvement first, bounded flip count."""
    x = xbits.astype(float).copy()
    y = ybits.astype(float).copy()
    current = _pair_discrepancy(wab, da, db, rho, x, y)
    flips = 0
    while flips < FLIP_CAP:
        best_gain = 0.0
        best_move = None
        row_cut = float(x @ wab @ y)
        vol_x = float(x @ da)
        vol_y = float(y @ db)
        for i in range(da.size):
            sign = 1.0 - 2.0 * x[i]
            cand = abs(row_cut + sign * float(wab[i] @ y)
                       - rho * (vol_x + sign * da[i]) * vol_y)
            if cand - current > best_gain + 1e-15:
                best_gain = cand - current
                best_move = ("x", i, cand)
        for j in range(db.size):
            sign = 1.0 - 2.0 * y[j]
            cand = abs(row_cut + sign * float(x @ wab[:, j])
                       - rho * vol_x * (vol_y + sign * db[j]))
            if cand - current > best_gain + 1e-15:
                best_gain = cand - current
                best_move = ("y", j, cand)
        if best_move is None:
            break
        side, pos, cand = best_move
        if side == "x":
            x[pos] = 1.0 - x[pos]
        else:
            y[pos] = 1.0 - y[pos]
        current = cand
        flips += 1
    return current, x > 0.5, y > 0.5


def volume_regularity_alpha(g: WeightedGraph, cluster_a, cluster_b, *,
                            samples: int | None = None, seed: int | None = None,
                            ) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Largest normalized discrepancy over subset pairs of two clusters.

    The two clusters must be disjoint, or identical for the within-cluster
    variant; the normalizer is sqrt of the volume product between clusters
    and the single cluster volume within one.  Exact mode enumerates all
    subset pairs (|A| + |B| <= 24); sampled mode scans seeded random pairs
    and greedily refines each new running best, which keeps the result
    monotone in the sample count for a fixed seed.
    """
    ai = vertex_subset(cluster_a, g.n)
    bi = vertex_subset(cluster_b, g.n)
    if ai.size == 0 or bi.size == 0:
        raise ZeroVolume("clusters must be nonempty")
    same = ai.size == bi.size and np.array_equal(ai, bi)
    if not same and np.intersect1d(ai, bi).size:
        raise ValueError("clusters must be disjoint or identical")
    vol_a = float(g.degrees[ai].sum())
    vol_b = float(g.degrees[bi].sum())
    if vol_a <= 0 or vol_b <= 0:
        raise ZeroVolume("clusters must have positive volume")
    rho = g.relative_density(ai, bi)
    denom = vol_a if same else float(np.sqrt(vol_a * vol_b))
    wab = g.weights[np.ix_(ai, bi)]
    da = g.degrees[ai]
    db = g.degrees[bi]
    if samples is None:
        if ai.size + bi.size > ENUM_LIMIT:
            raise TooLarge(f"|A|+|B|={ai.size + bi.size} exceeds limit {ENUM_LIMIT}")
        bits_a = _bit_table(ai.size)
        bits_b = _bit_table(bi.size)
        vols_x = bits_a @ da
        vols_y = bits_b @ db
        cross = bits_a @ wab
        best = -1.0
        best_pair = (0, 0)
        rows_per = max(1, _CHUNK >> bi.size)
        for start in range(0, bits_a.shape[0], rows_per):
            stop = min(start + rows_per, bits_a.shape[0])
            cut = cross[start:stop] @ bits_b.T
            disc = np.abs(cut - rho * np.outer(vols_x[start:stop], vols_y))
            flat = int(np.argmax(disc))
            val = float(disc.flat[flat])
            if val > best:
                best = val
                best_pair = (start + flat // disc.shape[1], flat % disc.shape[1])
        xm, ym = best_pair
        wx = ai[np.flatnonzero(bits_a[xm])]
        wy = bi[np.flatnonzero(bits_b[ym])]
        return best / denom, (wx, wy)
    if samples < 1 or seed is None:
        raise ValueError("sampled mode needs samples >= 1 and a seed")
    rng = np.random.Generator(np.random.PCG64(seed))
    bx = rng.random((samples, ai.size)) < 0.5
    by = rng.random((samples, bi.size)) < 0.5
    discs = np.abs(np.einsum("ta,ab,tb->t", bx.astype(float), wab, by.astype(float))
                   - rho * (bx @ da) * (by @ db))
    best = 0.0
    best_x = np.zeros(ai.size, dtype=bool)
    best_y = np.zeros(bi.size, dtype=bool)
    running = -1.0
    for t in range(samples):
        if discs[t] > running:
            running = float(discs[t])
            refined, rx, ry = _local_search(wab, da, db, rho, bx[t], by[t])
            if refined > best:
                best = refined
                best_x, best_y = rx, ry
    return best / denom, (ai[np.flatnonzero(best_x)], bi[np.flatnonzero(best_y)])


@dataclass(frozen=True)
class PairRegularity:
    """Discrepancy summary for one ordered cluster pair (a <= b)."""

    a: int
    b: int
    rho: float
    alpha: float | None
    method: str
    witness_x: np.ndarray | None
    witness_y: np.ndarray | None
    vol_a: float
    vol_b: float
    ratio_to_bound: float | None


@dataclass(frozen=True)
class RegularityReport:
    """Per-pair alphas plus the spectral bound ingredients for one partition."""

    k: int
    s: float
    eps: float
    bound: float
    min_size_ratio: float
    pairs: tuple[PairRegularity, ...]


def regularity_certificate(g: WeightedGraph, dec: SpectralDecomposition,
                           p: Partition, k: int, *, exact_limit: int = ENUM_LIMIT,
                           samples: int = 2000, seed: int = 0) -> RegularityReport:
    """Measure alpha for every cluster pair and report the bound's ingredients.

    The bound sqrt(2 k) * s + eps uses s from the clustering objective of the
    supplied partition on the eigenvector embedding and eps equal to the k-th
    largest eigenvalue magnitude.  Constants from the underlying theory are
    reported as measured ratios, never asserted.
    """
    if p.k != k:
        raise ValueError("partition cluster count must equal k")
    if p.n != g.n:
        raise ValueError("partition does not match the graph")
    sizes = p.sizes()
    if (sizes == 0).any():
        raise ZeroVolume("every cluster must be nonempty")
    if k == 1:
        s = 0.0
    else:
        reps = representatives(dec, g, k)
        s = float(np.sqrt(max(k_variance(reps.points, reps.weights, p), 0.0)))
    eps = float(abs(dec.mus[k - 1])) if k - 1 < dec.n else 0.0
    bound = float(np.sqrt(2 * k) * s + eps)
    min_size_ratio = float(sizes.min() / g.n)
    pairs = []
    for a in range(k):
        for b in range(a, k):
            ia = p.members(a)
            ib = p.members(b)
            budget = ia.size + ib.size if a != b else 2 * ia.size
            if budget <= min(exact_limit, ENUM_LIMIT):
                alpha, (wx, wy) = volume_regularity_alpha(g, ia, ib)
                method = "exact"
            elif samples > 0:
                child = int(np.random.SeedSequence([seed, a, b]).generate_state(1, np.uint64)[0])
                alpha, (wx, wy) = volume_regularity_alpha(
                    g, ia, ib, samples=samples, seed=child)
                method = "sampled"
            else:
                alpha, wx, wy, method = None, None, None, "skipped"
            pairs.append(PairRegularity(
                a=a, b=b,
                rho=g.relative_density(ia, ib),
                alpha=alpha,
                method=method,
                witness_x=wx,
                witness_y=wy,
                vol_a=float(g.degrees[ia].sum()),
                vol_b=float(g.degrees[ib].sum()),
                ratio_to_bound=(alpha / bound) if alpha is not None and bound > 0 else None,
            ))
    return RegularityReport(k=k, s=s, eps=eps, bound=bound,
                            min_size_ratio=min_size_ratio, pairs=tuple(pairs))


def sin_theta_check(a_mat, b_mat, a_interval, b_interval) -> tuple[float, float]:
    """Both sides of the projection perturbation bound for two symmetric matrices.

    Eigenvalues of the first matrix inside ``a_interval`` and of the second
    inside ``b_interval`` (closed intervals) designate the two spectral
    projections; the separation is the smallest distance between the selected
    eigenvalue sets.  Returns (left side, right side); the left side never
    exceeds the right beyond roundoff.
    """
    a = np.asarray(a_mat, dtype=float)
    b = np.asarray(b_mat, dtype=float)
    for mat in (a, b):
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrices must be square")
        if not np.allclose(mat, mat.T, atol=1e-12, rtol=0.0):
            raise ValueError("matrices must be symmetric")
    if a.shape != b.shape:
        raise ValueError("matrices must share a shape")
    va, ua = np.linalg.eigh((a + a.T) / 2.0)
    vb, ub = np.linalg.eigh((b + b.T) / 2.0)
    lo_a, hi_a = float(a_interval[0]), float(a_interval[1])
    lo_b, hi_b = float(b_interval[0]), float(b_interval[1])
    sel_a = (va >= lo_a) & (va <= hi_a)
    sel_b = (vb >= lo_b) & (vb <= hi_b)
    if not sel_a.any() or not sel_b.any():
        raise NoSeparation("an eigenvalue selection is empty")
    delta = float(np.abs(va[sel_a][:, None] - vb[sel_b][None, :]).min())
    if delta <= 0.0:
        raise NoSeparation("selected eigenvalue sets are not separated")
    pa = ua[:, sel_a] @ ua[:, sel_a].T
    pb = ub[:, sel_b] @ ub[:, sel_b].T
    lhs = float(np.linalg.norm(pa @ pb, "fro"))
    rhs = float(np.linalg.norm(pa @ (a - b) @ pb, "fro") / delta)
    return lhs, rhs
