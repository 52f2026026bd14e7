"""Degree-proportional vertex sampling and convergence experiments.

A sample keeps m slots drawn i.i.d. with probabilities d_i / Vol; repeated
vertices stay distinct slots, and slot pairs link with probability equal to
the original edge weight (zero for copies of one vertex, since diagonals are
zero).  Experiments restrict each draw to its largest connected component,
record the coverage fraction, and flag rows with coverage below 0.9 instead
of dropping them.

Per-trial seeds derive from (seed, m, trial) through numpy's SeedSequence,
so trials are reproducible independently of execution order; tables are
assembled in canonical (m, trial) order even when computed concurrently.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import math

import numpy as np

from .errors import BadK, BadSize, Disconnected, NoGap, WeightsNotProbabilities, ZeroVolume
from .graph import WeightedGraph, default_vertex_ids
from .clustering import representatives, weighted_kmeans
from .generators import blow_up
from .spectral import spectral_decomposition

COVERAGE_FLAG = 0.9
DOMINANT_FLAG = 10.0


@dataclass(frozen=True)
class SampleDraw:
    """One sampled slot graph: original indices per slot plus the 0/1 graph."""

    slots: np.ndarray
    graph: WeightedGraph
    seed: int

    def __post_init__(self):
        slots = np.asarray(self.slots, dtype=np.intp).copy()
        slots.setflags(write=False)
        object.__setattr__(self, "slots", slots)


@dataclass(frozen=True)
class ConvergenceTable:
    """Rows of one experiment plus per-m medians and reference values."""

    mode: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    medians: tuple[dict, ...]
    reference: dict


def dominant_vertex_ratio(g: WeightedGraph) -> float:
    """max_i d_i / Vol times n; near 1 when no vertex dominates the volume."""
    if g.total_volume <= 0:
        raise ZeroVolume("diagnostic needs positive volume")
    return float(g.degrees.max() / g.total_volume * g.n)


def derive_trial_seed(seed: int, m: int, trial: int) -> int:
    """Deterministic per-trial child seed from (seed, m, trial)."""
    ss = np.random.SeedSequence([int(seed), int(m), int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def sample_subgraph(g: WeightedGraph, m: int, seed: int) -> SampleDraw:
    """Draw m vertex slots with degree-proportional probabilities and link
    slot pairs by Bernoulli trials with the original edge weights."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if (g.weights > 1.0).any():
        raise WeightsNotProbabilities("edge weights above 1 cannot be edge probabilities")
    if g.total_volume <= 0:
        raise ZeroVolume("cannot sample from a zero-volume graph")
    rng = np.random.Generator(np.random.PCG64(seed))
    probs = g.degrees / g.total_volume
    slots = rng.choice(g.n, size=m, replace=True, p=probs).astype(np.intp)
    uniforms = rng.random((m, m))
    pair_probs = g.weights[np.ix_(slots, slots)]
    upper = np.triu(uniforms < pair_probs, k=1)
    adj = (upper | upper.T).astype(float)
    return SampleDraw(slots=slots, graph=WeightedGraph(adj, default_vertex_ids(m)), seed=seed)


def _check_schedule(g: WeightedGraph, schedule, trials: int) -> list[int]:
    sched = [int(m) for m in schedule]
    if not sched:
        raise BadSize("schedule must be nonempty")
    if any(m < 2 for m in sched):
        raise BadSize("schedule values must be >= 2")
    if any(m > g.n for m in sched):
        raise BadSize("schedule values cannot exceed the vertex count")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise BadSize("schedule must be strictly increasing")
    if trials < 1:
        raise BadSize("trials must be >= 1")
    return sched


def _restricted_sample(g: WeightedGraph, m: int, child_seed: int):
    draw = sample_subgraph(g, m, child_seed)
    comp = draw.graph.largest_component()
    coverage = comp.size / m if m else 0.0
    return draw.graph.induced_subgraph(comp), coverage


def _run_tasks(tasks, fn, workers: int):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def spectral_convergence(g: WeightedGraph, schedule, trials: int, j: int, seed: int,
                         *, diagnostic_full: bool = False, workers: int = 1,
                         ) -> ConvergenceTable:
    """Top-j eigenvalue magnitudes of sampled subgraphs against the full graph."""
    if not g.is_connected():
        raise Disconnected("convergence experiments need a connected graph")
    sched = _check_schedule(g, schedule, trials)
    if j < 1 or j > min(sched) - 1:
        raise BadSize(f"j={j} outside [1, min(schedule)-1]")
    ref = spectral_decomposition(g)
    ref_mus = ref.mus[:j]

    def run(task):
        m, trial = task
        child = derive_trial_seed(seed, m, trial)
        if diagnostic_full and m == g.n:
            sub, coverage = g, 1.0
        else:
            sub, coverage = _restricted_sample(g, m, child)
        row = {"m": m, "trial": trial, "coverage": coverage,
               "flagged": int(coverage < COVERAGE_FLAG)}
        if sub.n > max(j, 1) and sub.total_volume > 0:
            mus = spectral_decomposition(sub).mus[:j]
            for i in range(j):
                row[f"mu_{i + 1}"] = float(mus[i])
                row[f"err_{i + 1}"] = float(abs(mus[i] - ref_mus[i]))
        else:
            for i in range(j):
                row[f"mu_{i + 1}"] = float("nan")
                row[f"err_{i + 1}"] = float("nan")
        return row

    tasks = [(m, t) for m in sched for t in range(trials)]
    rows = _run_tasks(tasks, run, workers)
    columns = ("m", "trial", *[f"mu_{i + 1}" for i in range(j)],
               *[f"err_{i + 1}" for i in range(j)], "coverage", "flagged")
    medians = []
    for m in sched:
        group = [r for r in rows if r["m"] == m]
        med = {"m": m, "trial": "median",
               "coverage": float(np.median([r["coverage"] for r in group])),
               "flagged": int(sum(r["flagged"] for r in group))}
        for i in range(j):
            mu_vals = [r[f"mu_{i + 1}"] for r in group if not math.isnan(r[f"mu_{i + 1}"])]
            err_vals = [r[f"err_{i + 1}"] for r in group if not math.isnan(r[f"err_{i + 1}"])]
            med[f"mu_{i + 1}"] = float(np.median(mu_vals)) if mu_vals else math.nan
            med[f"err_{i + 1}"] = float(np.median(err_vals)) if err_vals else math.nan
        medians.append(med)
    reference = {"n": g.n, "mus": [float(v) for v in ref_mus],
                 "dominant_vertex_ratio": dominant_vertex_ratio(g)}
    reference["dominant_flagged"] = int(reference["dominant_vertex_ratio"] > DOMINANT_FLAG)
    return ConvergenceTable("spectrum", columns, tuple(rows), tuple(medians), reference)


def subspace_convergence(g: WeightedGraph, factors, k: int) -> ConvergenceTable:
    """Distance of blown-up eigenvector subspaces from the base subspace.

    For each factor t the top k-1 eigenvectors of the blown-up graph are
    scaled by inverse square-root degrees, averaged over the t copies of each
    original vertex, orthonormalized in the degree-weighted inner product of
    the base graph, and compared through projection matrices in spectral norm.
    """
    if not g.is_connected():
        raise Disconnected("convergence experiments need a connected graph")
    if not 2 <= k <= g.n:
        raise BadK(f"k={k} outside [2, {g.n}]")
    fac = [int(t) for t in factors]
    if not fac or fac[0] != 1:
        raise BadSize("factors must start at 1")
    if any(b <= a for a, b in zip(fac, fac[1:])):
        raise BadSize("factors must be strictly increasing")
    dec = spectral_decomposition(g)
    if abs(dec.mus[k - 2]) - abs(dec.mus[k - 1]) < 1e-8:
        raise NoGap("no eigenvalue-magnitude gap between positions k-1 and k")
    sqrt_d = np.sqrt(g.degrees)
    base_proj = None
    rows = []
    for t in fac:
        gt = g if t == 1 else blow_up(g, t)
        dect = spectral_decomposition(gt)
        vecs = dect.vectors[:, : k - 1]
        transformed = vecs / np.sqrt(gt.degrees)[:, None]
        averaged = transformed.reshape(g.n, t, k - 1).mean(axis=1)
        basis, _ = np.linalg.qr(sqrt_d[:, None] * averaged)
        proj = basis @ basis.T
        if base_proj is None:
            base_proj = proj
        diff = proj - base_proj
        dist = float(np.abs(np.linalg.eigvalsh((diff + diff.T) / 2.0)).max())
        rows.append({"t": t, "distance": dist})
    reference = {"n": g.n, "k": k,
                 "gap": float(abs(dec.mus[k - 2]) - abs(dec.mus[k - 1])),
                 "dominant_vertex_ratio": dominant_vertex_ratio(g)}
    reference["dominant_flagged"] = int(reference["dominant_vertex_ratio"] > DOMINANT_FLAG)
    return ConvergenceTable("blowup", ("t", "distance"), tuple(rows), (), reference)


def k_variance_convergence(g: WeightedGraph, schedule, trials: int, k: int, seed: int,
                           *, restarts: int = 20, workers: int = 1) -> ConvergenceTable:
    """Clustering objective of sampled subgraphs against the full-graph value."""
    if not g.is_connected():
        raise Disconnected("convergence experiments need a connected graph")
    sched = _check_schedule(g, schedule, trials)
    if not 2 <= k <= min(sched):
        raise BadK(f"k={k} outside [2, min(schedule)]")
    dec = spectral_decomposition(g)
    reps = representatives(dec, g, k)
    _, ref_value = weighted_kmeans(reps, k, restarts=restarts, seed=seed)

    def run(task):
        m, trial = task
        child = derive_trial_seed(seed, m, trial)
        sub, coverage = _restricted_sample(g, m, child)
        row = {"m": m, "trial": trial, "coverage": coverage,
               "flagged": int(coverage < COVERAGE_FLAG)}
        if sub.n >= max(k, 2) and sub.total_volume > 0:
            sdec = spectral_decomposition(sub)
            sreps = representatives(sdec, sub, k)
            _, value = weighted_kmeans(sreps, k, restarts=restarts, seed=child)
            row["k_variance"] = float(value)
            row["error"] = float(abs(value - ref_value))
        else:
            row["k_variance"] = float("nan")
            row["error"] = float("nan")
        return row

    tasks = [(m, t) for m in sched for t in range(trials)]
    rows = _run_tasks(tasks, run, workers)
    columns = ("m", "trial", "k_variance", "error", "coverage", "flagged")
    medians = []
    for m in sched:
        group = [r for r in rows if r["m"] == m]
        kv_vals = [r["k_variance"] for r in group if not math.isnan(r["k_variance"])]
        err_vals = [r["error"] for r in group if not math.isnan(r["error"])]
        medians.append({
            "m": m, "trial": "median",
            "k_variance": float(np.median(kv_vals)) if kv_vals else math.nan,
            "error": float(np.median(err_vals)) if err_vals else math.nan,
            "coverage": float(np.median([r["coverage"] for r in group])),
            "flagged": int(sum(r["flagged"] for r in group)),
        })
    reference = {"n": g.n, "k": k, "k_variance": float(ref_value),
                 "dominant_vertex_ratio": dominant_vertex_ratio(g)}
    reference["dominant_flagged"] = int(reference["dominant_vertex_ratio"] > DOMINANT_FLAG)
    return ConvergenceTable("kvariance", columns, tuple(rows), tuple(medians), reference)
