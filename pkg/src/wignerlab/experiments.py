"""Seeded batch experiments over random two-qubit states.

Samples are drawn in fixed-size chunks; chunk ``c`` uses the substream
``numpy.random.default_rng([seed, c])``, so the output depends only on
``(sampler, samples, seed, tol)`` and not on the number of workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import criteria, states
from .exceptions import ConsistencyError, InvalidInputError

__all__ = [
    "BATCH_COLUMNS",
    "BATCH_SCHEMA",
    "SAMPLERS",
    "BatchResult",
    "run_batch",
    "sample_states",
    "werner_detection",
]

BATCH_SCHEMA = "wignerlab-batch/1"
SAMPLERS = ("pure", "mixed", "separable", "werner-sweep")
VERDICT_COLUMNS = criteria.CRITERIA + ("ppt_oracle",)
BATCH_COLUMNS = (
    "id",
    "sampler",
    "werner_x",
    "min_w",
    "min_w_pt",
    "oracle_min_eig",
    "purity",
) + VERDICT_COLUMNS
CHUNK_SIZE = 1000
WERNER_GRID = 101


def _check_counts(samples, seed):
    if isinstance(samples, bool) or int(samples) != samples or samples < 1:
        raise InvalidInputError(f"samples must be a positive integer, got {samples!r}")
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < 2**64:
        raise InvalidInputError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(samples), int(seed)


def werner_grid(samples):
    """``samples`` evenly spaced points on ``[0, 1]`` (just ``[0]`` for one sample)."""
    return np.linspace(0.0, 1.0, samples) if samples > 1 else np.zeros(1)


def _werner_stack(xs):
    singlet = states.bell("psi_minus").mat
    xs = np.asarray(xs, dtype=float)[:, None, None]
    return xs * singlet + (1.0 - xs) * np.eye(4) / 4.0


def _draw_chunk(sampler, n, seed, chunk):
    rng = np.random.default_rng([seed, chunk])
    if sampler == "pure":
        return states.random_pure(rng, size=n)
    if sampler == "mixed":
        return states.random_mixed(rng, size=n)
    return states.random_separable(rng, size=n)


def sample_states(sampler, samples, seed=0, workers=1):
    """Return ``(rhos, werner_x)``; ``werner_x`` is NaN except for the sweep."""
    if sampler not in SAMPLERS:
        raise InvalidInputError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")
    samples, seed = _check_counts(samples, seed)
    if sampler == "werner-sweep":
        xs = werner_grid(samples)
        return _werner_stack(xs), xs
    sizes = [min(CHUNK_SIZE, samples - start) for start in range(0, samples, CHUNK_SIZE)]
    jobs = [(sampler, n, seed, c) for c, n in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda job: _draw_chunk(*job), jobs))
    else:
        chunks = [_draw_chunk(*job) for job in jobs]
    return np.concatenate(chunks), np.full(samples, np.nan)


def werner_detection(tol=criteria.DEFAULT_TOL, points=WERNER_GRID):
    """Per-criterion detection curves on an even Werner grid.

    Returns ``{"x": [...], <name>: [0/1 ...], "onset": {<name>: x or None}}``
    where a 1 marks an Entangled verdict and ``onset`` is the first such x.
    """
    xs = werner_grid(points)
    res = criteria.evaluate_batch(_werner_stack(xs), tol=tol)
    curves = {"x": xs.tolist()}
    onset = {}
    for name in VERDICT_COLUMNS:
        hit = res[name] == criteria.Decision.ENTANGLED.value
        curves[name] = hit.astype(int).tolist()
        onset[name] = float(xs[np.argmax(hit)]) if hit.any() else None
    curves["onset"] = onset
    return curves


@dataclass(frozen=True, eq=False)
class BatchResult:
    """Per-state columns (arrays keyed by :data:`BATCH_COLUMNS`) and a summary."""

    sampler: str
    seed: int
    tol: float
    columns: dict
    summary: dict

    def __len__(self):
        return len(self.columns["id"])

    def records(self):
        for i in range(len(self)):
            yield {name: _scalar(self.columns[name][i]) for name in BATCH_COLUMNS}


def _scalar(x):
    if isinstance(x, np.generic):
        return x.item()
    return x


def _summarize(res, tol):
    counts = {}
    for name in VERDICT_COLUMNS:
        values, n = np.unique(res[name], return_counts=True)
        counts[name] = {d.value: 0 for d in criteria.Decision}
        counts[name].update({str(v): int(k) for v, k in zip(values, n)})
    separable = res["ppt_oracle"] == criteria.Decision.SEPARABLE.value
    min_w_sep = float(res["min_w"][separable].min()) if separable.any() else None
    return {
        "verdict_counts": counts,
        "contradictions": int(res["contradiction"].sum()),
        "min_w_separable": min_w_sep,
        "negativity_bound": criteria.NEGATIVITY_BOUND,
        "werner_detection": werner_detection(tol),
    }


def run_batch(sampler, samples, seed=0, tol=criteria.DEFAULT_TOL, workers=1, abort=True):
    """Sample states, evaluate every criterion and the oracle, and summarize.

    With ``abort=True`` the first state on which a criterion contradicts the
    oracle raises :class:`ConsistencyError`; its ``state`` attribute holds the
    matrix in JSON state-spec form.
    """
    rhos, xs = sample_states(sampler, samples, seed, workers)
    res = criteria.evaluate_batch(rhos, tol=tol, validate=False)
    if abort and res["contradiction"].any():
        i = int(np.flatnonzero(res["contradiction"])[0])
        bad = [
            f"{name}={criteria.Decision(str(res[name][i]))}"
            for name in criteria.CRITERIA
            if criteria._contradicts(res[name][i], res["ppt_oracle"][i])
        ]
        err = ConsistencyError(
            f"sample {i} ({sampler}, seed {seed}): {', '.join(bad)} contradicts "
            f"ppt_oracle={criteria.Decision(str(res['ppt_oracle'][i]))}",
            bad,
        )
        err.state = states.state_to_spec(rhos[i])
        err.sample = i
        raise err
    n = len(rhos)
    columns = {
        "id": np.arange(n),
        "sampler": np.full(n, sampler),
        "werner_x": xs,
        "min_w": res["min_w"],
        "min_w_pt": res["min_w_pt"],
        "oracle_min_eig": res["oracle_min_eig"],
        "purity": res["purity"],
    }
    for name in VERDICT_COLUMNS:
        columns[name] = res[name]
    return BatchResult(sampler, int(seed), float(tol), columns, _summarize(res, tol))


def format_float(x):
    """Shortest round-tripping decimal, empty for NaN."""
    x = float(x)
    if math.isnan(x):
        return ""
    return repr(x)
