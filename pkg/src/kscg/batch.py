"""Reproducible channel batches.

Trials are drawn in fixed-size chunks; chunk ``c`` of purpose ``p`` at user
count ``N`` always uses the stream ``SeedSequence(seed, spawn_key=(p, N, c))``.
The drawn values therefore depend only on (seed, purpose, N, trials) and not
on how many workers produce the chunks.  Full and K-SCG runs at the same seed
see the same channels.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import fading
from .power_control import reduce_candidates

CHUNK = 512
PURPOSES = {"solve": 1, "estimate": 2, "validate": 3}


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("KSCG_JOBS", "1")))
    except ValueError:
        return 1


def chunk_rng(seed: int, purpose: str, n: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(PURPOSES[purpose], n, chunk))
    return np.random.Generator(np.random.PCG64(ss))


def draw_channels(stsb, stpb, n: int, trials: int, rng: np.random.Generator):
    h = fading.sample(stsb, rng, (trials, n))
    g = fading.sample(stpb, rng, (trials, n))
    return h, g


@dataclass
class ChannelBatch:
    """Candidate users (non-dominated eligible users) for every trial."""

    h: np.ndarray
    g: np.ndarray
    n: int
    k: int

    @property
    def trials(self) -> int:
        return self.h.shape[0]


def _pad(a: np.ndarray, width: int, fill: float) -> np.ndarray:
    if a.shape[1] == width:
        return a
    out = np.full((a.shape[0], width), fill)
    out[:, : a.shape[1]] = a
    return out


def draw_batch(scenario, trials: int, seed: int, purpose: str = "estimate",
               jobs: int | None = None) -> ChannelBatch:
    if trials < 1:
        raise ValueError("a batch needs at least one trial")
    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    n, k = scenario.n, scenario.k
    starts = list(range(0, trials, CHUNK))

    def work(ci):
        size = min(CHUNK, trials - starts[ci])
        h, g = draw_channels(scenario.stsb, scenario.stpb, n, size,
                             chunk_rng(seed, purpose, n, ci))
        return reduce_candidates(h, g, k)

    if jobs == 1:
        parts = [work(ci) for ci in range(len(starts))]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(work, range(len(starts))))
    width = max(p[0].shape[1] for p in parts)
    hr = np.concatenate([_pad(p[0], width, 0.0) for p in parts])
    gr = np.concatenate([_pad(p[1], width, 1.0) for p in parts])
    return ChannelBatch(hr, gr, n, k)
