"""Random reduced-form parameter draws with a stateless (seed, index) contract."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelDims, ReducedFormParams


@dataclass(frozen=True)
class SamplerConfig:
    """How to draw reduced-form points.

    Sigma is built as L L' from a random lower-triangular L whose diagonal is
    |standard normal| * scale + diag_floor, which keeps every draw safely
    positive definite; B entries are standard normal * scale.
    """

    dims: ModelDims
    diag_floor: float = 0.1
    scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.diag_floor <= 0.0:
            raise ValueError("diag_floor must be positive")
        if self.scale <= 0.0:
            raise ValueError("scale must be positive")


def stream_key(seed: int, index: int) -> int:
    """Scalar generator key for draw `index` of stream `seed`.

    The key both seeds the generator and appears in reports, so any reported
    draw can be reproduced from the report alone.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    seq = np.random.SeedSequence(entropy=seed % 2**64, spawn_key=(index,))
    return int(seq.generate_state(1, np.uint64)[0])


def draw_reduced_form(cfg: SamplerConfig, index: int) -> ReducedFormParams:
    """Deterministic draw number `index` from the stream defined by cfg.seed."""
    rng = np.random.default_rng(stream_key(cfg.seed, index))
    n, m = cfg.dims.n, cfg.dims.m
    z = rng.standard_normal((n, n))
    low = np.tril(z, -1) * cfg.scale
    np.fill_diagonal(low, np.abs(np.diag(z)) * cfg.scale + cfg.diag_floor)
    sigma = low @ low.T
    sigma = (sigma + sigma.T) / 2.0
    b = rng.standard_normal((m, n)) * cfg.scale
    return ReducedFormParams(cfg.dims, b, sigma)
