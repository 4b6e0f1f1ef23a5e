"""Heavy-tailed step sampling via Mantegna's construction.

A step is u / |v|^(1/beta) with u ~ N(0, sigma_u^2) and v ~ N(0, 1), where
sigma_u is chosen so the steps approximate a symmetric stable law with
index beta.  beta = 1.5 is the default used by the scouting move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decode import X_MAX, X_MIN


def sigma_u(beta: float) -> float:
    """Scale of the numerator normal in Mantegna's sampler.

    sigma_u = { G(1+b) sin(pi b / 2) / [ G((1+b)/2) b 2^((b-1)/2) ] }^(1/b)
    """
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"beta must be in (1, 2], got {beta}")
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


@dataclass(frozen=True)
class LevyParams:
    beta: float = 1.5
    sigma_v: float = 1.0
    sigma_u: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma_u", sigma_u(self.beta))


def sample_levy(
    rng: np.random.Generator, params: LevyParams, size: int | None = None
) -> float | np.ndarray:
    """Draw heavy-tailed steps, symmetric about 0."""
    n = 1 if size is None else size
    u = rng.normal(0.0, params.sigma_u, n)
    v = rng.normal(0.0, params.sigma_v, n)
    zero = v == 0.0
    while zero.any():  # probability-zero guard
        v[zero] = rng.normal(0.0, params.sigma_v, int(zero.sum()))
        zero = v == 0.0
    steps = u / np.abs(v) ** (1.0 / params.beta)
    return float(steps[0]) if size is None else steps


def levy_scout_step(
    position: np.ndarray,
    step_a: float,
    rng: np.random.Generator,
    params: LevyParams,
) -> np.ndarray:
    """New position with an independent scaled step per gene, clamped to
    the decoding bounds."""
    position = np.asarray(position, dtype=float)
    steps = sample_levy(rng, params, size=position.size)
    return np.clip(position + step_a * steps, X_MIN, X_MAX)
