"""Bayesian model selection over partition-induced generative models.

Each partition of the 2^i substrings defines a model in which all
substrings of a block share probability mass, with a Jeffreys (Dirichlet
with all concentrations 1/2) prior on the block-mass simplex. The marginal
likelihood integrates out the block masses in closed form; posteriors over
a model set follow from Bayes' rule with a flat model prior. The coupled
frequency bound gives a cheap per-level pass/fail when full enumeration is
out of reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitstream import BitSequence
from .blockstats import BlockCounts, count_blocks, max_borel_level
from .borel import borel_deviations
from .errors import NumericError
from .partitions import PartitionModel
from .specialfn import log_gamma, polygamma1

_LN2 = math.log(2.0)
_LG_HALF = log_gamma(0.5)

BOUND_MAX_LEVEL = 8


def log_marginal_blocks(m: Sequence[float], s: Sequence[float], total: float) -> float:
    """ln P(data | model) from per-block count sums m_k and block sizes s_k.

    Accepts non-integer m_k so structural identities can be checked at
    exactly symmetric (fractional) occupation.
    """
    k = len(m)
    if len(s) != k:
        raise ValueError("block counts and sizes differ in length")
    out = log_gamma(0.5 * k) - k * _LG_HALF - log_gamma(total + 0.5 * k)
    for mk, sk in zip(m, s):
        out += log_gamma(mk + 0.5) - mk * math.log(sk)
    return out


def log_marginal(counts: BlockCounts, model: PartitionModel) -> float:
    """ln P(data | model), exact, in nats."""
    if model.level != counts.level:
        raise ValueError(
            f"model level {model.level} does not match counts level {counts.level}"
        )
    m = np.bincount(model.rgs, weights=counts.counts, minlength=model.num_blocks)
    return log_marginal_blocks(m.tolist(), list(model.block_sizes), float(counts.total))


@dataclass(frozen=True)
class PosteriorTable:
    level: int
    models: list
    log_marginals: np.ndarray  # nats
    log_prior: np.ndarray  # nats
    posteriors: np.ndarray
    best_index: int
    symmetric_posterior: float | None  # posterior of the one-block model, if present

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "models": [m.rgs_string() for m in self.models],
            "log_marginals": [float(v) for v in self.log_marginals],
            "posteriors": [float(p) for p in self.posteriors],
            "best_index": self.best_index,
            "best_model": self.models[self.best_index].rgs_string(),
            "symmetric_posterior": self.symmetric_posterior,
        }


def posterior(counts: BlockCounts, models: Sequence[PartitionModel]) -> PosteriorTable:
    """Normalized posteriors over the supplied models under a flat prior."""
    if not models:
        raise ValueError("model list must be non-empty")
    log_m = np.array([log_marginal(counts, mod) for mod in models])
    log_prior = np.full(len(models), -math.log(len(models)))
    shifted = log_m - log_m.max()
    weights = np.exp(shifted)
    post = weights / math.fsum(weights)
    best = int(np.argmax(post))  # ties resolve to the lowest index
    sym = None
    for idx, mod in enumerate(models):
        if mod.is_symmetric:
            sym = float(post[idx])
            break
    return PosteriorTable(counts.level, list(models), log_m, log_prior, post, best, sym)


def best_model(table: PosteriorTable) -> int:
    return table.best_index


@dataclass(frozen=True)
class BayesBoundReport:
    level: int
    lhs: float
    rhs: float
    passes: bool

    def to_json_dict(self) -> dict:
        return {"i": self.level, "lhs": self.lhs, "rhs": self.rhs, "passes": self.passes}


def bayes_bound_rhs(n: int, i: int) -> float:
    """Right side of the coupled frequency bound at level i for n bits."""
    if not 1 <= i <= BOUND_MAX_LEVEL:
        raise ValueError(f"level must be in [1, {BOUND_MAX_LEVEL}], got {i}")
    two_i = 1 << i
    if n < i * two_i:
        raise ValueError(
            f"bound needs n >= i * 2^i = {i * two_i} so every substring is "
            f"expected at least once, got n={n}"
        )
    x = 0.5 + n / (i * two_i)
    half = 1 << (i - 1)  # 1 / 2^(1-i)
    ln_arg = (
        -n * _LN2
        + two_i * _LG_HALF
        + log_gamma(half + n / i)
        - log_gamma(half)
        - two_i * log_gamma(x)
    )
    radicand = i * i / (n * n * polygamma1(x)) * ln_arg
    if not math.isfinite(radicand) or radicand < 0:
        raise NumericError(f"non-finite or negative radicand {radicand} at n={n}, i={i}")
    return math.sqrt(radicand)


def bayes_bound_lhs(counts: BlockCounts) -> float:
    """Left side: sqrt of the coupled sum of deviation products over
    substrings 1..2^i-1 (substring 0 excluded by the summation limits)."""
    d = borel_deviations(counts)[1:]
    s = float(d.sum())
    q = float((d * d).sum())
    radicand = 0.5 * (s * s + q)
    if radicand < -1e-15:
        raise NumericError(f"negative radicand {radicand} in coupled deviation sum")
    return math.sqrt(max(radicand, 0.0))


def bayes_bound_test(seq: BitSequence, levels: int | None = None) -> list[BayesBoundReport]:
    imax = max_borel_level(seq.n)
    if levels is None:
        levels = imax
    if not 1 <= levels <= imax:
        raise ValueError(f"requested level {levels} exceeds i_max={imax} for n={seq.n}")
    reports = []
    for i in range(1, levels + 1):
        lhs = bayes_bound_lhs(count_blocks(seq, i))
        rhs = bayes_bound_rhs(seq.n, i)
        reports.append(BayesBoundReport(i, lhs, rhs, lhs < rhs))
    return reports


def bound_reports_to_json_dict(n: int, reports: list[BayesBoundReport]) -> dict:
    return {
        "n": n,
        "levels": [r.to_json_dict() for r in reports],
        "overall": all(r.passes for r in reports),
    }
