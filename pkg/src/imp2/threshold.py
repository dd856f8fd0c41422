"""Estimating a halting threshold by sampling the program space.

Programs are drawn uniformly from all codes of at most L bits and run under
a generous provisional budget.  The step counts of runs that genuinely
terminate (Halted or Extension) are collected, and the threshold is a
safety factor times a quantile of them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .codec import encode_program, sample_program
from .interpreter import DEFAULT_MAX_VALUE_BITS, Status, execute

__all__ = ["ThresholdEstimate", "ThresholdError", "estimate_threshold", "threshold_from_steps"]


class ThresholdError(RuntimeError):
    pass


@dataclass
class ThresholdEstimate:
    threshold: int
    samples_drawn: int
    halting_samples: int
    max_halting_steps: int
    quantile_used: float
    safety_factor: float
    rng_seed: int
    max_len: int
    provisional_budget: int
    # (program bits, status) of every terminating sample, when requested
    terminating: Optional[list] = field(default=None, repr=False, compare=False)

    def metadata(self) -> dict:
        return {
            "threshold": self.threshold,
            "samples_drawn": self.samples_drawn,
            "halting_samples": self.halting_samples,
            "max_halting_steps": self.max_halting_steps,
            "quantile": self.quantile_used,
            "safety_factor": self.safety_factor,
            "seed": self.rng_seed,
            "max_len": self.max_len,
            "provisional_budget": self.provisional_budget,
        }

    def dumps(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.metadata().items())


def threshold_from_steps(steps: Sequence[int], quantile: float = 1.0,
                         safety_factor: float = 2.0) -> int:
    """``ceil(safety_factor * q-quantile)`` using the nearest-rank quantile."""
    if not 0 < quantile <= 1:
        raise ValueError("quantile must lie in (0, 1]")
    if safety_factor < 1:
        raise ValueError("safety factor must be at least 1")
    if not steps:
        raise ThresholdError("no terminating runs to estimate from")
    ordered = sorted(steps)
    rank = max(math.ceil(Fraction(str(quantile)) * len(ordered)), 1)
    value = ordered[rank - 1]
    return max(1, math.ceil(Fraction(str(safety_factor)) * value))


def estimate_threshold(max_len: int, samples: int = 10**5, provisional_budget: int = 10**6,
                       quantile: float = 1.0, safety_factor: float = 2.0, seed: int = 0,
                       max_value_bits: int = DEFAULT_MAX_VALUE_BITS,
                       keep_samples: bool = False) -> ThresholdEstimate:
    if samples < 1 or provisional_budget < 1:
        raise ValueError("samples and provisional budget must be positive")
    rng = random.Random(seed)
    steps = []
    kept = [] if keep_samples else None
    for _ in range(samples):
        p = sample_program(max_len, rng)
        out = execute(p, threshold=provisional_budget, max_value_bits=max_value_bits)
        if out.status in (Status.HALTED, Status.EXTENSION):
            steps.append(out.steps_used)
            if kept is not None:
                kept.append((encode_program(p), out.status))
    if not steps:
        raise ThresholdError(
            f"none of {samples} sampled programs terminated within {provisional_budget} steps; "
            "increase the provisional budget or the sample count")
    return ThresholdEstimate(
        threshold=threshold_from_steps(steps, quantile, safety_factor),
        samples_drawn=samples,
        halting_samples=len(steps),
        max_halting_steps=max(steps),
        quantile_used=quantile,
        safety_factor=safety_factor,
        rng_seed=seed,
        max_len=max_len,
        provisional_budget=provisional_budget,
        terminating=kept,
    )
