"""Derivative-free coordinate pattern search.

Each sweep probes ``x +/- step`` along every coordinate in a fixed order,
keeping the first probe that strictly lowers the energy. A sweep that gains
less than ``convergence`` shrinks the step; the search ends when the step
falls below ``min_step`` (converged) or the evaluation budget runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OptimizerInputError


@dataclass(frozen=True)
class OptConfig:
    initial_step: float = 0.1
    step_shrink: float = 0.5
    min_step: float = 1e-5
    max_evaluations: int = 100_000
    convergence: float = 1e-12

    def __post_init__(self):
        if not (self.initial_step > 0 and self.min_step > 0 and self.max_evaluations > 0
                and self.convergence > 0):
            raise OptimizerInputError("optimizer settings must be positive")
        if not 0 < self.step_shrink < 1:
            raise OptimizerInputError(f"step_shrink must lie in (0, 1), got {self.step_shrink}")
        if not self.min_step < self.initial_step:
            raise OptimizerInputError("min_step must be smaller than initial_step")


@dataclass(frozen=True)
class TraceRecord:
    evaluations: int
    best_energy: float
    step: float


@dataclass
class OptTrace:
    records: list = field(default_factory=list)
    coords: np.ndarray = None
    energy: float = math.nan
    converged: bool = False
    reason: str = ""
    accepted_moves: int = 0
    evaluations: int = 0

    def as_dict(self):
        return {
            "converged": self.converged,
            "reason": self.reason,
            "energy": self.energy,
            "evaluations": self.evaluations,
            "accepted_moves": self.accepted_moves,
            "coords": [float(c) for c in self.coords],
            "records": [{"evaluations": r.evaluations, "best_energy": r.best_energy, "step": r.step}
                        for r in self.records],
        }


def optimize(energy, coords0, cfg: OptConfig = OptConfig()) -> OptTrace:
    """Minimize ``energy`` (a pure function of a flat coordinate array) from ``coords0``."""
    x = np.array(coords0, dtype=float)
    best = float(energy(x.copy()))
    if not math.isfinite(best):
        raise OptimizerInputError(f"energy at the starting point is not finite ({best})")
    trace = OptTrace(coords=x, energy=best, evaluations=1)
    step = cfg.initial_step
    trace.records.append(TraceRecord(1, best, step))

    def finish(converged, reason):
        trace.coords, trace.energy = x, best
        trace.converged, trace.reason = converged, reason
        return trace

    while True:
        start = best
        for i in range(x.size):
            for sign in (1.0, -1.0):
                if trace.evaluations >= cfg.max_evaluations:
                    return finish(False, "budget")
                probe = x.copy()
                probe[i] += sign * step
                e = float(energy(probe.copy()))
                trace.evaluations += 1
                if math.isfinite(e) and e < best:
                    x, best = probe, e
                    trace.accepted_moves += 1
                    break
        trace.records.append(TraceRecord(trace.evaluations, best, step))
        if start - best < cfg.convergence:
            step *= cfg.step_shrink
            if step < cfg.min_step:
                return finish(True, "min_step")
