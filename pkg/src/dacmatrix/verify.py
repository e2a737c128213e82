"""Order-independence verification.

The engine promises that the admitted set alone determines the matrix:
submission order must never matter. This module rechecks that promise
empirically by interpolating random permutations of the admitted set
and comparing the results cell for cell. ``interpolate_fn`` is
injectable so the checker itself can be validated against a broken
engine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import engine
from .model import PolicyUniverse
from .precedents import Precedent


@dataclass(frozen=True)
class Mismatch:
    mode: str
    trial: int
    subject_id: str
    object_id: str
    baseline: object
    permuted: object


@dataclass(frozen=True)
class OrderCheckResult:
    ok: bool
    trials: int
    seed: int
    modes: tuple[str, ...]
    mismatch: Mismatch | None = None


def first_difference(a: engine.AccessMatrix, b: engine.AccessMatrix):
    for sid in a.subjects:
        for oid in a.objects:
            if a.cells[(sid, oid)] != b.cells[(sid, oid)]:
                return sid, oid
    return None


def check_order_independence(
    universe: PolicyUniverse,
    admitted: tuple[Precedent, ...] | list[Precedent],
    trials: int,
    seed: int,
    modes: tuple[str, ...] = engine.MODES,
    depth: str = "lexicographic",
    interpolate_fn=None,
) -> OrderCheckResult:
    """Interpolate ``trials`` random permutations and compare to the baseline."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    fn = interpolate_fn or engine.interpolate
    rng = random.Random(seed)
    admitted = list(admitted)
    baselines = {mode: fn(universe, tuple(admitted), mode, depth) for mode in modes}
    for trial in range(trials):
        permuted = admitted[:]
        rng.shuffle(permuted)
        for mode in modes:
            candidate = fn(universe, tuple(permuted), mode, depth)
            if candidate != baselines[mode]:
                where = first_difference(baselines[mode], candidate)
                sid, oid = where if where else ("?", "?")
                return OrderCheckResult(
                    ok=False,
                    trials=trials,
                    seed=seed,
                    modes=tuple(modes),
                    mismatch=Mismatch(
                        mode=mode,
                        trial=trial,
                        subject_id=sid,
                        object_id=oid,
                        baseline=baselines[mode].cells.get((sid, oid)),
                        permuted=candidate.cells.get((sid, oid)),
                    ),
                )
    return OrderCheckResult(ok=True, trials=trials, seed=seed, modes=tuple(modes))
