"""Helpers shared by the three lambda sweeps."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

from wasserstein_tradeoffs.errors import InputError, SolverError

log = logging.getLogger(__name__)

T = TypeVar("T")


def validate_lambdas(lambdas: Sequence[float]) -> List[float]:
    """Check a lambda grid and return it sorted ascending."""
    lams = [float(lam) for lam in lambdas]
    if not lams:
        raise InputError("lambda grid is empty")
    for lam in lams:
        if not np.isfinite(lam) or lam < 0:
            raise InputError(f"lambda must be finite and nonnegative, got {lam}")
    return sorted(lams)


def solve_each(solve: Callable[[float], T], lams: Sequence[float], jobs: int = 1) -> List[T]:
    """Solve one point per lambda, optionally on a thread pool.

    Output order follows ``lams`` regardless of completion order. A solver
    failure is re-raised with the offending lambda attached.
    """

    def run(lam: float) -> T:
        try:
            return solve(lam)
        except SolverError as e:
            raise e.with_context(lam=lam) from e

    if jobs <= 1 or len(lams) == 1:
        return [run(lam) for lam in lams]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(run, lams))


def weighted_sum_selection(
    lams: Sequence[float],
    objective: Callable[[float, int], float],
) -> List[int]:
    """Pick, for each lambda, the best of all candidates under that lambda's objective.

    ``objective(lam, j)`` evaluates candidate j (the solution found for
    ``lams[j]``) under weight ``lam``. Every selection is then an exact
    minimizer over a common finite set, so the selected standard risks are
    nonincreasing and adversarial risks nondecreasing in lambda.

    Returns:
        Index of the selected candidate per lambda; ties keep the lambda's own solution
    """
    n = len(lams)
    chosen = []
    for i, lam in enumerate(lams):
        own = objective(lam, i)
        best_j, best_val = i, own
        for j in range(n):
            if j == i:
                continue
            val = objective(lam, j)
            if val < best_val:
                best_j, best_val = j, val
        if best_j != i:
            log.debug(f"lambda={lam:.6g}: solution from lambda={lams[best_j]:.6g} improves objective by {own - best_val:.3e}")
        chosen.append(best_j)
    return chosen
