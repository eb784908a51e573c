"""One-dimensional searches shared by the solvers.

- golden-section minimization, plain and on a log scale with bracket expansion
- sign-change scanning of a scalar function on a log grid, with Brent refinement
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy import optimize

log = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class LogSearchResult:
    """Minimizer found by :func:`minimize_log_scale`."""

    x: float
    fx: float
    lo: float
    hi: float
    hit_boundary: bool
    n_evals: int


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float, int]:
    """Golden-section search for a minimum of f on [a, b].

    Returns:
        (x, f(x), evaluations) where x is the best point seen; the final
        bracket has width ≤ tol
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    fc = f(c)
    fd = f(d)
    n_evals = 2
    best_x, best_f = (c, fc) if fc <= fd else (d, fd)

    while h > tol:
        h *= INV_PHI
        if fc <= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI_SQUARE * h
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * h
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
        n_evals += 1

    return best_x, best_f, n_evals


def minimize_log_scale(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float,
    max_expansions: int,
    grow: float = 10.0,
) -> LogSearchResult:
    """Minimize f over x > 0 by golden-section on log x.

    The bracket [lo, hi] is widened by ``grow`` on the side where the minimum
    abuts an endpoint, at most ``max_expansions`` times.
    """
    g = lambda s: f(math.exp(s))
    total = 0
    for attempt in range(max_expansions + 1):
        s_lo, s_hi = math.log(lo), math.log(hi)
        s, fs, n = golden_section(g, s_lo, s_hi, rel_tol)
        total += n
        edge = 4.0 * rel_tol
        at_lo = s - s_lo <= edge
        at_hi = s_hi - s <= edge
        if not (at_lo or at_hi):
            return LogSearchResult(math.exp(s), fs, lo, hi, False, total)
        if attempt == max_expansions:
            break
        if at_lo:
            lo /= grow
        if at_hi:
            hi *= grow
        log.debug(f"Log-scale minimum at bracket edge, widening to [{lo:.3g}, {hi:.3g}]")

    return LogSearchResult(math.exp(s), fs, lo, hi, True, total)


def find_sign_changes(g: Callable[[float], float], grid: np.ndarray) -> List[Tuple[float, float]]:
    """Adjacent grid intervals on which g changes sign (or hits zero)."""
    values = np.array([g(x) for x in grid])
    brackets = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            brackets.append((grid[i], grid[i]))
        elif values[i] * values[i + 1] < 0.0:
            brackets.append((grid[i], grid[i + 1]))
    if values[-1] == 0.0:
        brackets.append((grid[-1], grid[-1]))
    return brackets


def refine_root(g: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    """Brent's method on a sign-change bracket."""
    if lo == hi:
        return lo
    return optimize.brentq(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
