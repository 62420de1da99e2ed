"""Full-memory BFGS with a weak Wolfe line search, for nonsmooth objectives.

The gradient oracle is trusted everywhere, including at points where the
objective is not differentiable; BFGS is run until the line search can no
longer satisfy the Armijo and weak Wolfe conditions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

log = logging.getLogger(__name__)

__all__ = ["OptimizerOptions", "RunTrace", "LineSearchResult", "weak_wolfe_linesearch", "minimize"]

Oracle = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class OptimizerOptions:
    normtol: float = 1e-8
    max_iters: int = 2000
    c1: float = 1e-4
    c2: float = 0.5
    max_bisections: int = 48
    max_doublings: int = 60
    overflow_guard: float = 1e150
    scale_initial: bool = True
    # applied to every accepted iterate, e.g. to renormalize a scale-free block
    renormalize: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if not 0 < self.c1 < self.c2 < 1:
            raise ValueError("need 0 < c1 < c2 < 1")


@dataclass
class RunTrace:
    x: np.ndarray
    f: float
    g: np.ndarray
    iterations: int
    reason: str  # gradient_tol | linesearch_failure | max_iters | overflow_guard
    f_history: list[float] = field(default_factory=list)
    gnorm_history: list[float] = field(default_factory=list)
    evaluations: int = 0

    @property
    def gnorm(self) -> float:
        return float(np.linalg.norm(self.g))


@dataclass
class LineSearchResult:
    t: float
    x: np.ndarray
    f: float
    g: np.ndarray
    ok: bool
    evaluations: int


def _safe_eval(oracle: Oracle, x: np.ndarray):
    try:
        f, g = oracle(x)
    except (OverflowError, FloatingPointError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        log.debug("oracle failed at trial point: %s", exc)
        return np.inf, None
    if not np.isfinite(f) or g is None or not np.all(np.isfinite(g)):
        return np.inf, None
    return float(f), np.asarray(g, dtype=float)


def weak_wolfe_linesearch(oracle: Oracle, x0: np.ndarray, f0: float, g0: np.ndarray, d: np.ndarray,
                          c1: float = 1e-4, c2: float = 0.5, max_bisections: int = 48,
                          max_doublings: int = 60) -> LineSearchResult:
    """Bracketing search for t with Armijo and weak Wolfe conditions.

    Doubles t until the Armijo condition fails, then bisects.  On failure
    the largest step satisfying Armijo found so far is returned with
    ``ok=False`` (or t=0 if there is none).
    """
    slope0 = float(g0 @ d)
    if not slope0 < 0:
        raise ValueError("not a descent direction")
    lo, hi = 0.0, np.inf
    best = LineSearchResult(0.0, x0, f0, g0, False, 0)
    t = 1.0
    nbisect = ndouble = nevals = 0
    while True:
        x = x0 + t * d
        f, g = _safe_eval(oracle, x)
        nevals += 1
        if not f < f0 + c1 * t * slope0:
            hi = t
        else:
            best = LineSearchResult(t, x, f, g, False, nevals)
            if g @ d < c2 * slope0:
                lo = t
            else:
                return LineSearchResult(t, x, f, g, True, nevals)
        if hi < np.inf:
            if nbisect >= max_bisections:
                break
            t = 0.5 * (lo + hi)
            nbisect += 1
        else:
            if ndouble >= max_doublings:
                break
            t = 2.0 * lo
            ndouble += 1
    best.evaluations = nevals
    return best


def minimize(oracle: Oracle, x0, opts: Optional[OptimizerOptions] = None,
             callback: Optional[Callable[[int, np.ndarray, float], None]] = None,
             linesearch: Optional[Callable[..., LineSearchResult]] = None) -> RunTrace:
    """BFGS from x0 with identity initial inverse Hessian.

    ``linesearch(oracle, x, f, g, d)`` replaces the weak Wolfe search when given.
    """
    opts = opts or OptimizerOptions()
    if linesearch is None:
        def linesearch(oracle, x, f, g, d):
            return weak_wolfe_linesearch(oracle, x, f, g, d, opts.c1, opts.c2, opts.max_bisections,
                                         opts.max_doublings)
    x = np.array(x0, dtype=float)
    f, g = oracle(x)
    f = float(f)
    g = np.asarray(g, dtype=float)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise ValueError("objective is not finite at the starting point")
    nvar = x.size
    H = np.eye(nvar)
    trace = RunTrace(x, f, g, 0, "max_iters", [f], [float(np.linalg.norm(g))], 1)
    reason = "max_iters"
    restarted = False
    it = 0
    for it in range(1, opts.max_iters + 1):
        gnorm = np.linalg.norm(g)
        if gnorm <= opts.normtol:
            reason = "gradient_tol"
            it -= 1
            break
        d = -H @ g
        if not g @ d < 0:
            if restarted:
                reason = "linesearch_failure"
                it -= 1
                break
            # broken curvature information: restart from steepest descent once
            H = np.eye(nvar)
            d = -g
            restarted = True
        ls = linesearch(oracle, x, f, g, d)
        trace.evaluations += ls.evaluations
        if ls.t == 0.0:
            reason = "linesearch_failure"
            it -= 1
            break
        s = ls.x - x
        y = ls.g - g
        x, f, g = ls.x, ls.f, ls.g
        if opts.renormalize is not None:
            x = opts.renormalize(x)
            f, g = oracle(x)
            trace.evaluations += 1
        trace.f_history.append(float(f))
        trace.gnorm_history.append(float(np.linalg.norm(g)))
        if callback is not None:
            callback(it, x, f)
        if np.max(np.abs(x)) > opts.overflow_guard:
            reason = "overflow_guard"
            break
        if not ls.ok:
            reason = "linesearch_failure"
            break
        sy = s @ y
        if sy > 0:
            if it == 1 and opts.scale_initial:
                H = (sy / (y @ y)) * np.eye(nvar)
            rho = 1.0 / sy
            Hy = H @ y
            H = H - rho * (np.outer(s, Hy) + np.outer(Hy, s)) + (rho * rho * (y @ Hy) + rho) * np.outer(s, s)
            H = 0.5 * (H + H.T)
        restarted = False
    trace.x, trace.f, trace.g = x, float(f), g
    trace.iterations = it
    trace.reason = reason
    return trace
