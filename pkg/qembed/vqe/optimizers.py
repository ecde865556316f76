"""
qembed.vqe.optimizers
AUTHOR: carter-vin

Seeded minimizers over circuit parameters.

- quasi_newton: scipy L-BFGS-B with an analytic gradient
- cobyla_like: scipy COBYLA (derivative free)
- spsa: two-sided simultaneous perturbation,
  a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma

Every method returns the best point it evaluated (the initial point included).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
import scipy.optimize

from qembed.config import _DEFAULTS

QUASI_NEWTON = "quasi_newton"
SPSA = "spsa"
COBYLA_LIKE = "cobyla_like"
OPTIMIZERS = (QUASI_NEWTON, SPSA, COBYLA_LIKE)

GRADIENT_TOL = 1e-6
STALL_WINDOW = 3

Objective = Callable[[np.ndarray], float]
Gradient = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SpsaSettings:
    a: float = _DEFAULTS["spsa"]["a"]
    c: float = _DEFAULTS["spsa"]["c"]
    A: float = _DEFAULTS["spsa"]["A"]
    alpha: float = _DEFAULTS["spsa"]["alpha"]
    gamma: float = _DEFAULTS["spsa"]["gamma"]
    max_iter: int = _DEFAULTS["spsa"]["max_iter"]

    @staticmethod
    def from_config(cfg: dict[str, Any]) -> "SpsaSettings":
        section = cfg.get("spsa", {})
        defaults = SpsaSettings()
        return SpsaSettings(
            a=float(section.get("a", defaults.a)),
            c=float(section.get("c", defaults.c)),
            A=float(section.get("A", defaults.A)),
            alpha=float(section.get("alpha", defaults.alpha)),
            gamma=float(section.get("gamma", defaults.gamma)),
            max_iter=int(section.get("max_iter", defaults.max_iter)),
        )


@dataclass(frozen=True, eq=False)
class OptimizerOutcome:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    trace: list[float] = field(default_factory=list)
    message: str = ""


class _Tracker:
    """Counts evaluations and remembers the best point seen."""

    def __init__(self, fun: Objective) -> None:
        self._fun = fun
        self.evaluations = 0
        self.best_x: np.ndarray | None = None
        self.best_f = np.inf
        self.last_x: np.ndarray | None = None
        self.last_f = np.inf

    def __call__(self, x: np.ndarray) -> float:
        x = np.array(x, dtype=float)
        f = float(self._fun(x))
        self.evaluations += 1
        self.last_x, self.last_f = x, f
        if f < self.best_f:
            self.best_x, self.best_f = x.copy(), f
        return f

    def value_at(self, x: np.ndarray) -> float:
        if self.last_x is not None and np.array_equal(self.last_x, x):
            return self.last_f
        return self(x)


def stalled(trace: list[float], tol: float, window: int = STALL_WINDOW) -> bool:
    """True when the last `window` successive changes are all below tol."""
    if len(trace) <= window:
        return False
    tail = np.asarray(trace[-(window + 1):])
    return bool(np.all(np.abs(np.diff(tail)) < tol))


def minimize(
    fun: Objective,
    x0: np.ndarray,
    *,
    method: str = QUASI_NEWTON,
    jac: Gradient | None = None,
    tol: float = _DEFAULTS["vqe"]["tol"],
    max_iter: int | None = None,
    seed: int | None = _DEFAULTS["vqe"]["seed"],
    spsa: SpsaSettings | None = None,
) -> OptimizerOutcome:
    """
    max_iter caps the iterations of every method. When it is None, SPSA uses
    spsa.max_iter and the scipy methods use the vqe.max_iter default.
    """
    x0 = np.asarray(x0, dtype=float)
    if method not in OPTIMIZERS:
        raise ValueError(f"unknown optimizer: {method} (expected one of {list(OPTIMIZERS)})")
    if max_iter is not None and max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    tracker = _Tracker(fun)
    f0 = tracker(x0)
    if x0.size == 0:
        return OptimizerOutcome(x0, f0, 0, tracker.evaluations, True, [f0], "no parameters")

    if method == SPSA:
        settings = spsa or SpsaSettings()
        n_iter = settings.max_iter if max_iter is None else max_iter
        return _spsa(tracker, x0, f0, tol=tol, seed=seed, settings=settings, max_iter=n_iter)
    if max_iter is None:
        max_iter = _DEFAULTS["vqe"]["max_iter"]
    return _scipy(tracker, x0, f0, method=method, jac=jac, tol=tol, max_iter=max_iter)


def _scipy(
    tracker: _Tracker,
    x0: np.ndarray,
    f0: float,
    *,
    method: str,
    jac: Gradient | None,
    tol: float,
    max_iter: int,
) -> OptimizerOutcome:
    trace = [f0]

    def record(xk: np.ndarray) -> None:
        trace.append(tracker.value_at(np.asarray(xk, dtype=float)))

    if method == QUASI_NEWTON:
        res = scipy.optimize.minimize(
            tracker,
            x0,
            jac=jac,
            method="L-BFGS-B",
            callback=record,
            options={"maxiter": max_iter, "ftol": 1e-15, "gtol": GRADIENT_TOL},
        )
    else:
        res = scipy.optimize.minimize(
            tracker,
            x0,
            method="COBYLA",
            callback=record,
            options={"maxiter": max_iter, "rhobeg": 0.1, "tol": tol},
        )
    converged = bool(res.success) or stalled(trace, tol)
    if jac is not None and not converged:
        converged = float(np.max(np.abs(jac(tracker.best_x)))) < GRADIENT_TOL
    return OptimizerOutcome(
        x=tracker.best_x,
        fun=tracker.best_f,
        iterations=int(getattr(res, "nit", len(trace) - 1) or len(trace) - 1),
        evaluations=tracker.evaluations,
        converged=converged,
        trace=trace,
        message=str(res.message),
    )


def _spsa(
    tracker: _Tracker,
    x0: np.ndarray,
    f0: float,
    *,
    tol: float,
    seed: int | None,
    settings: SpsaSettings,
    max_iter: int,
) -> OptimizerOutcome:
    rng = np.random.default_rng(seed)
    x = x0.copy()
    trace = [f0]
    converged = False
    iterations = 0
    for k in range(max_iter):
        ak = settings.a / (k + 1.0 + settings.A) ** settings.alpha
        ck = settings.c / (k + 1.0) ** settings.gamma
        delta = rng.choice([-1.0, 1.0], size=x.size)
        f_plus = tracker(x + ck * delta)
        f_minus = tracker(x - ck * delta)
        # delta entries are ±1, so 1/delta == delta
        x = x - ak * (f_plus - f_minus) / (2.0 * ck) * delta
        trace.append(tracker(x))
        iterations = k + 1
        if stalled(trace, tol):
            converged = True
            break
    return OptimizerOutcome(
        x=tracker.best_x,
        fun=tracker.best_f,
        iterations=iterations,
        evaluations=tracker.evaluations,
        converged=converged,
        trace=trace,
        message="converged" if converged else "max_iter reached",
    )
