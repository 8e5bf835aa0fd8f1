"""Transforms mapping a portfolio-level target to per-observation targets.

Each transform returns targets whose weighted mean equals the portfolio target:

* power transform ``lam_i ** h`` for unit-interval predictions,
* Bayes-odds transform for probabilities,
* linear scaling for non-negative predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, NoBracket
from .numerics import solve_monotone_root
from .sample import weighted_mean

BRACKET_SEED = 1.0
# smallest and largest doubles strictly inside (0, 1)
_UNIT_LO = float(np.finfo(float).tiny)
_UNIT_HI = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class RecalibratedTargets:
    theta: float
    theta_i: np.ndarray
    h: Optional[float] = None


def _open_unit(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0 or np.any(~((x > 0) & (x < 1))):
        raise DomainError(f"{name} must lie strictly inside (0, 1)")
    return x


def _check_theta_unit(theta: float) -> None:
    if not 0.0 < theta < 1.0:
        raise DomainError(f"target must lie strictly inside (0, 1), got {theta}")


def _inside_unit(x: np.ndarray) -> np.ndarray:
    # exact targets are interior; extreme exponents can round them onto 0 or 1
    return np.clip(x, _UNIT_LO, _UNIT_HI)


def power_transform(lam, w, theta: float) -> RecalibratedTargets:
    lam = _open_unit(lam, "predictions")
    w = np.asarray(w, dtype=float)
    _check_theta_unit(theta)
    if lam.size == 1 or np.all(lam == lam[0]):
        h = math.log(theta) / math.log(lam[0])
    else:
        log_lam = np.log(lam)

        def f(h: float) -> float:
            return math.fsum(w * np.exp(h * log_lam))

        try:
            h = solve_monotone_root(f, theta, BRACKET_SEED)
        except NoBracket as exc:  # cannot happen for theta in (0, 1)
            raise RuntimeError(f"power transform failed to bracket h for theta={theta}") from exc
    return RecalibratedTargets(theta, _inside_unit(lam**h), h)


def odds_rho(p, w) -> np.ndarray:
    """rho_i = (1 - p_i) / p_i * p_w / (1 - p_w)."""
    p = _open_unit(p, "probabilities")
    p_w = weighted_mean(p, w)
    return (1.0 - p) / p * (p_w / (1.0 - p_w))


def odds_transform(p, w, theta: float) -> RecalibratedTargets:
    """theta_i = theta / (theta + (1 - theta) * rho_i * h), h solving sum w_i * theta_i / theta = 1."""
    w = np.asarray(w, dtype=float)
    rho = odds_rho(p, w)
    _check_theta_unit(theta)
    if np.all(rho == rho[0]):
        # every rho_i is 1 up to rounding; the constraint forces theta_i = theta
        h = 1.0 / rho[0]
    else:
        def f(h: float) -> float:
            return math.fsum(w / (theta + (1.0 - theta) * rho * h))

        try:
            h = solve_monotone_root(f, 1.0, BRACKET_SEED)
        except NoBracket as exc:
            raise RuntimeError(f"odds transform failed to bracket h for theta={theta}") from exc
    theta_i = theta / (theta + (1.0 - theta) * rho * h)
    return RecalibratedTargets(theta, _inside_unit(theta_i), h)


def linear_scale(eta, w, theta: float) -> RecalibratedTargets:
    eta = np.asarray(eta, dtype=float).ravel()
    if eta.size == 0 or np.any(~(eta > 0)):
        raise DomainError("predictions must be positive")
    if not theta > 0:
        raise DomainError(f"target must be positive, got {theta}")
    eta_w = weighted_mean(eta, w)
    return RecalibratedTargets(theta, eta * (theta / eta_w))
