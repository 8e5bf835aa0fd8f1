"""Numerical kernel: special functions, monotone root finding, samplers, lattice convolution."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import log_ndtr

from .errors import DomainError, NoBracket

_SQRT2 = math.sqrt(2.0)


def std_normal_cdf(x: float) -> float:
    # erfc keeps full relative precision in the lower tail
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_logcdf(x: float) -> float:
    """log of the standard normal CDF, finite far below the underflow point of the CDF."""
    return float(log_ndtr(x))


# ---------------------------------------------------------------------------
# regularized incomplete beta
# ---------------------------------------------------------------------------

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXITER = 100_000


def _beta_cf(a: float, b: float, x: float) -> float:
    """Modified Lentz evaluation of the incomplete beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    The continued fraction is evaluated on whichever side of the mean converges
    fast, using I_x(a, b) = 1 - I_{1-x}(b, a).
    """
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"beta parameters must be positive and finite, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        a * math.log(x)
        + b * math.log1p(-x)
        - (math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    if not df >= 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {df}")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * reg_inc_beta(0.5 * df, 0.5, x)
    return 1.0 - tail if t > 0 else tail


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

MAX_BRACKET_STEPS = 200


def solve_monotone_root(
    f: Callable[[float], float], target: float, bracket_seed: float = 1.0
) -> float:
    """Solve ``f(h) = target`` for ``h > 0`` where ``f`` is strictly decreasing.

    Brackets by doubling/halving from ``bracket_seed`` and then bisects until the
    bracket cannot be split any further in floating point.
    """
    if not bracket_seed > 0:
        raise DomainError("bracket seed must be positive")
    f_seed = f(bracket_seed)
    if f_seed == target:
        return bracket_seed
    if f_seed > target:
        lo, hi = bracket_seed, 2.0 * bracket_seed
        for _ in range(MAX_BRACKET_STEPS):
            if f(hi) <= target:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise NoBracket(f"target {target} not reached by doubling from {bracket_seed}")
    else:
        lo, hi = 0.5 * bracket_seed, bracket_seed
        for _ in range(MAX_BRACKET_STEPS):
            if f(lo) >= target:
                break
            lo, hi = 0.5 * lo, lo
        else:
            raise NoBracket(f"target {target} not reached by halving from {bracket_seed}")

    # invariant: f(lo) >= target >= f(hi)
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        f_mid = f(mid)
        if f_mid == target:
            return mid
        if f_mid > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# random streams and samplers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RngStream:
    """Counter-style stream: (seed, stream_id) fully determines the draw sequence."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed & (2**64 - 1), spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def _log_gamma_draws(gen: np.random.Generator, shape: np.ndarray, size: tuple) -> np.ndarray:
    """log of unit-scale gamma draws; small shapes use G(a) = G(a+1) * U**(1/a)."""
    if shape.shape != size:
        shape = np.broadcast_to(shape, size)
    small = shape < 1.0
    if not small.any():
        return np.log(gen.standard_gamma(shape))
    # boosted shapes are >= 1, so the gamma draws are strictly positive
    log_g = np.log(gen.standard_gamma(np.where(small, shape + 1.0, shape)))
    u = gen.random(int(np.count_nonzero(small)))
    log_g[small] += np.log1p(-u) / shape[small]  # 1 - u lies in (0, 1]
    return log_g


def sample_gamma(shape, scale, rng, size=None):
    """Gamma draws with the given shape and *scale* (mean shape*scale, variance shape*scale**2)."""
    shape_a = np.asarray(shape, dtype=float)
    scale_a = np.asarray(scale, dtype=float)
    if np.any(~(shape_a > 0)) or np.any(~(scale_a > 0)):
        raise DomainError("gamma shape and scale must be positive")
    gen = _as_generator(rng)
    out = scale_a * gen.standard_gamma(shape_a, size=size)
    return float(out) if np.ndim(out) == 0 else out


# below this shape numpy's beta sampler can round small draws to exactly 0
BETA_LOG_SPACE_BELOW = 0.1


def sample_beta(a, b, rng, size=None):
    """Beta(a, b) draws.

    Moderate shapes use numpy's exact sampler.  If any shape is below
    ``BETA_LOG_SPACE_BELOW`` the draws are X / (X + Y) for independent unit-scale
    gammas X, Y, formed in log space so that tiny shapes cannot produce 0/0.
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(~(a_arr > 0)) or np.any(~(b_arr > 0)):
        raise DomainError("beta parameters must be positive")
    if size is None:
        size = np.broadcast_shapes(a_arr.shape, b_arr.shape)
    elif np.ndim(size) == 0:
        size = (int(size),)
    else:
        size = tuple(size)
    gen = _as_generator(rng)
    if a_arr.min() >= BETA_LOG_SPACE_BELOW and b_arr.min() >= BETA_LOG_SPACE_BELOW:
        out = gen.beta(a_arr, b_arr, size)
        return float(out) if np.ndim(out) == 0 else out
    log_x = _log_gamma_draws(gen, a_arr, size)
    log_y = _log_gamma_draws(gen, b_arr, size)
    # x / (x + y) = 1 / (1 + exp(z)), evaluated without cancellation for large z
    z = log_y - log_x
    e = np.exp(-np.abs(z))
    out = np.where(z > 0, e / (1.0 + e), 1.0 / (1.0 + e))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class AliasTable:
    """Walker/Vose alias table: index ``k`` is kept with probability ``keep[k]``, else ``alias[k]``."""

    keep: np.ndarray
    alias: np.ndarray

    @classmethod
    def from_weights(cls, w) -> "AliasTable":
        w = np.asarray(w, dtype=float)
        n = w.size
        scaled = (n / math.fsum(w)) * w
        keep = np.ones(n)
        alias = np.arange(n)
        small = [k for k in range(n) if scaled[k] < 1.0]
        large = [k for k in range(n) if scaled[k] >= 1.0]
        while small and large:
            s, l = small.pop(), large.pop()
            keep[s], alias[s] = scaled[s], l
            scaled[l] -= 1.0 - scaled[s]
            (small if scaled[l] < 1.0 else large).append(l)
        # leftovers are 1 up to rounding and keep themselves
        return cls(keep, alias)


def weighted_index_draws(gen: np.random.Generator, table: AliasTable, size: int) -> np.ndarray:
    """Independent indices with probabilities proportional to the weights behind ``table``."""
    k = gen.integers(0, table.keep.size, size)
    return np.where(gen.random(size) < table.keep[k], k, table.alias[k])


def replicate_means(
    draw: Callable[[np.random.Generator], np.ndarray],
    n_replicates: int,
    seed: int,
    workers: int = 1,
) -> np.ndarray:
    """Mean of ``draw(gen)`` for replicates j = 0..R-1, each on its own ``RngStream(seed, j)``.

    Results do not depend on ``workers``.
    """
    if n_replicates < 1:
        raise DomainError("need at least one replicate")

    def one(j: int) -> float:
        x = draw(RngStream(seed, j).generator())
        # compensated summation keeps long replicate means exact to rounding
        return math.fsum(x.tolist()) / x.size

    if workers <= 1:
        return np.array([one(j) for j in range(n_replicates)])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(one, range(n_replicates), chunksize=256)))


def bootstrap_pvalues(means: np.ndarray, threshold: float) -> tuple[float, float]:
    """(1 + #{means <= threshold}) / (R + 1) and the same with >=; ties count on both sides."""
    r = means.size
    below = int(np.count_nonzero(means <= threshold))
    above = int(np.count_nonzero(means >= threshold))
    return (1 + below) / (r + 1), (1 + above) / (r + 1)


# ---------------------------------------------------------------------------
# lattice convolution
# ---------------------------------------------------------------------------

ATOM_TOL = 1e-12
LATTICE_AGREEMENT_TOL = 1e-10


@dataclass(frozen=True)
class LatticeDistribution:
    """Distribution on {-n, ..., n} / n; ``pmf[k + n]`` is the mass at ``k / n``."""

    n: int
    pmf: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1) / self.n

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.pmf)

    def tail_probabilities(self, threshold: float, snap: float = 1e-12) -> tuple[float, float]:
        """(P[X <= threshold], P[X >= threshold]); atoms within ``snap`` of it count on both sides."""
        x = self.support
        on = np.abs(x - threshold) <= snap
        lower = math.fsum(self.pmf[(x < threshold) | on])
        upper = math.fsum(self.pmf[(x > threshold) | on])
        return min(lower, 1.0), min(upper, 1.0)


def _validate_atom(atom) -> np.ndarray:
    atom = np.asarray(atom, dtype=float)
    if atom.shape != (3,) or np.any(atom < 0) or abs(atom.sum() - 1.0) > ATOM_TOL:
        raise DomainError(f"atom must be three non-negative probabilities summing to 1, got {atom}")
    return atom


def lattice_convolve_direct(atom, n: int) -> np.ndarray:
    atom = _validate_atom(atom)
    pmf = atom.copy()
    for _ in range(n - 1):
        pmf = np.convolve(pmf, atom)
    return pmf


def lattice_convolve_dft(atom, n: int) -> np.ndarray:
    """Same pmf via the (2n+1)-point discrete characteristic function raised to the n-th power."""
    atom = _validate_atom(atom)
    length = 2 * n + 1
    a = np.zeros(length)
    a[-1], a[0], a[1] = atom  # offsets -1, 0, +1 modulo length
    pmf_wrapped = np.fft.ifft(np.fft.fft(a) ** n).real
    # the support {-n..n} fills exactly one period, so there is no aliasing
    return np.roll(pmf_wrapped, n)


def lattice_convolve_n(atom, n: int, verify: bool = True) -> LatticeDistribution:
    """Exact pmf of the sum of ``n`` i.i.d. {-1, 0, 1} variables.

    Direct convolution is returned; the DFT route is used as a cross-check.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    pmf = lattice_convolve_direct(atom, n)
    if verify:
        other = lattice_convolve_dft(atom, n)
        err = float(np.max(np.abs(pmf - other)))
        if err > LATTICE_AGREEMENT_TOL:
            raise ArithmeticError(f"direct and DFT lattice pmfs differ by {err:.3e}")
    return LatticeDistribution(n, pmf)
