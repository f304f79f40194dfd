"""Symmetric Pareto innovations and the normalizing constants tied to their law.

The innovation ``xi`` has density ``(alpha/2)|x|^(-alpha-1)`` on ``|x| > 1``, so
``P(|xi| > x) = x^(-alpha)`` for ``x >= 1`` and the tails are balanced
(``p = q = 1/2``, skewness 0).
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from . import rng

# nP(|xi| > a_n) -> C; with a_n = n^(1/alpha) this limit is exactly 1.
TAIL_CONSTANT = 1.0


@dataclass(frozen=True)
class InnovationModel:
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        a = self.alpha
        with np.errstate(divide="ignore", invalid="ignore"):
            lo = 0.5 * np.abs(x) ** -a
        return np.where(x <= -1.0, lo, np.where(x < 1.0, 0.5, 1.0 - lo))

    def tail(self, x):
        """``P(|xi| > x)``."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(x < 1.0, 1.0, np.abs(x) ** -self.alpha)

    def truncated_second_moment(self, x):
        """``U(x) = E[xi^2 1{|xi| <= x}]``; equals ``2 ln x`` when alpha = 2."""
        a = self.alpha
        if x <= 1.0:
            return 0.0
        if a == 2.0:
            return 2.0 * math.log(x)
        return a / (2.0 - a) * (x ** (2.0 - a) - 1.0)


@dataclass(frozen=True)
class StableParams:
    alpha: float
    sigma: float
    beta: float = 0.0
    mu: float = 0.0


def inv_cdf(model, u):
    """Generalized inverse of the symmetric Pareto c.d.f.

    ``u <= 1/2`` maps to ``-(2u)^(-1/alpha)`` (so ``u = 1/2`` gives ``-1``),
    ``u > 1/2`` to ``(2(1-u))^(-1/alpha)``. Works elementwise on arrays.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(~((u_arr > 0.0) & (u_arr < 1.0))):
        raise DomainError("inv_cdf needs 0 < u < 1")
    p = -1.0 / model.alpha
    lower = u_arr <= 0.5
    out = np.where(lower, -((2.0 * np.where(lower, u_arr, 0.5)) ** p),
                   (2.0 * (1.0 - np.where(lower, 0.5, u_arr))) ** p)
    if np.ndim(u) == 0:
        return float(out)
    return out


def sample_innovations(model, count, seed, stream=0):
    if count < 0:
        raise DomainError("count must be non-negative")
    gen = rng.generator(seed, stream)
    return sample_from(model, gen, count)


def sample_from(model, gen, count):
    """Draw ``count`` innovations from an existing generator."""
    if count == 0:
        return np.empty(0)
    return inv_cdf(model, rng.open_uniforms(gen, count))


def _largest_root(n):
    # g(x) = x^2 - 2n ln x is convex on x > 0; Newton from the right of the
    # larger root decreases monotonically onto it.
    x = math.sqrt(2.0 * n * math.log(2.0 * n))
    for _ in range(200):
        g = x * x - 2.0 * n * math.log(x)
        step = g / (2.0 * x - 2.0 * n / x)
        x_new = x - step
        if abs(x_new - x) <= 1e-15 * x:
            x = x_new
            break
        x = x_new
    return x


def norm_constant_a(model, n):
    """Normalizing constant ``a_n`` for the partial sums of ``n`` innovations.

    For alpha < 2 this is ``n^(1/alpha)``, chosen so that ``n P(|xi| > a_n) = 1``.
    For alpha = 2 it is the largest root of ``x^2 = 2 n ln x`` (that is,
    ``n U(a_n) = a_n^2``), which exists only for ``n >= 3``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if model.alpha < 2.0:
        root = n ** (1.0 / model.alpha)
        r = round(root)
        # keep exact integers exact (1000^(2/3) is 100, not 99.99999999999997)
        if r > 0 and abs(root - r) <= 1e-12 * root and r ** model.alpha == n:
            return float(r)
        return root
    if n < 3:
        raise DomainError("alpha = 2 needs n >= 3: x^2 = 2n ln x has no root for n < e")
    return _largest_root(float(n))


def norm_constant_a_lambertw(n):
    """Cross-check for alpha = 2: ``exp(-W_{-1}(-1/n) / 2)``."""
    from scipy.special import lambertw

    return float(np.exp(-0.5 * lambertw(-1.0 / n, k=-1).real))


def stable_sigma(alpha, C=TAIL_CONSTANT):
    """Scale of the stable limit ``S_alpha(sigma, beta, 0)`` for tail constant ``C``."""
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"stable_sigma needs alpha in (0, 2), got {alpha}")
    if C <= 0:
        raise DomainError("C must be positive")
    if alpha == 1.0:
        s_alpha = C * math.pi / 2.0
    else:
        s_alpha = C * math.gamma(2.0 - alpha) / (1.0 - alpha) * math.cos(math.pi * alpha / 2.0)
    return s_alpha ** (1.0 / alpha)


def stable_params(model):
    """Parameters of ``Z(1)`` under the symmetric Pareto model (alpha < 2)."""
    return StableParams(alpha=model.alpha, sigma=stable_sigma(model.alpha), beta=0.0, mu=0.0)
